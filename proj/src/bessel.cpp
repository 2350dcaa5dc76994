#include "elastica/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace elastica {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSeriesCut = 5.0;

// Miller's backward recurrence with the sum rule J0 + 2 J2 + 2 J4 + ... = 1.
// Fills J_0..J_nmax.
void miller_jn(int nmax, double x, std::vector<double>& out) {
    const int base = std::max(nmax, static_cast<int>(std::ceil(x)));
    const int start = base + 30 + static_cast<int>(4.0 * std::sqrt(static_cast<double>(base)));
    double fp = 0.0;         // f_{m+1}
    double fc = 1e-280;      // f_m
    double sum = 0.0;
    out.assign(nmax + 1, 0.0);
    for (int m = start; m >= 1; --m) {
        double fm = 2.0 * m / x * fc - fp;
        fp = fc;
        fc = fm;
        if (m - 1 <= nmax) out[m - 1] = fc;
        if (((m - 1) & 1) == 0) sum += (m - 1 == 0) ? fc : 2.0 * fc;
        if (std::abs(fc) > 1e270) {
            fc *= 1e-270;
            fp *= 1e-270;
            sum *= 1e-270;
            for (auto& v : out) v *= 1e-270;
        }
    }
    for (auto& v : out) v /= sum;
}

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, acc = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

double j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, acc = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return 0.5 * x * acc;
}

double y0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, hk = 0.0, acc = 0.0;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        acc += -term * hk;  // (-1)^{k+1} H_k q^k/(k!)^2
        if (std::abs(term) < 1e-18) break;
    }
    return 2.0 / kPi * ((std::log(0.5 * x) + kEulerGamma) * j0_series(x) + acc);
}

double y1_series(double x) {
    const double q = 0.25 * x * x;
    // sum_k (-1)^k (H_k + H_{k+1} - 2 gamma') ... assembled per DLMF 10.8.1
    double term = 1.0;  // q^k/(k!(k+1)!)
    double hk = 0.0, hk1 = 1.0, acc = (hk + hk1) * term;
    int sign = 1;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        sign = -sign;
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1.0);
        acc += sign * (hk + hk1) * term;
        if (term < 1e-18) break;
    }
    return 2.0 / kPi * (std::log(0.5 * x) + kEulerGamma) * j1_series(x) - 2.0 / (kPi * x) -
           0.5 * x / kPi * acc;
}

// Steed's continued fraction for (J0' + i Y0')/(J0 + i Y0) = p + i q,
// reliable for x >= ~2.
std::complex<double> steed_cf2(double x) {
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const C b0 = C(-0.5 / x, 1.0);
    // modified Lentz
    C f = b0, Cc = b0, D = 0.0;
    const double tiny = 1e-290;
    if (std::abs(f) < tiny) f = tiny;
    for (int k = 1; k < 400; ++k) {
        const double t = k - 0.5;
        const C a = (k == 1) ? i / x * 0.25 : C(t * t, 0.0);
        const C b = 2.0 * C(x, static_cast<double>(k));
        D = b + a * D;
        if (std::abs(D) < tiny) D = tiny;
        Cc = b + a / Cc;
        if (std::abs(Cc) < tiny) Cc = tiny;
        D = 1.0 / D;
        const C delta = Cc * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f;
}

void j0j1y0y1(double x, double& j0v, double& j1v, double& y0v, double& y1v) {
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
    if (x <= kSeriesCut) {
        j0v = j0_series(x);
        j1v = j1_series(x);
        y0v = y0_series(x);
        y1v = y1_series(x);
        return;
    }
    std::vector<double> J;
    miller_jn(1, x, J);
    j0v = J[0];
    j1v = J[1];
    const std::complex<double> pq = steed_cf2(x);
    const double p = pq.real(), q = pq.imag();
    y0v = (p * j0v + j1v) / q;  // J0' = -J1 = p J0 - q Y0
    y1v = -q * j0v - p * y0v;   // Y0' = -Y1 = q J0 + p Y0
}

}  // namespace

double bessel_j0(double x) {
    double a, b, c, d;
    j0j1y0y1(x, a, b, c, d);
    return a;
}

double bessel_j1(double x) {
    double a, b, c, d;
    j0j1y0y1(x, a, b, c, d);
    return b;
}

double bessel_y0(double x) {
    double a, b, c, d;
    j0j1y0y1(x, a, b, c, d);
    return c;
}

double bessel_y1(double x) {
    double a, b, c, d;
    j0j1y0y1(x, a, b, c, d);
    return d;
}

double bessel_jn(int n, double x) {
    if (n < 0) {
        const double v = bessel_jn(-n, x);
        return (-n) % 2 ? -v : v;
    }
    if (n == 0) return bessel_j0(x);
    if (n == 1) return bessel_j1(x);
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
    std::vector<double> J;
    miller_jn(n, x, J);
    return J[n];
}

double bessel_yn(int n, double x) {
    if (n < 0) {
        const double v = bessel_yn(-n, x);
        return (-n) % 2 ? -v : v;
    }
    double a, b, ym, yc;
    j0j1y0y1(x, a, b, ym, yc);
    if (n == 0) return ym;
    for (int m = 1; m < n; ++m) {
        const double yn = 2.0 * m / x * yc - ym;
        ym = yc;
        yc = yn;
    }
    return yc;
}

std::complex<double> hankel1(int n, double x) {
    if (n == 0 || n == 1) {
        double j0v, j1v, y0v, y1v;
        j0j1y0y1(x, j0v, j1v, y0v, y1v);
        return n == 0 ? std::complex<double>(j0v, y0v) : std::complex<double>(j1v, y1v);
    }
    return {bessel_jn(n, x), bessel_yn(n, x)};
}

}  // namespace elastica
