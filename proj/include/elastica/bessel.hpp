#ifndef ELASTICA_BESSEL_HPP
#define ELASTICA_BESSEL_HPP

#include <complex>

namespace elastica {

/// Bessel functions of the first and second kind for integer orders and
/// positive real arguments, in the argument range needed by the Helmholtz
/// kernels and the separation-of-variables series (orders <= ~100,
/// x <= ~700). Ascending series for small x, Miller's backward recurrence
/// for J, and a Steed-type continued fraction plus Wronskian identities
/// for Y at larger x.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);
double bessel_jn(int n, double x);
double bessel_yn(int n, double x);

std::complex<double> hankel1(int n, double x);

}  // namespace elastica

#endif
