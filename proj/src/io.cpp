#include "elastica/io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elastica {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string shape_to_csv(const ShapePoint& m) {
    std::ostringstream os;
    os << "# shape-point v1, n=" << m.size() << "\n";
    for (int i = 0; i < m.size(); ++i)
        os << format_double(m.partition->tau()[i]) << "," << format_double(m.theta[i]) << "\n";
    os << "L," << format_double(m.length) << "\n";
    os << "p," << format_double(m.base.x()) << "," << format_double(m.base.y()) << "\n";
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw IoError("cannot parse number '" + s + "' in " + context);
    }
}

}  // namespace

ShapePoint shape_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# shape-point v1", 0) != 0)
        throw IoError("shape CSV: missing '# shape-point v1' header");
    const auto npos = line.find("n=");
    if (npos == std::string::npos) throw IoError("shape CSV: header lacks n=");
    const int n = std::stoi(line.substr(npos + 2));
    if (n < 3) throw IoError("shape CSV: invalid n");

    Eigen::VectorXd tau(n + 1), theta(n);
    int row = 0;
    double length = 0.0;
    Vec2 base = Vec2::Zero();
    bool have_length = false, have_base = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto parts = split(line, ',');
        if (parts[0] == "L") {
            if (parts.size() != 2) throw IoError("shape CSV: malformed L row");
            length = parse_double(parts[1], "L row");
            have_length = true;
        } else if (parts[0] == "p") {
            if (parts.size() != 3) throw IoError("shape CSV: malformed p row");
            base = Vec2(parse_double(parts[1], "p row"), parse_double(parts[2], "p row"));
            have_base = true;
        } else {
            if (row >= n) throw IoError("shape CSV: too many rows");
            if (parts.size() != 2) throw IoError("shape CSV: malformed data row");
            tau[row] = parse_double(parts[0], "tau column");
            theta[row] = parse_double(parts[1], "theta column");
            ++row;
        }
    }
    if (row != n) throw IoError("shape CSV: expected " + std::to_string(n) + " rows");
    if (!have_length || !have_base) throw IoError("shape CSV: missing L or p footer");
    tau[n] = 1.0;

    ShapePoint m;
    m.partition = std::make_shared<Partition>(std::move(tau));
    m.theta = std::move(theta);
    m.length = length;
    m.base = base;
    return m;
}

void write_shape_csv(const std::filesystem::path& path, const ShapePoint& m) {
    write_text_file(path, shape_to_csv(m));
}

ShapePoint read_shape_csv(const std::filesystem::path& path) {
    return shape_from_csv(read_text_file(path));
}

void write_polygon_csv(const std::filesystem::path& path, const std::vector<Vec2>& polygon) {
    std::ostringstream os;
    for (const auto& v : polygon)
        os << format_double(v.x()) << "," << format_double(v.y()) << "\n";
    write_text_file(path, os.str());
}

namespace {

std::string complex_to_string(const Complex& c) {
    std::string s = format_double(c.real());
    if (c.imag() >= 0.0 || std::isnan(c.imag())) s += "+";
    s += format_double(c.imag());
    s += "j";
    return s;
}

Complex complex_from_string(const std::string& s) {
    if (s.empty() || s.back() != 'j') throw IoError("far-field CSV: entry lacks 'j': " + s);
    const std::string body = s.substr(0, s.size() - 1);
    // split at the sign of the imaginary part (skip a leading sign and signs
    // inside exponents)
    for (size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            const double re = parse_double(body.substr(0, i), "far-field real part");
            const double im = parse_double(body.substr(i), "far-field imaginary part");
            return {re, im};
        }
    }
    throw IoError("far-field CSV: malformed complex entry: " + s);
}

json dirs_to_json(const std::vector<Vec2>& dirs) {
    json a = json::array();
    for (const auto& d : dirs) a.push_back({d.x(), d.y()});
    return a;
}

std::vector<Vec2> dirs_from_json(const json& a) {
    std::vector<Vec2> out;
    for (const auto& e : a) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

}  // namespace

std::string farfield_to_csv(const FarField& f) {
    std::ostringstream os;
    for (Eigen::Index r = 0; r < f.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < f.values.cols(); ++c) {
            if (c) os << ",";
            os << complex_to_string(f.values(r, c));
        }
        os << "\n";
    }
    return os.str();
}

FarField farfield_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::vector<Complex>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<Complex> row;
        for (const auto& cell : split(line, ',')) row.push_back(complex_from_string(cell));
        if (!rows.empty() && rows.front().size() != row.size())
            throw IoError("far-field CSV: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("far-field CSV: empty file");
    FarField f;
    f.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return f;
}

void write_farfield(const std::filesystem::path& csv_path, const FarField& f,
                    const FarFieldSidecar& sidecar) {
    write_text_file(csv_path, farfield_to_csv(f));
    json j;
    j["k"] = sidecar.k;
    j["incident_dirs"] = dirs_to_json(sidecar.incident_dirs);
    j["measurement_dirs"] = dirs_to_json(sidecar.measurement_dirs);
    j["nystrom_points"] = sidecar.nystrom_points;
    if (sidecar.delta) j["delta"] = *sidecar.delta;
    std::filesystem::path side = csv_path;
    side.replace_extension(".json");
    write_text_file(side, j.dump(2) + "\n");
}

std::pair<FarField, FarFieldSidecar> read_farfield(const std::filesystem::path& csv_path) {
    FarField f = farfield_from_csv(read_text_file(csv_path));
    std::filesystem::path side = csv_path;
    side.replace_extension(".json");
    json j;
    try {
        j = json::parse(read_text_file(side));
    } catch (const json::parse_error& e) {
        throw IoError("far-field sidecar " + side.string() + ": " + e.what());
    }
    FarFieldSidecar s;
    try {
        s.k = j.at("k").get<double>();
        s.incident_dirs = dirs_from_json(j.at("incident_dirs"));
        s.measurement_dirs = dirs_from_json(j.at("measurement_dirs"));
        s.nystrom_points = j.at("nystrom_points").get<int>();
        if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    } catch (const json::exception& e) {
        throw IoError("far-field sidecar " + side.string() + ": " + e.what());
    }
    if (f.values.rows() != static_cast<Eigen::Index>(s.measurement_dirs.size()) ||
        f.values.cols() != static_cast<Eigen::Index>(s.incident_dirs.size()))
        throw IoError("far-field data dimensions disagree with the sidecar grids");
    return {std::move(f), std::move(s)};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << text;
    if (!os) throw IoError("write failed for " + path.string());
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace elastica
