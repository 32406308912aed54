#include "cmscat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmscat/errors.hpp"

namespace cmscat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "' is not a number: " + v);
}

void write_value(std::ostringstream& os, const json& j, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<size_t>(indent * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                break;
            }
            os << "{\n";
            size_t n = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++n) {
                os << pad << json(it.key()).dump() << ": ";
                write_value(os, it.value(), indent, depth + 1);
                os << (n + 1 < j.size() ? ",\n" : "\n");
            }
            os << close << "}";
            break;
        }
        case json::value_t::array: {
            os << "[";
            for (size_t n = 0; n < j.size(); ++n) {
                if (n) os << ", ";
                write_value(os, j[n], indent, depth + 1);
            }
            os << "]";
            break;
        }
        case json::value_t::number_float:
            os << format_double(j.get<double>());
            break;
        default:
            os << j.dump();
    }
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
        c.values_[key] = trim(t.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_text(path)); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(key, it->second);
}

long Config::get_int(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double d = to_double(key, it->second);
    if (d != std::floor(d)) throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<long>(d);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("config key '" + key + "' must be a boolean");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!trim(item).empty()) out.push_back(to_double(key, trim(item)));
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string dump_json(const json& j) {
    std::ostringstream os;
    write_value(os, j, 2, 0);
    os << "\n";
    return os.str();
}

json grid_function_json(const Grid& g, const CVec& f) {
    json j;
    std::vector<double> x(g.N()), re(g.N()), im(g.N());
    for (int i = 0; i < g.N(); ++i) {
        x[i] = g.x(i);
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    j["x"] = x;
    j["re"] = re;
    j["im"] = im;
    return j;
}

std::string grid_function_csv(const Grid& g, const CVec& f) {
    std::ostringstream os;
    os << "x,re,im\n";
    for (int i = 0; i < g.N(); ++i)
        os << format_double(g.x(i)) << "," << format_double(f[i].real()) << "," << format_double(f[i].imag())
           << "\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GridFunction read_grid_function_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<double> xs;
    std::vector<cplx> vals;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            if (line.find('x') != std::string::npos) continue;
        }
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c, ','))
            throw ConfigError("malformed CSV row in " + path);
        xs.push_back(to_double("x", trim(a)));
        vals.emplace_back(to_double("re", trim(b)), to_double("im", trim(c)));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 16) throw ConfigError("CSV " + path + " has too few rows");
    const double dx = xs[1] - xs[0];
    const double L = -xs[0];
    Grid g(L, n);
    for (int i = 0; i < n; ++i)
        if (std::abs(xs[i] - g.x(i)) > 1e-9 * std::max(1.0, L))
            throw ConfigError("CSV " + path + " is not on a uniform grid starting at -L");
    if (std::abs(dx - g.dx()) > 1e-9 * dx) throw ConfigError("CSV spacing inconsistent with 2L/N");
    GridFunction gf{g, CVec(n)};
    for (int i = 0; i < n; ++i) gf.f[i] = vals[i];
    return gf;
}

}  // namespace cmscat
