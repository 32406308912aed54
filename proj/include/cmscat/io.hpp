#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmscat/grid.hpp"

namespace cmscat {

using json = nlohmann::json;

// Flat key=value configuration with dotted section names (grid.L=60).
// Lines starting with '#' are comments.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Shortest round-trip formatting pinned to 17 significant digits.
std::string format_double(double v);
// JSON text where every float uses format_double; keys stay sorted.
std::string dump_json(const json& j);

json grid_function_json(const Grid& g, const CVec& f);
std::string grid_function_csv(const Grid& g, const CVec& f);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// Reads CSV with columns x, re, im. The x column must match a uniform grid.
GridFunction read_grid_function_csv(const std::string& path);

}  // namespace cmscat
