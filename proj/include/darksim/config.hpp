#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace darksim {

/// One [section]: `key = value` entries (keys may repeat) and bare comma-separated rows.
struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::string> get(const std::string& key) const;
    std::vector<std::string> get_all(const std::string& key) const;
    std::string require(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::vector<double> numbers(const std::string& key) const;
};

struct ConfigFile {
    std::map<std::string, ConfigSection> sections;

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    const ConfigSection& section(const std::string& name) const;
    bool has(const std::string& name) const { return sections.count(name) > 0; }
};

std::vector<std::string> split_list(const std::string& s, char sep = ',');
std::string trim(const std::string& s);
double parse_number(const std::string& s);

}  // namespace darksim
