#include "darksim/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "darksim/pdn.hpp"

namespace darksim {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw ModelError("config: empty number");
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size()) throw ModelError("config: bad number '" + t + "'");
    return v;
}

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    std::optional<std::string> out;
    for (const auto& [k, v] : entries)
        if (k == key) out = v;
    return out;
}

std::vector<std::string> ConfigSection::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
        if (k == key) out.push_back(v);
    return out;
}

std::string ConfigSection::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ModelError("config: [" + name + "] missing key '" + key + "'");
    return *v;
}

double ConfigSection::number(const std::string& key) const { return parse_number(require(key)); }

double ConfigSection::number_or(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? parse_number(*v) : fallback;
}

std::vector<double> ConfigSection::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : split_list(require(key))) out.push_back(parse_number(s));
    return out;
}

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    ConfigSection* cur = nullptr;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ModelError("config: bad section header at line " + std::to_string(lineno));
            std::string name = trim(line.substr(1, line.size() - 2));
            cur = &cfg.sections[name];
            cur->name = name;
            continue;
        }
        if (!cur) throw ModelError("config: entry outside a section at line " + std::to_string(lineno));
        auto eq = line.find('=');
        if (eq != std::string::npos) cur->entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        else cur->rows.push_back(split_list(line));
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ModelError("config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

const ConfigSection& ConfigFile::section(const std::string& name) const {
    auto it = sections.find(name);
    if (it == sections.end()) throw ModelError("config: missing section [" + name + "]");
    return it->second;
}

}  // namespace darksim
