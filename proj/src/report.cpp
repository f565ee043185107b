#include "darksim/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

namespace darksim {

using nlohmann::json;

namespace {

struct Csv {
    std::ostream& out;
    bool first = true;

    explicit Csv(std::ostream& o) : out(o) { out << std::setprecision(17); }
    template <class T>
    Csv& operator<<(const T& v) {
        if (!first) out << ",";
        out << v;
        first = false;
        return *this;
    }
    void end() {
        out << "\n";
        first = true;
    }
};

json interval_json(const IntervalRecord& r) {
    return {{"interval", r.index},
            {"t_start_s", r.t_start},
            {"duration_s", r.duration},
            {"package_state", to_string(r.package_state)},
            {"active_cores", r.active_cores},
            {"level", r.level},
            {"core_freq_hz", r.core_freq},
            {"core_voltage_v", r.core_voltage},
            {"gfx_freq_hz", r.gfx_freq},
            {"gfx_voltage_v", r.gfx_voltage},
            {"cores_w", r.cores_power},
            {"gfx_w", r.gfx_power},
            {"uncore_w", r.uncore_power},
            {"total_w", r.total_power},
            {"icc_a", r.icc},
            {"icc_sustained_a", r.icc_sustained},
            {"wake_s", r.wake},
            {"cpu_work", r.cpu_work},
            {"gfx_work", r.gfx_work},
            {"degenerate", r.degenerate ? 1 : 0}};
}

const char* const kIntervalColumns[] = {"interval", "t_start_s", "duration_s", "package_state", "active_cores",
                                        "level", "core_freq_hz", "core_voltage_v", "gfx_freq_hz", "gfx_voltage_v",
                                        "cores_w", "gfx_w", "uncore_w", "total_w", "icc_a", "icc_sustained_a",
                                        "wake_s", "cpu_work", "gfx_work", "degenerate"};

std::vector<std::pair<std::string, double>> summary_fields(const SimReport& r) {
    return {{"tdp_w", r.tdp},
            {"total_time_s", r.total_time},
            {"energy_j", r.energy},
            {"avg_power_w", r.avg_power},
            {"table_avg_power_w", r.table_avg_power},
            {"cpu_perf", r.cpu_perf},
            {"gfx_perf", r.gfx_perf},
            {"gfx_time_fraction", r.gfx_time_fraction},
            {"violations", static_cast<double>(r.violations.size())}};
}

}  // namespace

json summary_json(const SimReport& r) {
    json j = {{"mode", r.mode}, {"cstate_cap", to_string(r.cap)}};
    for (const auto& [k, v] : summary_fields(r)) j[k] = v;
    return j;
}

json to_json(const SimReport& r) {
    json res = json::array();
    for (const auto& x : r.residency)
        res.push_back({{"state", to_string(x.state)}, {"seconds", x.seconds}, {"fraction", x.fraction},
                       {"avg_contribution_w", x.avg_contribution}});
    json viol = json::array();
    for (const auto& v : r.violations)
        viol.push_back({{"interval", v.interval}, {"limit", to_string(v.limit)}, {"amount", v.amount}});
    json iv = json::array();
    for (const auto& x : r.intervals) iv.push_back(interval_json(x));
    return {{"summary", summary_json(r)}, {"residency", res}, {"violations", viol}, {"intervals", iv}};
}

json to_json(const ModeComparison& c) {
    json res;
    for (std::size_t i = 0; i < c.residency_delta.size(); ++i)
        res[to_string(kAllPackageStates[i])] = c.residency_delta[i];
    return {{"delta",
             {{"perf", c.perf_delta},
              {"cpu_perf", c.cpu_perf_delta},
              {"gfx_perf", c.gfx_perf_delta},
              {"avg_power", c.avg_power_delta},
              {"table_avg_power", c.table_power_delta},
              {"residency", res}}},
            {"normal", summary_json(c.normal)},
            {"bypass", summary_json(c.bypass)}};
}

json to_json(const std::vector<TrendRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"tdp_w", r.tdp}, {"base_delta", r.base_delta}, {"rate_delta", r.rate_delta}, {"gfx_delta", r.gfx_delta}});
    return out;
}

json to_json(const ImpedanceProfile& z) {
    json pts = json::array();
    for (const auto& s : z) pts.push_back({{"freq_hz", s.freq}, {"mag_ohm", s.magnitude}, {"phase_rad", s.phase}});
    auto pk = peak_impedance(z);
    return {{"points", pts}, {"peak", {{"freq_hz", pk.freq}, {"mag_ohm", pk.magnitude}}}};
}

void write_intervals_csv(std::ostream& out, const SimReport& r) {
    Csv c(out);
    for (const char* col : kIntervalColumns) c << col;
    c.end();
    for (const auto& x : r.intervals) {
        auto j = interval_json(x);
        for (const char* col : kIntervalColumns) {
            const auto& v = j.at(col);
            if (v.is_string()) c << v.get<std::string>();
            else if (v.is_number_integer() || v.is_number_unsigned()) c << v.get<long long>();
            else c << v.get<double>();
        }
        c.end();
    }
}

void write_residency_csv(std::ostream& out, const SimReport& r) {
    Csv c(out);
    c << "state" << "seconds" << "fraction" << "avg_contribution_w";
    c.end();
    for (const auto& x : r.residency) {
        c << to_string(x.state) << x.seconds << x.fraction << x.avg_contribution;
        c.end();
    }
}

void write_violations_csv(std::ostream& out, const SimReport& r) {
    Csv c(out);
    c << "interval" << "limit" << "amount";
    c.end();
    for (const auto& v : r.violations) {
        c << v.interval << to_string(v.limit) << v.amount;
        c.end();
    }
}

void write_summary_csv(std::ostream& out, const SimReport& r) {
    Csv c(out);
    c << "key" << "value";
    c.end();
    c << "mode" << r.mode;
    c.end();
    c << "cstate_cap" << to_string(r.cap);
    c.end();
    for (const auto& [k, v] : summary_fields(r)) {
        c << k << v;
        c.end();
    }
}

void write_comparison_csv(std::ostream& out, const ModeComparison& m) {
    Csv c(out);
    c << "metric" << "normal" << "bypass" << "delta";
    c.end();
    bool gfx = m.perf_delta == m.gfx_perf_delta && m.normal.gfx_time_fraction > 0.5;
    c << "perf" << (gfx ? m.normal.gfx_perf : m.normal.cpu_perf) << (gfx ? m.bypass.gfx_perf : m.bypass.cpu_perf) << m.perf_delta;
    c.end();
    c << "cpu_perf" << m.normal.cpu_perf << m.bypass.cpu_perf << m.cpu_perf_delta;
    c.end();
    c << "gfx_perf" << m.normal.gfx_perf << m.bypass.gfx_perf << m.gfx_perf_delta;
    c.end();
    c << "avg_power" << m.normal.avg_power << m.bypass.avg_power << m.avg_power_delta;
    c.end();
    c << "table_avg_power" << m.normal.table_avg_power << m.bypass.table_avg_power << m.table_power_delta;
    c.end();
    auto frac = [](const SimReport& r, std::size_t d) {
        for (const auto& x : r.residency)
            if (static_cast<std::size_t>(depth(x.state)) == d) return x.fraction;
        return 0.0;
    };
    for (std::size_t d = 0; d < m.residency_delta.size(); ++d) {
        c << "residency_" + to_string(kAllPackageStates[d]) << frac(m.normal, d) << frac(m.bypass, d) << m.residency_delta[d];
        c.end();
    }
}

void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows) {
    Csv c(out);
    c << "tdp_w" << "base_delta" << "rate_delta" << "gfx_delta";
    c.end();
    for (const auto& r : rows) {
        c << r.tdp << r.base_delta << r.rate_delta << r.gfx_delta;
        c.end();
    }
}

void write_profile_csv(std::ostream& out, const ImpedanceProfile& z) {
    Csv c(out);
    c << "freq_hz" << "mag_ohm" << "phase_rad";
    c.end();
    for (const auto& s : z) {
        c << s.freq << s.magnitude << s.phase;
        c.end();
    }
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ModelError("cannot write '" + path + "'");
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ModelError("write failed for '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ModelError("cannot move output into place at '" + path + "'");
    }
}

}  // namespace darksim
