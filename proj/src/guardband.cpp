#include "darksim/guardband.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "darksim/pdn.hpp"

namespace darksim {

void validate(const GuardbandModel& gb) {
    if (!(gb.load_line.r_ll > 0.0)) throw ModelError("guardband: r_ll must be > 0");
    if (gb.levels.empty()) throw ModelError("guardband: need at least one virus level");
    for (std::size_t i = 0; i < gb.levels.size(); ++i) {
        if (gb.levels[i].delta_v < 0.0) throw ModelError("guardband: delta_v must be >= 0");
        if (i > 0 && !(gb.levels[i].icc_virus > gb.levels[i - 1].icc_virus))
            throw ModelError("guardband: icc_virus must increase with level");
        if (i > 0 && !(gb.levels[i].level_id > gb.levels[i - 1].level_id))
            throw ModelError("guardband: level ids must increase");
    }
    if (gb.droop_delta_i < 0.0 || gb.droop_fraction < 0.0 || gb.reliability_adder < 0.0)
        throw ModelError("guardband: droop and adder terms must be >= 0");
}

double load_line_voltage(double vcc, double icc, const LoadLine& ll) {
    if (!(vcc > 0.0) || icc < 0.0) throw ModelError("load line: need vcc > 0 and icc >= 0");
    double v = vcc - ll.r_ll * icc;
    if (!(v > 0.0)) throw ModelError("load line: setpoint infeasible, load voltage <= 0");
    return v;
}

const VirusLevel& find_level(const GuardbandModel& gb, int level_id) {
    for (const auto& l : gb.levels)
        if (l.level_id == level_id) return l;
    throw ModelError("guardband: unknown virus level " + std::to_string(level_id));
}

double droop_current(const GuardbandModel& gb, double icc) {
    return gb.droop_fraction > 0.0 ? gb.droop_fraction * icc : gb.droop_delta_i;
}

double total_guardband(const GuardbandModel& gb, double icc, double z_peak) {
    return gb.load_line.r_ll * icc + z_peak * droop_current(gb, icc) + gb.reliability_adder;
}

Setpoint vr_setpoint(double vcc_min, const VirusLevel& level, const GuardbandModel& gb,
                     double z_peak, double vmax) {
    if (!(vcc_min > 0.0) || z_peak < 0.0) throw ModelError("vr_setpoint: need vcc_min > 0, z_peak >= 0");
    Setpoint s;
    s.volts = vcc_min + total_guardband(gb, level.icc_virus, z_peak);
    s.over_vmax = s.volts > vmax;
    return s;
}

double level_transition_delta(const std::vector<VirusLevel>& levels, int from_id, int to_id) {
    auto exists = [&](int id) {
        return std::any_of(levels.begin(), levels.end(), [&](const VirusLevel& l) { return l.level_id == id; });
    };
    if (!exists(from_id) || !exists(to_id)) throw ModelError("guardband: unknown virus level");
    int lo = std::min(from_id, to_id), hi = std::max(from_id, to_id);
    double sum = 0.0;
    for (const auto& l : levels)
        if (l.level_id > lo && l.level_id <= hi) sum += l.delta_v;
    return to_id >= from_id ? sum : -sum;
}

double reliability_adder_for(double tdp, PmuMode mode) {
    if (!(tdp >= 35.0 && tdp <= 91.0)) throw ModelError("reliability adder: TDP outside [35, 91] W");
    if (mode == PmuMode::Normal) return 0.0;
    double t = (tdp - 35.0) / (91.0 - 35.0);
    return 0.020 + t * (0.005 - 0.020);
}

bool levels_follow_load_line(const std::vector<VirusLevel>& levels, const LoadLine& ll, double rel_tol) {
    double prev = 0.0;
    for (const auto& l : levels) {
        double want = ll.r_ll * (l.icc_virus - prev);
        if (std::abs(l.delta_v - want) > rel_tol * std::max(std::abs(want), 1e-300)) return false;
        prev = l.icc_virus;
    }
    return true;
}

}  // namespace darksim
