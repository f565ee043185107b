#pragma once

#include <limits>
#include <vector>

namespace darksim {

enum class PmuMode { Normal, Bypass };

struct LoadLine {
    double r_ll = 2.0e-3;
};

struct VirusLevel {
    int level_id = 1;
    double icc_virus = 0.0;
    double delta_v = 0.0;  ///< step when entering this level from the one below
};

struct GuardbandModel {
    LoadLine load_line;
    std::vector<VirusLevel> levels;
    double droop_delta_i = 0.0;   ///< fixed droop step, used when droop_fraction is 0
    double droop_fraction = 0.0;  ///< droop step as a fraction of the level current
    double reliability_adder = 0.0;
};

void validate(const GuardbandModel& gb);

/// Vcc_load = Vcc - R_LL * Icc
double load_line_voltage(double vcc, double icc, const LoadLine& ll);

const VirusLevel& find_level(const GuardbandModel& gb, int level_id);

/// Droop current step for a given virus current.
double droop_current(const GuardbandModel& gb, double icc);

/// IR + droop + reliability terms for a virus current.
double total_guardband(const GuardbandModel& gb, double icc, double z_peak);

struct Setpoint {
    double volts = 0.0;
    bool over_vmax = false;
};

Setpoint vr_setpoint(double vcc_min, const VirusLevel& level, const GuardbandModel& gb,
                     double z_peak, double vmax = std::numeric_limits<double>::infinity());

double level_transition_delta(const std::vector<VirusLevel>& levels, int from_id, int to_id);

/// 0 in Normal; linear from 20 mV at 35 W to 5 mV at 91 W in Bypass.
double reliability_adder_for(double tdp, PmuMode mode);

/// True when every delta_v equals r_ll times the current step from the level below.
bool levels_follow_load_line(const std::vector<VirusLevel>& levels, const LoadLine& ll,
                             double rel_tol = 1e-12);

}  // namespace darksim
