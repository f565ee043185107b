#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "darksim/vfmodel.hpp"

namespace darksim {

struct CorePowerParams {
    std::vector<double> cdyn_per_level;  ///< farads, index 0 is virus level 1
    double ilkg_ref = 0.0;               ///< amperes at v_ref
    double v_ref = 1.0;
    double lkg_voltage_exponent = 2.0;
    double gated_residual_fraction = 0.02;
};

struct GraphicsParams {
    VfCurve curve;
    double guardband = 0.05;
    double cdyn = 0.0;
    double ilkg_ref = 0.0;
    double v_ref = 1.0;
    double lkg_voltage_exponent = 2.0;
};

struct DesignLimits {
    double tdp = 91.0;
    double tdc = 120.0;
    double edc = 160.0;
    double vmax = 1.2;
    double vmin = 0.7;
};

struct CorePower {
    double dynamic = 0.0;
    double leakage = 0.0;
    double total() const { return dynamic + leakage; }
};

struct PowerBreakdown {
    double dynamic = 0.0;
    double leakage = 0.0;
    std::vector<double> per_core;
    double graphics = 0.0;
    double uncore = 0.0;
    double total = 0.0;
};

enum class Limit { TDP, TDC, EDC, Vmax, Vmin };

struct Violation {
    Limit limit;
    double amount = 0.0;
};

/// Raised when a voltage falls outside [vmin, vmax].
class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_string(Limit l);

void validate(const CorePowerParams& p);
void validate(const DesignLimits& l);

double leakage_current(double v, const CorePowerParams& p);

double cdyn_for_level(const CorePowerParams& p, int level);

CorePower core_power(double f, double v, int level, double active_fraction, bool gated,
                     const CorePowerParams& p, const DesignLimits& limits);

double graphics_power(double f, double v, double load, const GraphicsParams& g);

/// Sum of parts, with total filled in.
PowerBreakdown make_breakdown(const std::vector<CorePower>& cores, double graphics, double uncore);

/// icc_sustained is the rolling-average current for TDC; negative means use icc_total.
std::vector<Violation> check_limits(const PowerBreakdown& b, double icc_total, double v,
                                    const DesignLimits& limits, double icc_sustained = -1.0);

}  // namespace darksim
