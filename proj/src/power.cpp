#include "darksim/power.hpp"

#include <cmath>

#include "darksim/pdn.hpp"

namespace darksim {

std::string to_string(Limit l) {
    switch (l) {
        case Limit::TDP: return "TDP";
        case Limit::TDC: return "TDC";
        case Limit::EDC: return "EDC";
        case Limit::Vmax: return "Vmax";
        case Limit::Vmin: return "Vmin";
    }
    return "?";
}

void validate(const CorePowerParams& p) {
    if (p.cdyn_per_level.empty()) throw ModelError("power: cdyn table is empty");
    for (std::size_t i = 0; i < p.cdyn_per_level.size(); ++i) {
        if (!(p.cdyn_per_level[i] >= 0.0)) throw ModelError("power: cdyn must be >= 0");
        if (i > 0 && !(p.cdyn_per_level[i] > p.cdyn_per_level[i - 1]))
            throw ModelError("power: cdyn must increase with virus level");
    }
    if (p.ilkg_ref < 0.0 || !(p.v_ref > 0.0)) throw ModelError("power: bad leakage reference");
    if (p.gated_residual_fraction < 0.0 || p.gated_residual_fraction > 1.0)
        throw ModelError("power: gated residual must be in [0, 1]");
}

void validate(const DesignLimits& l) {
    if (!(l.tdp > 0 && l.tdc > 0 && l.edc > 0 && l.vmax > 0 && l.vmin > 0))
        throw ModelError("power: design limits must be positive");
    if (l.edc < l.tdc) throw ModelError("power: EDC must be >= TDC");
    if (!(l.vmin < l.vmax)) throw ModelError("power: vmin must be below vmax");
}

double leakage_current(double v, const CorePowerParams& p) {
    return p.ilkg_ref * std::pow(v / p.v_ref, p.lkg_voltage_exponent);
}

double cdyn_for_level(const CorePowerParams& p, int level) {
    if (level < 1 || level > static_cast<int>(p.cdyn_per_level.size()))
        throw ModelError("power: no cdyn for virus level " + std::to_string(level));
    return p.cdyn_per_level[static_cast<std::size_t>(level - 1)];
}

CorePower core_power(double f, double v, int level, double active_fraction, bool gated,
                     const CorePowerParams& p, const DesignLimits& limits) {
    if (v < limits.vmin || v > limits.vmax) throw LimitError("power: voltage outside [vmin, vmax]");
    if (f < 0.0) throw ModelError("power: negative frequency");
    CorePower out;
    out.dynamic = active_fraction * cdyn_for_level(p, level) * v * v * f;
    out.leakage = leakage_current(v, p) * v;
    if (gated) out.leakage *= p.gated_residual_fraction;
    return out;
}

double graphics_power(double f, double v, double load, const GraphicsParams& g) {
    double lkg = g.ilkg_ref * std::pow(v / g.v_ref, g.lkg_voltage_exponent) * v;
    return load * g.cdyn * v * v * f + lkg;
}

PowerBreakdown make_breakdown(const std::vector<CorePower>& cores, double graphics, double uncore) {
    PowerBreakdown b;
    for (const auto& c : cores) {
        b.dynamic += c.dynamic;
        b.leakage += c.leakage;
        b.per_core.push_back(c.total());
    }
    b.graphics = graphics;
    b.uncore = uncore;
    b.total = b.dynamic + b.leakage + b.graphics + b.uncore;
    return b;
}

std::vector<Violation> check_limits(const PowerBreakdown& b, double icc_total, double v,
                                    const DesignLimits& limits, double icc_sustained) {
    if (icc_sustained < 0.0) icc_sustained = icc_total;
    std::vector<Violation> out;
    if (b.total > limits.tdp) out.push_back({Limit::TDP, b.total - limits.tdp});
    if (icc_sustained > limits.tdc) out.push_back({Limit::TDC, icc_sustained - limits.tdc});
    if (icc_total > limits.edc) out.push_back({Limit::EDC, icc_total - limits.edc});
    if (v > limits.vmax) out.push_back({Limit::Vmax, v - limits.vmax});
    if (v < limits.vmin) out.push_back({Limit::Vmin, limits.vmin - v});
    return out;
}

}  // namespace darksim
