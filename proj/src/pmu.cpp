#include "darksim/pmu.hpp"

#include <algorithm>
#include <cmath>

#include "darksim/pdn.hpp"

namespace darksim {

BudgetSplit pbm_allocate(double tdp, const Demand& demand, PmuMode mode, double leakage_floor,
                         const PbmParams& p) {
    if (!(tdp > 0.0)) throw ModelError("pbm: TDP must be > 0");
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(demand.cpu_intensity) || !in01(demand.gfx_intensity))
        throw ModelError("pbm: intensities must be in [0, 1]");

    BudgetSplit b;
    b.uncore_reserve = std::min(p.uncore_reserve, tdp);
    const double compute = tdp - b.uncore_reserve;
    const double floor = mode == PmuMode::Bypass ? leakage_floor : 0.0;
    b.degenerate = floor >= tdp;

    if (demand.gfx_intensity > demand.cpu_intensity) {
        b.cores_budget = std::min(p.cpu_share_under_gfx * compute + floor, compute);
        b.graphics_budget = compute - b.cores_budget;
    } else {
        b.graphics_budget = p.cpu_share_under_gfx * demand.gfx_intensity * compute;
        b.cores_budget = compute - b.graphics_budget;
    }
    return b;
}

double stall_fraction(double f, double mem_fraction, double f_ref) {
    if (mem_fraction <= 0.0) return 0.0;
    return mem_fraction / ((1.0 - mem_fraction) * f_ref / f + mem_fraction);
}

double effective_activity(const CoreActivity& a, double f, const PmuContext& ctx) {
    double s = stall_fraction(f, a.mem_fraction, ctx.f_ref);
    return a.active_fraction * (1.0 - (1.0 - ctx.stall_activity) * s);
}

int guardband_level(const Activity& act, const PmuContext& ctx) {
    const auto& levels = ctx.guardband.levels;
    int count = 0, trace_level = levels.front().level_id;
    for (const auto& c : act.cores) {
        if (c.active_fraction <= 0.0) continue;
        ++count;
        trace_level = std::max(trace_level, c.virus_level);
    }
    if (count == 0) return levels.front().level_id;
    int by_count = levels.front().level_id;
    if (!ctx.level_for_active_count.empty()) {
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(count), ctx.level_for_active_count.size());
        by_count = ctx.level_for_active_count[k - 1];
    }
    return std::min(std::max(by_count, trace_level), levels.back().level_id);
}

double virus_current_at(const PmuContext& ctx, int level, double f) {
    const double top_f = ctx.curve.f_hi();
    const double top = vnom_at(ctx.curve, top_f) * top_f;
    return find_level(ctx.guardband, level).icc_virus * vnom_at(ctx.curve, f) * f / top;
}

double guardband_at(const PmuContext& ctx, int level, double f) {
    return total_guardband(ctx.guardband, virus_current_at(ctx, level, f), ctx.z_peak);
}

double idle_leakage(const PmuContext& ctx, const Activity& act, double v, PmuMode mode) {
    double per_core = leakage_current(v, ctx.power) * v;
    if (mode == PmuMode::Normal) per_core *= ctx.power.gated_residual_fraction;
    double n_idle = 0.0;
    for (const auto& c : act.cores)
        if (c.active_fraction <= 0.0) n_idle += 1.0;
    return n_idle * per_core;
}

double predicted_core_power(const PmuContext& ctx, const Activity& act, double f, double v, PmuMode mode) {
    double p = idle_leakage(ctx, act, v, mode);
    for (const auto& c : act.cores) {
        if (c.active_fraction <= 0.0) continue;
        p += effective_activity(c, f, ctx) * cdyn_for_level(ctx.power, c.virus_level) * v * v * f;
        p += leakage_current(v, ctx.power) * v;
    }
    return p;
}

bool graphics_dominant(const Activity& act) {
    auto d = demand_of(act);
    return d.gfx_intensity > d.cpu_intensity;
}

Demand demand_of(const Activity& act) {
    Demand d;
    double sum = 0.0;
    for (const auto& c : act.cores) sum += c.active_fraction;
    d.cpu_intensity = act.cores.empty() ? 0.0 : sum / static_cast<double>(act.cores.size());
    d.gfx_intensity = act.gfx_load;
    return d;
}

OperatingPoint dvfs_select(const BudgetSplit& budget, const PmuContext& ctx, const Activity& act, PmuMode mode) {
    OperatingPoint op;
    op.level = guardband_level(act, ctx);
    const auto bins = curve_bins(ctx.curve);
    const double vmax = ctx.limits.vmax;
    const double i_cap = std::min(ctx.limits.tdc, ctx.limits.edc);

    bool any_active = std::any_of(act.cores.begin(), act.cores.end(),
                                  [](const CoreActivity& c) { return c.active_fraction > 0.0; });
    bool chosen = false;
    if (any_active && !graphics_dominant(act)) {
        for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
            double f = *it;
            double v = vnom_at(ctx.curve, f) + guardband_at(ctx, op.level, f);
            if (v > vmax) continue;
            double p = predicted_core_power(ctx, act, f, v, mode);
            if (p > budget.cores_budget || p / v > i_cap) continue;
            op.core_freq = f;
            op.core_voltage = v;
            op.predicted_core_power = p;
            chosen = true;
            break;
        }
    }
    if (!chosen) {
        // Pn, the lowest bin
        double f = bins.front();
        double v = vnom_at(ctx.curve, f) + guardband_at(ctx, op.level, f);
        if (v > vmax) {
            v = vmax;
            op.degenerate = true;
        }
        op.core_freq = f;
        op.core_voltage = v;
        op.predicted_core_power = predicted_core_power(ctx, act, f, v, mode);
        if (any_active && !graphics_dominant(act)) op.degenerate = true;
    }
    for (const auto& c : act.cores) {
        if (c.active_fraction > 0.0) op.cores.push_back({op.core_freq, op.core_voltage, CoreCState::CC0});
        else op.cores.push_back({0.0, op.core_voltage, CoreCState::CC6});
    }

    if (act.gfx_load > 0.0) {
        const auto gbins = curve_bins(ctx.graphics.curve);
        bool gchosen = false;
        for (auto it = gbins.rbegin(); it != gbins.rend(); ++it) {
            double v = vnom_at(ctx.graphics.curve, *it) + ctx.graphics.guardband;
            if (v > vmax) continue;
            double p = graphics_power(*it, v, act.gfx_load, ctx.graphics);
            if (p > budget.graphics_budget) continue;
            op.gfx_freq = *it;
            op.gfx_voltage = v;
            op.predicted_gfx_power = p;
            gchosen = true;
            break;
        }
        if (!gchosen) {
            op.gfx_freq = gbins.front();
            op.gfx_voltage = std::min(vnom_at(ctx.graphics.curve, op.gfx_freq) + ctx.graphics.guardband, vmax);
            op.predicted_gfx_power = graphics_power(op.gfx_freq, op.gfx_voltage, act.gfx_load, ctx.graphics);
            op.degenerate = true;
        }
    }
    return op;
}

ModeResolution resolve_mode(bool fuse, Segment segment) {
    ModeResolution r;
    r.mode = fuse ? PmuMode::Bypass : PmuMode::Normal;
    r.mismatch_warning = (r.mode == PmuMode::Bypass) != (segment == Segment::Desktop);
    return r;
}

}  // namespace darksim
