#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "darksim/platform.hpp"
#include "darksim/pmu.hpp"

using namespace darksim;
using Catch::Approx;

namespace {

const PlatformConfig& reference() {
    static const PlatformConfig p = load_platform_file(DARKSIM_REFERENCE_CONFIG);
    return p;
}

Activity one_core(std::size_t n = 4, double mem = 0.0) {
    Activity a;
    a.cores.assign(n, {0.0, 1, 0.0});
    a.cores[0] = {1.0, 1, mem};
    return a;
}

BudgetSplit unlimited() { return {1e6, 1e6, 0, false}; }

// Rebuilds the core-rail voltage and power from the raw formulas and scans every bin.
struct ScanResult {
    double freq = -1;
    double power = 0;
};

ScanResult scan(const PmuContext& ctx, const Activity& act, PmuMode mode, double budget) {
    const auto& gb = ctx.guardband;
    int level = guardband_level(act, ctx);
    double icc_top = find_level(gb, level).icc_virus;
    double top = ctx.curve.points.back().vnom * ctx.curve.points.back().freq;
    ScanResult best;
    for (double k = 0;; k += 1) {
        double f = k * ctx.curve.bin;
        if (f > ctx.curve.f_hi()) break;
        if (f < ctx.curve.f_lo()) continue;
        double vn = vnom_at(ctx.curve, f);
        double icc = icc_top * vn * f / top;
        double droop = gb.droop_fraction > 0 ? gb.droop_fraction * icc : gb.droop_delta_i;
        double v = vn + gb.load_line.r_ll * icc + ctx.z_peak * droop + gb.reliability_adder;
        if (v > ctx.limits.vmax) continue;
        double lkg = ctx.power.ilkg_ref * std::pow(v / ctx.power.v_ref, ctx.power.lkg_voltage_exponent) * v;
        double p = 0;
        for (const auto& c : act.cores) {
            if (c.active_fraction <= 0) {
                p += mode == PmuMode::Normal ? lkg * ctx.power.gated_residual_fraction : lkg;
                continue;
            }
            double t_cpu = (1 - c.mem_fraction) * ctx.f_ref / f;
            double stall = c.mem_fraction / (t_cpu + c.mem_fraction);
            double a = c.active_fraction * (1 - (1 - ctx.stall_activity) * stall);
            p += a * ctx.power.cdyn_per_level[static_cast<std::size_t>(c.virus_level - 1)] * v * v * f + lkg;
        }
        if (p > budget || p / v > std::min(ctx.limits.tdc, ctx.limits.edc)) continue;
        best = {f, p};
    }
    return best;
}

}  // namespace

TEST_CASE("budget split examples") {
    auto cpu = pbm_allocate(91, {1.0, 0.0}, PmuMode::Normal, 0.0);
    CHECK(cpu.cores_budget == Approx(89.0));
    CHECK(cpu.graphics_budget == 0.0);
    CHECK(cpu.uncore_reserve == 2.0);

    auto gn = pbm_allocate(35, {0.05, 1.0}, PmuMode::Normal, 2.0);
    CHECK(gn.cores_budget == Approx(0.15 * 33));
    auto gb = pbm_allocate(35, {0.05, 1.0}, PmuMode::Bypass, 2.0);
    CHECK(gn.graphics_budget - gb.graphics_budget == Approx(2.0).epsilon(1e-12));

    CHECK(pbm_allocate(35, {0.05, 1.0}, PmuMode::Bypass, 40.0).degenerate);
    CHECK_FALSE(pbm_allocate(35, {0.05, 1.0}, PmuMode::Normal, 40.0).degenerate);
    CHECK_THROWS_AS(pbm_allocate(0, {1, 0}, PmuMode::Normal, 0), ModelError);
    CHECK_THROWS_AS(pbm_allocate(35, {1.5, 0}, PmuMode::Normal, 0), ModelError);
}

TEST_CASE("budget conservation over random demands") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 5000; ++k) {
        double tdp = 1 + u(rng) * 120;
        auto mode = u(rng) < 0.5 ? PmuMode::Normal : PmuMode::Bypass;
        auto b = pbm_allocate(tdp, {u(rng), u(rng)}, mode, u(rng) * 150);
        CHECK(b.cores_budget >= 0);
        CHECK(b.graphics_budget >= 0);
        CHECK(b.uncore_reserve >= 0);
        CHECK(b.cores_budget + b.graphics_budget + b.uncore_reserve <= tdp * (1 + 1e-12));
    }
}

TEST_CASE("stall model") {
    CHECK(stall_fraction(4e9, 0.0, 4e9) == 0.0);
    CHECK(stall_fraction(4e9, 1.0, 4e9) == 1.0);
    CHECK(stall_fraction(4e9, 0.3, 4e9) == Approx(0.3));
    CHECK(stall_fraction(2e9, 0.5, 4e9) == Approx(1.0 / 3.0));
    PmuContext ctx = make_context(reference(), PmuMode::Normal);
    CHECK(effective_activity({1.0, 1, 0.0}, 3e9, ctx) == 1.0);
    CHECK(effective_activity({1.0, 1, 1.0}, 3e9, ctx) == Approx(ctx.stall_activity));
}

TEST_CASE("guardband level follows active cores and trace level") {
    PmuContext ctx = make_context(reference(), PmuMode::Normal);
    Activity a;
    a.cores.assign(4, {0.0, 1, 0.0});
    CHECK(guardband_level(a, ctx) == 1);
    a.cores[0] = {1, 1, 0};
    CHECK(guardband_level(a, ctx) == 1);
    a.cores[1] = {1, 1, 0};
    CHECK(guardband_level(a, ctx) == 2);
    a.cores[2] = {1, 1, 0};
    a.cores[3] = {1, 1, 0};
    CHECK(guardband_level(a, ctx) == 3);
    a = one_core();
    a.cores[0].virus_level = 3;
    CHECK(guardband_level(a, ctx) == 3);
}

TEST_CASE("virus current is the table value at the top bin") {
    PmuContext ctx = make_context(reference(), PmuMode::Normal);
    for (int l = 1; l <= 3; ++l)
        CHECK(virus_current_at(ctx, l, ctx.curve.f_hi()) == Approx(find_level(ctx.guardband, l).icc_virus));
    CHECK(virus_current_at(ctx, 3, 2e9) < virus_current_at(ctx, 3, 3e9));
}

TEST_CASE("bypass raises the unconstrained frequency by at least a bin") {
    auto n = make_context(reference(), PmuMode::Normal);
    auto b = make_context(reference(), PmuMode::Bypass);
    for (std::size_t active = 1; active <= 4; ++active) {
        Activity a;
        a.cores.assign(4, {0.0, 1, 0.0});
        for (std::size_t c = 0; c < active; ++c) a.cores[c] = {1.0, 1, 0.0};
        auto on = dvfs_select(unlimited(), n, a, PmuMode::Normal);
        auto ob = dvfs_select(unlimited(), b, a, PmuMode::Bypass);
        CHECK(ob.core_freq >= on.core_freq + n.curve.bin - 1);
    }
}

TEST_CASE("zero core budget gives the lowest bin and a flag") {
    auto ctx = make_context(reference(), PmuMode::Normal);
    auto op = dvfs_select({0, 0, 2, false}, ctx, one_core(), PmuMode::Normal);
    CHECK(op.degenerate);
    CHECK(op.core_freq == Approx(ctx.curve.f_lo()));
}

TEST_CASE("selection matches a brute-force bin scan") {
    const auto& p = reference();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto mode : {PmuMode::Normal, PmuMode::Bypass}) {
        auto ctx = make_context(p, mode);
        auto single = one_core();
        auto budget = pbm_allocate(91, demand_of(single), mode, 0);
        auto op = dvfs_select(budget, ctx, single, mode);
        auto want = scan(ctx, single, mode, budget.cores_budget);
        CHECK(op.core_freq == Approx(want.freq).epsilon(1e-12));
        CHECK(op.predicted_core_power <= budget.cores_budget);
        CHECK(op.predicted_core_power == Approx(want.power).epsilon(1e-9));

        for (int k = 0; k < 300; ++k) {
            Activity a;
            for (int c = 0; c < 4; ++c)
                a.cores.push_back({u(rng) < 0.4 ? 0.0 : u(rng), 1 + static_cast<int>(u(rng) * 3), u(rng)});
            if (std::all_of(a.cores.begin(), a.cores.end(), [](auto& c) { return c.active_fraction <= 0; }))
                a.cores[0].active_fraction = 0.5;
            double cores_budget = 1 + u(rng) * 120;
            auto o = dvfs_select({cores_budget, 0, 2, false}, ctx, a, mode);
            auto w = scan(ctx, a, mode, cores_budget);
            if (w.freq < 0) {
                CHECK(o.degenerate);
            } else {
                CHECK(o.core_freq == Approx(w.freq).epsilon(1e-12));
                CHECK(o.core_voltage <= ctx.limits.vmax);
                CHECK_FALSE(o.degenerate);
            }
        }
    }
}

TEST_CASE("selection is deterministic and shares one clock") {
    auto ctx = make_context(reference(), PmuMode::Bypass);
    Activity a;
    a.cores = {{1, 1, 0.1}, {0.7, 2, 0.4}, {0, 1, 0}, {0.3, 1, 0.9}};
    a.gfx_load = 0.3;
    auto budget = pbm_allocate(65, demand_of(a), PmuMode::Bypass, 1.0);
    auto x = dvfs_select(budget, ctx, a, PmuMode::Bypass);
    auto y = dvfs_select(budget, ctx, a, PmuMode::Bypass);
    CHECK(x.core_freq == y.core_freq);
    CHECK(x.core_voltage == y.core_voltage);
    CHECK(x.gfx_freq == y.gfx_freq);
    CHECK(x.predicted_core_power == y.predicted_core_power);
    for (std::size_t c = 0; c < a.cores.size(); ++c)
        if (a.cores[c].active_fraction > 0) CHECK(x.cores[c].freq == x.core_freq);
    CHECK(x.cores[2].cstate == CoreCState::CC6);
    CHECK(x.predicted_gfx_power <= budget.graphics_budget);
}

TEST_CASE("bypass never runs slower when power does not bind") {
    auto n = make_context(reference(), PmuMode::Normal);
    auto b = make_context(reference(), PmuMode::Bypass);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 500; ++k) {
        Activity a;
        for (int c = 0; c < 4; ++c) a.cores.push_back({u(rng) < 0.3 ? 0.0 : u(rng), 1 + static_cast<int>(u(rng) * 3), u(rng)});
        a.cores[0].active_fraction = std::max(a.cores[0].active_fraction, 0.1);
        CHECK(dvfs_select(unlimited(), b, a, PmuMode::Bypass).core_freq >=
              dvfs_select(unlimited(), n, a, PmuMode::Normal).core_freq);
    }
}

TEST_CASE("graphics-dominant intervals pin the cores at Pn") {
    auto ctx = make_context(reference(), PmuMode::Normal);
    Activity a = one_core();
    a.cores[0].active_fraction = 0.2;
    a.gfx_load = 1.0;
    auto budget = pbm_allocate(35, demand_of(a), PmuMode::Normal, 0);
    auto op = dvfs_select(budget, ctx, a, PmuMode::Normal);
    CHECK(op.core_freq == Approx(ctx.curve.f_lo()));
    CHECK_FALSE(op.degenerate);
    CHECK(op.gfx_freq > 0);
}

TEST_CASE("mode from fuse") {
    auto d = resolve_mode(true, Segment::Desktop);
    CHECK(d.mode == PmuMode::Bypass);
    CHECK_FALSE(d.mismatch_warning);
    auto m = resolve_mode(false, Segment::Mobile);
    CHECK(m.mode == PmuMode::Normal);
    CHECK_FALSE(m.mismatch_warning);
    auto x = resolve_mode(true, Segment::Mobile);
    CHECK(x.mode == PmuMode::Bypass);
    CHECK(x.mismatch_warning);
}
