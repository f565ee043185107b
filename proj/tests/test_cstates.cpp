#include "catch_amalgamated.hpp"

#include <random>

#include "darksim/cstates.hpp"
#include "darksim/pdn.hpp"
#include "oracles/cstate_truth.hpp"

using namespace darksim;
using Catch::Approx;
using oracle::for_each_component_state;
using oracle::truth_table;

namespace {

CStateTables tables(double c7_bypass = 1.80, double c8_bypass = 0.40) {
    CStateTables t;
    t.power.normal = {8.0, 3.0, 2.2, 1.2, 0.50, 0.35, 0.25, 0.15};
    t.power.bypass = {9.0, 4.6, 4.2, 3.86, c7_bypass, c8_bypass, 0.30, 0.20};
    const double us = 1e-6;
    t.latency.states = {{{0, 0}, {2 * us, 3 * us}, {10 * us, 15 * us}, {40 * us, 50 * us}, {60 * us, 80 * us},
                         {100 * us, 120 * us}, {150 * us, 200 * us}, {300 * us, 400 * us}}};
    return t;
}

}  // namespace

TEST_CASE("resolution examples") {
    ComponentStates cs;
    cs.cores = {CoreCState::CC0, CoreCState::CC6};
    CHECK(resolve_package_cstate(cs, PackageCState::C10) == PackageCState::C0);

    cs.cores = {CoreCState::CC3, CoreCState::CC3};
    cs.dram = DramState::Active;
    CHECK(resolve_package_cstate(cs, PackageCState::C10) == PackageCState::C2);

    ComponentStates deep;
    deep.cores.assign(4, CoreCState::CC6);
    deep.display = DisplayState::On;
    CHECK(resolve_package_cstate(deep, PackageCState::C8) == PackageCState::C8);
    CHECK(resolve_package_cstate(deep, PackageCState::C7) == PackageCState::C7);
}

TEST_CASE("resolution agrees with the truth table everywhere") {
    std::size_t checked = 0, agreed = 0;
    for (std::size_t cores = 1; cores <= 4; ++cores)
        for_each_component_state(cores, [&](const ComponentStates& cs) {
            PackageCState prev = PackageCState::C0;
            for (auto cap : kAllPackageStates) {
                auto got = resolve_package_cstate(cs, cap);
                ++checked;
                agreed += got == truth_table(cs, cap);
                CHECK(depth(got) <= depth(cap));
                CHECK(depth(got) >= depth(prev));
                prev = got;
            }
        });
    CHECK(checked > 60000);
    CHECK(agreed == checked);
}

TEST_CASE("state names") {
    for (auto s : kAllPackageStates) CHECK(parse_package_cstate(to_string(s)) == s);
    CHECK_THROWS_AS(parse_package_cstate("C5"), ModelError);
}

TEST_CASE("power table lookups") {
    auto t = tables();
    CHECK(cstate_power(PackageCState::C7, PmuMode::Normal, t.power) == 0.50);
    CHECK(cstate_power(PackageCState::C7, PmuMode::Bypass, t.power) == 1.80);
    CHECK(cstate_power(PackageCState::C8, PmuMode::Bypass, t.power) <
          cstate_power(PackageCState::C7, PmuMode::Bypass, t.power));
    for (auto m : {PmuMode::Normal, PmuMode::Bypass})
        for (auto s : kAllPackageStates)
            CHECK(cstate_power(PackageCState::C0, m, t.power) >= cstate_power(s, m, t.power));
    t.power.bypass[5].reset();
    CHECK_THROWS_AS(cstate_power(PackageCState::C8, PmuMode::Bypass, t.power), ModelError);
}

TEST_CASE("table validation") {
    auto t = tables();
    CHECK_NOTHROW(validate(t));
    t.power.normal[5] = 0.6;
    CHECK_THROWS_AS(validate(t), ModelError);
    t = tables();
    t.latency.states[6].exit = 1e-6;
    CHECK_THROWS_AS(validate(t), ModelError);
}

TEST_CASE("wake cost") {
    auto t = tables();
    CHECK(wake_cost(PackageCState::C6, PmuMode::Normal, t.latency) == Approx(50e-6 + 15e-9).epsilon(1e-15));
    CHECK(wake_cost(PackageCState::C6, PmuMode::Bypass, t.latency) == Approx(50e-6));
    CHECK(wake_cost(PackageCState::C3, PmuMode::Normal, t.latency) == Approx(15e-6));
    CHECK(wake_cost(PackageCState::C0, PmuMode::Normal, t.latency) == 0.0);
    CHECK(t.latency.core_ungate >= 10e-9);
    CHECK(t.latency.core_ungate <= 20e-9);
}

TEST_CASE("residency average power") {
    auto t = tables();
    CHECK(residency_average_power({{PackageCState::C0, 0.01}, {PackageCState::C7, 0.99}}, t, PmuMode::Normal) ==
          Approx(0.575).epsilon(1e-12));
    CHECK(residency_average_power({{PackageCState::C9, 3.0}}, t, PmuMode::Bypass) == Approx(0.30));
    CHECK_THROWS_AS(residency_average_power({}, t, PmuMode::Normal), ModelError);
    CHECK_THROWS_AS(residency_average_power({{PackageCState::C2, 0.0}}, t, PmuMode::Normal), ModelError);

    // exit from C7 into C0 is billed at C0 power
    double exit = wake_cost(PackageCState::C7, PmuMode::Normal, t.latency);
    double got = residency_average_power({{PackageCState::C7, 0.99}, {PackageCState::C0, 0.01}}, t, PmuMode::Normal);
    CHECK(got == Approx(0.575 + exit * (8.0 - 0.5)).epsilon(1e-12));
}

TEST_CASE("residency reductions from the closed-form sum") {
    // RMT: 99% idle, 1% active, bypass C8 versus bypass C7
    auto t = tables();
    auto avg = [&](PackageCState idle) {
        return 0.99 * cstate_power(idle, PmuMode::Bypass, t.power) + 0.01 * cstate_power(PackageCState::C0, PmuMode::Bypass, t.power);
    };
    double closed = 1.0 - avg(PackageCState::C8) / avg(PackageCState::C7);
    double via = 1.0 - residency_average_power({{PackageCState::C0, 0.01}, {PackageCState::C8, 0.99}}, t, PmuMode::Bypass) /
                           residency_average_power({{PackageCState::C0, 0.01}, {PackageCState::C7, 0.99}}, t, PmuMode::Bypass);
    CHECK(via == Approx(closed).epsilon(1e-12));
    CHECK(closed == Approx(0.7404).margin(1e-4));
}

TEST_CASE("splitting a segment does not change the average") {
    auto t = tables();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::uniform_int_distribution<int> st(0, 7);
    for (int k = 0; k < 200; ++k) {
        std::vector<TimelineEntry> tl;
        for (int i = 0; i < 8; ++i) tl.push_back({kAllPackageStates[static_cast<std::size_t>(st(rng))], u(rng) * 1e-3});
        for (auto mode : {PmuMode::Normal, PmuMode::Bypass}) {
            double whole = residency_average_power(tl, t, mode);
            auto split = tl;
            std::size_t at = static_cast<std::size_t>(k % 8);
            double frac = u(rng);
            TimelineEntry second{split[at].state, split[at].duration * (1 - frac)};
            split[at].duration *= frac;
            split.insert(split.begin() + static_cast<long>(at) + 1, second);
            CHECK(residency_average_power(split, t, mode) == Approx(whole).epsilon(1e-12));
        }
    }
}

TEST_CASE("platform caps and idle hints") {
    CHECK(default_cap(Segment::Mobile, PmuMode::Normal) == PackageCState::C10);
    CHECK(default_cap(Segment::Desktop, PmuMode::Normal) == PackageCState::C7);
    CHECK(default_cap(Segment::Desktop, PmuMode::Bypass) == PackageCState::C8);
    const std::pair<const char*, PackageCState> hints[] = {
        {"deep", PackageCState::C10}, {"psr", PackageCState::C9}, {"vr_off", PackageCState::C8},
        {"io_gated", PackageCState::C7}, {"cc6", PackageCState::C6}, {"cc3", PackageCState::C2}};
    for (const auto& [h, s] : hints) CHECK(resolve_package_cstate(idle_hint_states(h, 4), PackageCState::C10) == s);
    CHECK_THROWS_AS(idle_hint_states("nap", 4), ModelError);
}
