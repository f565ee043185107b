#include "darksim/cstates.hpp"

#include <algorithm>

#include "darksim/pdn.hpp"

namespace darksim {

namespace {

const char* const kNames[8] = {"C0", "C2", "C3", "C6", "C7", "C8", "C9", "C10"};

bool all_cores(const ComponentStates& cs, CoreCState at_least) {
    return std::all_of(cs.cores.begin(), cs.cores.end(),
                       [&](CoreCState c) { return static_cast<int>(c) >= static_cast<int>(at_least); });
}

}  // namespace

std::string to_string(PackageCState s) { return kNames[depth(s)]; }

PackageCState parse_package_cstate(const std::string& s) {
    for (auto st : kAllPackageStates)
        if (s == kNames[depth(st)]) return st;
    throw ModelError("cstates: unknown package state '" + s + "'");
}

void validate(const CStateTables& t) {
    for (auto* row : {&t.power.normal, &t.power.bypass}) {
        double prev = 0.0;
        bool first = true;
        for (const auto& p : *row) {
            if (!p) continue;
            if (*p < 0.0) throw ModelError("cstates: negative state power");
            if (!first && !(*p < prev)) throw ModelError("cstates: power must decrease with depth");
            prev = *p;
            first = false;
        }
    }
    double prev_exit = 0.0;
    for (const auto& l : t.latency.states) {
        if (l.entry < 0.0 || l.exit < 0.0) throw ModelError("cstates: negative latency");
        if (l.exit < prev_exit) throw ModelError("cstates: exit latency must not shrink with depth");
        prev_exit = l.exit;
    }
    if (t.latency.core_ungate < 0.0) throw ModelError("cstates: negative ungate latency");
}

PackageCState resolve_package_cstate(const ComponentStates& cs, PackageCState cap) {
    auto capped = [&](PackageCState s) { return depth(s) <= depth(cap) ? s : cap; };
    bool any_cc0 = std::any_of(cs.cores.begin(), cs.cores.end(), [](CoreCState c) { return c == CoreCState::CC0; });
    if (any_cc0 || cs.graphics == GfxCState::RC0) return PackageCState::C0;
    if (!all_cores(cs, CoreCState::CC3)) return PackageCState::C0;

    PackageCState s = PackageCState::C2;
    if (cs.dram == DramState::SelfRefresh) {
        s = PackageCState::C3;
        if (all_cores(cs, CoreCState::CC6)) {
            s = PackageCState::C6;
            if (cs.io_power_gated) {
                s = PackageCState::C7;
                if (cs.core_vr_off_ok) {
                    s = PackageCState::C8;
                    if (cs.display != DisplayState::On) {
                        s = PackageCState::C9;
                        if (cs.all_ips_off && cs.display == DisplayState::Off) s = PackageCState::C10;
                    }
                }
            }
        }
    }
    return capped(s);
}

double cstate_power(PackageCState s, PmuMode mode, const CStatePowerTable& table) {
    const auto& row = mode == PmuMode::Normal ? table.normal : table.bypass;
    const auto& p = row[static_cast<std::size_t>(depth(s))];
    if (!p) throw ModelError("cstates: no power entry for " + to_string(s));
    return *p;
}

double wake_cost(PackageCState from, PmuMode mode, const LatencyTable& table) {
    if (from == PackageCState::C0) return 0.0;
    double t = table.states[static_cast<std::size_t>(depth(from))].exit;
    if (mode == PmuMode::Normal && depth(from) >= depth(PackageCState::C6)) t += table.core_ungate;
    return t;
}

double residency_average_power(const std::vector<TimelineEntry>& timeline, const CStateTables& t,
                               PmuMode mode) {
    if (timeline.empty()) throw ModelError("cstates: empty timeline");
    std::vector<TimelineEntry> merged;
    for (const auto& e : timeline) {
        if (!(e.duration > 0.0)) throw ModelError("cstates: durations must be > 0");
        if (!merged.empty() && merged.back().state == e.state) merged.back().duration += e.duration;
        else merged.push_back(e);
    }
    double energy = 0.0, time = 0.0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const auto& e = merged[i];
        double p = cstate_power(e.state, mode, t.power);
        double billed_shallow = 0.0;
        if (i + 1 < merged.size() && depth(merged[i + 1].state) < depth(e.state)) {
            billed_shallow = std::min(wake_cost(e.state, mode, t.latency), e.duration);
            energy += billed_shallow * cstate_power(merged[i + 1].state, mode, t.power);
        }
        energy += (e.duration - billed_shallow) * p;
        time += e.duration;
    }
    return energy / time;
}

PackageCState default_cap(Segment seg, PmuMode mode) {
    if (seg == Segment::Mobile) return PackageCState::C10;
    return mode == PmuMode::Bypass ? PackageCState::C8 : PackageCState::C7;
}

ComponentStates idle_hint_states(const std::string& hint, std::size_t cores) {
    ComponentStates cs;
    cs.cores.assign(cores, CoreCState::CC6);
    if (hint == "deep" || hint.empty()) return cs;
    if (hint == "psr") {
        cs.display = DisplayState::PSR;
        cs.all_ips_off = false;
        return cs;
    }
    cs.display = DisplayState::On;
    cs.all_ips_off = false;
    if (hint == "vr_off") return cs;
    cs.core_vr_off_ok = false;
    if (hint == "io_gated") return cs;
    cs.io_power_gated = false;
    if (hint == "cc6") return cs;
    cs.dram = DramState::Active;
    cs.cores.assign(cores, CoreCState::CC3);
    if (hint == "cc3") return cs;
    throw ModelError("cstates: unknown idle hint '" + hint + "'");
}

}  // namespace darksim
