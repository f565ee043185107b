#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "darksim/guardband.hpp"

namespace darksim {

enum class CoreCState { CC0, CC3, CC6 };
enum class GfxCState { RC0, RC6 };
enum class DramState { Active, SelfRefresh };
enum class DisplayState { On, PSR, Off };

struct ComponentStates {
    std::vector<CoreCState> cores;
    GfxCState graphics = GfxCState::RC6;
    DramState dram = DramState::SelfRefresh;
    bool io_power_gated = true;
    bool core_vr_off_ok = true;
    DisplayState display = DisplayState::Off;
    bool all_ips_off = true;
};

enum class PackageCState { C0 = 0, C2, C3, C6, C7, C8, C9, C10 };

inline constexpr std::array<PackageCState, 8> kAllPackageStates = {
    PackageCState::C0, PackageCState::C2, PackageCState::C3, PackageCState::C6,
    PackageCState::C7, PackageCState::C8, PackageCState::C9, PackageCState::C10};

std::string to_string(PackageCState s);
PackageCState parse_package_cstate(const std::string& s);
inline int depth(PackageCState s) { return static_cast<int>(s); }

struct StateLatency {
    double entry = 0.0;
    double exit = 0.0;
};

struct LatencyTable {
    std::array<StateLatency, 8> states{};
    double core_ungate = 15e-9;
};

/// Per-state power for each mode, indexed by depth.
struct CStatePowerTable {
    std::array<std::optional<double>, 8> normal{};
    std::array<std::optional<double>, 8> bypass{};
};

struct CStateTables {
    CStatePowerTable power;
    LatencyTable latency;
};

void validate(const CStateTables& t);

/// Deepest state whose conditions hold, capped by the platform.
PackageCState resolve_package_cstate(const ComponentStates& cs, PackageCState platform_cap);

double cstate_power(PackageCState s, PmuMode mode, const CStatePowerTable& table);

/// Exit latency; the power-gate wake is added for C6 and deeper in Normal mode.
double wake_cost(PackageCState from, PmuMode mode, const LatencyTable& table);

struct TimelineEntry {
    PackageCState state;
    double duration = 0.0;
};

/// Time-weighted average power. Before each move to a shallower state the exit
/// latency of the deeper one is billed at the shallower state's power.
double residency_average_power(const std::vector<TimelineEntry>& timeline, const CStateTables& t,
                               PmuMode mode);

/// Default cap: mobile C10, desktop C7, desktop with bypass fuse C8.
enum class Segment { Desktop, Mobile };
PackageCState default_cap(Segment seg, PmuMode mode);

/// Component states used by the named idle hints.
ComponentStates idle_hint_states(const std::string& hint, std::size_t cores);

}  // namespace darksim
