#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darksim/config.hpp"
#include "darksim/cstates.hpp"
#include "darksim/guardband.hpp"
#include "darksim/pdn.hpp"
#include "darksim/pmu.hpp"
#include "darksim/power.hpp"
#include "darksim/vfmodel.hpp"

namespace darksim {

struct WorkloadParams {
    double f_ref = 4.0e9;
    std::vector<double> suite_mem;
    std::vector<double> energy_star_weights{0.45, 0.05, 0.15, 0.35};
    std::vector<std::string> energy_star_hints{"deep", "deep", "psr", "cc6"};
    double gfx_core_activity = 0.2;
};

struct PlatformConfig {
    Segment segment = Segment::Desktop;
    PmuMode mode = PmuMode::Bypass;
    bool mode_mismatch = false;
    double tdp = 91.0;
    std::optional<PackageCState> cstate_cap;
    double uncore_power = 2.0;

    PdnNetwork network;
    SweepSettings sweep;

    GuardbandModel guardband;
    double vcc_min = 0.70;
    bool reliability_adders = true;
    bool equal_guardbands = false;  ///< Bypass reuses the gated peak and adds nothing
    std::vector<int> level_for_active_count;

    VfCurve curve;
    CorePowerParams power;
    GraphicsParams graphics;
    DesignLimits limits;
    PbmParams pbm;
    double stall_activity = 0.4;

    CStateTables cstates;
    WorkloadParams workload;

    std::size_t core_count() const { return network.cores.size(); }
    PackageCState cap() const { return cstate_cap ? *cstate_cap : default_cap(segment, mode); }
};

PdnNetwork load_network(const ConfigSection& s);
SweepSettings parse_sweep(const std::string& spec);

PlatformConfig load_platform(const ConfigFile& cfg);
PlatformConfig load_platform_file(const std::string& path);

/// Checks cross-module consistency; throws ModelError.
void validate(const PlatformConfig& p);

/// Peak |Z| seen by the cores in the given mode.
double mode_z_peak(const PlatformConfig& p, PmuMode mode);

/// Firmware context for one mode, with the peak impedance and adder filled in.
PmuContext make_context(const PlatformConfig& p, PmuMode mode);

}  // namespace darksim
