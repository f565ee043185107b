#pragma once

#include <vector>

#include "darksim/cstates.hpp"
#include "darksim/guardband.hpp"
#include "darksim/power.hpp"
#include "darksim/vfmodel.hpp"

namespace darksim {

struct BudgetSplit {
    double cores_budget = 0.0;
    double graphics_budget = 0.0;
    double uncore_reserve = 0.0;
    bool degenerate = false;
};

struct Demand {
    double cpu_intensity = 0.0;
    double gfx_intensity = 0.0;
};

struct PbmParams {
    double uncore_reserve = 2.0;
    double cpu_share_under_gfx = 0.15;
};

BudgetSplit pbm_allocate(double tdp, const Demand& demand, PmuMode mode, double leakage_floor,
                         const PbmParams& p = {});

struct CoreActivity {
    double active_fraction = 0.0;
    int virus_level = 1;
    double mem_fraction = 0.0;
};

struct Activity {
    std::vector<CoreActivity> cores;
    double gfx_load = 0.0;
};

/// Everything the firmware needs to pick an operating point.
struct PmuContext {
    VfCurve curve;
    GuardbandModel guardband;  ///< reliability_adder is set per mode and TDP by the caller
    double z_peak = 0.0;
    CorePowerParams power;
    GraphicsParams graphics;
    DesignLimits limits;
    PbmParams pbm;
    std::vector<int> level_for_active_count;  ///< index k = level with k+1 active cores
    double stall_activity = 0.4;              ///< activity kept while stalled on memory
    double f_ref = 4.0e9;
};

struct CoreOp {
    double freq = 0.0;
    double voltage = 0.0;
    CoreCState cstate = CoreCState::CC6;
};

struct OperatingPoint {
    std::vector<CoreOp> cores;
    double core_voltage = 0.0;
    double core_freq = 0.0;
    double gfx_freq = 0.0;
    double gfx_voltage = 0.0;
    int level = 1;
    double predicted_core_power = 0.0;
    double predicted_gfx_power = 0.0;
    bool degenerate = false;
};

/// Fraction of time a core waits on memory at frequency f.
double stall_fraction(double f, double mem_fraction, double f_ref);

/// Switching activity after stalls are taken into account.
double effective_activity(const CoreActivity& a, double f, const PmuContext& ctx);

/// Guardband level for the active cores in this interval.
int guardband_level(const Activity& act, const PmuContext& ctx);

/// Level virus current rescaled to a candidate point; table values hold at the top knot.
double virus_current_at(const PmuContext& ctx, int level, double f);

double guardband_at(const PmuContext& ctx, int level, double f);

/// Predicted core-rail power at (f, v) for this activity.
double predicted_core_power(const PmuContext& ctx, const Activity& act, double f, double v, PmuMode mode);

/// Leakage of the idle cores at voltage v.
double idle_leakage(const PmuContext& ctx, const Activity& act, double v, PmuMode mode);

bool graphics_dominant(const Activity& act);
Demand demand_of(const Activity& act);

OperatingPoint dvfs_select(const BudgetSplit& budget, const PmuContext& ctx, const Activity& act, PmuMode mode);

struct ModeResolution {
    PmuMode mode;
    bool mismatch_warning = false;
};

ModeResolution resolve_mode(bool fuse, Segment segment);

}  // namespace darksim
