#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "darksim/platform.hpp"

namespace darksim {

struct TraceInterval {
    double duration = 1e-3;
    std::vector<CoreActivity> cores;
    double gfx_load = 0.0;
    std::optional<std::string> idle_hint;

    bool idle() const;
};

using Trace = std::vector<TraceInterval>;

void validate(const Trace& trace, std::size_t cores, int max_level);

/// CSV: t_ms,core_id,active_frac,virus_level,mem_frac,gfx_load[,idle_hint]
Trace read_trace_csv(std::istream& in, std::size_t cores);
Trace read_trace_file(const std::string& path, std::size_t cores);
void write_trace_csv(std::ostream& out, const Trace& trace);

struct IntervalRecord {
    std::size_t index = 0;
    double t_start = 0.0;
    double duration = 0.0;
    PackageCState package_state = PackageCState::C0;
    int active_cores = 0;
    int level = 0;
    double core_freq = 0.0;
    double core_voltage = 0.0;
    double gfx_freq = 0.0;
    double gfx_voltage = 0.0;
    double cores_power = 0.0;
    double gfx_power = 0.0;
    double uncore_power = 0.0;
    double total_power = 0.0;
    double icc = 0.0;
    double icc_sustained = 0.0;
    double wake = 0.0;
    double cpu_work = 0.0;  ///< core-seconds of useful work at f_ref
    double gfx_work = 0.0;  ///< graphics GHz-seconds
    double budget_cores = 0.0;
    double budget_gfx = 0.0;
    double budget_uncore = 0.0;
    bool degenerate = false;
};

struct ViolationRecord {
    std::size_t interval = 0;
    Limit limit = Limit::TDP;
    double amount = 0.0;
};

struct Residency {
    PackageCState state;
    double seconds = 0.0;
    double fraction = 0.0;
    double avg_contribution = 0.0;  ///< table power times fraction
};

struct SimReport {
    std::string mode;
    double tdp = 0.0;
    PackageCState cap = PackageCState::C0;
    std::vector<IntervalRecord> intervals;
    std::vector<ViolationRecord> violations;
    std::vector<Residency> residency;  ///< every state up to the cap, shallow first
    double total_time = 0.0;
    double energy = 0.0;
    double avg_power = 0.0;
    double table_avg_power = 0.0;  ///< residency weighted, table power for every state
    double cpu_perf = 0.0;
    double gfx_perf = 0.0;
    double gfx_time_fraction = 0.0;
};

SimReport run(const PlatformConfig& platform, const Trace& trace);

/// Package state timeline of a report, for residency_average_power.
std::vector<TimelineEntry> timeline_of(const SimReport& r);

struct ModeComparison {
    SimReport normal;
    SimReport bypass;
    double cpu_perf_delta = 0.0;
    double gfx_perf_delta = 0.0;
    double perf_delta = 0.0;  ///< gfx delta for graphics-dominant traces, else cpu delta
    double avg_power_delta = 0.0;
    double table_power_delta = 0.0;
    std::vector<double> residency_delta;  ///< bypass minus normal fraction, by state depth
};

/// Relative change b/a - 1, 0 when both are 0.
double relative_delta(double a, double b);

ModeComparison compare_modes(const PlatformConfig& platform, const Trace& trace);

enum class WorkloadKind { SpecBase, SpecRate, Graphics, EnergyStar, Rmt };

WorkloadKind parse_workload_kind(const std::string& s);
std::string to_string(WorkloadKind k);

struct GenParams {
    std::size_t cores = 4;
    double interval_ms = 1.0;
    std::size_t intervals = 1000;
    double mem_fraction = 0.0;
    std::vector<double> suite;  ///< SpecBase/SpecRate: one equal segment per entry when set
    double jitter = 0.0;        ///< relative mem_fraction jitter
    double gfx_core_activity = 0.2;
    std::vector<double> energy_star_weights{0.45, 0.05, 0.15, 0.35};
    std::vector<std::string> energy_star_hints{"deep", "deep", "psr", "cc6"};
    std::size_t rmt_period = 100;
    std::size_t rmt_active = 1;
};

GenParams gen_params_for(const PlatformConfig& p);

Trace gen_workload(WorkloadKind kind, const GenParams& params, std::uint64_t seed);

struct TrendRow {
    double tdp = 0.0;
    double base_delta = 0.0;
    double rate_delta = 0.0;
    double gfx_delta = 0.0;
};

/// Mean per-benchmark deltas at each TDP; the graphics column uses the graphics trace.
std::vector<TrendRow> tdp_sweep(const PlatformConfig& templ, const std::vector<double>& tdps,
                                const std::vector<double>& suite);

/// Mean perf delta over the suite for one kind at one TDP.
double suite_mean_delta(const PlatformConfig& templ, WorkloadKind kind, const std::vector<double>& suite);

}  // namespace darksim
