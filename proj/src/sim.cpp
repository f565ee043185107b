#include "darksim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace darksim {

namespace {

constexpr double kTdcWindow = 1.0;

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

CoreActivity idle_core() { return {0.0, 1, 0.0}; }

/// Time-weighted mean current over the trailing window.
class RollingCurrent {
public:
    double push(double duration, double icc) {
        window_.emplace_back(duration, icc);
        double covered = 0.0, charge = 0.0;
        for (auto it = window_.rbegin(); it != window_.rend() && covered < kTdcWindow; ++it) {
            double take = std::min(it->first, kTdcWindow - covered);
            covered += take;
            charge += take * it->second;
        }
        while (window_.size() > 1) {
            double tail = 0.0;
            for (std::size_t i = 1; i < window_.size(); ++i) tail += window_[i].first;
            if (tail >= kTdcWindow) window_.pop_front();
            else break;
        }
        return charge / covered;
    }

private:
    std::deque<std::pair<double, double>> window_;
};

}  // namespace

bool TraceInterval::idle() const {
    if (gfx_load > 0.0) return false;
    return std::all_of(cores.begin(), cores.end(), [](const CoreActivity& c) { return c.active_fraction <= 0.0; });
}

void validate(const Trace& trace, std::size_t cores, int max_level) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    for (const auto& iv : trace) {
        if (!(iv.duration > 0.0)) throw ModelError("trace: interval duration must be > 0");
        if (iv.cores.size() != cores) throw ModelError("trace: core count does not match platform");
        if (!in01(iv.gfx_load)) throw ModelError("trace: gfx_load outside [0, 1]");
        for (const auto& c : iv.cores) {
            if (!in01(c.active_fraction) || !in01(c.mem_fraction)) throw ModelError("trace: fraction outside [0, 1]");
            if (c.virus_level < 1 || c.virus_level > max_level) throw ModelError("trace: unknown virus level");
        }
        if (iv.idle_hint) idle_hint_states(*iv.idle_hint, cores);
    }
}

Trace read_trace_csv(std::istream& in, std::size_t cores) {
    std::string line;
    if (!std::getline(in, line)) throw ModelError("trace: empty file");
    auto header = split_list(trim(line));
    const std::vector<std::string> want{"t_ms", "core_id", "active_frac", "virus_level", "mem_frac", "gfx_load"};
    bool with_hint = header.size() == 7 && header[6] == "idle_hint";
    if (!(header.size() == 6 || with_hint) || !std::equal(want.begin(), want.end(), header.begin()))
        throw ModelError("trace: unexpected header");

    std::vector<double> starts;
    Trace trace;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        auto f = split_list(line);
        if (f.size() != header.size()) throw ModelError("trace: wrong field count at line " + std::to_string(lineno));
        double t = parse_number(f[0]);
        double core = parse_number(f[1]);
        if (core < 0 || core != std::floor(core) || core >= static_cast<double>(cores))
            throw ModelError("trace: bad core_id at line " + std::to_string(lineno));
        if (starts.empty() || t != starts.back()) {
            if (!starts.empty() && !(t > starts.back()))
                throw ModelError("trace: t_ms must increase at line " + std::to_string(lineno));
            starts.push_back(t);
            TraceInterval iv;
            iv.cores.assign(cores, idle_core());
            iv.gfx_load = parse_number(f[5]);
            trace.push_back(iv);
        }
        auto& iv = trace.back();
        double gfx = parse_number(f[5]);
        if (gfx != iv.gfx_load) throw ModelError("trace: gfx_load differs within an interval at line " + std::to_string(lineno));
        double level = parse_number(f[3]);
        if (level != std::floor(level)) throw ModelError("trace: virus_level must be an integer");
        iv.cores[static_cast<std::size_t>(core)] = {parse_number(f[2]), static_cast<int>(level), parse_number(f[4])};
        if (with_hint && !f[6].empty()) iv.idle_hint = f[6];
    }
    if (trace.empty()) throw ModelError("trace: no intervals");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        double gap_ms = 1.0;
        if (i + 1 < starts.size()) gap_ms = starts[i + 1] - starts[i];
        else if (i > 0) gap_ms = starts[i] - starts[i - 1];
        trace[i].duration = gap_ms * 1e-3;
    }
    return trace;
}

Trace read_trace_file(const std::string& path, std::size_t cores) {
    std::ifstream f(path);
    if (!f) throw ModelError("trace: cannot read '" + path + "'");
    return read_trace_csv(f, cores);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    bool hints = std::any_of(trace.begin(), trace.end(), [](const TraceInterval& iv) { return iv.idle_hint.has_value(); });
    out << "t_ms,core_id,active_frac,virus_level,mem_frac,gfx_load" << (hints ? ",idle_hint" : "") << "\n";
    out << std::setprecision(17);
    double t_ms = 0.0;
    for (const auto& iv : trace) {
        for (std::size_t c = 0; c < iv.cores.size(); ++c) {
            const auto& a = iv.cores[c];
            out << t_ms << "," << c << "," << a.active_fraction << "," << a.virus_level << "," << a.mem_fraction << ","
                << iv.gfx_load;
            if (hints) out << "," << iv.idle_hint.value_or("");
            out << "\n";
        }
        t_ms += iv.duration * 1e3;
    }
}

SimReport run(const PlatformConfig& p, const Trace& trace) {
    const std::size_t n = p.core_count();
    validate(trace, n, static_cast<int>(p.guardband.levels.size()));
    const PmuContext ctx = make_context(p, p.mode);
    const PackageCState cap = p.cap();
    const bool gated = p.mode == PmuMode::Normal;
    const double pn = curve_bins(ctx.curve).front();

    SimReport r;
    r.mode = p.mode == PmuMode::Normal ? "normal" : "bypass";
    r.tdp = p.tdp;
    r.cap = cap;
    std::array<double, 8> seconds{};
    RollingCurrent tdc;
    PackageCState prev = PackageCState::C0;
    double t = 0.0, gfx_time = 0.0;

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& iv = trace[i];
        IntervalRecord rec;
        rec.index = i;
        rec.t_start = t;
        rec.duration = iv.duration;

        if (iv.idle()) {
            auto st = resolve_package_cstate(idle_hint_states(iv.idle_hint.value_or("deep"), n), cap);
            rec.package_state = st;
            rec.total_power = cstate_power(st, p.mode, p.cstates.power);
            rec.icc_sustained = tdc.push(iv.duration, 0.0);
            prev = st;
        } else {
            Activity act{iv.cores, iv.gfx_load};
            const int level = guardband_level(act, ctx);
            const double v_pn = vnom_at(ctx.curve, pn) + guardband_at(ctx, level, pn);
            double floor = 0.0;
            for (const auto& c : act.cores)
                if (c.active_fraction <= 0.0) floor += leakage_current(v_pn, ctx.power) * v_pn;
            auto budget = pbm_allocate(p.tdp, demand_of(act), p.mode, floor, ctx.pbm);
            auto op = dvfs_select(budget, ctx, act, p.mode);

            std::vector<CorePower> cores;
            for (const auto& c : act.cores) {
                if (c.active_fraction > 0.0)
                    cores.push_back(core_power(op.core_freq, op.core_voltage, c.virus_level,
                                               effective_activity(c, op.core_freq, ctx), false, ctx.power, ctx.limits));
                else
                    cores.push_back(core_power(0.0, op.core_voltage, 1, 0.0, gated, ctx.power, ctx.limits));
            }
            double gfx = iv.gfx_load > 0.0 ? graphics_power(op.gfx_freq, op.gfx_voltage, iv.gfx_load, ctx.graphics) : 0.0;
            auto b = make_breakdown(cores, gfx, p.uncore_power);

            rec.package_state = PackageCState::C0;
            rec.level = op.level;
            rec.core_freq = op.core_freq;
            rec.core_voltage = op.core_voltage;
            rec.gfx_freq = op.gfx_freq;
            rec.gfx_voltage = op.gfx_voltage;
            rec.cores_power = b.dynamic + b.leakage;
            rec.gfx_power = b.graphics;
            rec.uncore_power = b.uncore;
            rec.total_power = b.total;
            rec.icc = rec.cores_power / op.core_voltage;
            rec.icc_sustained = tdc.push(iv.duration, rec.icc);
            rec.budget_cores = budget.cores_budget;
            rec.budget_gfx = budget.graphics_budget;
            rec.budget_uncore = budget.uncore_reserve;
            rec.degenerate = op.degenerate || budget.degenerate;
            rec.wake = std::min(wake_cost(prev, p.mode, p.cstates.latency), iv.duration);

            const double useful = iv.duration - rec.wake;
            double rate = 0.0;
            for (const auto& c : act.cores) {
                if (c.active_fraction <= 0.0) continue;
                ++rec.active_cores;
                rate += c.active_fraction / ((1.0 - c.mem_fraction) * ctx.f_ref / op.core_freq + c.mem_fraction);
            }
            rec.cpu_work = useful * rate;
            rec.gfx_work = useful * iv.gfx_load * op.gfx_freq * 1e-9;
            if (graphics_dominant(act)) gfx_time += iv.duration;

            for (const auto& v : check_limits(b, rec.icc, op.core_voltage, ctx.limits, rec.icc_sustained))
                r.violations.push_back({i, v.limit, v.amount});
            prev = PackageCState::C0;
        }

        seconds[static_cast<std::size_t>(depth(rec.package_state))] += iv.duration;
        r.energy += rec.total_power * iv.duration;
        r.cpu_perf += rec.cpu_work;
        r.gfx_perf += rec.gfx_work;
        t += iv.duration;
        r.intervals.push_back(rec);
    }

    r.total_time = t;
    r.avg_power = r.energy / t;
    r.cpu_perf /= t;
    r.gfx_perf /= t;
    r.gfx_time_fraction = gfx_time / t;
    for (auto st : kAllPackageStates) {
        if (depth(st) > depth(cap)) break;
        Residency res;
        res.state = st;
        res.seconds = seconds[static_cast<std::size_t>(depth(st))];
        res.fraction = res.seconds / t;
        res.avg_contribution = cstate_power(st, p.mode, p.cstates.power) * res.fraction;
        r.table_avg_power += res.avg_contribution;
        r.residency.push_back(res);
    }
    return r;
}

std::vector<TimelineEntry> timeline_of(const SimReport& r) {
    std::vector<TimelineEntry> out;
    for (const auto& rec : r.intervals) out.push_back({rec.package_state, rec.duration});
    return out;
}

double relative_delta(double a, double b) {
    if (a == 0.0 && b == 0.0) return 0.0;
    return b / a - 1.0;
}

ModeComparison compare_modes(const PlatformConfig& platform, const Trace& trace) {
    ModeComparison c;
    PlatformConfig pn = platform, pb = platform;
    pn.mode = PmuMode::Normal;
    pb.mode = PmuMode::Bypass;
    c.normal = run(pn, trace);
    c.bypass = run(pb, trace);
    c.cpu_perf_delta = relative_delta(c.normal.cpu_perf, c.bypass.cpu_perf);
    c.gfx_perf_delta = relative_delta(c.normal.gfx_perf, c.bypass.gfx_perf);
    c.perf_delta = c.normal.gfx_time_fraction > 0.5 ? c.gfx_perf_delta : c.cpu_perf_delta;
    c.avg_power_delta = relative_delta(c.normal.avg_power, c.bypass.avg_power);
    c.table_power_delta = relative_delta(c.normal.table_avg_power, c.bypass.table_avg_power);
    c.residency_delta.assign(kAllPackageStates.size(), 0.0);
    for (const auto& r : c.bypass.residency) c.residency_delta[static_cast<std::size_t>(depth(r.state))] += r.fraction;
    for (const auto& r : c.normal.residency) c.residency_delta[static_cast<std::size_t>(depth(r.state))] -= r.fraction;
    return c;
}

WorkloadKind parse_workload_kind(const std::string& s) {
    if (s == "spec_base") return WorkloadKind::SpecBase;
    if (s == "spec_rate") return WorkloadKind::SpecRate;
    if (s == "graphics") return WorkloadKind::Graphics;
    if (s == "energy_star") return WorkloadKind::EnergyStar;
    if (s == "rmt") return WorkloadKind::Rmt;
    throw ModelError("unknown workload kind '" + s + "'");
}

std::string to_string(WorkloadKind k) {
    switch (k) {
        case WorkloadKind::SpecBase: return "spec_base";
        case WorkloadKind::SpecRate: return "spec_rate";
        case WorkloadKind::Graphics: return "graphics";
        case WorkloadKind::EnergyStar: return "energy_star";
        case WorkloadKind::Rmt: return "rmt";
    }
    return "?";
}

GenParams gen_params_for(const PlatformConfig& p) {
    GenParams g;
    g.cores = p.core_count();
    g.gfx_core_activity = p.workload.gfx_core_activity;
    g.energy_star_weights = p.workload.energy_star_weights;
    g.energy_star_hints = p.workload.energy_star_hints;
    return g;
}

Trace gen_workload(WorkloadKind kind, const GenParams& g, std::uint64_t seed) {
    if (g.cores == 0 || g.intervals == 0 || !(g.interval_ms > 0.0)) throw ModelError("gen: bad parameters");
    if (g.jitter < 0.0 || g.jitter > 1.0) throw ModelError("gen: jitter must be in [0, 1]");
    std::mt19937_64 rng(seed);
    const double dt = g.interval_ms * 1e-3;
    Trace out;
    auto blank = [&] {
        TraceInterval iv;
        iv.duration = dt;
        iv.cores.assign(g.cores, idle_core());
        return iv;
    };

    switch (kind) {
        case WorkloadKind::SpecBase:
        case WorkloadKind::SpecRate: {
            std::vector<double> mems = g.suite.empty() ? std::vector<double>{g.mem_fraction} : g.suite;
            for (double m : mems)
                if (m < 0.0 || m > 1.0) throw ModelError("gen: mem fraction outside [0, 1]");
            std::size_t per = std::max<std::size_t>(1, g.intervals / mems.size());
            for (double m : mems) {
                for (std::size_t k = 0; k < per; ++k) {
                    auto iv = blank();
                    std::size_t used = kind == WorkloadKind::SpecBase ? 1 : g.cores;
                    for (std::size_t c = 0; c < used; ++c) {
                        double mm = m;
                        if (g.jitter > 0.0) mm = std::clamp(m * (1.0 + g.jitter * (2.0 * unit_draw(rng) - 1.0)), 0.0, 1.0);
                        iv.cores[c] = {1.0, 1, mm};
                    }
                    out.push_back(iv);
                }
            }
            break;
        }
        case WorkloadKind::Graphics:
            for (std::size_t k = 0; k < g.intervals; ++k) {
                auto iv = blank();
                iv.cores[0] = {g.gfx_core_activity, 1, 0.0};
                iv.gfx_load = 1.0;
                out.push_back(iv);
            }
            break;
        case WorkloadKind::EnergyStar: {
            if (g.energy_star_weights.size() != g.energy_star_hints.size() || g.energy_star_weights.empty())
                throw ModelError("gen: energy star weights and hints differ");
            double total = 0.0;
            for (double w : g.energy_star_weights) total += w;
            std::size_t used = 0;
            for (std::size_t j = 0; j < g.energy_star_weights.size(); ++j) {
                std::size_t cnt = j + 1 == g.energy_star_weights.size()
                                      ? g.intervals - used
                                      : static_cast<std::size_t>(std::llround(g.energy_star_weights[j] / total * static_cast<double>(g.intervals)));
                for (std::size_t k = 0; k < cnt; ++k) {
                    auto iv = blank();
                    iv.idle_hint = g.energy_star_hints[j];
                    out.push_back(iv);
                }
                used += cnt;
            }
            break;
        }
        case WorkloadKind::Rmt: {
            if (g.rmt_period == 0 || g.rmt_active > g.rmt_period) throw ModelError("gen: bad RMT period");
            std::size_t periods = std::max<std::size_t>(1, g.intervals / g.rmt_period);
            for (std::size_t p = 0; p < periods; ++p) {
                std::size_t slots = g.rmt_period - g.rmt_active + 1;
                std::size_t offset = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(slots));
                for (std::size_t k = 0; k < g.rmt_period; ++k) {
                    auto iv = blank();
                    if (k >= offset && k < offset + g.rmt_active) iv.cores[0] = {1.0, 1, 0.0};
                    else iv.idle_hint = "deep";
                    out.push_back(iv);
                }
            }
            break;
        }
    }
    return out;
}

double suite_mean_delta(const PlatformConfig& templ, WorkloadKind kind, const std::vector<double>& suite) {
    if (suite.empty()) throw ModelError("sweep: empty suite");
    GenParams g = gen_params_for(templ);
    g.intervals = 4;
    double sum = 0.0;
    for (double m : suite) {
        g.mem_fraction = m;
        sum += compare_modes(templ, gen_workload(kind, g, 0)).cpu_perf_delta;
    }
    return sum / static_cast<double>(suite.size());
}

std::vector<TrendRow> tdp_sweep(const PlatformConfig& templ, const std::vector<double>& tdps,
                                const std::vector<double>& suite) {
    if (tdps.empty()) throw ModelError("sweep: empty TDP list");
    std::vector<TrendRow> out;
    for (double tdp : tdps) {
        PlatformConfig p = templ;
        p.tdp = tdp;
        p.limits.tdp = tdp;
        TrendRow row;
        row.tdp = tdp;
        row.base_delta = suite_mean_delta(p, WorkloadKind::SpecBase, suite);
        row.rate_delta = suite_mean_delta(p, WorkloadKind::SpecRate, suite);
        GenParams g = gen_params_for(p);
        g.intervals = 4;
        row.gfx_delta = compare_modes(p, gen_workload(WorkloadKind::Graphics, g, 0)).gfx_perf_delta;
        out.push_back(row);
    }
    return out;
}

}  // namespace darksim
