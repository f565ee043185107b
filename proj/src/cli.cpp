#include "darksim/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "darksim/report.hpp"
#include "darksim/sim.hpp"

namespace darksim {

namespace {

const std::vector<std::string> kAssertKeys[] = {
    /* Run */ {"avg_power_max", "avg_power_min", "violations_max"},
    /* Compare */ {"perf_delta_min", "perf_delta_max", "power_delta_min", "power_delta_max"},
    /* Sweep */ {},
    /* Impedance */ {"peak_max"},
    /* GenTrace */ {}};

void parse_assert(const std::string& text, RunSpec& spec) {
    for (const auto& item : split_list(text)) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--assert expects key=value, got '" + item + "'");
        std::string key = trim(item.substr(0, eq));
        const auto& allowed = kAssertKeys[static_cast<int>(spec.command)];
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw UsageError("--assert key '" + key + "' does not apply to this command");
        try {
            spec.asserts.emplace_back(key, parse_number(item.substr(eq + 1)));
        } catch (const ModelError&) {
            throw UsageError("--assert value for '" + key + "' is not a number");
        }
    }
}

void setup_logging() {
    if (!spdlog::get("darksim")) spdlog::set_default_logger(spdlog::stderr_logger_st("darksim"));
    spdlog::set_pattern("darksim: %l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("DARKSIM_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

template <class F>
std::string render(F&& f) {
    std::ostringstream ss;
    f(ss);
    return ss.str();
}

bool check(const std::string& key, double value, double limit) {
    bool ok = key.size() > 4 && key.compare(key.size() - 4, 4, "_min") == 0 ? value >= limit : value <= limit;
    if (!ok) spdlog::error("assert failed: {} = {} against {}", key, value, limit);
    return ok;
}

PlatformConfig platform_for(const RunSpec& spec) {
    auto p = load_platform_file(spec.config_path);
    if (spec.mode) {
        if (*spec.mode == "normal") p.mode = PmuMode::Normal;
        else p.mode = PmuMode::Bypass;
    }
    if (!spec.tdps.empty() && spec.command != Command::Sweep) {
        p.tdp = spec.tdps.front();
        p.limits.tdp = p.tdp;
    }
    if (p.mode_mismatch) spdlog::warn("fuse selects a mode that differs from the usual one for this segment");
    spdlog::info("config {} mode {} tdp {} W", spec.config_path, p.mode == PmuMode::Normal ? "normal" : "bypass", p.tdp);
    return p;
}

Trace trace_for(const RunSpec& spec, const PlatformConfig& p) {
    if (!spec.trace_path) throw UsageError("--trace is required for this command");
    return read_trace_file(*spec.trace_path, p.core_count());
}

std::string sibling(const std::string& out, const std::string& suffix) { return out + suffix; }

}  // namespace

RunSpec parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Power-delivery and power-management simulator with core power-gate bypass", "darksim"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string format = "csv", tdp_text, asserts_text;
    std::optional<std::string> trace, mode, sweep, kind;

    auto add_common = [&](CLI::App* sub, bool needs_trace) {
        sub->add_option("--config", spec.config_path, "platform config file")->required()->check(CLI::ExistingFile);
        auto* t = sub->add_option("--trace", trace, "activity trace CSV")->check(CLI::ExistingFile);
        if (needs_trace) t->required();
        sub->add_option("--out", spec.output_path, "output path")->required();
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--mode", mode, "normal or bypass")->check(CLI::IsMember({"normal", "bypass"}));
        sub->add_option("--tdp", tdp_text, "TDP in watts, comma list for sweep");
        sub->add_option("--sweep", sweep, "f_min:f_max:points");
        sub->add_option("--seed", spec.seed, "workload seed");
        sub->add_option("--assert", asserts_text, "key=value thresholds");
    };
    auto* run = app.add_subcommand("run", "simulate one mode over a trace");
    add_common(run, true);
    auto* cmp = app.add_subcommand("compare", "run Normal and Bypass on one trace");
    add_common(cmp, true);
    auto* swp = app.add_subcommand("sweep", "SPEC and graphics deltas across TDP levels");
    add_common(swp, false);
    auto* imp = app.add_subcommand("impedance", "impedance-frequency profile of the PDN");
    add_common(imp, false);
    auto* gen = app.add_subcommand("gentrace", "generate a synthetic workload trace");
    add_common(gen, false);
    gen->add_option("--kind", kind, "spec_base, spec_rate, graphics, energy_star or rmt")->required()
        ->check(CLI::IsMember({"spec_base", "spec_rate", "graphics", "energy_star", "rmt"}));
    gen->add_option("--intervals", spec.intervals, "number of intervals")->check(CLI::PositiveNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (run->parsed()) spec.command = Command::Run;
    else if (cmp->parsed()) spec.command = Command::Compare;
    else if (swp->parsed()) spec.command = Command::Sweep;
    else if (imp->parsed()) spec.command = Command::Impedance;
    else spec.command = Command::GenTrace;

    spec.format = format == "json" ? Format::Json : Format::Csv;
    spec.trace_path = trace;
    spec.mode = mode;
    spec.kind = kind;
    spec.sweep = sweep;
    try {
        if (!tdp_text.empty())
            for (const auto& t : split_list(tdp_text)) spec.tdps.push_back(parse_number(t));
        if (spec.sweep) parse_sweep(*spec.sweep);
    } catch (const ModelError& e) {
        throw UsageError(e.what());
    }
    if (spec.tdps.size() > 1 && spec.command != Command::Sweep) throw UsageError("--tdp takes one value here");
    if (spec.sweep && spec.command != Command::Impedance) throw UsageError("--sweep only applies to impedance");
    if (spec.trace_path && (spec.command == Command::Sweep || spec.command == Command::GenTrace ||
                            spec.command == Command::Impedance))
        throw UsageError("--trace does not apply to this command");
    parse_assert(asserts_text, spec);
    return spec;
}

int execute(const RunSpec& spec) {
    auto p = platform_for(spec);
    const bool json = spec.format == Format::Json;
    bool ok = true;

    switch (spec.command) {
        case Command::Run: {
            auto r = run(p, trace_for(spec, p));
            if (json) {
                atomic_write(spec.output_path, to_json(r).dump(2) + "\n");
            } else {
                atomic_write(sibling(spec.output_path, ".summary.csv"), render([&](std::ostream& o) { write_summary_csv(o, r); }));
                atomic_write(sibling(spec.output_path, ".residency.csv"), render([&](std::ostream& o) { write_residency_csv(o, r); }));
                atomic_write(sibling(spec.output_path, ".violations.csv"), render([&](std::ostream& o) { write_violations_csv(o, r); }));
                atomic_write(spec.output_path, render([&](std::ostream& o) { write_intervals_csv(o, r); }));
            }
            for (const auto& [k, v] : spec.asserts) {
                if (k == "avg_power_max" || k == "avg_power_min") ok &= check(k, r.avg_power, v);
                if (k == "violations_max") ok &= check(k, static_cast<double>(r.violations.size()), v);
            }
            break;
        }
        case Command::Compare: {
            auto c = compare_modes(p, trace_for(spec, p));
            atomic_write(spec.output_path, json ? to_json(c).dump(2) + "\n"
                                                : render([&](std::ostream& o) { write_comparison_csv(o, c); }));
            spdlog::info("perf delta {:.4f}, power delta {:.4f}", c.perf_delta, c.avg_power_delta);
            for (const auto& [k, v] : spec.asserts) {
                if (k.rfind("perf_delta", 0) == 0) ok &= check(k, c.perf_delta, v);
                if (k.rfind("power_delta", 0) == 0) ok &= check(k, c.avg_power_delta, v);
            }
            break;
        }
        case Command::Sweep: {
            auto tdps = spec.tdps.empty() ? std::vector<double>{35, 45, 65, 91} : spec.tdps;
            if (p.workload.suite_mem.empty()) throw ModelError("config: [workload] suite_mem is required for sweep");
            auto rows = tdp_sweep(p, tdps, p.workload.suite_mem);
            atomic_write(spec.output_path, json ? to_json(rows).dump(2) + "\n"
                                                : render([&](std::ostream& o) { write_trend_csv(o, rows); }));
            break;
        }
        case Command::Impedance: {
            auto s = spec.sweep ? parse_sweep(*spec.sweep) : p.sweep;
            auto net = p.mode == PmuMode::Bypass ? bypass(p.network) : p.network;
            auto z = impedance_sweep(net, s.f_min, s.f_max, s.points);
            atomic_write(spec.output_path, json ? to_json(z).dump(2) + "\n"
                                                : render([&](std::ostream& o) { write_profile_csv(o, z); }));
            for (const auto& [k, v] : spec.asserts) ok &= check(k, peak_impedance(z).magnitude, v);
            break;
        }
        case Command::GenTrace: {
            auto g = gen_params_for(p);
            g.intervals = spec.intervals;
            g.suite = p.workload.suite_mem;
            auto tr = gen_workload(parse_workload_kind(*spec.kind), g, spec.seed);
            atomic_write(spec.output_path, render([&](std::ostream& o) { write_trace_csv(o, tr); }));
            break;
        }
    }
    return ok ? kExitOk : kExitAssert;
}

int cli_main(int argc, char** argv) {
    setup_logging();
    RunSpec spec;
    try {
        spec = parse_args(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const HelpRequested& e) {
        std::cout << e.what();
        return kExitOk;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    try {
        return execute(spec);
    } catch (const UsageError& e) {
        std::cerr << "darksim: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "darksim: " << e.what() << "\n";
        return kExitModel;
    }
}

}  // namespace darksim
