#include "darksim/platform.hpp"

#include <cmath>

namespace darksim {

namespace {

std::vector<double> row_numbers(const std::vector<std::string>& row, std::size_t want, const std::string& what) {
    if (row.size() != want) throw ModelError("config: " + what + " row needs " + std::to_string(want) + " fields");
    std::vector<double> out;
    for (const auto& s : row) out.push_back(parse_number(s));
    return out;
}

VfCurve curve_from_rows(const ConfigSection& s) {
    VfCurve c;
    c.bin = s.number_or("bin_mhz", 100.0) * 1e6;
    for (const auto& row : s.rows) {
        auto v = row_numbers(row, 2, "curve");
        c.points.push_back({v[0] * 1e6, v[1] * 1e-3});
    }
    return c;
}

bool parse_flag(const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw ModelError("config: bad flag '" + v + "'");
}

}  // namespace

PdnNetwork load_network(const ConfigSection& s) {
    PdnNetwork net;
    net.vr_output_resistance = s.number("vr_output_resistance");
    for (const auto& st : s.get_all("stage")) {
        auto v = row_numbers(split_list(st), 5, "stage");
        net.stages.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    for (const auto& c : s.get_all("core")) {
        auto v = row_numbers(split_list(c), 4, "core");
        net.cores.push_back({v[0], v[1], v[2], v[3]});
    }
    auto topo = s.get("topology").value_or("gated");
    if (topo == "gated") net.topology = Topology::Gated;
    else if (topo == "bypassed") net.topology = Topology::Bypassed;
    else throw ModelError("config: topology must be gated or bypassed");
    validate(net);
    return net;
}

SweepSettings parse_sweep(const std::string& spec) {
    auto parts = split_list(spec, ':');
    if (parts.size() != 3) throw ModelError("sweep: expected f_min:f_max:points");
    SweepSettings s;
    s.f_min = parse_number(parts[0]);
    s.f_max = parse_number(parts[1]);
    double n = parse_number(parts[2]);
    if (n < 2 || n != std::floor(n)) throw ModelError("sweep: points must be an integer >= 2");
    s.points = static_cast<std::size_t>(n);
    if (!(s.f_min > 0.0) || !(s.f_max > s.f_min)) throw ModelError("sweep: need 0 < f_min < f_max");
    return s;
}

PlatformConfig load_platform(const ConfigFile& cfg) {
    PlatformConfig p;

    const auto& plat = cfg.section("platform");
    auto seg = plat.get("segment").value_or("desktop");
    if (seg == "desktop") p.segment = Segment::Desktop;
    else if (seg == "mobile") p.segment = Segment::Mobile;
    else throw ModelError("config: segment must be desktop or mobile");
    auto res = resolve_mode(plat.number_or("fuse", 1.0) != 0.0, p.segment);
    p.mode = res.mode;
    p.mode_mismatch = res.mismatch_warning;
    p.tdp = plat.number("tdp_w");
    if (auto cap = plat.get("cstate_cap")) p.cstate_cap = parse_package_cstate(*cap);
    p.uncore_power = plat.number_or("uncore_power_w", 2.0);

    const auto& pdn = cfg.section("pdn");
    p.network = load_network(pdn);
    if (p.network.topology != Topology::Gated) throw ModelError("config: platform network must be described gated");
    if (auto sw = pdn.get("sweep")) p.sweep = parse_sweep(*sw);

    const auto& gb = cfg.section("guardband");
    p.guardband.load_line.r_ll = gb.number("r_ll");
    p.guardband.droop_fraction = gb.number_or("droop_fraction", 0.4);
    p.guardband.droop_delta_i = gb.number_or("droop_delta_i", 0.0);
    p.vcc_min = gb.number_or("vcc_min", 0.70);
    p.reliability_adders = parse_flag(gb.get("reliability_adders").value_or("on"));
    p.equal_guardbands = parse_flag(gb.get("equal_guardbands").value_or("off"));
    for (double v : gb.numbers("level_for_active_cores")) p.level_for_active_count.push_back(static_cast<int>(v));
    for (const auto& row : gb.rows) {
        auto v = row_numbers(row, 3, "virus level");
        p.guardband.levels.push_back({static_cast<int>(v[0]), v[1], v[2] * 1e-3});
    }

    const auto& vf = cfg.section("vf");
    p.curve = curve_from_rows(vf);

    const auto& pw = cfg.section("power");
    for (double c : pw.numbers("cdyn_nf")) p.power.cdyn_per_level.push_back(c * 1e-9);
    p.power.ilkg_ref = pw.number("ilkg_ref_a");
    p.power.v_ref = pw.number_or("v_ref", 1.0);
    p.power.lkg_voltage_exponent = pw.number_or("lkg_exponent", 2.0);
    p.power.gated_residual_fraction = pw.number_or("gated_residual", 0.02);
    p.limits.tdp = p.tdp;
    p.limits.tdc = pw.number("tdc_a");
    p.limits.edc = pw.number("edc_a");
    p.limits.vmax = vf.number("vmax");
    p.limits.vmin = vf.number("vmin");
    p.stall_activity = pw.number_or("stall_activity", 0.4);
    p.pbm.uncore_reserve = pw.number_or("uncore_reserve_w", 2.0);
    p.pbm.cpu_share_under_gfx = pw.number_or("cpu_share_under_gfx", 0.15);

    const auto& gx = cfg.section("graphics");
    p.graphics.curve = curve_from_rows(gx);
    p.graphics.guardband = gx.number_or("guardband_mv", 50.0) * 1e-3;
    p.graphics.cdyn = gx.number("cdyn_nf") * 1e-9;
    p.graphics.ilkg_ref = gx.number("ilkg_ref_a");
    p.graphics.v_ref = gx.number_or("v_ref", 1.0);
    p.graphics.lkg_voltage_exponent = gx.number_or("lkg_exponent", 2.0);

    const auto& cs = cfg.section("cstates");
    p.cstates.latency.core_ungate = cs.number_or("ungate_ns", 15.0) * 1e-9;
    for (const auto& row : cs.rows) {
        if (row.size() != 5) throw ModelError("config: cstate row needs 5 fields");
        auto st = static_cast<std::size_t>(depth(parse_package_cstate(row[0])));
        p.cstates.power.normal[st] = parse_number(row[1]);
        p.cstates.power.bypass[st] = parse_number(row[2]);
        p.cstates.latency.states[st] = {parse_number(row[3]) * 1e-6, parse_number(row[4]) * 1e-6};
    }

    if (cfg.has("workload")) {
        const auto& wl = cfg.section("workload");
        p.workload.f_ref = wl.number_or("f_ref_ghz", 4.0) * 1e9;
        if (wl.get("suite_mem")) p.workload.suite_mem = wl.numbers("suite_mem");
        if (wl.get("energy_star")) p.workload.energy_star_weights = wl.numbers("energy_star");
        if (auto h = wl.get("energy_star_hints")) p.workload.energy_star_hints = split_list(*h);
        p.workload.gfx_core_activity = wl.number_or("gfx_core_activity", 0.2);
    }

    validate(p);
    return p;
}

PlatformConfig load_platform_file(const std::string& path) { return load_platform(ConfigFile::load(path)); }

void validate(const PlatformConfig& p) {
    validate(p.network);
    validate(p.guardband);
    validate(p.curve, {p.limits.vmax, p.limits.vmin});
    validate(p.graphics.curve);
    validate(p.power);
    validate(p.limits);
    validate(p.cstates);
    if (p.power.cdyn_per_level.size() < p.guardband.levels.size())
        throw ModelError("config: need a cdyn value for every virus level");
    for (int l : p.level_for_active_count) find_level(p.guardband, l);
    for (auto st : kAllPackageStates) {
        if (depth(st) > depth(p.cap())) break;
        cstate_power(st, PmuMode::Normal, p.cstates.power);
        cstate_power(st, PmuMode::Bypass, p.cstates.power);
    }
    if (p.workload.energy_star_weights.size() != p.workload.energy_star_hints.size())
        throw ModelError("config: energy_star weights and hints differ in length");
    if (!(p.workload.f_ref > 0.0)) throw ModelError("config: f_ref must be > 0");
}

double mode_z_peak(const PlatformConfig& p, PmuMode mode) {
    if (mode == PmuMode::Normal || p.equal_guardbands) return peak_magnitude(p.network, p.sweep);
    return peak_magnitude(bypass(p.network), p.sweep);
}

PmuContext make_context(const PlatformConfig& p, PmuMode mode) {
    PmuContext c;
    c.curve = p.curve;
    c.guardband = p.guardband;
    c.guardband.reliability_adder =
        (p.reliability_adders && !p.equal_guardbands) ? reliability_adder_for(p.tdp, mode) : 0.0;
    c.z_peak = mode_z_peak(p, mode);
    c.power = p.power;
    c.graphics = p.graphics;
    c.limits = p.limits;
    c.limits.tdp = p.tdp;
    c.pbm = p.pbm;
    c.level_for_active_count = p.level_for_active_count;
    c.stall_activity = p.stall_activity;
    c.f_ref = p.workload.f_ref;
    return c;
}

}  // namespace darksim
