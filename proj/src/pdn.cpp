#include "darksim/pdn.hpp"

#include <cmath>
#include <optional>

namespace darksim {

namespace {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::optional<cd> cap_branch(double w, double c, double esr, double esl) {
    if (c == 0.0) return std::nullopt;
    return cd(esr, w * esl - 1.0 / (w * c));
}

cd parallel(cd a, std::optional<cd> b) {
    if (!b) return a;
    cd sum = a + *b;
    if (sum == cd(0.0, 0.0)) return cd(0.0, 0.0);
    return a * *b / sum;
}

}  // namespace

void validate(const PdnNetwork& net) {
    if (net.stages.empty()) throw ModelError("pdn: network needs at least one stage");
    if (net.cores.empty()) throw ModelError("pdn: network needs at least one core branch");
    if (!finite_nonneg(net.vr_output_resistance)) throw ModelError("pdn: bad VR resistance");
    for (const auto& s : net.stages) {
        if (!finite_nonneg(s.series_resistance) || !finite_nonneg(s.series_inductance) ||
            !finite_nonneg(s.shunt_cap) || !finite_nonneg(s.cap_esr) || !finite_nonneg(s.cap_esl))
            throw ModelError("pdn: stage values must be finite and >= 0");
        if (s.shunt_cap == 0.0 && (s.cap_esr != 0.0 || s.cap_esl != 0.0))
            throw ModelError("pdn: stage without shunt cap cannot carry ESR/ESL");
    }
    for (const auto& c : net.cores) {
        if (!finite_nonneg(c.gate_resistance) || !finite_nonneg(c.die_grid_resistance) ||
            !finite_nonneg(c.mim_cap) || !finite_nonneg(c.mim_esr))
            throw ModelError("pdn: core branch values must be finite and >= 0");
    }
    if (net.topology == Topology::Bypassed) {
        if (net.cores.size() != 1 || net.cores[0].gate_resistance != 0.0)
            throw ModelError("pdn: bypassed network must hold one merged branch without gate");
    }
}

std::complex<double> impedance_at(const PdnNetwork& net, double f) {
    if (!(f > 0.0) || !std::isfinite(f)) throw ModelError("pdn: frequency must be > 0");
    validate(net);
    const double w = 2.0 * kPi * f;

    cd z(net.vr_output_resistance, 0.0);
    for (const auto& s : net.stages) {
        z = parallel(z, cap_branch(w, s.shunt_cap, s.cap_esr, s.cap_esl));
        z += cd(s.series_resistance, w * s.series_inductance);
    }
    for (std::size_t i = 1; i < net.cores.size(); ++i) {
        const auto& c = net.cores[i];
        auto mim = cap_branch(w, c.mim_cap, c.mim_esr, 0.0);
        if (mim) z = parallel(z, *mim + (c.gate_resistance + c.die_grid_resistance));
    }
    const auto& load = net.cores[0];
    z += load.gate_resistance + load.die_grid_resistance;
    z = parallel(z, cap_branch(w, load.mim_cap, load.mim_esr, 0.0));

    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) == 0.0)
        throw ModelError("pdn: singular network");
    return z;
}

ImpedanceProfile impedance_sweep(const PdnNetwork& net, double f_min, double f_max,
                                 std::size_t points, Spacing spacing) {
    if (!(f_min > 0.0) || !(f_max > f_min)) throw ModelError("pdn: sweep needs 0 < f_min < f_max");
    if (points < 2) throw ModelError("pdn: sweep needs at least 2 points");
    ImpedanceProfile out;
    out.reserve(points);
    const double n = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / n;
        double f = spacing == Spacing::Log
                       ? std::exp(std::log(f_min) + t * (std::log(f_max) - std::log(f_min)))
                       : f_min + t * (f_max - f_min);
        if (i == 0) f = f_min;
        if (i + 1 == points) f = f_max;
        auto z = impedance_at(net, f);
        out.push_back({f, std::abs(z), std::arg(z)});
    }
    return out;
}

PdnNetwork bypass(const PdnNetwork& net) {
    if (net.topology == Topology::Bypassed) throw ModelError("pdn: network is already bypassed");
    validate(net);
    double g_inv = 0.0, esr_inv = 0.0, cap = 0.0;
    bool zero_grid = false, zero_esr = false;
    for (const auto& c : net.cores) {
        if (c.die_grid_resistance == 0.0) zero_grid = true;
        else g_inv += 1.0 / c.die_grid_resistance;
        if (c.mim_cap > 0.0) {
            cap += c.mim_cap;
            if (c.mim_esr == 0.0) zero_esr = true;
            else esr_inv += 1.0 / c.mim_esr;
        }
    }
    CoreBranch merged;
    merged.gate_resistance = 0.0;
    merged.die_grid_resistance = zero_grid ? 0.0 : 1.0 / g_inv;
    merged.mim_cap = cap;
    merged.mim_esr = (cap == 0.0 || zero_esr) ? 0.0 : 1.0 / esr_inv;

    PdnNetwork out = net;
    out.cores = {merged};
    out.topology = Topology::Bypassed;
    return out;
}

double dc_resistance(const PdnNetwork& net) {
    double r = net.vr_output_resistance;
    for (const auto& s : net.stages) r += s.series_resistance;
    const auto& load = net.cores.at(0);
    return r + load.gate_resistance + load.die_grid_resistance;
}

ImpedanceSample peak_impedance(const ImpedanceProfile& profile) {
    if (profile.empty()) throw ModelError("pdn: empty impedance profile");
    const ImpedanceSample* best = &profile.front();
    for (const auto& s : profile)
        if (s.magnitude > best->magnitude) best = &s;
    return *best;
}

double peak_magnitude(const PdnNetwork& net, const SweepSettings& s) {
    return peak_impedance(impedance_sweep(net, s.f_min, s.f_max, s.points)).magnitude;
}

}  // namespace darksim
