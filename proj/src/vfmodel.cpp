#include "darksim/vfmodel.hpp"

#include <cmath>

#include "darksim/pdn.hpp"

namespace darksim {

void validate(const VfCurve& curve) {
    if (curve.points.size() < 2) throw ModelError("vf: curve needs at least 2 points");
    if (!(curve.bin > 0.0)) throw ModelError("vf: bin must be > 0");
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (!(curve.points[i].freq > curve.points[i - 1].freq))
            throw ModelError("vf: curve frequencies must strictly increase");
        if (curve.points[i].vnom < curve.points[i - 1].vnom)
            throw ModelError("vf: curve voltages must not decrease");
    }
    if (curve_bins(curve).empty()) throw ModelError("vf: no frequency bin inside curve range");
}

void validate(const VfCurve& curve, const VoltageLimits& limits) {
    validate(curve);
    if (!(limits.vmin > 0.0 && limits.vmin < limits.vmax)) throw ModelError("vf: need 0 < vmin < vmax");
    for (const auto& p : curve.points)
        if (p.vnom < limits.vmin) throw ModelError("vf: curve voltage below vmin");
}

double vnom_at(const VfCurve& curve, double f) {
    const auto& pts = curve.points;
    if (pts.size() < 2 || f < pts.front().freq || f > pts.back().freq)
        throw ModelError("vf: frequency outside curve range");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (f == pts[i].freq) return pts[i].vnom;
        if (f < pts[i].freq) {
            if (f == pts[i - 1].freq) return pts[i - 1].vnom;
            double t = (f - pts[i - 1].freq) / (pts[i].freq - pts[i - 1].freq);
            return pts[i - 1].vnom + t * (pts[i].vnom - pts[i - 1].vnom);
        }
    }
    return pts.back().vnom;
}

double quantize_down(double f, double bin) {
    if (!(f > 0.0)) return 0.0;
    double k = std::floor(f / bin);
    // guard against f/bin landing just under an integer
    if ((k + 1.0) * bin <= f * (1.0 + 1e-12)) k += 1.0;
    if (k * bin > f * (1.0 + 1e-12)) k -= 1.0;
    return k * bin;
}

std::vector<double> curve_bins(const VfCurve& curve) {
    std::vector<double> out;
    double hi = quantize_down(curve.f_hi(), curve.bin);
    double k = std::round(hi / curve.bin);
    for (; k >= 0.0; k -= 1.0) {
        double f = k * curve.bin;
        if (f < curve.f_lo() * (1.0 - 1e-12)) break;
        out.push_back(f);
    }
    return {out.rbegin(), out.rend()};
}

FmaxResult fmax_under_vmax(const VfCurve& curve, double vgb, const VoltageLimits& limits) {
    return fmax_under_vmax(curve, [vgb](double) { return vgb; }, limits);
}

FmaxResult fmax_under_vmax(const VfCurve& curve, const std::function<double(double)>& vgb,
                           const VoltageLimits& limits) {
    auto bins = curve_bins(curve);
    if (bins.empty()) throw ModelError("vf: no frequency bin inside curve range");
    for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
        double f = std::max(*it, curve.f_lo());
        if (vnom_at(curve, std::min(f, curve.f_hi())) + vgb(f) <= limits.vmax) return {*it, false};
    }
    return {bins.front(), true};
}

}  // namespace darksim
