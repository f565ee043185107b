#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace darksim {

struct VfPoint {
    double freq = 0.0;
    double vnom = 0.0;
};

struct VfCurve {
    std::vector<VfPoint> points;
    double bin = 100e6;

    double f_lo() const { return points.front().freq; }
    double f_hi() const { return points.back().freq; }
};

struct VoltageLimits {
    double vmax = 1.2;
    double vmin = 0.7;
};

void validate(const VfCurve& curve);
void validate(const VfCurve& curve, const VoltageLimits& limits);

/// Piecewise-linear, exact at knots, no extrapolation.
double vnom_at(const VfCurve& curve, double f);

/// Largest multiple of bin <= f.
double quantize_down(double f, double bin);

/// All bin multiples inside the curve range, ascending.
std::vector<double> curve_bins(const VfCurve& curve);

struct FmaxResult {
    double freq = 0.0;
    bool degenerate = false;
};

FmaxResult fmax_under_vmax(const VfCurve& curve, double vgb, const VoltageLimits& limits);

/// Same search with a guardband that depends on the candidate frequency.
FmaxResult fmax_under_vmax(const VfCurve& curve, const std::function<double(double)>& vgb,
                           const VoltageLimits& limits);

}  // namespace darksim
