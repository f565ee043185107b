#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace darksim {

/// Raised when a model cannot be evaluated (bad inputs, singular network, infeasible setpoint).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One ladder section: shunt decap at its upstream node, then series R/L toward the die.
struct PdnStage {
    double series_resistance = 0.0;
    double series_inductance = 0.0;
    double shunt_cap = 0.0;
    double cap_esr = 0.0;
    double cap_esl = 0.0;
};

struct CoreBranch {
    double gate_resistance = 0.0;
    double die_grid_resistance = 0.0;
    double mim_cap = 0.0;
    double mim_esr = 0.0;
};

enum class Topology { Gated, Bypassed };

/// VR -> board -> package -> die ladder. Core 0 is the load core.
struct PdnNetwork {
    double vr_output_resistance = 0.0;
    std::vector<PdnStage> stages;
    std::vector<CoreBranch> cores;
    Topology topology = Topology::Gated;
};

struct ImpedanceSample {
    double freq = 0.0;
    double magnitude = 0.0;
    double phase = 0.0;
};

using ImpedanceProfile = std::vector<ImpedanceSample>;

enum class Spacing { Log, Linear };

/// Throws ModelError when a network invariant is broken.
void validate(const PdnNetwork& net);

/// Driving-point impedance at the load core node.
std::complex<double> impedance_at(const PdnNetwork& net, double f);

ImpedanceProfile impedance_sweep(const PdnNetwork& net, double f_min, double f_max,
                                 std::size_t points, Spacing spacing = Spacing::Log);

/// Merge the core branches into one parallel equivalent with no gate.
/// Grid resistances and MIM ESRs combine in parallel, MIM caps add.
PdnNetwork bypass(const PdnNetwork& net);

double dc_resistance(const PdnNetwork& net);

/// Maximum magnitude sample; ties go to the lowest frequency.
ImpedanceSample peak_impedance(const ImpedanceProfile& profile);

struct SweepSettings {
    double f_min = 1e3;
    double f_max = 1e9;
    std::size_t points = 400;
};

/// Peak |Z| of the default log sweep.
double peak_magnitude(const PdnNetwork& net, const SweepSettings& s = {});

}  // namespace darksim
