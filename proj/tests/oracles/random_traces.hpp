#pragma once

#include <random>

#include "darksim/sim.hpp"

namespace oracle {

/// Mixed trace: idle spans with random hints, random per-core activity, some graphics.
inline darksim::Trace random_trace(std::mt19937_64& rng, std::size_t cores) {
    std::uniform_real_distribution<double> u(0, 1);
    const char* hints[] = {"deep", "psr", "vr_off", "io_gated", "cc6", "cc3"};
    darksim::Trace t;
    std::size_t len = 5 + static_cast<std::size_t>(u(rng) * 40);
    for (std::size_t i = 0; i < len; ++i) {
        darksim::TraceInterval iv;
        iv.duration = (0.2 + u(rng) * 3) * 1e-3;
        iv.cores.assign(cores, {0.0, 1, 0.0});
        if (u(rng) < 0.3) {
            iv.idle_hint = hints[static_cast<std::size_t>(u(rng) * 6)];
        } else {
            for (auto& c : iv.cores)
                if (u(rng) < 0.6) c = {0.05 + 0.95 * u(rng), 1 + static_cast<int>(u(rng) * 3), u(rng)};
            if (u(rng) < 0.3) iv.gfx_load = u(rng);
        }
        t.push_back(iv);
    }
    return t;
}

}  // namespace oracle
