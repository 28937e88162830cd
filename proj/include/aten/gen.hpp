#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aten/core.hpp"

namespace aten {

// Seeded synthetic-network parameters. Lines are laid out as crossing
// chains, so transfer stations arise where lines share a station. With
// identical params and seed the generated network is byte-identical.
struct GenParams {
    std::uint64_t seed = 1;
    int line_count = 2;
    int min_stations_per_line = 3;
    int max_stations_per_line = 8;
    double transfer_station_fraction = 0.15;
    double same_position_probability = 0.5;
    Seconds run_time_min = 60;
    Seconds run_time_max = 300;
    Seconds transfer_time_min = 30;
    Seconds transfer_time_max = 240;
    // Share of transfer stations whose tables and surroundings are tuned so
    // that the node-penalty search overshoots and the ring-style expansion
    // undershoots somewhere in the network.
    double adversarial_fraction = 0.0;

    // Optional exact totals (0 = derive from the fraction). Presets use
    // these to pin published aggregate counts.
    int station_total = 0;
    int transfer_total = 0;
};

// ~380 distinct stations, exactly 61 two-line transfer stations, ~812
// directed run edges.
GenParams beijing_scale_preset(std::uint64_t seed = 1);

// Small and medium presets for tests and demos.
GenParams small_preset(std::uint64_t seed = 1);
GenParams medium_preset(std::uint64_t seed = 1);

// Generates a connected network honoring the params. Transfer tables are
// drawn within the configured range and then closed under composition, so
// no chain of platform walks undercuts a direct entry. When
// adversarial_fraction > 0 the generator verifies with the solvers that
// both failure patterns are actually present and throws
// InfeasibleParamsError when the params cannot support them.
TransitNetwork generate(const GenParams& params);

}  // namespace aten
