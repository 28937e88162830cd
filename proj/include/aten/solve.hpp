#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aten/core.hpp"
#include "aten/expand.hpp"

namespace aten {

struct SolverStats {
    std::uint64_t settled = 0; // labels popped from the queue, stale pops excluded
    std::uint64_t relaxed = 0; // outgoing edges examined from settled labels
    std::uint64_t wall_nanos = 0;
    bool settled_monotone = true; // settle distances never decreased
};

// One uninterrupted ride: the visited stations in order on a single line.
struct Leg {
    LineId line = 0;
    Direction dir = Direction::Up; // orientation of the first segment
    std::vector<StationId> stations;
    Seconds seconds = 0;
};

struct TransferRecord {
    StationId station = 0;
    LineId from_line = 0;
    Direction from_dir = Direction::None;
    LineId to_line = 0;
    Direction to_dir = Direction::None;
    Seconds seconds = 0;
};

struct QueryResult {
    Seconds total = 0;
    std::vector<Leg> legs;
    std::vector<TransferRecord> transfers;
    SolverStats stats;
    // False when the path walks a through edge as a pedestrian; only the
    // ring-style baseline can produce such paths.
    bool feasible = true;
};

enum class Method : std::uint8_t { Method1, Method2, Method3, Proposed };

const char* to_string(Method m);
// Throws Error on an unknown name.
Method parse_method(std::string_view name);

// Node-labelled search on the original topology that charges the transfer
// time from the settled parent's incoming line when leaving a transfer
// station. Kept faithful to that flawed rule: once a parent is fixed, the
// cheaper approach line may be lost, so results can exceed the optimum.
QueryResult method1(const TransitNetwork& net, StationId s, StationId e);

// Edge-labelled search on the original topology; labels are directed run
// edges, so the transfer charge between consecutive rides is always exact.
// This is the in-process reference for every other method.
QueryResult method2(const TransitNetwork& net, StationId s, StationId e);

// Plain search over the ring-style expansion. Faithful to the baseline: it
// may ride a zero-weight through edge as a pedestrian, and such results are
// flagged infeasible rather than suppressed.
QueryResult method3(const ExpandedNetwork& ring, StationId s, StationId e);

// Plain search over the adaptive expansion; no transfer-station logic
// anywhere in the loop.
QueryResult proposed(const ExpandedNetwork& aten, StationId s, StationId e);

// Exhaustive minimum over transfer-annotated walks of at most hop_limit run
// edges (0 picks the directed-edge count, which is always sufficient).
// Independent of the searches above; intended for small networks only.
// Empty optional when e is unreachable.
std::optional<Seconds> brute_force(const TransitNetwork& net, StationId s, StationId e,
                                   int hop_limit = 0);

// Folds an expanded-graph node path back to an original-station itinerary:
// run/through edges merge into legs, transfer edges become transfer
// records, and pedestrian use of a through edge marks the result
// infeasible.
QueryResult collapse_path(const ExpandedNetwork& g, const std::vector<std::uint32_t>& edge_path);

}  // namespace aten
