#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "aten/core.hpp"

namespace aten {

// Station taxonomy by same-position flags: A = every line same-position,
// B = exactly one, C = exactly two (3-line stations only), D = none.
enum class TransferCase : std::uint8_t { A, B, C, D };

struct CaseInfo {
    TransferCase kind = TransferCase::A;
    int line_count = 0;
};

const char* to_string(TransferCase c);

enum class NodeKind : std::uint8_t {
    Plain = 0,        // untouched original station
    Split = 1,        // single boarding point of a same-position line
    PlatformUp = 2,   // boarding side adjoining the line's forward neighbor
    PlatformDown = 3, // boarding side adjoining the backward neighbor
    Virtual = 4,      // pass-through node, carries run edges only
};

enum class EdgeKind : std::uint8_t {
    Run = 0,      // vehicle movement with a real travel time
    Transfer = 1, // pedestrian walk between boarding points
    Through = 2,  // zero-weight same-line link (ring-style expansion only)
};

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

using NodeId = std::uint32_t;

struct ExpandedNode {
    StationId station = 0; // back-map to the original station
    LineId line = 0;       // 0 for Plain nodes
    NodeKind kind = NodeKind::Plain;
    // Transfer-table key this node answers to (None for plain, virtual and
    // same-position nodes).
    Direction key = Direction::None;
    std::string name;
};

struct ExpandedEdge {
    NodeId from = 0;
    NodeId to = 0;
    Seconds seconds = 0;
    EdgeKind kind = EdgeKind::Run;
    LineId line = 0;                 // carrying line for run/through edges, 0 for transfers
    Direction dir = Direction::None; // orientation of run edges
};

enum class ExpansionMode : std::uint8_t { Aten, Method3 };

// Pseudocode keeps one Split node per same-position line; WorkedExample
// forces the three-node (virtual + two platforms) form on every line of a
// transfer station. Both yield identical shortest-path totals.
enum class ExpansionStyle : std::uint8_t { Pseudocode, WorkedExample };

const char* to_string(ExpansionMode m);
const char* to_string(ExpansionStyle s);

// Expanded graph with typed nodes and edges plus the station back-map.
// Nodes are numbered in one deterministic pass (station id, then line id,
// then kind); edges are stored in canonical (from, to, kind, line) order.
// Immutable once built.
class ExpandedNetwork {
public:
    ExpandedNetwork(ExpansionMode mode, ExpansionStyle style, std::vector<ExpandedNode> nodes,
                    std::vector<ExpandedEdge> edges);

    ExpansionMode mode() const { return mode_; }
    ExpansionStyle style() const { return style_; }

    const std::vector<ExpandedNode>& nodes() const { return nodes_; }
    const std::vector<ExpandedEdge>& edges() const { return edges_; }
    const ExpandedNode& node(NodeId n) const { return nodes_[n]; }

    // Edge indices leaving n, in canonical order.
    std::span<const std::uint32_t> out_edges(NodeId n) const;

    // All expansion nodes of an original station.
    std::span<const NodeId> nodes_of(StationId s) const;

    // Nodes a query may start from: every node of s except Virtual ones.
    std::span<const NodeId> query_sources(StationId s) const;

    bool has_station(StationId s) const { return by_station_.count(s) != 0; }

    std::size_t count_edges(EdgeKind kind) const;

private:
    ExpansionMode mode_;
    ExpansionStyle style_;
    std::vector<ExpandedNode> nodes_;
    std::vector<ExpandedEdge> edges_;
    std::vector<std::uint32_t> out_index_;   // CSR offsets into out_order_
    std::vector<std::uint32_t> out_order_;
    std::unordered_map<StationId, std::vector<NodeId>> by_station_;
    std::unordered_map<StationId, std::vector<NodeId>> sources_;
};

CaseInfo classify_transfer_station(const TransitNetwork& net, StationId s);

// New nodes and edges produced for one transfer station. Edges to the
// station's neighbors keep the original StationId endpoints; the builders
// resolve them against neighbor expansions afterwards.
struct StationExpansion {
    std::vector<ExpandedNode> nodes;
    std::size_t run_edges = 0;      // directed, counted as if neighbors were plain
    std::size_t transfer_edges = 0; // directed
    std::size_t through_edges = 0;  // directed
};

// Expansion of a single transfer station, for inspection and tests.
StationExpansion expand_station(const TransitNetwork& net, StationId s, ExpansionMode mode,
                                ExpansionStyle style = ExpansionStyle::Pseudocode);

// Builds the adaptive expansion: every transfer station is replaced by
// split/platform/virtual nodes, walk times become transfer edges, and the
// result is searchable by a plain shortest-path pass. Throws Error with the
// validation summary when the input is not well-formed.
ExpandedNetwork build_aten(const TransitNetwork& net,
                           ExpansionStyle style = ExpansionStyle::Pseudocode);

// Ring-style baseline: two platform nodes per line per transfer station,
// pedestrian edges between the platforms of different lines and zero-weight
// through edges between same-line platforms. Faithful to its known flaw
// (through edges are not protected against pedestrian use).
ExpandedNetwork build_method3(const TransitNetwork& net);

struct GraphSize {
    std::uint64_t nodes = 0;
    std::uint64_t run_edges = 0;
    std::uint64_t transfer_edges = 0;
    std::uint64_t through_edges = 0;

    std::uint64_t total_edges() const { return run_edges + transfer_edges + through_edges; }
    bool operator==(const GraphSize&) const = default;
};

// Closed-form node/edge counts of the expansion, computed without building
// it. Run edges are counted per original directed edge as the product of
// sender nodes at its tail and receiver nodes at its head, which stays
// exact when adjacent stations are both expanded.
GraphSize predict_expansion_size(const TransitNetwork& net, ExpansionMode mode,
                                 ExpansionStyle style = ExpansionStyle::Pseudocode);

GraphSize measure(const ExpandedNetwork& g);

}  // namespace aten
