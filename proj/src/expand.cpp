#include "aten/expand.hpp"

#include <algorithm>
#include <map>

namespace aten {

const char* to_string(TransferCase c) {
    switch (c) {
        case TransferCase::A: return "a";
        case TransferCase::B: return "b";
        case TransferCase::C: return "c";
        case TransferCase::D: return "d";
    }
    return "?";
}

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Plain: return "plain";
        case NodeKind::Split: return "split";
        case NodeKind::PlatformUp: return "platform_up";
        case NodeKind::PlatformDown: return "platform_down";
        case NodeKind::Virtual: return "virtual";
    }
    return "?";
}

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Run: return "run";
        case EdgeKind::Transfer: return "transfer";
        case EdgeKind::Through: return "through";
    }
    return "?";
}

const char* to_string(ExpansionMode m) {
    return m == ExpansionMode::Aten ? "aten" : "method3";
}

const char* to_string(ExpansionStyle s) {
    return s == ExpansionStyle::Pseudocode ? "pseudocode" : "worked-example";
}

CaseInfo classify_transfer_station(const TransitNetwork& net, StationId s) {
    const TransferSpec* spec = net.transfer_spec(s);
    if (!spec)
        throw Error("station " + std::to_string(s) + " is not a transfer station");
    int same = 0;
    for (const auto& f : spec->lines)
        if (f.same_position) ++same;
    int n = static_cast<int>(spec->lines.size());
    CaseInfo info;
    info.line_count = n;
    if (same == n)
        info.kind = TransferCase::A;
    else if (same == 0)
        info.kind = TransferCase::D;
    else if (same == 1)
        info.kind = TransferCase::B;
    else
        info.kind = TransferCase::C;
    return info;
}

namespace {

struct SideInfo {
    bool has_up = false;   // forward neighbor exists
    bool has_down = false; // backward neighbor exists
    StationId up = 0;
    StationId down = 0;

    int neighbor_count() const { return (has_up ? 1 : 0) + (has_down ? 1 : 0); }
};

SideInfo sides_of(const TransitNetwork& net, StationId s, LineId line) {
    SideInfo info;
    const Line& ln = net.line(line);
    auto idx = net.index_on_line(line, s);
    if (!idx) return info;
    if (*idx + 1 < ln.stations.size()) {
        info.has_up = true;
        info.up = ln.stations[*idx + 1];
    }
    if (*idx > 0) {
        info.has_down = true;
        info.down = ln.stations[*idx - 1];
    }
    return info;
}

// Whether a line keeps its single split node (no virtual/platform trio).
bool single_node_line(const TransferSpec& spec, LineId line, ExpansionMode mode,
                      ExpansionStyle style) {
    return mode == ExpansionMode::Aten && style == ExpansionStyle::Pseudocode &&
           spec.same_position(line);
}

// Node kinds a line contributes at one transfer station, in id order.
std::vector<NodeKind> node_kinds(const TransitNetwork& net, const TransferSpec& spec, StationId s,
                                 LineId line, ExpansionMode mode, ExpansionStyle style) {
    SideInfo sides = sides_of(net, s, line);
    std::vector<NodeKind> kinds;
    if (mode == ExpansionMode::Aten) {
        if (single_node_line(spec, line, mode, style)) {
            kinds.push_back(NodeKind::Split);
        } else {
            if (sides.has_up) kinds.push_back(NodeKind::PlatformUp);
            if (sides.has_down) kinds.push_back(NodeKind::PlatformDown);
            // A pass-through node only makes sense between two neighbors.
            if (sides.neighbor_count() == 2) kinds.push_back(NodeKind::Virtual);
        }
    } else {
        if (sides.has_up) kinds.push_back(NodeKind::PlatformUp);
        if (sides.has_down) kinds.push_back(NodeKind::PlatformDown);
    }
    return kinds;
}

bool is_platform_class(NodeKind k) {
    return k == NodeKind::Split || k == NodeKind::PlatformUp || k == NodeKind::PlatformDown;
}

// Table key a platform-class node answers to.
Direction key_of(const TransferSpec& spec, LineId line, NodeKind kind) {
    if (spec.same_position(line)) return Direction::None;
    return kind == NodeKind::PlatformUp ? Direction::Up : Direction::Down;
}

std::string node_name(const TransitNetwork& net, StationId s, LineId line, NodeKind kind) {
    const std::string& base = net.station(s).name;
    if (kind == NodeKind::Plain) return base;
    return base + "/L" + std::to_string(line) + "/" + to_string(kind);
}

struct Builder {
    const TransitNetwork& net;
    ExpansionMode mode;
    ExpansionStyle style;

    std::vector<ExpandedNode> nodes;
    std::vector<ExpandedEdge> edges;
    std::map<std::tuple<StationId, LineId, NodeKind>, NodeId> index;

    NodeId add_node(StationId s, LineId line, NodeKind kind) {
        NodeId id = static_cast<NodeId>(nodes.size());
        Direction key = Direction::None;
        if (is_platform_class(kind))
            if (const TransferSpec* spec = net.transfer_spec(s))
                key = key_of(*spec, line, kind);
        nodes.push_back({s, line, kind, key, node_name(net, s, line, kind)});
        index.emplace(std::make_tuple(s, line, kind), id);
        return id;
    }

    NodeId find(StationId s, LineId line, NodeKind kind) const {
        return index.at(std::make_tuple(s, line, kind));
    }

    // Nodes at `s` that exchange line-`line` traffic with neighbor `to`.
    // Plain stations route everything through their single node; expanded
    // ones through the side platform plus, for the adaptive mode, the
    // virtual pass-through node. Senders and receivers coincide.
    std::vector<NodeId> gateway(StationId s, LineId line, StationId to) const {
        const TransferSpec* spec = net.transfer_spec(s);
        if (!spec) return {find(s, 0, NodeKind::Plain)};
        if (single_node_line(*spec, line, mode, style)) return {find(s, line, NodeKind::Split)};
        SideInfo sides = sides_of(net, s, line);
        NodeKind side =
            sides.has_up && sides.up == to ? NodeKind::PlatformUp : NodeKind::PlatformDown;
        std::vector<NodeId> out{find(s, line, side)};
        if (mode == ExpansionMode::Aten && sides.neighbor_count() == 2)
            out.push_back(find(s, line, NodeKind::Virtual));
        return out;
    }
};

}  // namespace

StationExpansion expand_station(const TransitNetwork& net, StationId s, ExpansionMode mode,
                                ExpansionStyle style) {
    const TransferSpec* spec = net.transfer_spec(s);
    if (!spec)
        throw Error("station " + std::to_string(s) + " is not a transfer station");

    StationExpansion out;
    std::vector<LineId> lines(net.lines_at(s).begin(), net.lines_at(s).end());
    std::vector<std::size_t> platform_counts;
    for (LineId line : lines) {
        auto kinds = node_kinds(net, *spec, s, line, mode, style);
        std::size_t platforms = 0;
        for (NodeKind k : kinds) {
            Direction key = is_platform_class(k) ? key_of(*spec, line, k) : Direction::None;
            out.nodes.push_back({s, line, k, key, node_name(net, s, line, k)});
            if (is_platform_class(k)) ++platforms;
            // Run edges to existing neighbors, both directions each.
            SideInfo sides = sides_of(net, s, line);
            if (k == NodeKind::Virtual)
                out.run_edges += 2 * static_cast<std::size_t>(sides.neighbor_count());
            else if (k == NodeKind::Split)
                out.run_edges += 2 * static_cast<std::size_t>(sides.neighbor_count());
            else
                out.run_edges += 2;
        }
        if (mode == ExpansionMode::Method3 && platforms == 2) out.through_edges += 2;
        platform_counts.push_back(platforms);
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = 0; j < lines.size(); ++j)
            if (i != j) out.transfer_edges += platform_counts[i] * platform_counts[j];
    return out;
}

namespace {

ExpandedNetwork build_expansion(const TransitNetwork& net, ExpansionMode mode,
                                ExpansionStyle style) {
    ValidationReport rep = validate(net);
    if (!rep.ok()) throw Error("network failed validation:\n" + rep.summary());

    Builder b{net, mode, style, {}, {}, {}};

    std::vector<StationId> order;
    order.reserve(net.stations().size());
    for (const auto& st : net.stations()) order.push_back(st.id);
    std::sort(order.begin(), order.end());

    for (StationId s : order) {
        const TransferSpec* spec = net.transfer_spec(s);
        if (!spec) {
            b.add_node(s, 0, NodeKind::Plain);
            continue;
        }
        for (LineId line : net.lines_at(s))
            for (NodeKind k : node_kinds(net, *spec, s, line, mode, style))
                b.add_node(s, line, k);
    }

    // Run edges: the sender nodes at each original edge's tail wired to the
    // receiver nodes at its head, keeping the original segment time.
    for (StationId s : order) {
        for (const RunEdge& e : net.neighbors(s)) {
            auto senders = b.gateway(e.from, e.line, e.to);
            auto receivers = b.gateway(e.to, e.line, e.from);
            for (NodeId a : senders)
                for (NodeId c : receivers)
                    b.edges.push_back({a, c, e.seconds, EdgeKind::Run, e.line, e.dir});
        }
    }

    // Transfer edges between platform-class nodes of distinct lines, and for
    // the ring-style mode the zero-weight through link inside each line.
    for (StationId s : order) {
        const TransferSpec* spec = net.transfer_spec(s);
        if (!spec) continue;
        auto lines = net.lines_at(s);
        for (LineId li : lines) {
            std::vector<std::pair<NodeId, Direction>> from_nodes;
            for (NodeKind k : node_kinds(net, *spec, s, li, mode, style))
                if (is_platform_class(k))
                    from_nodes.push_back({b.find(s, li, k), key_of(*spec, li, k)});
            if (mode == ExpansionMode::Method3 && from_nodes.size() == 2) {
                b.edges.push_back(
                    {from_nodes[0].first, from_nodes[1].first, 0, EdgeKind::Through, li});
                b.edges.push_back(
                    {from_nodes[1].first, from_nodes[0].first, 0, EdgeKind::Through, li});
            }
            for (LineId lj : lines) {
                if (li == lj) continue;
                for (NodeKind k : node_kinds(net, *spec, s, lj, mode, style)) {
                    if (!is_platform_class(k)) continue;
                    NodeId to = b.find(s, lj, k);
                    Direction to_key = key_of(*spec, lj, k);
                    for (const auto& [from, from_key] : from_nodes) {
                        auto it = spec->times.find({li, from_key, lj, to_key});
                        if (it == spec->times.end())
                            throw Error("incomplete transfer table at station " +
                                        std::to_string(s));
                        b.edges.push_back({from, to, it->second, EdgeKind::Transfer, 0});
                    }
                }
            }
        }
    }

    return ExpandedNetwork(mode, style, std::move(b.nodes), std::move(b.edges));
}

}  // namespace

ExpandedNetwork build_aten(const TransitNetwork& net, ExpansionStyle style) {
    return build_expansion(net, ExpansionMode::Aten, style);
}

ExpandedNetwork build_method3(const TransitNetwork& net) {
    return build_expansion(net, ExpansionMode::Method3, ExpansionStyle::Pseudocode);
}

ExpandedNetwork::ExpandedNetwork(ExpansionMode mode, ExpansionStyle style,
                                 std::vector<ExpandedNode> nodes, std::vector<ExpandedEdge> edges)
    : mode_(mode), style_(style), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(), [](const ExpandedEdge& a, const ExpandedEdge& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.to != b.to) return a.to < b.to;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.line < b.line;
    });

    out_index_.assign(nodes_.size() + 1, 0);
    for (const auto& e : edges_) ++out_index_[e.from + 1];
    for (std::size_t i = 1; i < out_index_.size(); ++i) out_index_[i] += out_index_[i - 1];
    out_order_.resize(edges_.size());
    std::vector<std::uint32_t> cursor(out_index_.begin(), out_index_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) out_order_[cursor[edges_[i].from]++] = i;

    for (NodeId n = 0; n < nodes_.size(); ++n) {
        by_station_[nodes_[n].station].push_back(n);
        if (nodes_[n].kind != NodeKind::Virtual) sources_[nodes_[n].station].push_back(n);
    }
}

std::span<const std::uint32_t> ExpandedNetwork::out_edges(NodeId n) const {
    return {out_order_.data() + out_index_[n], out_order_.data() + out_index_[n + 1]};
}

std::span<const NodeId> ExpandedNetwork::nodes_of(StationId s) const {
    auto it = by_station_.find(s);
    if (it == by_station_.end()) return {};
    return {it->second.data(), it->second.size()};
}

std::span<const NodeId> ExpandedNetwork::query_sources(StationId s) const {
    auto it = sources_.find(s);
    if (it == sources_.end()) return {};
    return {it->second.data(), it->second.size()};
}

std::size_t ExpandedNetwork::count_edges(EdgeKind kind) const {
    std::size_t n = 0;
    for (const auto& e : edges_)
        if (e.kind == kind) ++n;
    return n;
}

GraphSize measure(const ExpandedNetwork& g) {
    GraphSize out;
    out.nodes = g.nodes().size();
    out.run_edges = g.count_edges(EdgeKind::Run);
    out.transfer_edges = g.count_edges(EdgeKind::Transfer);
    out.through_edges = g.count_edges(EdgeKind::Through);
    return out;
}

GraphSize predict_expansion_size(const TransitNetwork& net, ExpansionMode mode,
                                 ExpansionStyle style) {
    ValidationReport rep = validate(net);
    if (!rep.ok()) throw Error("network failed validation:\n" + rep.summary());

    GraphSize out;

    // Sender/receiver multiplicity of one end of an original edge.
    auto gate_width = [&](StationId s, LineId line) -> std::uint64_t {
        const TransferSpec* spec = net.transfer_spec(s);
        if (!spec) return 1;
        if (single_node_line(*spec, line, mode, style)) return 1;
        if (mode == ExpansionMode::Method3) return 1;
        return sides_of(net, s, line).neighbor_count() == 2 ? 2 : 1;
    };

    for (const auto& st : net.stations()) {
        const TransferSpec* spec = net.transfer_spec(st.id);
        if (!spec) {
            out.nodes += 1;
            continue;
        }
        std::vector<std::uint64_t> platform_counts;
        for (LineId line : net.lines_at(st.id)) {
            auto kinds = node_kinds(net, *spec, st.id, line, mode, style);
            out.nodes += kinds.size();
            std::uint64_t platforms = 0;
            for (NodeKind k : kinds)
                if (is_platform_class(k)) ++platforms;
            platform_counts.push_back(platforms);
            if (mode == ExpansionMode::Method3 && platforms == 2) out.through_edges += 2;
        }
        for (std::size_t i = 0; i < platform_counts.size(); ++i)
            for (std::size_t j = 0; j < platform_counts.size(); ++j)
                if (i != j) out.transfer_edges += platform_counts[i] * platform_counts[j];
    }

    for (const auto& st : net.stations())
        for (const RunEdge& e : net.neighbors(st.id))
            out.run_edges += gate_width(e.from, e.line) * gate_width(e.to, e.line);

    return out;
}

}  // namespace aten
