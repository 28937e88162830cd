#include "aten/solve.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

namespace aten {

const char* to_string(Method m) {
    switch (m) {
        case Method::Method1: return "method1";
        case Method::Method2: return "method2";
        case Method::Method3: return "method3";
        case Method::Proposed: return "proposed";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "method1") return Method::Method1;
    if (name == "method2") return Method::Method2;
    if (name == "method3") return Method::Method3;
    if (name == "proposed") return Method::Proposed;
    throw Error("unknown method \"" + std::string(name) +
                "\" (expected method1, method2, method3 or proposed)");
}

namespace {

constexpr Seconds kInf = std::numeric_limits<Seconds>::max();

using Clock = std::chrono::steady_clock;

std::uint64_t nanos_since(Clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

// Min-heap entry; equal distances pop in insertion order.
struct HeapEntry {
    Seconds dist;
    std::uint64_t seq;
    std::uint32_t id;

    bool operator>(const HeapEntry& o) const {
        if (dist != o.dist) return dist > o.dist;
        return seq > o.seq;
    }
};

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>>;

// Shared relaxation state: distance, transfer count for the fewer-transfers
// tie rule, parent edge and a lexicographic parent preference on full ties.
struct Labels {
    std::vector<Seconds> dist;
    std::vector<std::uint32_t> transfers;
    std::vector<std::int64_t> parent; // parent edge id, -1 at sources
    std::vector<bool> settled;

    explicit Labels(std::size_t n)
        : dist(n, kInf), transfers(n, 0), parent(n, -1), settled(n, false) {}

    bool relax(std::uint32_t v, Seconds nd, std::uint32_t ntc, std::int64_t pedge) {
        if (nd < dist[v]) {
            dist[v] = nd;
            transfers[v] = ntc;
            parent[v] = pedge;
            return true;
        }
        if (nd == dist[v] && !settled[v]) {
            if (ntc < transfers[v] || (ntc == transfers[v] && pedge < parent[v])) {
                transfers[v] = ntc;
                parent[v] = pedge;
                return true;
            }
        }
        return false;
    }
};

struct FlatEdges {
    std::vector<RunEdge> edges;
    std::unordered_map<StationId, std::pair<std::uint32_t, std::uint32_t>> out; // first, count

    explicit FlatEdges(const TransitNetwork& net) {
        std::vector<StationId> order;
        for (const auto& st : net.stations()) order.push_back(st.id);
        std::sort(order.begin(), order.end());
        for (StationId s : order) {
            auto span = net.neighbors(s);
            out.emplace(s, std::make_pair(static_cast<std::uint32_t>(edges.size()),
                                          static_cast<std::uint32_t>(span.size())));
            edges.insert(edges.end(), span.begin(), span.end());
        }
    }

    std::span<const RunEdge> from(StationId s) const {
        auto it = out.find(s);
        if (it == out.end()) return {};
        return {edges.data() + it->second.first, it->second.second};
    }

    std::uint32_t id_of(StationId s, std::size_t offset) const {
        return out.at(s).first + static_cast<std::uint32_t>(offset);
    }
};

QueryResult trivial_result() {
    QueryResult r;
    r.total = 0;
    return r;
}

// Itinerary of a run-edge sequence on the original topology. Throws on an
// internal inconsistency between the search total and the path sum.
QueryResult original_itinerary(const TransitNetwork& net, const std::vector<RunEdge>& path,
                               Seconds expected_total) {
    QueryResult r;
    Seconds total = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const RunEdge& g = path[i];
        if (i > 0 && path[i - 1].line != g.line) {
            const RunEdge& p = path[i - 1];
            Seconds sec = net.transfer_seconds(g.from, p.line, p.from, g.line, g.to);
            r.transfers.push_back({g.from, p.line, net.platform_key(g.from, p.line, p.from),
                                   g.line, net.platform_key(g.from, g.line, g.to), sec});
            total += sec;
        }
        if (r.legs.empty() || r.legs.back().line != g.line) {
            Leg leg;
            leg.line = g.line;
            leg.dir = g.dir;
            leg.stations.push_back(g.from);
            r.legs.push_back(std::move(leg));
        }
        r.legs.back().stations.push_back(g.to);
        r.legs.back().seconds += g.seconds;
        total += g.seconds;
    }
    if (total != expected_total)
        throw Error("internal: itinerary sum " + std::to_string(total) +
                    " != search total " + std::to_string(expected_total));
    r.total = total;
    return r;
}

}  // namespace

QueryResult method1(const TransitNetwork& net, StationId s, StationId e) {
    net.station(s);
    net.station(e);
    auto t0 = Clock::now();
    if (s == e) {
        auto r = trivial_result();
        r.stats.wall_nanos = nanos_since(t0);
        return r;
    }

    FlatEdges fe(net);
    std::unordered_map<StationId, std::uint32_t> idx;
    std::vector<StationId> back;
    for (const auto& st : net.stations()) {
        idx.emplace(st.id, static_cast<std::uint32_t>(back.size()));
        back.push_back(st.id);
    }

    Labels lab(back.size());
    SolverStats stats;
    MinHeap heap;
    std::uint64_t seq = 0;
    lab.dist[idx[s]] = 0;
    heap.push({0, seq++, idx[s]});

    Seconds last = 0;
    bool found = false;
    while (!heap.empty()) {
        auto [dist, _, u] = heap.top();
        heap.pop();
        if (lab.settled[u] || dist != lab.dist[u]) continue;
        lab.settled[u] = true;
        ++stats.settled;
        if (dist < last) stats.settled_monotone = false;
        last = dist;
        StationId us = back[u];
        if (us == e) {
            found = true;
            break;
        }
        bool charge_here = net.is_transfer(us) && lab.parent[u] >= 0;
        auto span = fe.from(us);
        for (std::size_t k = 0; k < span.size(); ++k) {
            const RunEdge& g = span[k];
            ++stats.relaxed;
            Seconds nd = dist + g.seconds;
            std::uint32_t ntc = lab.transfers[u];
            if (charge_here) {
                const RunEdge& pe = fe.edges[static_cast<std::size_t>(lab.parent[u])];
                if (pe.line != g.line) {
                    nd += net.transfer_seconds(us, pe.line, pe.from, g.line, g.to);
                    ++ntc;
                }
            }
            std::uint32_t v = idx[g.to];
            if (lab.relax(v, nd, ntc, fe.id_of(us, k))) heap.push({nd, seq++, v});
        }
    }
    if (!found)
        throw UnreachableError("no path from " + std::to_string(s) + " to " + std::to_string(e));

    std::vector<RunEdge> path;
    for (std::uint32_t u = idx[e]; lab.parent[u] >= 0;) {
        const RunEdge& pe = fe.edges[static_cast<std::size_t>(lab.parent[u])];
        path.push_back(pe);
        u = idx[pe.from];
    }
    std::reverse(path.begin(), path.end());

    QueryResult r = original_itinerary(net, path, lab.dist[idx[e]]);
    r.stats = stats;
    r.stats.wall_nanos = nanos_since(t0);
    return r;
}

QueryResult method2(const TransitNetwork& net, StationId s, StationId e) {
    net.station(s);
    net.station(e);
    auto t0 = Clock::now();
    if (s == e) {
        auto r = trivial_result();
        r.stats.wall_nanos = nanos_since(t0);
        return r;
    }

    FlatEdges fe(net);
    Labels lab(fe.edges.size());
    SolverStats stats;
    MinHeap heap;
    std::uint64_t seq = 0;

    auto init = fe.from(s);
    for (std::size_t k = 0; k < init.size(); ++k) {
        std::uint32_t id = fe.id_of(s, k);
        lab.dist[id] = init[k].seconds;
        lab.parent[id] = -1;
        heap.push({init[k].seconds, seq++, id});
    }

    Seconds last = 0;
    std::int64_t goal = -1;
    while (!heap.empty()) {
        auto [dist, _, lu] = heap.top();
        heap.pop();
        if (lab.settled[lu] || dist != lab.dist[lu]) continue;
        lab.settled[lu] = true;
        ++stats.settled;
        if (dist < last) stats.settled_monotone = false;
        last = dist;
        const RunEdge& cur = fe.edges[lu];
        if (cur.to == e) {
            goal = lu;
            break;
        }
        auto span = fe.from(cur.to);
        for (std::size_t k = 0; k < span.size(); ++k) {
            const RunEdge& g = span[k];
            ++stats.relaxed;
            Seconds nd = dist + g.seconds;
            std::uint32_t ntc = lab.transfers[lu];
            if (cur.line != g.line) {
                nd += net.transfer_seconds(cur.to, cur.line, cur.from, g.line, g.to);
                ++ntc;
            }
            std::uint32_t v = fe.id_of(cur.to, k);
            if (lab.relax(v, nd, ntc, static_cast<std::int64_t>(lu))) heap.push({nd, seq++, v});
        }
    }
    if (goal < 0)
        throw UnreachableError("no path from " + std::to_string(s) + " to " + std::to_string(e));

    std::vector<RunEdge> path;
    for (std::int64_t lu = goal; lu >= 0; lu = lab.parent[static_cast<std::size_t>(lu)])
        path.push_back(fe.edges[static_cast<std::size_t>(lu)]);
    std::reverse(path.begin(), path.end());

    QueryResult r = original_itinerary(net, path, lab.dist[static_cast<std::size_t>(goal)]);
    r.stats = stats;
    r.stats.wall_nanos = nanos_since(t0);
    return r;
}

namespace {

// Plain multi-source Dijkstra over an expanded graph; the inner loop has no
// transfer-station branch of any kind.
QueryResult expanded_dijkstra(const ExpandedNetwork& g, StationId s, StationId e) {
    if (!g.has_station(s)) throw UnknownStationError("unknown station id " + std::to_string(s));
    if (!g.has_station(e)) throw UnknownStationError("unknown station id " + std::to_string(e));
    auto t0 = Clock::now();
    if (s == e) {
        auto r = trivial_result();
        r.stats.wall_nanos = nanos_since(t0);
        return r;
    }

    Labels lab(g.nodes().size());
    SolverStats stats;
    MinHeap heap;
    std::uint64_t seq = 0;
    for (NodeId n : g.query_sources(s)) {
        lab.dist[n] = 0;
        heap.push({0, seq++, n});
    }

    Seconds last = 0;
    std::int64_t goal = -1;
    while (!heap.empty()) {
        auto [dist, _, u] = heap.top();
        heap.pop();
        if (lab.settled[u] || dist != lab.dist[u]) continue;
        lab.settled[u] = true;
        ++stats.settled;
        if (dist < last) stats.settled_monotone = false;
        last = dist;
        if (g.node(u).station == e) {
            goal = u;
            break;
        }
        for (std::uint32_t ei : g.out_edges(u)) {
            const ExpandedEdge& ge = g.edges()[ei];
            ++stats.relaxed;
            Seconds nd = dist + ge.seconds;
            std::uint32_t ntc = lab.transfers[u] + (ge.kind == EdgeKind::Transfer ? 1 : 0);
            if (lab.relax(ge.to, nd, ntc, static_cast<std::int64_t>(ei))) heap.push({nd, seq++, ge.to});
        }
    }
    if (goal < 0)
        throw UnreachableError("no path from " + std::to_string(s) + " to " + std::to_string(e));

    std::vector<std::uint32_t> edge_path;
    for (std::uint32_t u = static_cast<std::uint32_t>(goal); lab.parent[u] >= 0;) {
        std::uint32_t ei = static_cast<std::uint32_t>(lab.parent[u]);
        edge_path.push_back(ei);
        u = g.edges()[ei].from;
    }
    std::reverse(edge_path.begin(), edge_path.end());

    QueryResult r = collapse_path(g, edge_path);
    if (r.total != lab.dist[static_cast<std::size_t>(goal)])
        throw Error("internal: collapsed total " + std::to_string(r.total) + " != search total " +
                    std::to_string(lab.dist[static_cast<std::size_t>(goal)]));
    r.stats = stats;
    r.stats.wall_nanos = nanos_since(t0);
    return r;
}

}  // namespace

QueryResult method3(const ExpandedNetwork& ring, StationId s, StationId e) {
    if (ring.mode() != ExpansionMode::Method3)
        throw Error("method3 expects a ring-style expansion");
    return expanded_dijkstra(ring, s, e);
}

QueryResult proposed(const ExpandedNetwork& aten, StationId s, StationId e) {
    if (aten.mode() != ExpansionMode::Aten)
        throw Error("proposed expects an adaptive expansion");
    return expanded_dijkstra(aten, s, e);
}

QueryResult collapse_path(const ExpandedNetwork& g, const std::vector<std::uint32_t>& edge_path) {
    QueryResult r;
    for (std::size_t i = 0; i < edge_path.size(); ++i) {
        const ExpandedEdge& e = g.edges()[edge_path[i]];
        const ExpandedNode& nf = g.node(e.from);
        const ExpandedNode& nt = g.node(e.to);
        if (i > 0 && g.edges()[edge_path[i - 1]].to != e.from)
            throw Error("malformed path: nonadjacent edges");

        if (e.kind == EdgeKind::Transfer) {
            r.transfers.push_back({nf.station, nf.line, nf.key, nt.line, nt.key, e.seconds});
            r.total += e.seconds;
            continue;
        }

        // A through edge is vehicle-only: walking onto or off of it makes
        // the itinerary infeasible.
        if (e.kind == EdgeKind::Through) {
            bool prev_run =
                i > 0 && g.edges()[edge_path[i - 1]].kind == EdgeKind::Run;
            bool next_run =
                i + 1 < edge_path.size() && g.edges()[edge_path[i + 1]].kind == EdgeKind::Run;
            if (!prev_run || !next_run) r.feasible = false;
        }

        bool continues = !r.legs.empty() && r.legs.back().line == e.line &&
                         (i > 0 && g.edges()[edge_path[i - 1]].kind != EdgeKind::Transfer);
        if (!continues) {
            Leg leg;
            leg.line = e.line;
            leg.dir = e.dir;
            leg.stations.push_back(nf.station);
            r.legs.push_back(std::move(leg));
        } else if (r.legs.back().dir == Direction::None) {
            r.legs.back().dir = e.dir;
        }
        if (r.legs.back().stations.back() != nt.station)
            r.legs.back().stations.push_back(nt.station);
        r.legs.back().seconds += e.seconds;
        r.total += e.seconds;
    }
    return r;
}

std::optional<Seconds> brute_force(const TransitNetwork& net, StationId s, StationId e,
                                   int hop_limit) {
    net.station(s);
    net.station(e);
    if (s == e) return Seconds{0};

    if (hop_limit <= 0) hop_limit = static_cast<int>(net.directed_run_edge_count());

    std::optional<Seconds> best;

    struct Step {
        const RunEdge* edge;
        Seconds cost_after;
    };

    // Depth-first enumeration of all walks up to the hop limit, cheapest
    // continuation first, pruned only on the running best. Transfer charges
    // follow the same table rule the searches use.
    auto dfs = [&](auto&& self, StationId u, const RunEdge* last, Seconds cost, int hops) -> void {
        if (best && cost >= *best) return;
        if (u == e) {
            best = cost;
            return;
        }
        if (hops == hop_limit) return;
        std::vector<Step> local;
        for (const RunEdge& g : net.neighbors(u)) {
            Seconds charge = 0;
            if (last && last->line != g.line)
                charge = net.transfer_seconds(u, last->line, last->from, g.line, g.to);
            local.push_back({&g, cost + charge + g.seconds});
        }
        std::stable_sort(local.begin(), local.end(),
                         [](const Step& a, const Step& b) { return a.cost_after < b.cost_after; });
        for (const Step& st : local) self(self, st.edge->to, st.edge, st.cost_after, hops + 1);
    };
    dfs(dfs, s, nullptr, 0, 0);
    return best;
}

}  // namespace aten
