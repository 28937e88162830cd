#include "aten/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "aten/expand.hpp"
#include "aten/io.hpp"

namespace aten {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t nanos_since(Clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::vector<std::pair<StationId, StationId>>& ods) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto eat = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (auto [s, e] : ods) {
        eat(s);
        eat(e);
    }
    return h;
}

struct QueryTotals {
    Seconds travel = 0;
    std::uint64_t settled = 0;
    std::uint64_t relaxed = 0;
};

struct Topologies {
    const TransitNetwork& net;
    const ExpandedNetwork& aten;
    const ExpandedNetwork& ring;
};

QueryResult run_method(const Topologies& t, Method m, StationId s, StationId e) {
    switch (m) {
        case Method::Method1: return method1(t.net, s, e);
        case Method::Method2: return method2(t.net, s, e);
        case Method::Method3: return method3(t.ring, s, e);
        case Method::Proposed: return proposed(t.aten, s, e);
    }
    throw Error("unknown method");
}

// One pass of a method over a group; per-OD work optionally spread across
// threads, the reduction kept sequential so counts are order-independent.
QueryTotals run_group(const Topologies& t, Method m,
                      const std::vector<std::pair<StationId, StationId>>& ods, int threads) {
    std::vector<QueryTotals> per(ods.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                QueryResult r = run_method(t, m, ods[i].first, ods[i].second);
                per[i] = {r.total, r.stats.settled, r.stats.relaxed};
            } catch (const Error& err) {
                throw Error(std::string(to_string(m)) + " failed on OD (" +
                            std::to_string(ods[i].first) + "," + std::to_string(ods[i].second) +
                            "): " + err.what());
            }
        }
    };
    if (threads <= 1 || ods.size() < 2) {
        work(0, ods.size());
    } else {
        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), ods.size());
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n);
        std::size_t chunk = (ods.size() + n - 1) / n;
        for (std::size_t w = 0; w < n; ++w)
            pool.emplace_back([&, w] {
                try {
                    work(w * chunk, std::min(ods.size(), (w + 1) * chunk));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    QueryTotals total;
    for (const auto& q : per) {
        total.travel += q.travel;
        total.settled += q.settled;
        total.relaxed += q.relaxed;
    }
    return total;
}

void check_plan(const BenchPlan& plan) {
    if (plan.methods.empty()) throw Error("bench plan selects no methods");
    if (plan.repetitions < 1) throw Error("bench repetitions must be >= 1");
    for (const auto* groups : {&plan.od_groups, &plan.timing_groups}) {
        int prev = 0;
        for (int g : *groups) {
            if (g <= 0) throw Error("bench group sizes must be positive");
            if (g <= prev) throw Error("bench group sizes must be ascending");
            prev = g;
        }
    }
    std::set<Method> seen(plan.methods.begin(), plan.methods.end());
    if (seen.size() != plan.methods.size()) throw Error("bench plan repeats a method");
}

bool has(const BenchPlan& plan, Method m) {
    return std::find(plan.methods.begin(), plan.methods.end(), m) != plan.methods.end();
}

const BenchRow& row_of(const BenchGroup& g, Method m) {
    for (const auto& r : g.rows)
        if (r.method == m) return r;
    throw Error("missing bench row");
}

}  // namespace

bool BenchReport::all_assertions_pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

std::vector<std::pair<StationId, StationId>> sample_ods(const TransitNetwork& net, int n,
                                                        std::uint64_t seed) {
    if (n < 1) throw Error("od sample size must be >= 1");
    std::vector<StationId> ids;
    for (const auto& s : net.stations()) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    std::uint64_t capacity =
        static_cast<std::uint64_t>(ids.size()) * (ids.empty() ? 0 : ids.size() - 1);
    if (static_cast<std::uint64_t>(n) > capacity)
        throw Error("requested " + std::to_string(n) + " od pairs but only " +
                    std::to_string(capacity) + " exist");

    std::uint64_t state = seed ^ 0x6a09e667f3bcc909ULL;
    auto next = [&] { return mix(state += 0x9e3779b97f4a7c15ULL); };
    std::set<std::pair<StationId, StationId>> seen;
    std::vector<std::pair<StationId, StationId>> out;
    while (out.size() < static_cast<std::size_t>(n)) {
        StationId s = ids[next() % ids.size()];
        StationId e = ids[next() % ids.size()];
        if (s == e) continue;
        if (!seen.insert({s, e}).second) continue;
        out.push_back({s, e});
    }
    return out;
}

BenchReport run_bench(const BenchPlan& plan) {
    if (!plan.network_file.empty()) return run_bench(plan, read_network(plan.network_file));
    return run_bench(plan, generate(plan.params));
}

BenchReport run_bench(const BenchPlan& plan, const TransitNetwork& net) {
    check_plan(plan);
    ValidationReport rep = validate(net);
    if (!rep.ok()) throw Error("network failed validation:\n" + rep.summary());

    BenchReport report;
    report.environment["compiler"] =
#if defined(__clang__)
        "clang " __clang_version__;
#elif defined(__GNUC__)
        "gcc " __VERSION__;
#else
        "unknown";
#endif
    report.environment["pointer_bits"] = std::to_string(8 * sizeof(void*));
    report.seed = plan.seed;
    report.stations = net.stations().size();
    report.transfer_stations = net.transfer_specs().size();
    report.run_edges = net.directed_run_edge_count();

    // Topology construction is timed once and excluded from query timing.
    auto t0 = Clock::now();
    ExpandedNetwork aten_graph = build_aten(net);
    std::uint64_t aten_nanos = nanos_since(t0);
    t0 = Clock::now();
    ExpandedNetwork ring_graph = build_method3(net);
    std::uint64_t ring_nanos = nanos_since(t0);
    report.topologies.push_back({"aten", aten_graph.nodes().size(), aten_graph.edges().size(),
                                 aten_nanos});
    report.topologies.push_back({"method3", ring_graph.nodes().size(), ring_graph.edges().size(),
                                 ring_nanos});
    Topologies topo{net, aten_graph, ring_graph};

    auto make_groups = [&](const char* purpose, const std::vector<int>& sizes, bool timed) {
        for (int size : sizes) {
            BenchGroup group;
            group.purpose = purpose;
            group.size = size;
            std::vector<std::pair<StationId, StationId>> ods;
            if (!plan.fixed_ods.empty()) {
                ods = plan.fixed_ods;
                group.size = static_cast<int>(ods.size());
            } else {
                ods = sample_ods(net, size,
                                 plan.seed ^ mix(static_cast<std::uint64_t>(size) * 2 + timed));
            }
            group.od_checksum = fnv1a(ods);
            for (Method m : plan.methods) {
                BenchRow row;
                row.method = m;
                if (timed) {
                    std::vector<std::uint64_t> walls;
                    QueryTotals totals;
                    for (int r = 0; r < plan.repetitions; ++r) {
                        auto g0 = Clock::now();
                        totals = run_group(topo, m, ods, 1);
                        walls.push_back(nanos_since(g0));
                    }
                    std::sort(walls.begin(), walls.end());
                    row.wall_nanos = walls[walls.size() / 2];
                    row.travel_time_sum = totals.travel;
                    row.settled = totals.settled;
                    row.relaxed = totals.relaxed;
                } else {
                    auto g0 = Clock::now();
                    QueryTotals totals = run_group(topo, m, ods, plan.threads);
                    row.wall_nanos = nanos_since(g0);
                    row.travel_time_sum = totals.travel;
                    row.settled = totals.settled;
                    row.relaxed = totals.relaxed;
                }
                group.rows.push_back(row);
            }
            report.groups.push_back(std::move(group));
            if (!plan.fixed_ods.empty()) break;
        }
    };
    make_groups("sums", plan.od_groups, false);
    make_groups("timing", plan.timing_groups, true);

    // Comparative assertions over the sums groups; evaluated only when the
    // methods they compare were all run.
    auto add_assert = [&](const std::string& name, bool pass, const std::string& detail) {
        report.assertions.push_back({name, pass, detail});
    };
    bool m1 = has(plan, Method::Method1), m2 = has(plan, Method::Method2);
    bool m3 = has(plan, Method::Method3), mp = has(plan, Method::Proposed);
    std::uint64_t settled_m1 = 0, settled_m2 = 0, settled_m3 = 0, settled_mp = 0;
    for (const auto& g : report.groups) {
        if (g.purpose != "sums") continue;
        std::string where = " (group " + std::to_string(g.size) + ")";
        if (m2 && mp) {
            Seconds a = row_of(g, Method::Proposed).travel_time_sum;
            Seconds b = row_of(g, Method::Method2).travel_time_sum;
            add_assert("sum_proposed == sum_method2" + where, a == b,
                       std::to_string(a) + " vs " + std::to_string(b));
        }
        if (m1 && m2) {
            Seconds a = row_of(g, Method::Method1).travel_time_sum;
            Seconds b = row_of(g, Method::Method2).travel_time_sum;
            add_assert("sum_method1 >= sum_method2" + where, a >= b,
                       std::to_string(a) + " vs " + std::to_string(b));
        }
        if (m3 && m2) {
            Seconds a = row_of(g, Method::Method3).travel_time_sum;
            Seconds b = row_of(g, Method::Method2).travel_time_sum;
            add_assert("sum_method3 <= sum_method2" + where, a <= b,
                       std::to_string(a) + " vs " + std::to_string(b));
        }
        if (m1) settled_m1 += row_of(g, Method::Method1).settled;
        if (m2) settled_m2 += row_of(g, Method::Method2).settled;
        if (m3) settled_m3 += row_of(g, Method::Method3).settled;
        if (mp) settled_mp += row_of(g, Method::Proposed).settled;
    }
    if (m1 && m2 && m3 && mp) {
        bool largest = settled_m2 >= settled_m1 && settled_m2 >= settled_m3 &&
                       settled_m2 >= settled_mp;
        add_assert("settled_method2 largest", largest,
                   "m1=" + std::to_string(settled_m1) + " m2=" + std::to_string(settled_m2) +
                       " m3=" + std::to_string(settled_m3) + " prop=" +
                       std::to_string(settled_mp));
        bool smallest = settled_m1 <= settled_m2 && settled_m1 <= settled_m3 &&
                        settled_m1 <= settled_mp;
        add_assert("settled_method1 smallest", smallest,
                   "m1=" + std::to_string(settled_m1) + " m2=" + std::to_string(settled_m2) +
                       " m3=" + std::to_string(settled_m3) + " prop=" +
                       std::to_string(settled_mp));
        std::uint64_t big = std::max(settled_m3, settled_mp);
        std::uint64_t gap = settled_m3 > settled_mp ? settled_m3 - settled_mp
                                                    : settled_mp - settled_m3;
        // Proxy band for the "basically the same" runtime claim.
        bool close = big == 0 || gap * 10 <= big;
        add_assert("settled_method3 within 10% of settled_proposed", close,
                   "m3=" + std::to_string(settled_m3) + " prop=" + std::to_string(settled_mp));
    }

    return report;
}

std::string emit_report_table(const BenchReport& report) {
    std::ostringstream os;
    os << "network: " << report.stations << " stations, " << report.transfer_stations
       << " transfer stations, " << report.run_edges << " directed run edges (seed "
       << report.seed << ")\n";
    for (const auto& t : report.topologies)
        os << "topology " << t.mode << ": " << t.nodes << " nodes, " << t.edges << " edges, built in "
           << t.construction_nanos / 1000000.0 << " ms\n";
    os << '\n';
    os << std::left << std::setw(8) << "purpose" << std::setw(7) << "group" << std::setw(10)
       << "method" << std::right << std::setw(14) << "travel_sum_s" << std::setw(12) << "settled"
       << std::setw(12) << "relaxed" << std::setw(12) << "wall_ms" << '\n';
    for (const auto& g : report.groups)
        for (const auto& r : g.rows) {
            os << std::left << std::setw(8) << g.purpose << std::setw(7) << g.size << std::setw(10)
               << to_string(r.method) << std::right << std::setw(14) << r.travel_time_sum
               << std::setw(12) << r.settled << std::setw(12) << r.relaxed << std::setw(12)
               << std::fixed << std::setprecision(3) << r.wall_nanos / 1e6 << '\n';
            os.unsetf(std::ios::fixed);
        }
    if (!report.assertions.empty()) {
        os << '\n';
        for (const auto& a : report.assertions)
            os << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
    }
    return os.str();
}

std::string emit_report_machine(const BenchReport& report) {
    json j;
    j["schema_version"] = 1;
    j["seed"] = report.seed;
    j["environment"] = report.environment;
    j["network"] = {{"run_edges", report.run_edges},
                    {"stations", report.stations},
                    {"transfer_stations", report.transfer_stations}};
    j["topologies"] = json::array();
    for (const auto& t : report.topologies)
        j["topologies"].push_back({{"construction_nanos", t.construction_nanos},
                                   {"edges", t.edges},
                                   {"mode", t.mode},
                                   {"nodes", t.nodes}});
    j["groups"] = json::array();
    for (const auto& g : report.groups) {
        json rows = json::array();
        for (const auto& r : g.rows)
            rows.push_back({{"method", to_string(r.method)},
                            {"relaxed", r.relaxed},
                            {"settled", r.settled},
                            {"travel_time_sum", r.travel_time_sum},
                            {"wall_nanos", r.wall_nanos}});
        j["groups"].push_back({{"od_checksum", g.od_checksum},
                               {"purpose", g.purpose},
                               {"rows", rows},
                               {"size", g.size}});
    }
    j["assertions"] = json::array();
    for (const auto& a : report.assertions)
        j["assertions"].push_back({{"detail", a.detail}, {"name", a.name}, {"pass", a.pass}});
    return j.dump(2) + "\n";
}

BenchReport parse_report(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bench report: ") + e.what());
    }
    BenchReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("environment").items())
        r.environment[k] = v.get<std::string>();
    r.stations = j.at("network").at("stations").get<std::uint64_t>();
    r.transfer_stations = j.at("network").at("transfer_stations").get<std::uint64_t>();
    r.run_edges = j.at("network").at("run_edges").get<std::uint64_t>();
    for (const auto& t : j.at("topologies"))
        r.topologies.push_back({t.at("mode").get<std::string>(), t.at("nodes").get<std::uint64_t>(),
                                t.at("edges").get<std::uint64_t>(),
                                t.at("construction_nanos").get<std::uint64_t>()});
    for (const auto& g : j.at("groups")) {
        BenchGroup group;
        group.purpose = g.at("purpose").get<std::string>();
        group.size = g.at("size").get<int>();
        group.od_checksum = g.at("od_checksum").get<std::uint64_t>();
        for (const auto& row : g.at("rows")) {
            BenchRow br;
            br.method = parse_method(row.at("method").get<std::string>());
            br.travel_time_sum = row.at("travel_time_sum").get<Seconds>();
            br.settled = row.at("settled").get<std::uint64_t>();
            br.relaxed = row.at("relaxed").get<std::uint64_t>();
            br.wall_nanos = row.at("wall_nanos").get<std::uint64_t>();
            group.rows.push_back(br);
        }
        r.groups.push_back(std::move(group));
    }
    for (const auto& a : j.at("assertions"))
        r.assertions.push_back({a.at("name").get<std::string>(), a.at("pass").get<bool>(),
                                a.at("detail").get<std::string>()});
    return r;
}

}  // namespace aten
