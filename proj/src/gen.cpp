#include "aten/gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "aten/expand.hpp"
#include "aten/solve.hpp"

namespace aten {

namespace {

// splitmix64; self-contained so byte-level determinism does not depend on
// standard-library distribution internals.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Inclusive bounds; modulo bias is irrelevant here.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(v.size()) - 1))];
    }
};

void check_params(const GenParams& p) {
    auto fail = [](const std::string& msg) { throw InfeasibleParamsError(msg); };
    if (p.line_count < 1) fail("line_count must be >= 1");
    if (p.min_stations_per_line < 2) fail("min_stations_per_line must be >= 2");
    if (p.max_stations_per_line < p.min_stations_per_line) fail("empty stations_per_line range");
    if (p.transfer_station_fraction < 0 || p.transfer_station_fraction > 1)
        fail("transfer_station_fraction must be in [0,1]");
    if (p.same_position_probability < 0 || p.same_position_probability > 1)
        fail("same_position_probability must be in [0,1]");
    if (p.adversarial_fraction < 0 || p.adversarial_fraction > 1)
        fail("adversarial_fraction must be in [0,1]");
    if (p.run_time_min <= 0 || p.run_time_max < p.run_time_min) fail("empty run_time range");
    if (p.transfer_time_min < 0 || p.transfer_time_max < p.transfer_time_min)
        fail("empty transfer_time range");
    if ((p.station_total == 0) != (p.transfer_total == 0))
        fail("station_total and transfer_total must be set together");
    if (p.adversarial_fraction > 0 && p.transfer_time_max < p.transfer_time_min + 2)
        fail("adversarial tuning needs a transfer_time spread of at least 2");
    if (p.adversarial_fraction > 0 && p.run_time_max < p.run_time_min + 1)
        fail("adversarial tuning needs a run_time spread of at least 1");
}

struct Draft {
    std::vector<Station> stations;
    std::vector<Line> lines;
    std::map<StationId, std::vector<LineId>> lines_at;
    std::map<StationId, std::map<LineId, bool>> same_position;
    std::map<StationId, std::map<TransferKey, Seconds>> times;

    StationId add_station() {
        StationId id = static_cast<StationId>(stations.size() + 1);
        stations.push_back({id, "S" + std::to_string(id)});
        return id;
    }

    std::vector<StationId> transfer_stations() const {
        std::vector<StationId> out;
        for (const auto& [s, ls] : lines_at)
            if (ls.size() >= 2) out.push_back(s);
        return out;
    }

    TransitNetwork freeze() const {
        std::vector<TransferSpec> specs;
        for (const auto& [s, ls] : lines_at) {
            if (ls.size() < 2) continue;
            TransferSpec sp;
            sp.station = s;
            for (LineId l : ls) sp.lines.push_back({l, same_position.at(s).at(l)});
            sp.times = times.at(s);
            specs.push_back(std::move(sp));
        }
        // Crossing rewires can orphan a fresh station; drop those.
        std::vector<Station> kept;
        for (const auto& st : stations) {
            auto it = lines_at.find(st.id);
            if (it != lines_at.end() && !it->second.empty()) kept.push_back(st);
        }
        return TransitNetwork(std::move(kept), lines, std::move(specs));
    }
};

// Lays out lines as crossing chains. Every line after the first shares the
// planned number of stations with earlier lines, which keeps the network
// connected and makes transfer stations structural.
Draft build_topology(const GenParams& p, Rng& rng, bool adversarial) {
    Draft d;

    int line_count = p.line_count;
    std::vector<int> sizes;
    int slots = 0;
    if (p.station_total > 0) {
        slots = p.station_total + p.transfer_total;
        int base = slots / line_count;
        int rem = slots % line_count;
        for (int i = 0; i < line_count; ++i) {
            int n = base + (i < rem ? 1 : 0);
            if (n < p.min_stations_per_line || n > p.max_stations_per_line)
                throw InfeasibleParamsError(
                    "station_total is not reachable with the stations_per_line range");
            sizes.push_back(n);
        }
    } else {
        for (int i = 0; i < line_count; ++i) {
            sizes.push_back(
                static_cast<int>(rng.range(p.min_stations_per_line, p.max_stations_per_line)));
            slots += sizes.back();
        }
    }

    int crossings;
    if (p.transfer_total > 0) {
        crossings = p.transfer_total;
    } else {
        double f = p.transfer_station_fraction;
        crossings = static_cast<int>(std::llround(f * slots / (1.0 + f)));
        // Both failure patterns need at least two crossings to exist.
        if (adversarial && crossings < 2) crossings = 2;
    }
    if (crossings > 0 && line_count < 2)
        throw InfeasibleParamsError("more transfer stations than crossings: a single line cannot cross");
    if (crossings < line_count - 1)
        throw InfeasibleParamsError("not enough transfer stations to connect " +
                                    std::to_string(line_count) + " lines");

    // Crossings per line: one to stay connected, the rest spread by size.
    std::vector<int> cross_per_line(static_cast<std::size_t>(line_count), 0);
    int assigned = 0;
    for (int i = 1; i < line_count; ++i) {
        cross_per_line[static_cast<std::size_t>(i)] = 1;
        ++assigned;
    }
    int guard = 0;
    while (assigned < crossings) {
        int i = line_count > 1 ? static_cast<int>(rng.range(1, line_count - 1)) : 0;
        if (cross_per_line[static_cast<std::size_t>(i)] < sizes[static_cast<std::size_t>(i)] - 1) {
            ++cross_per_line[static_cast<std::size_t>(i)];
            ++assigned;
        }
        if (++guard > 100000)
            throw InfeasibleParamsError("more transfer stations than crossings available");
    }

    bool allow_three_line = p.station_total == 0;
    for (int li = 0; li < line_count; ++li) {
        Line ln;
        ln.id = static_cast<LineId>(li + 1);
        ln.name = "L" + std::to_string(ln.id);
        int n = sizes[static_cast<std::size_t>(li)];

        std::set<int> cross_slots;
        int want = cross_per_line[static_cast<std::size_t>(li)];
        // Prefer interior slots so crossings carry pass-through traffic;
        // fall back to the whole line when they run out.
        int lo = n > 2 && want <= n - 2 ? 1 : 0;
        int hi = n > 2 && want <= n - 2 ? n - 2 : n - 1;
        int slot_guard = 0;
        while (static_cast<int>(cross_slots.size()) < want) {
            cross_slots.insert(static_cast<int>(rng.range(lo, hi)));
            if (++slot_guard > 100000)
                throw InfeasibleParamsError("cannot place crossings on line " +
                                            std::to_string(ln.id));
        }

        std::set<StationId> used_here;
        for (int pos = 0; pos < n; ++pos) {
            StationId sid;
            if (cross_slots.count(pos)) {
                std::vector<StationId> pool;
                for (const auto& st : d.stations) {
                    auto it = d.lines_at.find(st.id);
                    std::size_t deg = it == d.lines_at.end() ? 0 : it->second.size();
                    if (used_here.count(st.id)) continue;
                    if (deg == 1) pool.push_back(st.id);
                }
                if (allow_three_line && rng.chance(0.25)) {
                    std::vector<StationId> upgrades;
                    for (const auto& st : d.stations) {
                        auto it = d.lines_at.find(st.id);
                        if (it != d.lines_at.end() && it->second.size() == 2 &&
                            !used_here.count(st.id))
                            upgrades.push_back(st.id);
                    }
                    // Keep at least one two-line station around; the
                    // adversarial patterns need one.
                    if (upgrades.size() >= 2) pool = std::move(upgrades);
                }
                if (pool.empty())
                    throw InfeasibleParamsError("more transfer stations than crossings available");
                sid = rng.pick(pool);
            } else {
                sid = d.add_station();
            }
            used_here.insert(sid);
            ln.stations.push_back(sid);
            d.lines_at[sid].push_back(ln.id);
        }
        for (int k = 0; k + 1 < n; ++k) {
            ln.run_up.push_back(rng.range(p.run_time_min, p.run_time_max));
            ln.run_down.push_back(rng.range(p.run_time_min, p.run_time_max));
        }
        d.lines.push_back(std::move(ln));
    }
    return d;
}

std::vector<Direction> keys_for(const Draft& d, StationId s, LineId line) {
    if (d.same_position.at(s).at(line)) return {Direction::None};
    return {Direction::Up, Direction::Down};
}

void fill_tables(const GenParams& p, Rng& rng, Draft& d) {
    for (StationId s : d.transfer_stations()) {
        for (LineId l : d.lines_at.at(s))
            d.same_position[s][l] = rng.chance(p.same_position_probability);
        auto& table = d.times[s];
        const auto& ls = d.lines_at.at(s);
        for (LineId from : ls)
            for (LineId to : ls) {
                if (from == to) continue;
                for (Direction fd : keys_for(d, s, from))
                    for (Direction td : keys_for(d, s, to))
                        table[{from, fd, to, td}] =
                            rng.range(p.transfer_time_min, p.transfer_time_max);
            }
    }
}

// Replaces each station's table with its own shortest-walk closure so a
// chain of platform walks can never undercut the direct entry. Keeps the
// exact-optimum methods in lockstep on every generated network.
void close_tables(Draft& d) {
    for (auto& [s, table] : d.times) {
        std::vector<std::pair<LineId, Direction>> keys;
        for (LineId l : d.lines_at.at(s))
            for (Direction k : keys_for(d, s, l)) keys.push_back({l, k});
        std::size_t n = keys.size();
        constexpr Seconds inf = std::numeric_limits<Seconds>::max() / 4;
        std::vector<std::vector<Seconds>> dist(n, std::vector<Seconds>(n, inf));
        for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (keys[i].first == keys[j].first) continue;
                dist[i][j] = table.at(
                    {keys[i].first, keys[i].second, keys[j].first, keys[j].second});
            }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (keys[i].first != keys[j].first)
                    table[{keys[i].first, keys[i].second, keys[j].first, keys[j].second}] =
                        dist[i][j];
    }
}

struct PatternOds {
    std::vector<std::pair<StationId, StationId>> trap; // node-penalty overshoot
    std::vector<std::pair<StationId, StationId>> leak; // through-edge undershoot
    std::set<StationId> tuned;                         // stations already rewritten
};

StationId neighbor_on(const Draft& d, LineId line, StationId s, int offset) {
    const Line& ln = d.lines[line - 1];
    auto it = std::find(ln.stations.begin(), ln.stations.end(), s);
    auto idx = static_cast<int>(it - ln.stations.begin());
    int j = idx + offset;
    if (j < 0 || j >= static_cast<int>(ln.stations.size())) return 0;
    return ln.stations[static_cast<std::size_t>(j)];
}

// Plants the ring-expansion leak: one split-position station whose far-side
// walk is much cheaper than the near-side walk toward the same platform.
// Works for two- and three-line stations; every remaining pair gets the
// expensive walk, which composition cannot undercut.
bool plant_through_leak(const GenParams& p, Draft& d, StationId s, PatternOds& ods) {
    const auto& ls = d.lines_at.at(s);
    if (ls.size() < 2 || ls.size() > 3 || ods.tuned.count(s)) return false;
    for (LineId i : ls) {
        for (LineId j : ls) {
            if (i == j) continue;
            StationId up_i = neighbor_on(d, i, s, +1);
            StationId down_i = neighbor_on(d, i, s, -1);
            StationId b = neighbor_on(d, j, s, +1);
            if (!b || b == down_i) b = neighbor_on(d, j, s, -1);
            if (!up_i || !down_i || !b || b == down_i) continue;

            for (LineId l : ls) d.same_position[s][l] = false;
            auto& table = d.times[s];
            table.clear();
            Seconds lo = p.transfer_time_min;
            Seconds hi = p.transfer_time_max;
            for (LineId from : ls)
                for (LineId to : ls) {
                    if (from == to) continue;
                    for (Direction fd : {Direction::Up, Direction::Down})
                        for (Direction td : {Direction::Up, Direction::Down})
                            table[{from, fd, to, td}] = hi;
                }
            // Arriving from down_i the legal walk costs hi, but the through
            // link reaches the up-side platform whose walk costs lo.
            for (Direction td : {Direction::Up, Direction::Down})
                table[{i, Direction::Up, j, td}] = lo;
            ods.leak.push_back({down_i, b});
            ods.tuned.insert(s);
            return true;
        }
    }
    return false;
}

// Plants the parent-capture trap on a pair of lines sharing two stations:
// the approach via one line wins the race to the shared station but pays a
// steep walk onto the continuing line.
bool plant_greedy_trap(const GenParams& p, Draft& d, PatternOds& ods) {
    for (std::size_t a = 0; a < d.lines.size(); ++a) {
        for (std::size_t b = 0; b < d.lines.size(); ++b) {
            if (a == b) continue;
            Line& la = d.lines[a];
            Line& lb = d.lines[b];
            std::vector<std::pair<int, int>> shared; // (idx on a, idx on b)
            for (int i = 0; i < static_cast<int>(la.stations.size()); ++i)
                for (int k = 0; k < static_cast<int>(lb.stations.size()); ++k)
                    if (la.stations[static_cast<std::size_t>(i)] ==
                        lb.stations[static_cast<std::size_t>(k)])
                        shared.push_back({i, k});
            if (shared.size() < 2) continue;
            for (std::size_t x = 0; x + 1 < shared.size(); ++x) {
                auto [pa, pb] = shared[x];
                auto [xa, xb] = shared[x + 1];
                StationId capture = la.stations[static_cast<std::size_t>(xa)];
                StationId src = la.stations[static_cast<std::size_t>(pa)];
                // Target just beyond the capture station on line b.
                int step = xb > pb ? +1 : -1;
                StationId dst = neighbor_on(d, lb.id, capture, step);
                if (!dst || dst == src) continue;
                if (d.lines_at.at(capture).size() != 2 || ods.tuned.count(capture)) continue;

                // Route via line a arrives first; via line b arrives later
                // but continues free of charge.
                int ka = std::abs(xa - pa);
                int kb = std::abs(xb - pb);
                if (ka > kb) continue;
                // The capture penalty must outweigh the arrival-time gap.
                if (p.transfer_time_max <=
                    static_cast<Seconds>(kb - ka) * p.run_time_min + kb)
                    continue;
                auto set_segment = [&](Line& ln, int from_idx, int to_idx, Seconds up_val,
                                       Seconds down_val) {
                    int lo = std::min(from_idx, to_idx);
                    int hi = std::max(from_idx, to_idx);
                    for (int k = lo; k < hi; ++k) {
                        ln.run_up[static_cast<std::size_t>(k)] = up_val;
                        ln.run_down[static_cast<std::size_t>(k)] = down_val;
                    }
                };
                set_segment(la, pa, xa, p.run_time_min, p.run_time_min);
                set_segment(lb, pb, xb, p.run_time_min + 1, p.run_time_min + 1);

                for (LineId l : d.lines_at.at(capture)) d.same_position[capture][l] = true;
                auto& table = d.times[capture];
                table.clear();
                table[{la.id, Direction::None, lb.id, Direction::None}] = p.transfer_time_max;
                table[{lb.id, Direction::None, la.id, Direction::None}] = p.transfer_time_max;

                ods.trap.push_back({src, dst});
                ods.tuned.insert(capture);
                return true;
            }
        }
    }
    return false;
}

// Confirms with the real solvers that at least one planted OD exhibits
// each failure mode on the final network.
bool verify_patterns(const TransitNetwork& net, const PatternOds& ods) {
    if (ods.trap.empty() || ods.leak.empty()) return false;
    bool trap_ok = false;
    for (auto [s, e] : ods.trap) {
        try {
            if (method1(net, s, e).total > method2(net, s, e).total) {
                trap_ok = true;
                break;
            }
        } catch (const Error&) {
        }
    }
    if (!trap_ok) return false;
    ExpandedNetwork ring = build_method3(net);
    for (auto [s, e] : ods.leak) {
        try {
            if (method3(ring, s, e).total < method2(net, s, e).total) return true;
        } catch (const Error&) {
        }
    }
    return false;
}

// A double crossing is required for the parent-capture trap; fold one into
// the plan by rerouting one crossing. Only a line's own crossings (shared
// stations whose partner lines were all built earlier) may move: the line
// keeps its first own crossing and every other line keeps all of its own,
// so the network stays connected.
void force_double_crossing(Draft& d, Rng& rng, bool exact_totals) {
    for (auto it = d.lines.rbegin(); it != d.lines.rend(); ++it) {
        Line& ln = *it;
        std::vector<int> own;
        for (int i = 0; i < static_cast<int>(ln.stations.size()); ++i) {
            const auto& ls = d.lines_at.at(ln.stations[static_cast<std::size_t>(i)]);
            if (ls.size() < 2) continue;
            bool all_earlier = true;
            for (LineId l : ls)
                if (l > ln.id) all_earlier = false;
            if (all_earlier) own.push_back(i);
        }
        if (own.size() < 2) continue;
        StationId first = ln.stations[static_cast<std::size_t>(own[0])];
        int second = own[1];
        StationId old = ln.stations[static_cast<std::size_t>(second)];
        LineId other = 0;
        for (LineId l : d.lines_at.at(first))
            if (l != ln.id) other = l;
        if (!other) continue;
        const Line& lo = d.lines[other - 1];
        std::vector<StationId> candidates;
        for (StationId s : lo.stations) {
            if (s == first) continue;
            if (std::find(ln.stations.begin(), ln.stations.end(), s) != ln.stations.end())
                continue;
            if (d.lines_at.at(s).size() != 1) continue;
            candidates.push_back(s);
        }
        if (candidates.empty()) continue;
        StationId repl = rng.pick(candidates);

        auto& old_lines = d.lines_at.at(old);
        old_lines.erase(std::remove(old_lines.begin(), old_lines.end(), ln.id), old_lines.end());
        ln.stations[static_cast<std::size_t>(second)] = repl;
        d.lines_at[repl].push_back(ln.id);
        return;
    }

    // No line carries two crossings; convert one fresh interior station of
    // the last line into a second crossing onto a line it already meets.
    // Changes the transfer count by one, so only used in fraction mode.
    if (exact_totals) return;
    for (auto it = d.lines.rbegin(); it != d.lines.rend(); ++it) {
        Line& ln = *it;
        LineId other = 0;
        for (StationId s : ln.stations)
            for (LineId l : d.lines_at.at(s))
                if (l != ln.id) other = l;
        if (!other) continue;
        const Line& lo = d.lines[other - 1];
        std::vector<StationId> targets;
        for (StationId s : lo.stations)
            if (d.lines_at.at(s).size() == 1 &&
                std::find(ln.stations.begin(), ln.stations.end(), s) == ln.stations.end())
                targets.push_back(s);
        if (targets.empty()) continue;
        for (int i = 1; i + 1 < static_cast<int>(ln.stations.size()); ++i) {
            StationId old = ln.stations[static_cast<std::size_t>(i)];
            if (d.lines_at.at(old).size() != 1) continue;
            StationId repl = rng.pick(targets);
            auto& old_lines = d.lines_at.at(old);
            old_lines.erase(std::remove(old_lines.begin(), old_lines.end(), ln.id),
                            old_lines.end());
            ln.stations[static_cast<std::size_t>(i)] = repl;
            d.lines_at[repl].push_back(ln.id);
            return;
        }
    }
}

bool has_double_crossing(const Draft& d) {
    for (std::size_t a = 0; a < d.lines.size(); ++a)
        for (std::size_t b = a + 1; b < d.lines.size(); ++b) {
            int shared = 0;
            for (StationId s : d.lines[a].stations)
                if (std::find(d.lines[b].stations.begin(), d.lines[b].stations.end(), s) !=
                    d.lines[b].stations.end())
                    ++shared;
            if (shared >= 2) return true;
        }
    return false;
}

TransitNetwork generate_attempt(const GenParams& p, std::uint64_t attempt_seed, bool adversarial) {
    Rng rng(attempt_seed);
    Draft d = build_topology(p, rng, adversarial);

    if (adversarial && !has_double_crossing(d))
        force_double_crossing(d, rng, p.station_total > 0);

    fill_tables(p, rng, d);

    PatternOds ods;
    if (adversarial) {
        plant_greedy_trap(p, d, ods);
        auto transfers = d.transfer_stations();
        std::size_t want =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                         p.adversarial_fraction * transfers.size())));
        // Two-line stations first so multi-line ones keep their drawn flags
        // whenever the quota allows.
        for (int pass = 0; pass < 2; ++pass)
            for (StationId s : transfers) {
                if (ods.leak.size() >= want) break;
                if ((d.lines_at.at(s).size() == 2) == (pass == 0))
                    plant_through_leak(p, d, s, ods);
            }
    }

    close_tables(d);
    TransitNetwork net = d.freeze();

    ValidationReport rep = validate(net);
    if (!rep.ok()) throw Error("generator produced an invalid network:\n" + rep.summary());

    if (adversarial && !verify_patterns(net, ods))
        throw InfeasibleParamsError("adversarial patterns did not verify");
    return net;
}

}  // namespace

TransitNetwork generate(const GenParams& params) {
    check_params(params);
    bool adversarial = params.adversarial_fraction > 0;

    std::string last_error;
    for (std::uint64_t attempt = 0; attempt < 24; ++attempt) {
        std::uint64_t attempt_seed = params.seed + attempt * 0x9e3779b97f4a7c15ULL;
        try {
            return generate_attempt(params, attempt_seed, adversarial);
        } catch (const InfeasibleParamsError& e) {
            last_error = e.what();
        }
    }
    throw InfeasibleParamsError("generation failed after bounded retries: " + last_error);
}

GenParams beijing_scale_preset(std::uint64_t seed) {
    GenParams p;
    p.seed = seed;
    p.line_count = 35;
    p.min_stations_per_line = 10;
    p.max_stations_per_line = 16;
    p.transfer_station_fraction = 0.16;
    p.same_position_probability = 0.5;
    p.run_time_min = 90;
    p.run_time_max = 300;
    p.transfer_time_min = 60;
    p.transfer_time_max = 420;
    p.adversarial_fraction = 0.1;
    p.station_total = 380;
    p.transfer_total = 61;
    return p;
}

GenParams small_preset(std::uint64_t seed) {
    GenParams p;
    p.seed = seed;
    p.line_count = 2;
    p.min_stations_per_line = 3;
    p.max_stations_per_line = 6;
    p.transfer_station_fraction = 0.2;
    p.same_position_probability = 0.5;
    p.run_time_min = 60;
    p.run_time_max = 240;
    p.transfer_time_min = 30;
    p.transfer_time_max = 240;
    return p;
}

GenParams medium_preset(std::uint64_t seed) {
    GenParams p;
    p.seed = seed;
    p.line_count = 5;
    p.min_stations_per_line = 6;
    p.max_stations_per_line = 12;
    p.transfer_station_fraction = 0.18;
    p.same_position_probability = 0.5;
    p.run_time_min = 60;
    p.run_time_max = 300;
    p.transfer_time_min = 30;
    p.transfer_time_max = 300;
    p.adversarial_fraction = 0.25;
    return p;
}

}  // namespace aten
