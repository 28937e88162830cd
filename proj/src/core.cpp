#include "aten/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace aten {

const char* to_string(Direction d) {
    switch (d) {
        case Direction::None: return "none";
        case Direction::Up: return "up";
        case Direction::Down: return "down";
    }
    return "?";
}

bool TransferSpec::same_position(LineId line) const {
    for (const auto& f : lines)
        if (f.line == line) return f.same_position;
    return false;
}

bool TransferSpec::has_line(LineId line) const {
    for (const auto& f : lines)
        if (f.line == line) return true;
    return false;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& f : findings) os << f.code << ": " << f.message << "\n";
    return os.str();
}

TransitNetwork::TransitNetwork(std::vector<Station> stations, std::vector<Line> lines,
                               std::vector<TransferSpec> transfer_specs)
    : stations_(std::move(stations)), lines_(std::move(lines)), specs_(std::move(transfer_specs)) {
    for (std::size_t i = 0; i < stations_.size(); ++i)
        station_index_.emplace(stations_[i].id, i);
    for (std::size_t i = 0; i < lines_.size(); ++i)
        line_index_.emplace(lines_[i].id, i);
    for (std::size_t i = 0; i < specs_.size(); ++i)
        spec_index_.emplace(specs_[i].station, i);

    for (const auto& ln : lines_) {
        auto& pos = line_positions_[ln.id];
        for (std::size_t i = 0; i < ln.stations.size(); ++i)
            pos.emplace(ln.stations[i], i);
        for (StationId s : ln.stations) {
            auto& ls = station_lines_[s];
            if (std::find(ls.begin(), ls.end(), ln.id) == ls.end()) ls.push_back(ln.id);
        }
        // Adjacency skips segments whose run-time entry is absent; validate()
        // reports the size mismatch.
        for (std::size_t i = 0; i + 1 < ln.stations.size(); ++i) {
            StationId a = ln.stations[i];
            StationId b = ln.stations[i + 1];
            if (i < ln.run_up.size())
                adjacency_[a].push_back({a, b, ln.id, Direction::Up, ln.run_up[i]});
            if (i < ln.run_down.size())
                adjacency_[b].push_back({b, a, ln.id, Direction::Down, ln.run_down[i]});
        }
    }
    for (auto& [_, ls] : station_lines_) std::sort(ls.begin(), ls.end());
    for (auto& [_, edges] : adjacency_) {
        std::sort(edges.begin(), edges.end(), [](const RunEdge& x, const RunEdge& y) {
            if (x.line != y.line) return x.line < y.line;
            if (x.dir != y.dir) return x.dir < y.dir;
            return x.to < y.to;
        });
    }
}

bool TransitNetwork::has_station(StationId s) const {
    return station_index_.count(s) != 0;
}

const Station& TransitNetwork::station(StationId s) const {
    auto it = station_index_.find(s);
    if (it == station_index_.end())
        throw UnknownStationError("unknown station id " + std::to_string(s));
    return stations_[it->second];
}

const Line* TransitNetwork::find_line(LineId l) const {
    auto it = line_index_.find(l);
    return it == line_index_.end() ? nullptr : &lines_[it->second];
}

const Line& TransitNetwork::line(LineId l) const {
    const Line* ln = find_line(l);
    if (!ln) throw Error("unknown line id " + std::to_string(l));
    return *ln;
}

std::span<const RunEdge> TransitNetwork::neighbors(StationId s) const {
    if (!has_station(s))
        throw UnknownStationError("unknown station id " + std::to_string(s));
    auto it = adjacency_.find(s);
    if (it == adjacency_.end()) return {};
    return {it->second.data(), it->second.size()};
}

std::span<const LineId> TransitNetwork::lines_at(StationId s) const {
    auto it = station_lines_.find(s);
    if (it == station_lines_.end()) return {};
    return {it->second.data(), it->second.size()};
}

const TransferSpec* TransitNetwork::transfer_spec(StationId s) const {
    auto it = spec_index_.find(s);
    return it == spec_index_.end() ? nullptr : &specs_[it->second];
}

std::optional<std::size_t> TransitNetwork::index_on_line(LineId l, StationId s) const {
    auto lit = line_positions_.find(l);
    if (lit == line_positions_.end()) return std::nullopt;
    auto sit = lit->second.find(s);
    if (sit == lit->second.end()) return std::nullopt;
    return sit->second;
}

Direction TransitNetwork::platform_key(StationId at, LineId line, StationId adjacent) const {
    const TransferSpec* spec = transfer_spec(at);
    if (spec && spec->same_position(line)) return Direction::None;
    auto at_idx = index_on_line(line, at);
    auto adj_idx = index_on_line(line, adjacent);
    if (!at_idx || !adj_idx)
        throw Error("station " + std::to_string(adjacent) + " is not adjacent to " +
                    std::to_string(at) + " on line " + std::to_string(line));
    return *adj_idx > *at_idx ? Direction::Up : Direction::Down;
}

Seconds TransitNetwork::transfer_seconds(StationId at, LineId from_line, StationId from_adjacent,
                                         LineId to_line, StationId to_adjacent) const {
    if (from_line == to_line) return 0;
    const TransferSpec* spec = transfer_spec(at);
    if (!spec)
        throw Error("station " + std::to_string(at) + " has no transfer table");
    TransferKey key{from_line, platform_key(at, from_line, from_adjacent), to_line,
                    platform_key(at, to_line, to_adjacent)};
    auto it = spec->times.find(key);
    if (it == spec->times.end())
        throw Error("incomplete transfer table at station " + std::to_string(at) + ": missing (" +
                    std::to_string(key.from_line) + "," + to_string(key.from_dir) + ") -> (" +
                    std::to_string(key.to_line) + "," + to_string(key.to_dir) + ")");
    return it->second;
}

std::size_t TransitNetwork::directed_run_edge_count() const {
    std::size_t n = 0;
    for (const auto& [_, edges] : adjacency_) n += edges.size();
    return n;
}

namespace {

void add(ValidationReport& rep, std::string code, std::string message) {
    rep.findings.push_back({std::move(code), std::move(message)});
}

// Keys a same-position line may appear under.
std::vector<Direction> valid_keys(const TransferSpec& spec, LineId line) {
    if (spec.same_position(line)) return {Direction::None};
    return {Direction::Up, Direction::Down};
}

}  // namespace

ValidationReport validate(const TransitNetwork& net) {
    ValidationReport rep;

    std::set<StationId> station_ids;
    for (const auto& s : net.stations()) {
        if (!station_ids.insert(s.id).second)
            add(rep, "duplicate station id", "station id " + std::to_string(s.id) + " occurs twice");
    }

    std::set<LineId> line_ids;
    for (const auto& ln : net.lines()) {
        std::string where = "line " + std::to_string(ln.id);
        if (!line_ids.insert(ln.id).second)
            add(rep, "duplicate line id", where + " occurs twice");
        if (ln.stations.size() < 2)
            add(rep, "short line", where + " has fewer than 2 stations");
        std::set<StationId> seen;
        for (StationId s : ln.stations) {
            if (!net.has_station(s))
                add(rep, "unknown station id", where + " references station " + std::to_string(s));
            if (!seen.insert(s).second)
                add(rep, "repeated station on line",
                    where + " visits station " + std::to_string(s) + " twice");
        }
        std::size_t segs = ln.stations.size() < 2 ? 0 : ln.stations.size() - 1;
        if (ln.run_up.size() != segs || ln.run_down.size() != segs)
            add(rep, "run time array size", where + " run-time arrays do not match segment count");
        for (const auto* arr : {&ln.run_up, &ln.run_down})
            for (Seconds t : *arr)
                if (t <= 0)
                    add(rep, "nonpositive run time",
                        where + " has a segment run time of " + std::to_string(t));
    }

    for (const auto& s : net.stations())
        if (net.lines_at(s.id).empty())
            add(rep, "dangling station",
                "station " + std::to_string(s.id) + " (" + s.name + ") is on no line");

    // Transfer specs: exactly the multi-line stations, matching line sets,
    // total tables with valid keys and nonnegative times.
    std::set<StationId> spec_stations;
    for (const auto& spec : net.transfer_specs()) {
        std::string where = "transfer spec of station " + std::to_string(spec.station);
        if (!spec_stations.insert(spec.station).second)
            add(rep, "duplicate transfer spec", where + " occurs twice");
        if (!net.has_station(spec.station)) {
            add(rep, "unknown station id", where + " references a missing station");
            continue;
        }
        auto lines_here = net.lines_at(spec.station);
        if (lines_here.size() < 2)
            add(rep, "unexpected transfer spec",
                where + ": station lies on fewer than 2 lines");

        std::set<LineId> flag_lines;
        for (const auto& f : spec.lines) flag_lines.insert(f.line);
        std::set<LineId> actual(lines_here.begin(), lines_here.end());
        if (flag_lines != actual)
            add(rep, "transfer spec line mismatch",
                where + ": flagged lines differ from the lines serving the station");

        for (const auto& [key, seconds] : spec.times) {
            if (seconds < 0)
                add(rep, "negative transfer time",
                    where + ": entry with " + std::to_string(seconds) + "s");
            if (key.from_line == key.to_line)
                add(rep, "unexpected transfer entry", where + ": self-transfer entry stored");
            for (LineId l : {key.from_line, key.to_line})
                if (!actual.count(l))
                    add(rep, "unexpected transfer entry",
                        where + ": entry references line " + std::to_string(l) +
                            " not serving the station");
        }
        for (LineId from : actual) {
            for (LineId to : actual) {
                if (from == to) continue;
                for (Direction fd : valid_keys(spec, from)) {
                    for (Direction td : valid_keys(spec, to)) {
                        TransferKey key{from, fd, to, td};
                        if (!spec.times.count(key))
                            add(rep, "incomplete transfer table",
                                where + ": missing (" + std::to_string(from) + "," +
                                    to_string(fd) + ") -> (" + std::to_string(to) + "," +
                                    to_string(td) + ")");
                    }
                }
            }
        }
        for (const auto& [key, _] : spec.times) {
            auto fk = valid_keys(spec, key.from_line);
            auto tk = valid_keys(spec, key.to_line);
            bool from_ok = std::find(fk.begin(), fk.end(), key.from_dir) != fk.end();
            bool to_ok = std::find(tk.begin(), tk.end(), key.to_dir) != tk.end();
            if (key.from_line != key.to_line && (!from_ok || !to_ok))
                add(rep, "unexpected transfer entry",
                    where + ": key direction does not match the line's position flag");
        }
    }
    for (const auto& s : net.stations()) {
        bool multi = net.lines_at(s.id).size() >= 2;
        bool has_spec = spec_stations.count(s.id) != 0;
        if (multi && !has_spec)
            add(rep, "missing transfer spec",
                "station " + std::to_string(s.id) + " lies on >= 2 lines but has no transfer spec");
        if (!multi && has_spec)
            add(rep, "unexpected transfer spec",
                "station " + std::to_string(s.id) + " lies on < 2 lines but has a transfer spec");
    }

    return rep;
}

}  // namespace aten
