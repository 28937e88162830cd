#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace aten {

using StationId = std::uint32_t;
using LineId = std::uint32_t;
using Seconds = std::int64_t;

// Travel orientation along a line's station sequence. Up follows the
// sequence forward; None is used as a transfer-table key when a line's
// boarding points coincide for both orientations.
enum class Direction : std::uint8_t { None = 0, Up = 1, Down = 2 };

const char* to_string(Direction d);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownStationError : Error {
    using Error::Error;
};

struct UnreachableError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct InfeasibleParamsError : Error {
    using Error::Error;
};

struct Station {
    StationId id = 0;
    std::string name;
};

// Ordered station sequence with per-segment run times. run_up[k] is the
// time from stations[k] to stations[k+1]; run_down[k] the reverse. The two
// may differ.
struct Line {
    LineId id = 0;
    std::string name;
    std::vector<StationId> stations;
    std::vector<Seconds> run_up;
    std::vector<Seconds> run_down;
};

// Key of one directed transfer-time entry. Directions are platform keys:
// None for a same-position line, Up/Down for the two boarding sides of a
// split-position line (Up = the side adjoining the line's forward
// neighbor).
struct TransferKey {
    LineId from_line = 0;
    Direction from_dir = Direction::None;
    LineId to_line = 0;
    Direction to_dir = Direction::None;

    auto operator<=>(const TransferKey&) const = default;
};

// Transfer data of one station on >= 2 lines: the per-line same-position
// flag and the direction-specific walk-time table. The table must be total
// over every ordered pair of distinct lines and every valid key pair.
// Same-line movements are never stored; continuing on a line costs 0.
struct TransferSpec {
    struct LineFlag {
        LineId line = 0;
        bool same_position = false;
    };

    StationId station = 0;
    std::vector<LineFlag> lines;
    std::map<TransferKey, Seconds> times;

    bool same_position(LineId line) const;
    bool has_line(LineId line) const;
};

// One directed run edge as exposed by TransitNetwork::neighbors.
struct RunEdge {
    StationId from = 0;
    StationId to = 0;
    LineId line = 0;
    Direction dir = Direction::Up;
    Seconds seconds = 0;
};

struct ValidationFinding {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;

    bool ok() const { return findings.empty(); }
    std::string summary() const;
};

// Immutable transit network: stations, lines, transfer specs and a derived
// adjacency structure. Construction is permissive (validate() reports
// structural defects instead of the constructor throwing); query methods
// never mutate, so concurrent reads are safe.
class TransitNetwork {
public:
    TransitNetwork() = default;
    TransitNetwork(std::vector<Station> stations, std::vector<Line> lines,
                   std::vector<TransferSpec> transfer_specs);

    const std::vector<Station>& stations() const { return stations_; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<TransferSpec>& transfer_specs() const { return specs_; }

    bool has_station(StationId s) const;
    const Station& station(StationId s) const;
    const Line* find_line(LineId l) const;
    const Line& line(LineId l) const;

    // Run edges out of s, ordered by (line, direction).
    std::span<const RunEdge> neighbors(StationId s) const;

    // Lines serving s, ascending.
    std::span<const LineId> lines_at(StationId s) const;

    // Null when s is not a transfer station.
    const TransferSpec* transfer_spec(StationId s) const;
    bool is_transfer(StationId s) const { return transfer_spec(s) != nullptr; }

    std::optional<std::size_t> index_on_line(LineId l, StationId s) const;

    // Platform key of `line` at transfer station `at` on the side of
    // `adjacent` (the station a rider alights from or departs toward).
    // None for same-position lines; otherwise Up when `adjacent` is the
    // line's forward neighbor of `at`, Down when it is the backward one.
    Direction platform_key(StationId at, LineId line, StationId adjacent) const;

    // Walk-time charged when switching from `from_line` (reached via
    // neighbor `from_adjacent`) to `to_line` (left toward `to_adjacent`)
    // at station `at`. Zero when the lines are equal. Throws Error when a
    // required table entry is missing (a validation defect).
    Seconds transfer_seconds(StationId at, LineId from_line, StationId from_adjacent,
                             LineId to_line, StationId to_adjacent) const;

    std::size_t directed_run_edge_count() const;

private:
    std::vector<Station> stations_;
    std::vector<Line> lines_;
    std::vector<TransferSpec> specs_;

    std::unordered_map<StationId, std::size_t> station_index_;
    std::unordered_map<LineId, std::size_t> line_index_;
    std::unordered_map<StationId, std::size_t> spec_index_;
    std::unordered_map<StationId, std::vector<RunEdge>> adjacency_;
    std::unordered_map<StationId, std::vector<LineId>> station_lines_;
    std::unordered_map<LineId, std::unordered_map<StationId, std::size_t>> line_positions_;

    friend ValidationReport validate(const TransitNetwork&);
};

// Checks every structural invariant and reports all violations found:
// id uniqueness, line shape, run-time positivity, transfer-spec presence
// (exactly the multi-line stations), table totality and key validity.
ValidationReport validate(const TransitNetwork& net);

}  // namespace aten
