#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aten/core.hpp"
#include "aten/gen.hpp"
#include "aten/solve.hpp"

namespace aten {

// Comparative experiment: the same OD groups fed to every selected method,
// with travel-time sums and traversed-object counts per group plus timed
// groups measured as the median of repeated whole-group runs.
struct BenchPlan {
    std::filesystem::path network_file; // empty: generate from params
    GenParams params = small_preset();
    std::vector<Method> methods = {Method::Method1, Method::Method2, Method::Method3,
                                   Method::Proposed};
    std::vector<int> od_groups = {50, 100, 150, 200, 250};
    std::vector<int> timing_groups = {30, 60, 90, 120, 150};
    // When set, replaces every group with exactly these pairs.
    std::vector<std::pair<StationId, StationId>> fixed_ods;
    std::uint64_t seed = 1;
    int repetitions = 5;
    int threads = 1;
};

struct BenchRow {
    Method method = Method::Method1;
    Seconds travel_time_sum = 0;
    std::uint64_t settled = 0;
    std::uint64_t relaxed = 0;
    std::uint64_t wall_nanos = 0;

    bool operator==(const BenchRow&) const = default;
};

struct BenchGroup {
    std::string purpose; // "sums" or "timing"
    int size = 0;
    std::uint64_t od_checksum = 0;
    std::vector<BenchRow> rows;

    bool operator==(const BenchGroup&) const = default;
};

struct TopologyInfo {
    std::string mode;
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    std::uint64_t construction_nanos = 0;

    bool operator==(const TopologyInfo&) const = default;
};

struct BenchAssertion {
    std::string name;
    bool pass = false;
    std::string detail;

    bool operator==(const BenchAssertion&) const = default;
};

struct BenchReport {
    std::map<std::string, std::string> environment;
    std::uint64_t seed = 0;
    std::uint64_t stations = 0;
    std::uint64_t transfer_stations = 0;
    std::uint64_t run_edges = 0;
    std::vector<TopologyInfo> topologies;
    std::vector<BenchGroup> groups;
    std::vector<BenchAssertion> assertions;

    bool all_assertions_pass() const;
    bool operator==(const BenchReport&) const = default;
};

// n distinct ordered pairs with distinct endpoints, uniform and
// deterministic per seed. Throws when n exceeds the pair count.
std::vector<std::pair<StationId, StationId>> sample_ods(const TransitNetwork& net, int n,
                                                        std::uint64_t seed);

BenchReport run_bench(const BenchPlan& plan);
BenchReport run_bench(const BenchPlan& plan, const TransitNetwork& net);

// Aligned-column text, one row per method and group.
std::string emit_report_table(const BenchReport& report);
// Canonical JSON; parse_report(emit_report_machine(r)) == r.
std::string emit_report_machine(const BenchReport& report);
BenchReport parse_report(std::string_view text);

}  // namespace aten
