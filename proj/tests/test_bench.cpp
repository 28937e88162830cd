#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "aten/bench.hpp"
#include "aten/io.hpp"

using namespace aten;

TEST_CASE("od sampling is deterministic, valid and bounded") {
    TransitNetwork net = generate(medium_preset(4));
    auto a = sample_ods(net, 40, 99);
    auto b = sample_ods(net, 40, 99);
    CHECK(a == b);
    CHECK(sample_ods(net, 40, 100) != a);

    std::set<std::pair<StationId, StationId>> seen;
    for (auto [s, e] : a) {
        CHECK(net.has_station(s));
        CHECK(net.has_station(e));
        CHECK(s != e);
        CHECK(seen.insert({s, e}).second);
    }
}

TEST_CASE("a two-station network has exactly two ordered pairs") {
    std::vector<Station> stations = {{1, "A"}, {2, "B"}};
    std::vector<Line> lines = {{1, "L1", {1, 2}, {100}, {100}}};
    TransitNetwork net(stations, lines, {});
    auto one = sample_ods(net, 1, 7);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first != one[0].second);
    CHECK(sample_ods(net, 2, 7).size() == 2);
    CHECK_THROWS_AS(sample_ods(net, 3, 7), Error);
}

TEST_CASE("bench on the trap fixture reproduces the published sums") {
    BenchPlan plan;
    plan.fixed_ods = {{1, 5}};
    plan.od_groups = {1};
    plan.timing_groups = {};
    plan.repetitions = 1;
    BenchReport report = run_bench(plan, fixture_greedy_trap());

    REQUIRE(report.groups.size() == 1);
    const BenchGroup& g = report.groups[0];
    auto sum_of = [&](Method m) {
        for (const auto& r : g.rows)
            if (r.method == m) return r.travel_time_sum;
        FAIL("missing row");
        return Seconds{0};
    };
    CHECK(sum_of(Method::Method1) == 585);
    CHECK(sum_of(Method::Method2) == 425);
    CHECK(sum_of(Method::Method3) == 425);
    CHECK(sum_of(Method::Proposed) == 425);
}

TEST_CASE("machine reports round trip") {
    BenchPlan plan;
    plan.params = medium_preset(6);
    plan.od_groups = {5, 10};
    plan.timing_groups = {4};
    plan.repetitions = 2;
    BenchReport report = run_bench(plan);
    BenchReport reparsed = parse_report(emit_report_machine(report));
    CHECK(report == reparsed);
}

TEST_CASE("table output has one row per method and group") {
    BenchPlan plan;
    plan.params = medium_preset(6);
    plan.od_groups = {2, 4, 6, 8, 10};
    plan.timing_groups = {};
    BenchReport report = run_bench(plan);
    std::istringstream in(emit_report_table(report));
    std::string line;
    int data_rows = 0;
    while (std::getline(in, line))
        if (line.rfind("sums", 0) == 0) ++data_rows;
    CHECK(data_rows == 20);
}

TEST_CASE("a single-method plan evaluates no comparative assertions") {
    BenchPlan plan;
    plan.params = small_preset(2);
    plan.methods = {Method::Proposed};
    plan.od_groups = {3};
    plan.timing_groups = {};
    BenchReport report = run_bench(plan);
    CHECK(report.assertions.empty());
    CHECK(report.all_assertions_pass());
}

TEST_CASE("comparative assertions hold on an adversarial medium network") {
    BenchPlan plan;
    plan.params = medium_preset(8);
    plan.params.adversarial_fraction = 0.3;
    plan.od_groups = {10, 20};
    plan.timing_groups = {5};
    plan.repetitions = 2;
    BenchReport report = run_bench(plan);
    for (const auto& a : report.assertions) CHECK_MESSAGE(a.pass, a.name, ": ", a.detail);
}

TEST_CASE("rerunning a plan changes only wall-clock fields") {
    BenchPlan plan;
    plan.params = medium_preset(12);
    plan.od_groups = {6};
    plan.timing_groups = {3};
    plan.repetitions = 2;
    BenchReport a = run_bench(plan);
    BenchReport b = run_bench(plan);
    for (auto* rep : {&a, &b}) {
        for (auto& t : rep->topologies) t.construction_nanos = 0;
        for (auto& g : rep->groups)
            for (auto& r : g.rows) r.wall_nanos = 0;
    }
    CHECK(emit_report_machine(a) == emit_report_machine(b));
}

TEST_CASE("identical od multisets are checksummed into the report") {
    BenchPlan plan;
    plan.params = small_preset(3);
    plan.od_groups = {4};
    plan.timing_groups = {4};
    BenchReport report = run_bench(plan);
    REQUIRE(report.groups.size() == 2);
    CHECK(report.groups[0].od_checksum != 0);
}

TEST_CASE("worker threads change nothing but wall clocks") {
    BenchPlan plan;
    plan.params = medium_preset(14);
    plan.od_groups = {12};
    plan.timing_groups = {};
    BenchPlan parallel = plan;
    parallel.threads = 4;
    BenchReport a = run_bench(plan);
    BenchReport b = run_bench(parallel);
    for (auto* rep : {&a, &b}) {
        for (auto& t : rep->topologies) t.construction_nanos = 0;
        for (auto& g : rep->groups)
            for (auto& r : g.rows) r.wall_nanos = 0;
    }
    CHECK(a == b);
}

TEST_CASE("a method failure carries the offending od") {
    std::vector<Station> stations = {{1, "A"}, {2, "B"}, {3, "C"}, {4, "D"}};
    std::vector<Line> lines = {
        {1, "L1", {1, 2}, {100}, {100}},
        {2, "L2", {3, 4}, {100}, {100}},
    };
    TransitNetwork net(stations, lines, {});
    BenchPlan plan;
    plan.fixed_ods = {{1, 3}};
    plan.od_groups = {1};
    plan.timing_groups = {};
    try {
        run_bench(plan, net);
        FAIL("expected a failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("(1,3)") != std::string::npos);
    }
}

TEST_CASE("an empty report renders as a header-only table") {
    BenchReport empty;
    std::istringstream in(emit_report_table(empty));
    std::string line;
    int data_rows = 0;
    while (std::getline(in, line))
        if (line.rfind("sums", 0) == 0 || line.rfind("timing", 0) == 0) ++data_rows;
    CHECK(data_rows == 0);
}

TEST_CASE("invalid plans are rejected") {
    BenchPlan descending;
    descending.od_groups = {10, 5};
    CHECK_THROWS_AS(run_bench(descending, fixture_greedy_trap()), Error);

    BenchPlan none;
    none.methods = {};
    CHECK_THROWS_AS(run_bench(none, fixture_greedy_trap()), Error);
}
