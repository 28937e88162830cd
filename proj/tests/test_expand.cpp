#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "aten/expand.hpp"
#include "aten/gen.hpp"
#include "aten/io.hpp"

using namespace aten;

namespace {

// Star network: X sits on `n_lines` lines, each A_i - X - B_i, with the
// given same-position flags and a uniform 50s transfer table.
TransitNetwork star(int n_lines, const std::vector<bool>& same_flags) {
    std::vector<Station> stations;
    std::vector<Line> lines;
    StationId x = 100;
    stations.push_back({x, "X"});
    TransferSpec sp;
    sp.station = x;
    for (int i = 0; i < n_lines; ++i) {
        StationId a = static_cast<StationId>(2 * i + 1);
        StationId b = static_cast<StationId>(2 * i + 2);
        stations.push_back({a, "A" + std::to_string(i)});
        stations.push_back({b, "B" + std::to_string(i)});
        LineId l = static_cast<LineId>(i + 1);
        lines.push_back({l, "L" + std::to_string(l), {a, x, b}, {100, 100}, {100, 100}});
        sp.lines.push_back({l, same_flags[static_cast<std::size_t>(i)]});
    }
    auto keys = [&](LineId l) -> std::vector<Direction> {
        if (sp.same_position(l)) return {Direction::None};
        return {Direction::Up, Direction::Down};
    };
    for (const auto& fi : sp.lines)
        for (const auto& fj : sp.lines) {
            if (fi.line == fj.line) continue;
            for (Direction a : keys(fi.line))
                for (Direction b : keys(fj.line)) sp.times[{fi.line, a, fj.line, b}] = 50;
        }
    return TransitNetwork(stations, lines, {sp});
}

}  // namespace

TEST_CASE("classification follows the same-position flags") {
    CHECK(classify_transfer_station(star(2, {true, true}), 100).kind == TransferCase::A);
    CHECK(classify_transfer_station(star(2, {true, false}), 100).kind == TransferCase::B);
    CHECK(classify_transfer_station(star(2, {false, false}), 100).kind == TransferCase::D);
    CHECK(classify_transfer_station(star(3, {true, true, true}), 100).kind == TransferCase::A);
    CHECK(classify_transfer_station(star(3, {true, false, false}), 100).kind == TransferCase::B);
    CHECK(classify_transfer_station(star(3, {true, true, false}), 100).kind == TransferCase::C);
    CHECK(classify_transfer_station(star(3, {false, false, false}), 100).kind == TransferCase::D);
    CHECK(classify_transfer_station(star(3, {false, false, false}), 100).line_count == 3);
    CHECK_THROWS_AS(classify_transfer_station(star(2, {true, true}), 1), Error);
}

TEST_CASE("per-station expansion counts") {
    // Counts derived by applying the per-line rules by hand.
    SUBCASE("two-line all-same station: 2 nodes, 8 run, 2 transfer") {
        auto ex = expand_station(star(2, {true, true}), 100, ExpansionMode::Aten);
        CHECK(ex.nodes.size() == 2);
        CHECK(ex.run_edges == 8);
        CHECK(ex.transfer_edges == 2);
    }
    SUBCASE("two-line no-same station: 6 nodes, 16 run, 8 transfer") {
        auto ex = expand_station(star(2, {false, false}), 100, ExpansionMode::Aten);
        CHECK(ex.nodes.size() == 6);
        CHECK(ex.run_edges == 16);
        CHECK(ex.transfer_edges == 8);
    }
    SUBCASE("three-line all-same station: 3 nodes, 12 run, 6 transfer") {
        auto ex = expand_station(star(3, {true, true, true}), 100, ExpansionMode::Aten);
        CHECK(ex.nodes.size() == 3);
        CHECK(ex.run_edges == 12);
        CHECK(ex.transfer_edges == 6);
    }
    SUBCASE("mixed two-line station: 4 nodes, 12 run, 4 transfer") {
        auto ex = expand_station(star(2, {true, false}), 100, ExpansionMode::Aten);
        CHECK(ex.nodes.size() == 4);
        CHECK(ex.run_edges == 12);
        CHECK(ex.transfer_edges == 4);
    }
    SUBCASE("ring-style two-line station: 4 nodes, 8 run, 8 transfer, 4 through") {
        auto ex = expand_station(star(2, {false, false}), 100, ExpansionMode::Method3);
        CHECK(ex.nodes.size() == 4);
        CHECK(ex.run_edges == 8);
        CHECK(ex.transfer_edges == 8);
        CHECK(ex.through_edges == 4);
    }
}

TEST_CASE("adaptive build of the cross fixture: 4 plain + 6 expansion nodes") {
    TransitNetwork net = fixture_through_leak();
    ExpandedNetwork g = build_aten(net);
    int plain = 0;
    for (const auto& n : g.nodes())
        if (n.kind == NodeKind::Plain) ++plain;
    CHECK(plain == 4);
    CHECK(g.nodes().size() == 10);
    CHECK(g.count_edges(EdgeKind::Run) == 16);
    CHECK(g.count_edges(EdgeKind::Transfer) == 8);
    CHECK(g.count_edges(EdgeKind::Through) == 0);
}

TEST_CASE("ring build of the cross fixture: 4 plain + 4 platforms, 4 through edges") {
    TransitNetwork net = fixture_through_leak();
    ExpandedNetwork g = build_method3(net);
    CHECK(g.nodes().size() == 8);
    CHECK(g.count_edges(EdgeKind::Run) == 8);
    CHECK(g.count_edges(EdgeKind::Transfer) == 8);
    CHECK(g.count_edges(EdgeKind::Through) == 4);
    for (const auto& e : g.edges())
        if (e.kind == EdgeKind::Through) CHECK(e.seconds == 0);
}

TEST_CASE("zero-transfer network expands to itself") {
    std::vector<Station> stations = {{1, "A"}, {2, "B"}, {3, "C"}};
    std::vector<Line> lines = {{1, "L1", {1, 2, 3}, {100, 110}, {105, 115}}};
    TransitNetwork net(stations, lines, {});
    for (ExpansionMode mode : {ExpansionMode::Aten, ExpansionMode::Method3}) {
        ExpandedNetwork g = mode == ExpansionMode::Aten ? build_aten(net) : build_method3(net);
        CHECK(g.nodes().size() == 3);
        CHECK(g.edges().size() == 4);
        for (const auto& n : g.nodes()) CHECK(n.kind == NodeKind::Plain);
        GraphSize predicted = predict_expansion_size(net, mode);
        CHECK(predicted == measure(g));
    }
}

TEST_CASE("virtual nodes never touch transfer edges") {
    for (const auto& net : {fixture_through_leak(), generate(medium_preset(3))}) {
        ExpandedNetwork g = build_aten(net);
        for (const auto& e : g.edges()) {
            if (e.kind != EdgeKind::Transfer) continue;
            CHECK(g.node(e.from).kind != NodeKind::Virtual);
            CHECK(g.node(e.to).kind != NodeKind::Virtual);
        }
    }
}

TEST_CASE("no zero-weight edges appear unless the input has them") {
    TransitNetwork net = generate(medium_preset(11));
    bool input_zero = false;
    for (const auto& sp : net.transfer_specs())
        for (const auto& [_, sec] : sp.times)
            if (sec == 0) input_zero = true;
    ExpandedNetwork g = build_aten(net);
    if (!input_zero)
        for (const auto& e : g.edges()) CHECK(e.seconds > 0);
}

TEST_CASE("untouched run edges survive with their weights") {
    TransitNetwork net = generate(medium_preset(5));
    ExpandedNetwork g = build_aten(net);
    std::map<std::tuple<StationId, StationId, LineId>, int> counts;
    std::map<std::tuple<StationId, StationId, LineId>, Seconds> weights;
    for (const auto& e : g.edges()) {
        if (e.kind != EdgeKind::Run) continue;
        auto key = std::make_tuple(g.node(e.from).station, g.node(e.to).station, e.line);
        counts[key]++;
        weights[key] = e.seconds;
    }
    for (const auto& st : net.stations()) {
        for (const auto& e : net.neighbors(st.id)) {
            if (net.is_transfer(e.from) || net.is_transfer(e.to)) continue;
            auto key = std::make_tuple(e.from, e.to, e.line);
            CHECK(counts[key] == 1);
            CHECK(weights[key] == e.seconds);
        }
    }
}

TEST_CASE("predicted sizes match measured sizes across seeds") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GenParams p = seed % 2 ? small_preset(seed) : medium_preset(seed);
        TransitNetwork net = generate(p);
        for (ExpansionMode mode : {ExpansionMode::Aten, ExpansionMode::Method3}) {
            ExpandedNetwork g = mode == ExpansionMode::Aten ? build_aten(net) : build_method3(net);
            GraphSize predicted = predict_expansion_size(net, mode);
            GraphSize measured = measure(g);
            REQUIRE_MESSAGE(predicted == measured, "seed ", seed, " mode ", to_string(mode));
        }
        ExpandedNetwork g = build_aten(net, ExpansionStyle::WorkedExample);
        GraphSize predicted = predict_expansion_size(net, ExpansionMode::Aten,
                                                     ExpansionStyle::WorkedExample);
        REQUIRE_MESSAGE(predicted == measure(g), "seed ", seed, " worked-example");
    }
}

TEST_CASE("metro-scale expansion matches the size formula") {
    TransitNetwork net = generate(beijing_scale_preset(1));
    ExpandedNetwork g = build_aten(net);
    CHECK(predict_expansion_size(net, ExpansionMode::Aten) == measure(g));
    // Non-transfer stations survive unchanged as plain nodes.
    std::size_t plain = 0;
    for (const auto& n : g.nodes())
        if (n.kind == NodeKind::Plain) ++plain;
    CHECK(plain == 319);
    ExpandedNetwork ring = build_method3(net);
    CHECK(predict_expansion_size(net, ExpansionMode::Method3) == measure(ring));
}

TEST_CASE("builds are deterministic byte for byte") {
    TransitNetwork net = generate(medium_preset(17));
    CHECK(serialize_expanded(build_aten(net)) == serialize_expanded(build_aten(net)));
    CHECK(serialize_expanded(build_method3(net)) == serialize_expanded(build_method3(net)));
}

TEST_CASE("worked-example style expands a same-position station into six nodes") {
    // Two-line same-position interchange modeled on Beitucheng: line 10
    // through JDM and AZM, line 8 through ATZX and AHQ.
    std::vector<Station> stations = {{1, "JDM"}, {2, "AZM"}, {3, "ATZX"}, {4, "AHQ"}, {5, "BTC"}};
    std::vector<Line> lines = {
        {8, "Line8", {3, 5, 4}, {140, 150}, {145, 155}},
        {10, "Line10", {1, 5, 2}, {120, 130}, {125, 135}},
    };
    TransferSpec sp;
    sp.station = 5;
    sp.lines = {{8, true}, {10, true}};
    sp.times[{8, Direction::None, 10, Direction::None}] = 90;
    sp.times[{10, Direction::None, 8, Direction::None}] = 90;
    TransitNetwork net(stations, lines, {sp});

    ExpandedNetwork compact = build_aten(net);
    CHECK(compact.nodes_of(5).size() == 2);

    ExpandedNetwork expanded = build_aten(net, ExpansionStyle::WorkedExample);
    CHECK(expanded.nodes_of(5).size() == 6);

    // The platform adjoining JDM keeps the original run time and carries
    // the transfer walk toward line 8.
    NodeId jdm_side = 0;
    bool found = false;
    for (NodeId n : expanded.nodes_of(5)) {
        const auto& node = expanded.node(n);
        if (node.line == 10 && node.kind == NodeKind::PlatformDown) {
            jdm_side = n;
            found = true;
        }
    }
    REQUIRE(found);
    bool run_ok = false, walk_ok = false;
    for (std::uint32_t ei : expanded.out_edges(jdm_side)) {
        const auto& e = expanded.edges()[ei];
        if (e.kind == EdgeKind::Run && expanded.node(e.to).station == 1) {
            CHECK(e.seconds == 125);
            run_ok = true;
        }
        if (e.kind == EdgeKind::Transfer && expanded.node(e.to).line == 8) {
            CHECK(e.seconds == 90);
            walk_ok = true;
        }
    }
    CHECK(run_ok);
    CHECK(walk_ok);
}
