#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aten/bench.hpp"
#include "aten/expand.hpp"
#include "aten/gen.hpp"
#include "aten/io.hpp"
#include "aten/solve.hpp"

namespace py = pybind11;
using namespace aten;

namespace {

py::dict result_to_dict(const QueryResult& r) {
    py::dict d;
    d["total_seconds"] = r.total;
    d["feasible"] = r.feasible;
    py::list legs;
    for (const auto& l : r.legs) {
        py::dict leg;
        leg["line"] = l.line;
        leg["dir"] = to_string(l.dir);
        leg["stations"] = l.stations;
        leg["seconds"] = l.seconds;
        legs.append(leg);
    }
    d["legs"] = legs;
    py::list transfers;
    for (const auto& t : r.transfers) {
        py::dict tr;
        tr["station"] = t.station;
        tr["from_line"] = t.from_line;
        tr["from_dir"] = to_string(t.from_dir);
        tr["to_line"] = t.to_line;
        tr["to_dir"] = to_string(t.to_dir);
        tr["seconds"] = t.seconds;
        transfers.append(tr);
    }
    d["transfers"] = transfers;
    py::dict stats;
    stats["settled"] = r.stats.settled;
    stats["relaxed"] = r.stats.relaxed;
    stats["wall_nanos"] = r.stats.wall_nanos;
    d["stats"] = stats;
    return d;
}

GenParams params_from_kwargs(const py::kwargs& kwargs) {
    GenParams p;
    if (kwargs.contains("preset")) {
        auto preset = kwargs["preset"].cast<std::string>();
        std::uint64_t seed = kwargs.contains("seed") ? kwargs["seed"].cast<std::uint64_t>() : 1;
        if (preset == "small")
            p = small_preset(seed);
        else if (preset == "medium")
            p = medium_preset(seed);
        else if (preset == "beijing_scale")
            p = beijing_scale_preset(seed);
        else
            throw Error("unknown preset \"" + preset + "\"");
    }
    auto set = [&](const char* name, auto& field) {
        if (kwargs.contains(name))
            field = kwargs[name].cast<std::remove_reference_t<decltype(field)>>();
    };
    set("seed", p.seed);
    set("line_count", p.line_count);
    set("min_stations_per_line", p.min_stations_per_line);
    set("max_stations_per_line", p.max_stations_per_line);
    set("transfer_station_fraction", p.transfer_station_fraction);
    set("same_position_probability", p.same_position_probability);
    set("run_time_min", p.run_time_min);
    set("run_time_max", p.run_time_max);
    set("transfer_time_min", p.transfer_time_min);
    set("transfer_time_max", p.transfer_time_max);
    set("adversarial_fraction", p.adversarial_fraction);
    set("station_total", p.station_total);
    set("transfer_total", p.transfer_total);
    return p;
}

ExpansionStyle style_from(const std::string& text) {
    if (text == "pseudocode") return ExpansionStyle::Pseudocode;
    if (text == "worked-example") return ExpansionStyle::WorkedExample;
    throw Error("unknown expansion style \"" + text + "\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shortest-path engine for rail networks with direction-specific transfer times";

    py::register_exception<Error>(m, "AtenError");

    py::class_<TransitNetwork>(m, "Network")
        .def("station_ids",
             [](const TransitNetwork& net) {
                 std::vector<StationId> ids;
                 for (const auto& s : net.stations()) ids.push_back(s.id);
                 return ids;
             })
        .def("station_name",
             [](const TransitNetwork& net, StationId s) { return net.station(s).name; })
        .def("station_count", [](const TransitNetwork& net) { return net.stations().size(); })
        .def("line_count", [](const TransitNetwork& net) { return net.lines().size(); })
        .def("transfer_station_count",
             [](const TransitNetwork& net) { return net.transfer_specs().size(); })
        .def("directed_run_edge_count",
             [](const TransitNetwork& net) { return net.directed_run_edge_count(); })
        .def("is_transfer", [](const TransitNetwork& net, StationId s) { return net.is_transfer(s); })
        .def("serialize", [](const TransitNetwork& net) { return serialize_network(net); });

    py::class_<ExpandedNetwork>(m, "ExpandedNetwork")
        .def("node_count", [](const ExpandedNetwork& g) { return g.nodes().size(); })
        .def("edge_count", [](const ExpandedNetwork& g) { return g.edges().size(); })
        .def("run_edge_count", [](const ExpandedNetwork& g) { return g.count_edges(EdgeKind::Run); })
        .def("transfer_edge_count",
             [](const ExpandedNetwork& g) { return g.count_edges(EdgeKind::Transfer); })
        .def("through_edge_count",
             [](const ExpandedNetwork& g) { return g.count_edges(EdgeKind::Through); })
        .def("serialize", [](const ExpandedNetwork& g) { return serialize_expanded(g); });

    m.def("generate", [](const py::kwargs& kwargs) { return generate(params_from_kwargs(kwargs)); },
          "Seeded synthetic network (kwargs: preset, seed, line_count, ...)");
    m.def("fixture_greedy_trap", &fixture_greedy_trap);
    m.def("fixture_through_leak", &fixture_through_leak);

    m.def("parse_network", [](const std::string& text) { return parse_network(text); });
    m.def("read_network",
          [](const std::string& path) { return read_network(std::filesystem::path(path)); });
    m.def("write_network", [](const TransitNetwork& net, const std::string& path) {
        write_network(net, std::filesystem::path(path));
    });

    m.def("validate", [](const TransitNetwork& net) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& f : validate(net).findings) out.push_back({f.code, f.message});
        return out;
    });

    m.def(
        "build_aten",
        [](const TransitNetwork& net, const std::string& style) {
            return build_aten(net, style_from(style));
        },
        py::arg("net"), py::arg("style") = "pseudocode");
    m.def("build_method3", &build_method3);
    m.def(
        "predict_expansion_size",
        [](const TransitNetwork& net, const std::string& mode, const std::string& style) {
            GraphSize s = predict_expansion_size(
                net, mode == "method3" ? ExpansionMode::Method3 : ExpansionMode::Aten,
                style_from(style));
            py::dict d;
            d["nodes"] = s.nodes;
            d["run_edges"] = s.run_edges;
            d["transfer_edges"] = s.transfer_edges;
            d["through_edges"] = s.through_edges;
            return d;
        },
        py::arg("net"), py::arg("mode") = "aten", py::arg("style") = "pseudocode");

    m.def(
        "query",
        [](const TransitNetwork& net, const std::string& method, StationId s, StationId e,
           const std::string& style) {
            switch (parse_method(method)) {
                case Method::Method1: return result_to_dict(method1(net, s, e));
                case Method::Method2: return result_to_dict(method2(net, s, e));
                case Method::Method3: return result_to_dict(method3(build_method3(net), s, e));
                case Method::Proposed:
                    return result_to_dict(proposed(build_aten(net, style_from(style)), s, e));
            }
            throw Error("unknown method");
        },
        py::arg("net"), py::arg("method"), py::arg("s"), py::arg("e"),
        py::arg("style") = "pseudocode");

    m.def(
        "brute_force",
        [](const TransitNetwork& net, StationId s, StationId e, int hop_limit) {
            return brute_force(net, s, e, hop_limit);
        },
        py::arg("net"), py::arg("s"), py::arg("e"), py::arg("hop_limit") = 0);

    m.def(
        "sample_ods",
        [](const TransitNetwork& net, int n, std::uint64_t seed) {
            return sample_ods(net, n, seed);
        },
        py::arg("net"), py::arg("n"), py::arg("seed") = 1);

    m.def(
        "run_bench",
        [](const TransitNetwork& net, std::vector<std::string> methods, std::vector<int> groups,
           std::uint64_t seed, int repetitions) {
            BenchPlan plan;
            plan.methods.clear();
            for (const auto& name : methods) plan.methods.push_back(parse_method(name));
            plan.od_groups = groups;
            plan.timing_groups.clear();
            plan.seed = seed;
            plan.repetitions = repetitions;
            BenchReport rep = run_bench(plan, net);
            py::dict d;
            d["machine"] = emit_report_machine(rep);
            d["table"] = emit_report_table(rep);
            d["all_assertions_pass"] = rep.all_assertions_pass();
            return d;
        },
        py::arg("net"),
        py::arg("methods") = std::vector<std::string>{"method1", "method2", "method3", "proposed"},
        py::arg("groups") = std::vector<int>{10, 20}, py::arg("seed") = 1,
        py::arg("repetitions") = 1);
}
