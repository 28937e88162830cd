#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "aten/bench.hpp"
#include "aten/expand.hpp"
#include "aten/gen.hpp"
#include "aten/io.hpp"
#include "aten/solve.hpp"

using namespace aten;
using nlohmann::json;

namespace {

int exit_code_for(const Error& e) {
    if (dynamic_cast<const UnreachableError*>(&e)) return 3;
    return 1;
}

StationId resolve_station(const TransitNetwork& net, const std::string& text) {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
        StationId id = static_cast<StationId>(std::stoul(text));
        if (net.has_station(id)) return id;
        throw UnknownStationError("unknown station id " + text);
    }
    std::vector<StationId> matches;
    for (const auto& s : net.stations())
        if (s.name == text) matches.push_back(s.id);
    if (matches.empty()) throw UnknownStationError("unknown station \"" + text + "\"");
    if (matches.size() > 1) {
        std::string ids;
        for (StationId id : matches) ids += " " + std::to_string(id);
        throw Error("ambiguous station name \"" + text + "\"; candidates:" + ids);
    }
    return matches[0];
}

ExpansionStyle parse_style(const std::string& text) {
    if (text == "pseudocode") return ExpansionStyle::Pseudocode;
    if (text == "worked-example") return ExpansionStyle::WorkedExample;
    throw Error("unknown expansion style \"" + text + "\"");
}

GenParams params_from_cli(CLI::App* cmd, const std::string& preset, std::uint64_t seed) {
    GenParams p;
    if (preset == "small")
        p = small_preset(seed);
    else if (preset == "medium")
        p = medium_preset(seed);
    else if (preset == "beijing_scale")
        p = beijing_scale_preset(seed);
    else if (!preset.empty())
        throw Error("unknown preset \"" + preset + "\"");
    p.seed = seed;

    auto override_int = [&](const char* flag, int& field) {
        if (cmd->count(flag)) field = cmd->get_option(flag)->as<int>();
    };
    auto override_sec = [&](const char* flag, Seconds& field) {
        if (cmd->count(flag)) field = cmd->get_option(flag)->as<Seconds>();
    };
    auto override_double = [&](const char* flag, double& field) {
        if (cmd->count(flag)) field = cmd->get_option(flag)->as<double>();
    };
    override_int("--lines", p.line_count);
    override_int("--min-stations", p.min_stations_per_line);
    override_int("--max-stations", p.max_stations_per_line);
    override_int("--station-total", p.station_total);
    override_int("--transfer-total", p.transfer_total);
    override_double("--transfer-fraction", p.transfer_station_fraction);
    override_double("--same-position-prob", p.same_position_probability);
    override_double("--adversarial-fraction", p.adversarial_fraction);
    override_sec("--run-time-min", p.run_time_min);
    override_sec("--run-time-max", p.run_time_max);
    override_sec("--transfer-time-min", p.transfer_time_min);
    override_sec("--transfer-time-max", p.transfer_time_max);
    return p;
}

void add_gen_param_flags(CLI::App* cmd) {
    cmd->add_option("--lines", "line count");
    cmd->add_option("--min-stations", "minimum stations per line");
    cmd->add_option("--max-stations", "maximum stations per line");
    cmd->add_option("--transfer-fraction", "target share of transfer stations");
    cmd->add_option("--same-position-prob", "probability a line is same-position at a station");
    cmd->add_option("--run-time-min", "minimum segment run time in seconds");
    cmd->add_option("--run-time-max", "maximum segment run time in seconds");
    cmd->add_option("--transfer-time-min", "minimum transfer walk in seconds");
    cmd->add_option("--transfer-time-max", "maximum transfer walk in seconds");
    cmd->add_option("--adversarial-fraction", "share of transfer stations tuned to break the baselines");
    cmd->add_option("--station-total", "exact distinct-station total (0 = derive)");
    cmd->add_option("--transfer-total", "exact transfer-station total (0 = derive)");
}

json result_to_json(const TransitNetwork& net, const QueryResult& r) {
    json j;
    j["total_seconds"] = r.total;
    j["feasible"] = r.feasible;
    j["legs"] = json::array();
    for (const auto& l : r.legs) {
        json names = json::array();
        for (StationId s : l.stations) names.push_back(net.station(s).name);
        j["legs"].push_back({{"dir", to_string(l.dir)},
                             {"line", l.line},
                             {"seconds", l.seconds},
                             {"station_names", names},
                             {"stations", l.stations}});
    }
    j["transfers"] = json::array();
    for (const auto& t : r.transfers)
        j["transfers"].push_back({{"from_dir", to_string(t.from_dir)},
                                  {"from_line", t.from_line},
                                  {"seconds", t.seconds},
                                  {"station", t.station},
                                  {"to_dir", to_string(t.to_dir)},
                                  {"to_line", t.to_line}});
    j["stats"] = {{"relaxed", r.stats.relaxed},
                  {"settled", r.stats.settled},
                  {"wall_nanos", r.stats.wall_nanos}};
    return j;
}

void print_result(const TransitNetwork& net, const QueryResult& r) {
    std::cout << "total " << r.total << "s\n";
    std::size_t ti = 0;
    for (std::size_t i = 0; i < r.legs.size(); ++i) {
        const Leg& l = r.legs[i];
        std::cout << "leg line " << net.line(l.line).name << " " << to_string(l.dir) << ":";
        for (StationId s : l.stations) std::cout << " " << net.station(s).name;
        std::cout << " (" << l.seconds << "s)\n";
        if (i + 1 < r.legs.size() && ti < r.transfers.size()) {
            const TransferRecord& t = r.transfers[ti++];
            std::cout << "transfer at " << net.station(t.station).name << ": "
                      << net.line(t.from_line).name << " -> " << net.line(t.to_line).name << " ("
                      << t.seconds << "s)\n";
        }
    }
    std::cout << "stats: settled " << r.stats.settled << ", relaxed " << r.stats.relaxed
              << ", wall " << r.stats.wall_nanos / 1e6 << "ms\n";
    if (!r.feasible)
        std::cerr << "warning: itinerary walks a vehicle-only link and is not feasible\n";
}

int cmd_gen(const GenParams& params, const std::string& output) {
    TransitNetwork net = generate(params);
    write_network(net, output);
    std::cout << "stations " << net.stations().size() << ", transfer stations "
              << net.transfer_specs().size() << ", directed run edges "
              << net.directed_run_edge_count() << "\n";
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_validate(const std::string& input) {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << input << "\n";
        return 1;
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // Parse without the validation gate so every finding can be listed.
    try {
        TransitNetwork net = parse_network(bytes, input);
        std::cout << "ok: " << net.stations().size() << " stations, "
                  << net.lines().size() << " lines, " << net.transfer_specs().size()
                  << " transfer stations\n";
        return 0;
    } catch (const SchemaError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cout << e.what() << "\n";
        return 1;
    }
}

int cmd_expand(const std::string& input, const std::string& mode_text, const std::string& style_text,
               const std::string& output) {
    TransitNetwork net = read_network(input);
    ExpansionMode mode =
        mode_text == "method3" ? ExpansionMode::Method3 : ExpansionMode::Aten;
    if (mode_text != "aten" && mode_text != "method3")
        throw Error("unknown mode \"" + mode_text + "\"");
    ExpansionStyle style = parse_style(style_text);

    ExpandedNetwork g =
        mode == ExpansionMode::Aten ? build_aten(net, style) : build_method3(net);
    GraphSize got = measure(g);
    GraphSize predicted = predict_expansion_size(net, mode, style);

    std::size_t plain = 0;
    for (const auto& n : g.nodes())
        if (n.kind == NodeKind::Plain) ++plain;
    std::cout << "mode " << to_string(mode) << ": " << got.nodes << " nodes (+"
              << got.nodes - plain << " nodes), " << got.total_edges() << " directed edges (run "
              << got.run_edges << ", transfer " << got.transfer_edges << ", through "
              << got.through_edges << ")\n";
    std::cout << "predicted: " << predicted.nodes << " nodes, " << predicted.total_edges()
              << " edges - " << (predicted == got ? "match" : "MISMATCH") << "\n";
    if (!output.empty()) {
        write_expanded(g, output);
        std::cout << "wrote " << output << "\n";
    }
    if (predicted != got) return 2;
    return 0;
}

int cmd_query(const std::string& input, const std::string& method_text, const std::string& from,
              const std::string& to, const std::string& style_text, bool machine) {
    TransitNetwork net = read_network(input);
    Method m = parse_method(method_text);
    StationId s = resolve_station(net, from);
    StationId e = resolve_station(net, to);
    ExpansionStyle style = parse_style(style_text);

    QueryResult r;
    switch (m) {
        case Method::Method1: r = method1(net, s, e); break;
        case Method::Method2: r = method2(net, s, e); break;
        case Method::Method3: r = method3(build_method3(net), s, e); break;
        case Method::Proposed: r = proposed(build_aten(net, style), s, e); break;
    }
    if (machine)
        std::cout << result_to_json(net, r).dump(2) << "\n";
    else
        print_result(net, r);
    return 0;
}

int cmd_bench(BenchPlan plan, const std::string& report_path) {
    BenchReport report = run_bench(plan);
    std::cout << emit_report_table(report);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw Error("cannot open " + report_path + " for writing");
        out << emit_report_machine(report);
        std::cout << "wrote " << report_path << "\n";
    }
    return report.all_assertions_pass() ? 0 : 1;
}

int cmd_fixtures(const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto trap = std::filesystem::path(dir) / "greedy_trap.json";
    auto leak = std::filesystem::path(dir) / "through_leak.json";
    write_network(fixture_greedy_trap(), trap);
    write_network(fixture_through_leak(), leak);
    std::cout << "wrote " << trap.string() << "\n";
    std::cout << "wrote " << leak.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shortest-path engine for rail networks with direction-specific transfer times"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic network file");
    std::string gen_preset = "small";
    std::uint64_t gen_seed = 1;
    std::string gen_output;
    gen->add_option("--preset", gen_preset, "small, medium or beijing_scale");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--output", gen_output, "output network file")->required();
    add_gen_param_flags(gen);

    // validate
    auto* val = app.add_subcommand("validate", "Check a network file against every invariant");
    std::string val_input;
    val->add_option("input", val_input, "network file")->required();

    // expand
    auto* exp = app.add_subcommand("expand", "Build an expanded topology with its back-map");
    std::string exp_input, exp_mode = "aten", exp_style = "pseudocode", exp_output;
    exp->add_option("input", exp_input, "network file")->required();
    exp->add_option("--mode", exp_mode, "aten or method3");
    exp->add_option("--expansion-style", exp_style, "pseudocode or worked-example");
    exp->add_option("-o,--output", exp_output, "expanded graph file");

    // query
    auto* qry = app.add_subcommand("query", "Shortest path between two stations");
    std::string qry_input, qry_method, qry_from, qry_to, qry_style = "pseudocode";
    bool qry_machine = false;
    qry->add_option("input", qry_input, "network file")->required();
    qry->add_option("--method", qry_method, "method1, method2, method3 or proposed")->required();
    qry->add_option("from", qry_from, "origin station id or name")->required();
    qry->add_option("to", qry_to, "destination station id or name")->required();
    qry->add_option("--expansion-style", qry_style, "pseudocode or worked-example");
    qry->add_flag("--machine", qry_machine, "print machine-readable JSON");

    // bench
    auto* ben = app.add_subcommand("bench", "Comparative benchmark of the four methods");
    std::string ben_input, ben_preset = "medium", ben_methods = "method1,method2,method3,proposed";
    std::string ben_groups, ben_timing_groups, ben_report;
    std::uint64_t ben_seed = 1;
    int ben_reps = 5, ben_threads = 1;
    ben->add_option("--input", ben_input, "network file (otherwise generated)");
    ben->add_option("--preset", ben_preset, "generator preset when no input file");
    ben->add_option("--seed", ben_seed, "od sampling and generator seed");
    ben->add_option("--methods", ben_methods, "comma-separated method subset");
    ben->add_option("--groups", ben_groups, "comma-separated od group sizes");
    ben->add_option("--timing-groups", ben_timing_groups, "comma-separated timed group sizes");
    ben->add_option("--reps", ben_reps, "timing repetitions per group");
    ben->add_option("--threads", ben_threads, "worker threads for untimed groups");
    ben->add_option("--report", ben_report, "write the machine-readable report here");
    add_gen_param_flags(ben);

    // fixtures
    auto* fix = app.add_subcommand("fixtures", "Write the built-in counterexample networks");
    std::string fix_dir = ".";
    fix->add_option("--output-dir", fix_dir, "target directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(params_from_cli(gen, gen_preset, gen_seed), gen_output);
        if (val->parsed()) return cmd_validate(val_input);
        if (exp->parsed()) return cmd_expand(exp_input, exp_mode, exp_style, exp_output);
        if (qry->parsed())
            return cmd_query(qry_input, qry_method, qry_from, qry_to, qry_style, qry_machine);
        if (ben->parsed()) {
            BenchPlan plan;
            if (!ben_input.empty()) {
                plan.network_file = ben_input;
            } else {
                plan.params = params_from_cli(ben, ben_preset, ben_seed);
            }
            plan.seed = ben_seed;
            plan.repetitions = ben_reps;
            plan.threads = ben_threads;
            plan.methods.clear();
            std::stringstream ms(ben_methods);
            std::string item;
            while (std::getline(ms, item, ',')) plan.methods.push_back(parse_method(item));
            auto parse_groups = [](const std::string& text, std::vector<int>& out) {
                if (text.empty()) return;
                out.clear();
                std::stringstream ss(text);
                std::string g;
                while (std::getline(ss, g, ',')) out.push_back(std::stoi(g));
            };
            parse_groups(ben_groups, plan.od_groups);
            parse_groups(ben_timing_groups, plan.timing_groups);
            return cmd_bench(std::move(plan), ben_report);
        }
        if (fix->parsed()) return cmd_fixtures(fix_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
