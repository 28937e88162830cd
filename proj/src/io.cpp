#include "aten/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aten {

using nlohmann::json;

namespace {

json network_to_json(const TransitNetwork& net) {
    json j;
    j["schema_version"] = 1;

    std::vector<Station> stations = net.stations();
    std::sort(stations.begin(), stations.end(),
              [](const Station& a, const Station& b) { return a.id < b.id; });
    j["stations"] = json::array();
    for (const auto& s : stations) j["stations"].push_back({{"id", s.id}, {"name", s.name}});

    std::vector<Line> lines = net.lines();
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
    j["lines"] = json::array();
    for (const auto& ln : lines)
        j["lines"].push_back({{"id", ln.id},
                              {"name", ln.name},
                              {"run_down", ln.run_down},
                              {"run_up", ln.run_up},
                              {"stations", ln.stations}});

    std::vector<TransferSpec> specs = net.transfer_specs();
    std::sort(specs.begin(), specs.end(),
              [](const TransferSpec& a, const TransferSpec& b) { return a.station < b.station; });
    j["transfers"] = json::array();
    for (const auto& sp : specs) {
        json lines_j = json::array();
        std::vector<TransferSpec::LineFlag> flags = sp.lines;
        std::sort(flags.begin(), flags.end(),
                  [](const auto& a, const auto& b) { return a.line < b.line; });
        for (const auto& f : flags)
            lines_j.push_back({{"line", f.line}, {"same_position", f.same_position}});
        json times_j = json::array();
        for (const auto& [key, seconds] : sp.times)
            times_j.push_back({{"from_dir", static_cast<int>(key.from_dir)},
                               {"from_line", key.from_line},
                               {"seconds", seconds},
                               {"to_dir", static_cast<int>(key.to_dir)},
                               {"to_line", key.to_line}});
        j["transfers"].push_back({{"lines", lines_j}, {"station", sp.station}, {"times", times_j}});
    }
    return j;
}

void require_fields(const json& obj, const char* what,
                    std::initializer_list<const char*> fields) {
    for (const char* f : fields)
        if (!obj.contains(f))
            throw SchemaError(std::string(what) + ": missing field \"" + f + "\"");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* f : fields)
            if (key == f) known = true;
        if (!known)
            throw SchemaError(std::string(what) + ": unknown field \"" + key + "\"");
    }
}

Direction parse_direction(const json& v, const char* what) {
    if (!v.is_number_integer())
        throw SchemaError(std::string(what) + ": direction must be 0, 1 or 2");
    int d = v.get<int>();
    if (d < 0 || d > 2)
        throw SchemaError(std::string(what) + ": direction must be 0, 1 or 2");
    return static_cast<Direction>(d);
}

std::int64_t require_int(const json& v, const char* what) {
    if (!v.is_number_integer())
        throw SchemaError(std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

std::vector<Seconds> require_int_array(const json& v, const char* what) {
    if (!v.is_array()) throw SchemaError(std::string(what) + " must be an array");
    std::vector<Seconds> out;
    for (const auto& e : v) out.push_back(require_int(e, what));
    return out;
}

TransitNetwork parse_network_fields(const json& j, const std::string& origin) {
    require_fields(j, origin.c_str(), {"lines", "schema_version", "stations", "transfers"});
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != 1)
        throw SchemaError(origin + ": unsupported schema_version");

    std::vector<Station> stations;
    for (const auto& s : j["stations"]) {
        require_fields(s, "station", {"id", "name"});
        stations.push_back({static_cast<StationId>(require_int(s["id"], "station id")),
                            s["name"].get<std::string>()});
    }

    std::vector<Line> lines;
    for (const auto& l : j["lines"]) {
        require_fields(l, "line", {"id", "name", "run_down", "run_up", "stations"});
        Line ln;
        ln.id = static_cast<LineId>(require_int(l["id"], "line id"));
        ln.name = l["name"].get<std::string>();
        for (const auto& s : require_int_array(l["stations"], "line stations"))
            ln.stations.push_back(static_cast<StationId>(s));
        ln.run_up = require_int_array(l["run_up"], "run_up");
        ln.run_down = require_int_array(l["run_down"], "run_down");
        lines.push_back(std::move(ln));
    }

    std::vector<TransferSpec> specs;
    for (const auto& t : j["transfers"]) {
        require_fields(t, "transfer", {"lines", "station", "times"});
        TransferSpec sp;
        sp.station = static_cast<StationId>(require_int(t["station"], "transfer station"));
        for (const auto& f : t["lines"]) {
            require_fields(f, "transfer line flag", {"line", "same_position"});
            sp.lines.push_back({static_cast<LineId>(require_int(f["line"], "flag line")),
                                f["same_position"].get<bool>()});
        }
        for (const auto& e : t["times"]) {
            require_fields(e, "transfer time entry",
                           {"from_dir", "from_line", "seconds", "to_dir", "to_line"});
            TransferKey key{static_cast<LineId>(require_int(e["from_line"], "entry from_line")),
                            parse_direction(e["from_dir"], "entry"),
                            static_cast<LineId>(require_int(e["to_line"], "entry to_line")),
                            parse_direction(e["to_dir"], "entry")};
            if (sp.times.count(key))
                throw SchemaError(origin + ": duplicate transfer time entry");
            sp.times.emplace(key, require_int(e["seconds"], "entry seconds"));
        }
        specs.push_back(std::move(sp));
    }

    TransitNetwork net(std::move(stations), std::move(lines), std::move(specs));
    ValidationReport rep = validate(net);
    if (!rep.ok()) throw Error(origin + ": network failed validation:\n" + rep.summary());
    return net;
}

}  // namespace

std::string serialize_network(const TransitNetwork& net) {
    return network_to_json(net).dump(2) + "\n";
}

TransitNetwork parse_network(std::string_view text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        return parse_network_fields(j, origin);
    } catch (const json::exception& e) {
        throw SchemaError(origin + ": " + e.what());
    }
}

TransitNetwork read_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str(), path.string());
}

void write_network(const TransitNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << serialize_network(net);
}

std::string serialize_expanded(const ExpandedNetwork& g) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "expanded";
    j["mode"] = to_string(g.mode());
    j["style"] = to_string(g.style());
    j["nodes"] = json::array();
    for (NodeId n = 0; n < g.nodes().size(); ++n) {
        const ExpandedNode& nd = g.node(n);
        j["nodes"].push_back({{"id", n},
                              {"key", static_cast<int>(nd.key)},
                              {"kind", to_string(nd.kind)},
                              {"line", nd.line},
                              {"name", nd.name},
                              {"station", nd.station}});
    }
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({{"dir", static_cast<int>(e.dir)},
                              {"from", e.from},
                              {"kind", to_string(e.kind)},
                              {"line", e.line},
                              {"seconds", e.seconds},
                              {"to", e.to}});
    return j.dump(2) + "\n";
}

void write_expanded(const ExpandedNetwork& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << serialize_expanded(g);
}

namespace {

TransferSpec symmetric_pair_spec(StationId s, LineId a, LineId b, Seconds ab, Seconds ba) {
    TransferSpec sp;
    sp.station = s;
    sp.lines = {{a, true}, {b, true}};
    sp.times[{a, Direction::None, b, Direction::None}] = ab;
    sp.times[{b, Direction::None, a, Direction::None}] = ba;
    return sp;
}

}  // namespace

TransitNetwork fixture_greedy_trap() {
    std::vector<Station> stations = {
        {1, "A"}, {2, "B"}, {3, "C"}, {4, "D"}, {5, "E"},
    };
    std::vector<Line> lines = {
        {1, "L1", {1, 2}, {100}, {100}}, // A-B
        {2, "L2", {2, 3}, {150}, {150}}, // B-C
        {3, "L3", {1, 4}, {120}, {120}}, // A-D
        {4, "L4", {4, 3}, {125}, {125}}, // D-C
        {5, "L5", {3, 5}, {100}, {100}}, // C-E
    };

    std::vector<TransferSpec> specs;
    specs.push_back(symmetric_pair_spec(1, 1, 3, 30, 30));
    specs.push_back(symmetric_pair_spec(2, 1, 2, 60, 60));
    specs.push_back(symmetric_pair_spec(4, 3, 4, 80, 80));

    // Station C joins three lines. The approach via B pays 175s onto the
    // outbound line while the approach via D pays 0s; the remaining entries
    // are large enough that no composed walk undercuts a direct one.
    TransferSpec c;
    c.station = 3;
    c.lines = {{2, true}, {4, true}, {5, true}};
    auto set = [&](LineId f, LineId t, Seconds sec) {
        c.times[{f, Direction::None, t, Direction::None}] = sec;
    };
    set(2, 5, 175);
    set(5, 2, 200);
    set(4, 5, 0);
    set(5, 4, 200);
    set(2, 4, 200);
    set(4, 2, 200);
    specs.push_back(std::move(c));

    return TransitNetwork(std::move(stations), std::move(lines), std::move(specs));
}

TransitNetwork fixture_through_leak() {
    std::vector<Station> stations = {
        {1, "A"}, {2, "B"}, {3, "C"}, {4, "D"}, {5, "E"},
    };
    std::vector<Line> lines = {
        {1, "L1", {1, 5, 3}, {100, 100}, {100, 100}}, // A-E-C
        {2, "L2", {2, 5, 4}, {100, 100}, {100, 100}}, // B-E-D
    };

    // At E, walking from the C-side platform of line 1 costs far less than
    // from the A-side one, so the ring expansion's zero-weight through link
    // A-side -> C-side opens an illegal shortcut for A -> B.
    TransferSpec e;
    e.station = 5;
    e.lines = {{1, false}, {2, false}};
    auto set = [&](Direction fd, LineId t, Direction td, Seconds sec) {
        e.times[{1, fd, t, td}] = sec;
    };
    set(Direction::Down, 2, Direction::Down, 120); // A side -> B side
    set(Direction::Down, 2, Direction::Up, 120);
    set(Direction::Up, 2, Direction::Down, 30); // C side -> B side
    set(Direction::Up, 2, Direction::Up, 30);
    for (Direction fd : {Direction::Up, Direction::Down})
        for (Direction td : {Direction::Up, Direction::Down})
            e.times[{2, fd, 1, td}] = 120;

    std::vector<TransferSpec> specs;
    specs.push_back(std::move(e));
    return TransitNetwork(std::move(stations), std::move(lines), std::move(specs));
}

}  // namespace aten
