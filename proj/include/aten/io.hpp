#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aten/core.hpp"
#include "aten/expand.hpp"

namespace aten {

// Network files are canonical JSON: UTF-8, two-space indent, keys in fixed
// alphabetical order, stations and lines sorted by id, transfer entries in
// lexicographic key order, newline-terminated. write(read(f)) == f for
// canonical files. Unknown fields are schema errors naming the field; a
// parsed network must also pass validate().

std::string serialize_network(const TransitNetwork& net);
TransitNetwork parse_network(std::string_view text, const std::string& origin = "<string>");

TransitNetwork read_network(const std::filesystem::path& path);
void write_network(const TransitNetwork& net, const std::filesystem::path& path);

// Expanded graphs use a sibling schema carrying the typed node list (with
// the original-station back-map) and the typed edge list.
std::string serialize_expanded(const ExpandedNetwork& g);
void write_expanded(const ExpandedNetwork& g, const std::filesystem::path& path);

// Five stations, five single-segment lines. The greedy node-labelled search
// fixes the wrong parent for the middle transfer station and returns 585s
// for the A->E query where the true optimum is 425s.
TransitNetwork fixture_greedy_trap();

// Cross network with one split-position transfer station whose walk times
// differ sharply by approach side. The ring-style expansion lets a path
// cross the zero-weight through link on foot, undercutting the legal
// transfer for A->B.
TransitNetwork fixture_through_leak();

}  // namespace aten
