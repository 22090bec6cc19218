#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gedkit/graph.hpp"

namespace ged {

// GXL subset: a single <graph> whose <node id=...> elements carry the vertex
// label in their <attr> children and whose <edge from=... to=...> elements
// optionally carry an edge label. One attr gives its value verbatim; several
// attrs become "name=value" pairs sorted by name and joined with '|'. Edge
// direction markers are ignored. Throws ParseError.
LabeledGraph parse_gxl(std::string_view bytes);

// {"name": str?, "vertices": [{"label": str}], "edges": [{"u": int, "v": int, "label": str?}]}
// with u < v. Throws ParseError naming the offending field.
LabeledGraph parse_json_graph(std::string_view bytes);
std::string emit_json_graph(const LabeledGraph& g);

// Dispatches on the .gxl / .json extension. Throws IoError or ParseError.
LabeledGraph read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const LabeledGraph& g);

/*
 * Erdos-Renyi G(n, p) generator with a fixed draw order so corpora are
 * reproducible anywhere:
 *
 *   rng = mt19937_64(seed); every draw is x = rng() >> 11, u = x * 2^-53
 *   1. n vertex labels:   alphabet[floor(u * |alphabet|)]
 *   2. pairs (i, j), i < j, lexicographic: edge present iff u < density
 *   3. one label per present edge, in the same order
 */
struct GenSpec {
  std::size_t n = 10;
  double density = 0.5;
  std::vector<Label> vertex_alphabet{"A", "B", "C", "D"};
  std::vector<Label> edge_alphabet{"1"};
  std::uint64_t seed = 0;

  void validate() const;
};

LabeledGraph generate_random(const GenSpec& spec);

struct LoadFailure {
  std::filesystem::path file;
  std::string message;
};

struct Dataset {
  std::vector<LabeledGraph> graphs;  // sorted by file name, every graph named
  std::optional<std::map<std::string, std::string>> classes;
  std::vector<LoadFailure> failures;

  const LabeledGraph* find(std::string_view name) const;
  // Class of the named graph; throws ValidationError if unknown.
  const std::string& class_of(std::string_view name) const;
};

// Loads every .gxl/.json file in dir. A graph takes the name stored in the
// file, or the file stem when it has none. Files that fail to parse are
// recorded in failures. The class file holds header-less "name,class" lines.
// Throws IoError for an unreadable directory and ValidationError when a
// class line names a graph that was not loaded.
Dataset load_dataset(const std::filesystem::path& dir,
                     const std::optional<std::filesystem::path>& class_file = std::nullopt,
                     unsigned workers = 1);

std::map<std::string, std::string> read_class_file(const std::filesystem::path& path);

}  // namespace ged
