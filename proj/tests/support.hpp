#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "gedkit/cost_model.hpp"
#include "gedkit/edit_path.hpp"
#include "gedkit/graph.hpp"
#include "gedkit/io.hpp"
#include "gedkit/kbest.hpp"

namespace gtest {

using ged::Label;
using ged::LabeledGraph;

inline LabeledGraph graph(std::vector<Label> labels,
                          std::initializer_list<std::pair<ged::VertexId, ged::VertexId>> edges,
                          const char* edge_label = "1") {
  std::vector<ged::Edge> es;
  for (auto [u, v] : edges) es.push_back({u, v, Label{edge_label}});
  return LabeledGraph(std::move(labels), std::move(es));
}

inline LabeledGraph k1(const char* l = "A") { return graph({l}, {}); }
inline LabeledGraph p2() { return graph({"A", "A"}, {{0, 1}}); }
inline LabeledGraph p3() { return graph({"A", "A", "A"}, {{0, 1}, {1, 2}}); }
inline LabeledGraph triangle() { return graph({"A", "A", "A"}, {{0, 1}, {1, 2}, {0, 2}}); }

inline LabeledGraph random_graph(std::size_t n, double density, std::uint64_t seed,
                                 std::vector<Label> vertex_alphabet = {"A", "B", "C"},
                                 std::vector<Label> edge_alphabet = {"x", "y"}) {
  ged::GenSpec s;
  s.n = n;
  s.density = density;
  s.seed = seed;
  s.vertex_alphabet = std::move(vertex_alphabet);
  s.edge_alphabet = std::move(edge_alphabet);
  return ged::generate_random(s);
}

// splitmix64, for drawing test parameters.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace gtest
