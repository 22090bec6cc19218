#include "gedkit/edit_path.hpp"

#include <algorithm>
#include <string>

#include "gedkit/errors.hpp"

namespace ged {

std::string to_string(const EditOp& op) {
  switch (op.kind) {
    case EditOp::Kind::Substitute:
      return "v" + std::to_string(op.source) + "->u" + std::to_string(op.target);
    case EditOp::Kind::Delete:
      return "v" + std::to_string(op.source) + "->eps";
    case EditOp::Kind::Insert:
      return "eps->u" + std::to_string(op.target);
  }
  return "?";
}

bool PathMapping::complete() const {
  return std::all_of(source_resolved.begin(), source_resolved.end(), [](bool b) { return b; }) &&
         std::all_of(target_resolved.begin(), target_resolved.end(), [](bool b) { return b; });
}

PathMapping resolve_path(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2,
                         std::size_t prefix_len) {
  const auto n1 = g1.num_vertices();
  const auto n2 = g2.num_vertices();
  PathMapping m;
  m.forward.assign(n1, kNoVertex);
  m.backward.assign(n2, kNoVertex);
  m.source_resolved.assign(n1, false);
  m.target_resolved.assign(n2, false);

  prefix_len = std::min(prefix_len, path.ops.size());
  for (std::size_t i = 0; i < prefix_len; ++i) {
    const auto& op = path.ops[i];
    if (op.touches_source()) {
      if (op.source >= n1) throw InvalidPath("op " + std::to_string(i) + " (" + to_string(op) +
                                             ") references a vertex outside g1");
      if (m.source_resolved[op.source]) {
        throw InvalidPath("g1 vertex " + std::to_string(op.source) + " used twice");
      }
      m.source_resolved[op.source] = true;
    }
    if (op.touches_target()) {
      if (op.target >= n2) throw InvalidPath("op " + std::to_string(i) + " (" + to_string(op) +
                                             ") references a vertex outside g2");
      if (m.target_resolved[op.target]) {
        throw InvalidPath("g2 vertex " + std::to_string(op.target) + " used twice");
      }
      m.target_resolved[op.target] = true;
    }
    if (op.kind == EditOp::Kind::Substitute) {
      m.forward[op.source] = op.target;
      m.backward[op.target] = op.source;
    }
  }
  return m;
}

PathMapping resolve_path(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2) {
  return resolve_path(path, g1, g2, path.ops.size());
}

double op_cost(const EditOp& op, const LabeledGraph& g1, const LabeledGraph& g2,
               const CostModel& cm) {
  if (op.touches_source() && op.source >= g1.num_vertices()) {
    throw InvalidOperation(to_string(op) + ": g1 has " + std::to_string(g1.num_vertices()) +
                           " vertices");
  }
  if (op.touches_target() && op.target >= g2.num_vertices()) {
    throw InvalidOperation(to_string(op) + ": g2 has " + std::to_string(g2.num_vertices()) +
                           " vertices");
  }
  switch (op.kind) {
    case EditOp::Kind::Substitute:
      return cm.vertex_substitution(g1.label(op.source), g2.label(op.target));
    case EditOp::Kind::Delete:
      return cm.vdel;
    case EditOp::Kind::Insert:
      return cm.vins;
  }
  return 0.0;
}

double path_cost(const EditPath& path, const LabeledGraph& g1, const LabeledGraph& g2,
                 const CostModel& cm) {
  const auto m = resolve_path(path, g1, g2);
  double total = 0.0;
  for (const auto& op : path.ops) total += op_cost(op, g1, g2, cm);

  for (const auto& e : g1.edges()) {
    if (!m.source_resolved[e.u] || !m.source_resolved[e.v]) continue;
    const VertexId a = m.forward[e.u];
    const VertexId b = m.forward[e.v];
    const Edge* image = (a != kNoVertex && b != kNoVertex) ? g2.find_edge(a, b) : nullptr;
    total += image ? cm.edge_substitution(e.label, image->label) : cm.edel;
  }
  for (const auto& e : g2.edges()) {
    if (!m.target_resolved[e.u] || !m.target_resolved[e.v]) continue;
    const VertexId a = m.backward[e.u];
    const VertexId b = m.backward[e.v];
    if (a != kNoVertex && b != kNoVertex && g1.has_edge(a, b)) continue;  // substitution, priced above
    total += cm.eins;
  }
  return total;
}

AppliedPath apply_edit_path_tracked(const LabeledGraph& g1, const EditPath& path,
                                    const LabeledGraph& g2, std::size_t prefix_len) {
  if (prefix_len > path.ops.size()) {
    throw RangeError("prefix length " + std::to_string(prefix_len) + " exceeds path length " +
                     std::to_string(path.ops.size()));
  }
  const auto m = resolve_path(path, g1, g2, prefix_len);

  AppliedPath out;
  std::vector<Label> labels;
  std::vector<VertexId> index_of_source(g1.num_vertices(), kNoVertex);
  std::vector<VertexId> index_of_target(g2.num_vertices(), kNoVertex);

  for (VertexId v = 0; v < g1.num_vertices(); ++v) {
    const bool resolved = m.source_resolved[v];
    const VertexId image = m.forward[v];
    if (resolved && image == kNoVertex) continue;  // deleted
    const auto idx = static_cast<VertexId>(labels.size());
    index_of_source[v] = idx;
    if (resolved) {
      labels.push_back(g2.label(image));
      index_of_target[image] = idx;
    } else {
      labels.push_back(g1.label(v));
    }
    out.target_of.push_back(image);
    out.source_of.push_back(v);
  }
  for (std::size_t i = 0; i < prefix_len; ++i) {
    const auto& op = path.ops[i];
    if (op.kind != EditOp::Kind::Insert) continue;
    index_of_target[op.target] = static_cast<VertexId>(labels.size());
    labels.push_back(g2.label(op.target));
    out.target_of.push_back(op.target);
    out.source_of.push_back(kNoVertex);
  }

  std::vector<Edge> edges;
  // Edges with an unresolved g1 endpoint are untouched so far.
  for (const auto& e : g1.edges()) {
    if (m.source_resolved[e.u] && m.source_resolved[e.v]) continue;
    const VertexId a = index_of_source[e.u];
    const VertexId b = index_of_source[e.v];
    if (a == kNoVertex || b == kNoVertex) continue;  // other endpoint deleted
    edges.push_back({a, b, e.label});
  }
  for (const auto& e : g2.edges()) {
    if (!m.target_resolved[e.u] || !m.target_resolved[e.v]) continue;
    edges.push_back({index_of_target[e.u], index_of_target[e.v], e.label});
  }
  out.graph = LabeledGraph(std::move(labels), std::move(edges), g1.name());
  return out;
}

LabeledGraph apply_edit_path(const LabeledGraph& g1, const EditPath& path, const LabeledGraph& g2,
                             std::size_t prefix_len) {
  return apply_edit_path_tracked(g1, path, g2, prefix_len).graph;
}

EditPath continuation_path(const LabeledGraph& g1, const EditPath& path, const LabeledGraph& g2,
                           std::size_t prefix_len, const CostModel& cm) {
  const auto applied = apply_edit_path_tracked(g1, path, g2, prefix_len);

  std::vector<const EditOp*> pending_source(g1.num_vertices(), nullptr);
  std::vector<const EditOp*> pending_inserts;
  for (std::size_t i = prefix_len; i < path.ops.size(); ++i) {
    const auto& op = path.ops[i];
    if (op.kind == EditOp::Kind::Insert) {
      pending_inserts.push_back(&op);
    } else {
      pending_source[op.source] = &op;
    }
  }

  EditPath rest;
  for (VertexId i = 0; i < applied.graph.num_vertices(); ++i) {
    if (applied.target_of[i] != kNoVertex) {
      rest.ops.push_back(EditOp::substitute(i, applied.target_of[i]));
      continue;
    }
    const EditOp* op = pending_source[applied.source_of[i]];
    if (op == nullptr) continue;  // path is not complete; vertex stays unresolved
    rest.ops.push_back(op->kind == EditOp::Kind::Substitute ? EditOp::substitute(i, op->target)
                                                            : EditOp::remove(i));
  }
  for (const auto* op : pending_inserts) rest.ops.push_back(*op);
  rest.total_cost = path_cost(rest, applied.graph, g2, cm);
  return rest;
}

bool graphs_equal_under_mapping(const LabeledGraph& a, const LabeledGraph& b,
                                const std::vector<VertexId>& mapping) {
  const auto n = a.num_vertices();
  if (b.num_vertices() != n || mapping.size() != n) {
    throw InvalidMapping("mapping must be a bijection between " + std::to_string(n) + " and " +
                         std::to_string(b.num_vertices()) + " vertices (got " +
                         std::to_string(mapping.size()) + " entries)");
  }
  std::vector<bool> hit(n, false);
  for (VertexId x : mapping) {
    if (x >= n || hit[x]) throw InvalidMapping("mapping is not a bijection");
    hit[x] = true;
  }

  for (VertexId v = 0; v < n; ++v) {
    if (a.label(v) != b.label(mapping[v])) return false;
  }
  if (a.num_edges() != b.num_edges()) return false;
  for (const auto& e : a.edges()) {
    const Edge* image = b.find_edge(mapping[e.u], mapping[e.v]);
    if (image == nullptr || image->label != e.label) return false;
  }
  return true;
}

WitnessCheck verify_witness(const EditPath& path, double reported_cost, const LabeledGraph& g1,
                            const LabeledGraph& g2, const CostModel& cm) {
  WitnessCheck check;
  try {
    check.recomputed_cost = path_cost(path, g1, g2, cm);
    check.cost_matches = costs_equal(check.recomputed_cost, reported_cost) &&
                         costs_equal(path.total_cost, reported_cost);
    check.complete = resolve_path(path, g1, g2).complete();
    if (check.complete) {
      const auto applied = apply_edit_path_tracked(g1, path, g2, path.ops.size());
      check.reconstructs_target = graphs_equal_under_mapping(applied.graph, g2, applied.target_of);
    }
  } catch (const Error&) {
    // leave the failing flags unset
  }
  return check;
}

}  // namespace ged
