#include "gedkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include "json.hpp"

#include "gedkit/errors.hpp"

namespace ged {

namespace pt = boost::property_tree;
using json = nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Value of an <attr>: the text of its single typed child (<string>, <int>, ...).
std::string attr_value(const pt::ptree& attr) {
  for (const auto& [tag, child] : attr) {
    if (tag == "<xmlattr>") continue;
    return trim(child.get_value<std::string>());
  }
  return trim(attr.get_value<std::string>());
}

std::optional<Label> attrs_label(const pt::ptree& element) {
  std::vector<std::pair<std::string, std::string>> attrs;
  for (const auto& [tag, child] : element) {
    if (tag != "attr") continue;
    attrs.emplace_back(child.get<std::string>("<xmlattr>.name", ""), attr_value(child));
  }
  if (attrs.empty()) return std::nullopt;
  if (attrs.size() == 1) return Label{attrs.front().second};
  std::sort(attrs.begin(), attrs.end());
  std::string composite;
  for (const auto& [name, value] : attrs) {
    if (!composite.empty()) composite += '|';
    composite += name + '=' + value;
  }
  return Label{composite};
}

}  // namespace

LabeledGraph parse_gxl(std::string_view bytes) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML at line " + std::to_string(e.line()) + ": " + e.message());
  }

  const pt::ptree* graph = nullptr;
  const auto root = tree.get_child_optional("gxl");
  if (!root) throw ParseError("missing <gxl> root element");
  for (const auto& [tag, child] : *root) {
    if (tag != "graph") continue;
    if (graph != nullptr) throw ParseError("more than one <graph> element");
    graph = &child;
  }
  if (graph == nullptr) throw ParseError("missing <graph> element");

  std::optional<std::string> name;
  if (auto id = graph->get_optional<std::string>("<xmlattr>.id")) name = *id;

  std::unordered_map<std::string, VertexId> ids;
  std::vector<Label> labels;
  std::vector<Edge> edges;
  std::set<std::pair<VertexId, VertexId>> seen;
  std::size_t node_index = 0;
  std::size_t edge_index = 0;
  // Nodes first so that edges may appear before the nodes they reference.
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      const auto id = child.get_optional<std::string>("<xmlattr>.id");
      if (!id) throw ParseError("<node> #" + std::to_string(node_index) + " has no id");
      if (!ids.emplace(*id, static_cast<VertexId>(labels.size())).second) {
        throw ParseError("<node id=\"" + *id + "\"> declared twice");
      }
      labels.push_back(attrs_label(child).value_or(Label{""}));
      ++node_index;
    }
  }
  for (const auto& [tag, child] : *graph) {
    if (tag == "edge") {
      const std::string context = "<edge> #" + std::to_string(edge_index);
      const auto from = child.get_optional<std::string>("<xmlattr>.from");
      const auto to = child.get_optional<std::string>("<xmlattr>.to");
      if (!from || !to) throw ParseError(context + " needs from and to");
      const auto a = ids.find(*from);
      const auto b = ids.find(*to);
      if (a == ids.end() || b == ids.end()) {
        throw ParseError(context + " (from=\"" + *from + "\" to=\"" + *to +
                         "\") references an undeclared node");
      }
      if (a->second == b->second) {
        throw ParseError(context + " is a self-loop on node \"" + *from + "\"");
      }
      const auto key = std::minmax(a->second, b->second);
      if (!seen.insert(key).second) {
        throw ParseError(context + " duplicates the undirected edge " + *from + "-" + *to);
      }
      edges.push_back({a->second, b->second, attrs_label(child).value_or(kDefaultEdgeLabel)});
      ++edge_index;
    }
  }
  try {
    return LabeledGraph(std::move(labels), std::move(edges), std::move(name));
  } catch (const InvalidGraph& e) {
    throw ParseError(e.what());
  }
}

LabeledGraph parse_json_graph(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object");

  std::optional<std::string> name;
  if (auto it = doc.find("name"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("field \"name\" must be a string");
    name = it->get<std::string>();
  }

  const auto vit = doc.find("vertices");
  if (vit == doc.end()) throw ParseError("missing field \"vertices\"");
  if (!vit->is_array()) throw ParseError("field \"vertices\" must be an array");
  std::vector<Label> labels;
  labels.reserve(vit->size());
  for (std::size_t i = 0; i < vit->size(); ++i) {
    const auto& vert = (*vit)[i];
    const std::string field = "vertices[" + std::to_string(i) + "]";
    if (!vert.is_object()) throw ParseError("field \"" + field + "\" must be an object");
    const auto lit = vert.find("label");
    if (lit == vert.end() || !lit->is_string()) {
      throw ParseError("field \"" + field + ".label\" must be a string");
    }
    labels.emplace_back(lit->get<std::string>());
  }

  std::vector<Edge> edges;
  if (auto eit = doc.find("edges"); eit != doc.end()) {
    if (!eit->is_array()) throw ParseError("field \"edges\" must be an array");
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t i = 0; i < eit->size(); ++i) {
      const auto& e = (*eit)[i];
      const std::string field = "edges[" + std::to_string(i) + "]";
      if (!e.is_object()) throw ParseError("field \"" + field + "\" must be an object");
      for (const char* key : {"u", "v"}) {
        const auto it = e.find(key);
        if (it == e.end() || !it->is_number_integer()) {
          throw ParseError("field \"" + field + "." + key + "\" must be an integer");
        }
      }
      const auto u = e["u"].get<std::int64_t>();
      const auto v = e["v"].get<std::int64_t>();
      const auto n = static_cast<std::int64_t>(labels.size());
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw ParseError("field \"" + field + "\" references a vertex outside 0.." +
                         std::to_string(n - 1));
      }
      if (u == v) throw ParseError("field \"" + field + "\" is a self-loop");
      if (u > v) throw ParseError("field \"" + field + "\" must satisfy u < v");
      if (!seen.emplace(u, v).second) throw ParseError("field \"" + field + "\" duplicates an edge");
      Label label = kDefaultEdgeLabel;
      if (auto lit = e.find("label"); lit != e.end() && !lit->is_null()) {
        if (!lit->is_string()) throw ParseError("field \"" + field + ".label\" must be a string");
        label = Label{lit->get<std::string>()};
      }
      edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), std::move(label)});
    }
  }
  return LabeledGraph(std::move(labels), std::move(edges), std::move(name));
}

std::string emit_json_graph(const LabeledGraph& g) {
  json doc = json::object();
  if (g.name()) doc["name"] = *g.name();
  json vertices = json::array();
  for (const auto& l : g.labels()) vertices.push_back({{"label", l.value}});
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"label", e.label.value}});
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

LabeledGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto ext = path.extension().string();
  try {
    if (ext == ".gxl" || ext == ".xml") return parse_gxl(buf.str());
    return parse_json_graph(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_graph_file(const std::filesystem::path& path, const LabeledGraph& g) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << emit_json_graph(g);
  if (!out) throw IoError("write failed for " + path.string());
}

void GenSpec::validate() const {
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in [0, 1]");
  if (vertex_alphabet.empty() || edge_alphabet.empty()) {
    throw InvalidArgument("label alphabets must be non-empty");
  }
}

LabeledGraph generate_random(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto pick = [&](const std::vector<Label>& alphabet) {
    const auto idx = static_cast<std::size_t>(unit() * static_cast<double>(alphabet.size()));
    return alphabet[std::min(idx, alphabet.size() - 1)];
  };

  std::vector<Label> labels;
  labels.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) labels.push_back(pick(spec.vertex_alphabet));

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      if (unit() < spec.density) {
        edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), kDefaultEdgeLabel});
      }
    }
  }
  for (auto& e : edges) e.label = pick(spec.edge_alphabet);
  return LabeledGraph(std::move(labels), std::move(edges));
}

const LabeledGraph* Dataset::find(std::string_view name) const {
  for (const auto& g : graphs) {
    if (g.name() && *g.name() == name) return &g;
  }
  return nullptr;
}

const std::string& Dataset::class_of(std::string_view name) const {
  if (!classes) throw ValidationError("dataset has no class labels");
  const auto it = classes->find(std::string(name));
  if (it == classes->end()) throw ValidationError("no class for graph \"" + std::string(name) + "\"");
  return it->second;
}

std::map<std::string, std::string> read_class_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read class file " + path.string());
  std::map<std::string, std::string> classes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected \"graph_name,class_label\"");
    }
    classes[trim(line.substr(0, comma))] = trim(line.substr(comma + 1));
  }
  return classes;
}

Dataset load_dataset(const std::filesystem::path& dir,
                     const std::optional<std::filesystem::path>& class_file, unsigned workers) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension();
      if (ext == ".gxl" || ext == ".json") files.push_back(entry.path());
    }
  } catch (const fs::filesystem_error& e) {
    throw IoError("cannot read dataset directory " + dir.string() + ": " + e.what());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<LabeledGraph>> parsed(files.size());
  std::vector<std::string> errors(files.size());
#pragma omp parallel for num_threads(std::max(1u, workers)) schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      auto g = read_graph_file(files[i]);
      if (!g.name()) g = g.with_name(files[i].stem().string());
      parsed[i] = std::move(g);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }

  Dataset ds;
  std::set<std::string> names;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!parsed[i]) {
      ds.failures.push_back({files[i], errors[i]});
      continue;
    }
    if (!names.insert(*parsed[i]->name()).second) {
      ds.failures.push_back({files[i], "duplicate graph name \"" + *parsed[i]->name() + "\""});
      continue;
    }
    ds.graphs.push_back(std::move(*parsed[i]));
  }

  if (class_file) {
    std::map<std::string, std::string> classes;
    for (auto& [name, cls] : read_class_file(*class_file)) {
      std::string key = name;
      if (!names.count(key)) {
        // Accept "molecule_1.gxl" style entries for a graph named "molecule_1".
        const auto stem = fs::path(name).stem().string();
        if (!names.count(stem)) {
          throw ValidationError("class file names graph \"" + name + "\" which was not loaded");
        }
        key = stem;
      }
      classes[key] = cls;
    }
    ds.classes = std::move(classes);
  }
  return ds;
}

}  // namespace ged
