#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gedkit/io.hpp"
#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI, capturing stdout; stderr goes to a file next to the outputs.
Run cli(const std::string& args) {
  const std::string cmd = std::string(GEDKIT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("gedkit_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    ged::write_graph_file(root / "P2.json", gtest::p2());
    ged::write_graph_file(root / "K1.json", gtest::k1());
    ged::write_graph_file(root / "tri.json", gtest::triangle());
    ged::write_graph_file(root / "r1.json", gtest::random_graph(10, 0.5, 101, {"A", "B", "C", "D"}, {"1"}));
    ged::write_graph_file(root / "r2.json", gtest::random_graph(10, 0.5, 102, {"A", "B", "C", "D"}, {"1"}));
    ged::write_graph_file(root / "big.json", gtest::random_graph(14, 0.3, 103));
    std::ofstream(root / "broken.json") << "{\"vertices\": 3}";
  }
  ~Workspace() { fs::remove_all(root); }
  std::string operator/(const std::string& f) const { return (root / f).string(); }
};

double distance_of(const Run& r) {
  return nlohmann::json::parse(r.out)["distance"].get<double>();
}

}  // namespace

TEST_CASE("cli ged") {
  Workspace w;
  auto same = cli("ged " + (w / "r1.json") + " " + (w / "r1.json") + " --format json --threads 1");
  CHECK(same.code == 0);
  CHECK(distance_of(same) == 0.0);

  auto p2k1 = cli("ged " + (w / "P2.json") + " " + (w / "K1.json") + " --format json --path --verify");
  CHECK(p2k1.code == 0);
  auto j = nlohmann::json::parse(p2k1.out);
  CHECK(j["distance"] == 6.0);
  CHECK(j["path"].size() == 2);
  CHECK(j["verify"]["ok"] == true);

  auto exact = cli("ged " + (w / "K1.json") + " " + (w / "P2.json") + " --exact --format json");
  CHECK(distance_of(exact) == 6.0);
  CHECK(nlohmann::json::parse(exact.out)["optimal"] == true);

  const auto pair = (w / "r1.json") + " " + (w / "r2.json");
  auto greedy = cli("ged " + pair + " --k 1 --format json --verify");
  auto wide = cli("ged " + pair + " --k 100000 --format json --verify");
  CHECK(distance_of(wide) <= distance_of(greedy));
  CHECK(nlohmann::json::parse(wide.out)["verify"]["ok"] == true);

  auto text = cli("ged " + (w / "P2.json") + " " + (w / "K1.json") + " --path");
  CHECK(text.out.rfind("distance 6\n", 0) == 0);
  CHECK(text.out.find("v1->eps") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  Workspace w;
  CHECK(cli("").code == 1);
  CHECK(cli("ged " + (w / "P2.json")).code == 1);
  CHECK(cli("ged " + (w / "P2.json") + " " + (w / "K1.json") + " --k 0").code == 1);
  CHECK(cli("ged " + (w / "P2.json") + " " + (w / "K1.json") + " --costs 1,2").code == 1);
  CHECK(cli("ged " + (w / "P2.json") + " " + (w / "broken.json")).code == 2);
  CHECK(cli("ged " + (w / "P2.json") + " " + (w / "missing.json")).code == 2);
  CHECK(cli("ged " + (w / "big.json") + " " + (w / "P2.json") + " --exact").code == 3);
  CHECK(cli("ged " + (w / "r1.json") + " " + (w / "r2.json") + " --exact --node-limit 2").code == 3);
  CHECK(cli("crossover " + (w / "P2.json") + " " + (w / "K1.json") + " --fraction 2").code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("cli gen, matrix and knn") {
  Workspace w;
  auto a = cli("gen --n 10 --density 0.5 --count 5 --seed 7 --out " + (w / "g1"));
  auto b = cli("gen --n 10 --density 0.5 --count 5 --seed 7 --out " + (w / "g2"));
  CHECK(a.code == 0);
  CHECK(a.out.find("g0004.json 11") != std::string::npos);
  for (int i = 0; i < 5; ++i) {
    const std::string f = "g000" + std::to_string(i) + ".json";
    CHECK(slurp(w.root / "g1" / f) == slurp(w.root / "g2" / f));
  }
  cli("gen --n 6 --density 0 --count 3 --out " + (w / "flat"));
  for (int i = 0; i < 3; ++i) {
    CHECK(ged::read_graph_file(w.root / "flat" / ("g000" + std::to_string(i) + ".json")).num_edges() == 0);
  }

  auto m = cli("matrix " + (w / "g1") + " --k 100");
  CHECK(m.code == 0);
  std::istringstream rows(m.out);
  std::string line;
  std::getline(rows, line);
  CHECK(line == "g0000,g0001,g0002,g0003,g0004");
  int body = 0;
  while (std::getline(rows, line)) ++body;
  CHECK(body == 5);
  auto mj = nlohmann::json::parse(cli("matrix " + (w / "g1") + " --k 100 --format json").out);
  CHECK(mj["pairs"] == 10);
  CHECK(mj["matrix"][1][3] == mj["matrix"][3][1]);

  fs::create_directories(w.root / "train");
  fs::create_directories(w.root / "test");
  ged::write_graph_file(w.root / "train" / "t0.json", gtest::triangle());
  ged::write_graph_file(w.root / "train" / "p0.json", gtest::p3());
  ged::write_graph_file(w.root / "test" / "q0.json", gtest::triangle());
  ged::write_graph_file(w.root / "test" / "q1.json", gtest::p3());
  std::ofstream(w.root / "train" / "classes.csv") << "t0,tri\np0,path\n";
  std::ofstream(w.root / "test" / "classes.csv") << "q0,tri\nq1,path\n";
  auto k = cli("knn " + (w / "train") + " " + (w / "test") + " --costs uniform --format json");
  CHECK(k.code == 0);
  CHECK(nlohmann::json::parse(k.out)["accuracy"] == 1.0);
  fs::remove(w.root / "test" / "classes.csv");
  CHECK(cli("knn " + (w / "train") + " " + (w / "test")).code == 2);
}

TEST_CASE("cli crossover and bench") {
  Workspace w;
  auto c = cli("crossover " + (w / "P2.json") + " " + (w / "tri.json") + " --fraction 0.5 -o " + (w / "child.json") +
               " --format json");
  CHECK(c.code == 0);
  auto j = nlohmann::json::parse(c.out);
  CHECK(j["applied_ops"] == 2);
  CHECK(j["continuation_ok"] == true);
  CHECK(ged::read_graph_file(w.root / "child.json").num_vertices() == 2);

  auto zero = cli("crossover " + (w / "r1.json") + " " + (w / "r2.json") + " --fraction 0 --k 50");
  CHECK(ged::parse_json_graph(zero.out).with_name(std::nullopt) == ged::read_graph_file(w.root / "r1.json"));

  const std::string args = "bench table1 --n 5 --pairs 3 --k 20 --densities 0.3,0.6 --format json --seed 3";
  auto b1 = cli(args + " --threads 1");
  auto b2 = cli(args + " --threads 4 --out " + (w / "report.json"));
  CHECK(b1.code == 0);
  CHECK(b1.out == b2.out);
  CHECK(slurp(w.root / "report.json") == b1.out);
  auto rep = nlohmann::json::parse(b1.out);
  CHECK(rep["protocol"] == "table1");
  CHECK(rep["records"].size() == 6);

  auto ks = nlohmann::json::parse(cli("bench ksweep --n 6 --pairs 4 --ks 10,100 --format json").out);
  CHECK(ks["aggregates"][0]["mean_normalized"] == 1.0);
  auto text = cli("bench sizesweep --sizes 5,8 --k 10");
  CHECK(text.code == 0);
  CHECK(text.out.find("n=8") != std::string::npos);
  CHECK(cli("bench nosuch").code == 1);
}
