#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "error.hpp"
#include "fixtures.hpp"
#include "io.hpp"

using namespace ggmpl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ggmpl_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    const double v = standard_normal(rng) * std::pow(10.0, static_cast<double>(uniform_index(rng, 40)) - 20.0);
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::parse_double(io::format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK(code_of([] { (void)io::parse_double("1.5x"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::parse_double(""); }) == ErrorCode::Parse);
}

TEST_CASE("edge list round trip") {
  TempDir dir;
  Rng rng(3);
  const Graph g = fixture::random_graph(9, 0.3, rng);
  io::write_edge_list(dir.file("g.txt"), g);
  CHECK(io::read_edge_list(dir.file("g.txt")) == g);
  CHECK(io::edge_list_text(Graph::from_edges(3, std::vector<Edge>{{0, 2}})) == "p=3\n1 3\n");
  CHECK(io::parse_edge_list("p=4\n") == Graph(4));
  CHECK(code_of([] { (void)io::parse_edge_list("1 2\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::parse_edge_list("p=3\n2 1\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::parse_edge_list("p=3\n1 4\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::parse_edge_list("p=3\n1 2 3\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::parse_edge_list("p=3\n1 2\n1 2\n"); }) == ErrorCode::Parse);
}

TEST_CASE("data CSV round trip is exact") {
  TempDir dir;
  const Eigen::MatrixXd x = fixture::correlated_data(25, 4, 9);
  io::write_data_csv(dir.file("d.csv"), x);
  const io::DataTable t = io::read_data_csv(dir.file("d.csv"));
  CHECK(t.values == x);
  CHECK(t.names == std::vector<std::string>{"V1", "V2", "V3", "V4"});
  const std::vector<std::string> names{"a", "b"};
  io::write_data_csv(dir.file("n.csv"), Eigen::MatrixXd::Ones(2, 2), names);
  CHECK(io::read_data_csv(dir.file("n.csv")).names == names);
  CHECK(code_of([&] { io::write_data_csv(dir.file("bad.csv"), x, names); }) == ErrorCode::DimensionMismatch);

  io::write_file(dir.file("ragged.csv"), "a,b\n1,2\n3\n");
  CHECK(code_of([&] { (void)io::read_data_csv(dir.file("ragged.csv")); }) == ErrorCode::Parse);
  io::write_file(dir.file("text.csv"), "a,b\n1,x\n");
  CHECK(code_of([&] { (void)io::read_data_csv(dir.file("text.csv")); }) == ErrorCode::Parse);
  io::write_file(dir.file("header.csv"), "a,b\n");
  CHECK(code_of([&] { (void)io::read_data_csv(dir.file("header.csv")); }) == ErrorCode::Parse);
}

TEST_CASE("matrix CSV round trip is exact") {
  TempDir dir;
  const Eigen::MatrixXd m = fixture::correlated_data(6, 6, 4);
  io::write_matrix_csv(dir.file("m.csv"), m);
  CHECK(io::read_matrix_csv(dir.file("m.csv")) == m);
  io::write_file(dir.file("r.csv"), "1,2\n3\n");
  CHECK(code_of([&] { (void)io::read_matrix_csv(dir.file("r.csv")); }) == ErrorCode::Parse);
}

TEST_CASE("edge probabilities drop zeros and read absent pairs as zero") {
  TempDir dir;
  const std::vector<double> probs{0.0, 0.25, 1.0, 0.0, 0.125, 0.0};
  io::write_edge_probs(dir.file("p.csv"), 4, probs);
  CHECK(io::read_file(dir.file("p.csv")) == "i,j,prob\n1,3,0.25\n1,4,1\n2,4,0.125\n");
  CHECK(io::read_edge_probs(dir.file("p.csv"), 4) == probs);
  CHECK(io::read_edge_probs(dir.file("p.csv"), 6).size() == 15);
  CHECK(code_of([&] { (void)io::read_edge_probs(dir.file("p.csv"), 3); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { io::write_edge_probs(dir.file("q.csv"), 5, probs); }) == ErrorCode::DimensionMismatch);

  io::write_file(dir.file("range.csv"), "i,j,prob\n1,2,1.5\n");
  CHECK(code_of([&] { (void)io::read_edge_probs(dir.file("range.csv"), 3); }) == ErrorCode::Parse);
  io::write_file(dir.file("dup.csv"), "i,j,prob\n1,2,0.5\n1,2,0.5\n");
  CHECK(code_of([&] { (void)io::read_edge_probs(dir.file("dup.csv"), 3); }) == ErrorCode::Parse);
  io::write_file(dir.file("hdr.csv"), "a,b,c\n");
  CHECK(code_of([&] { (void)io::read_edge_probs(dir.file("hdr.csv"), 3); }) == ErrorCode::Parse);
}

TEST_CASE("trace CSV round trip") {
  TempDir dir;
  const std::vector<TraceRecord> trace{{100, 3, -1234.5678901234567, 0.0}, {200, 5, -1200.1, 0.125}};
  io::write_trace_csv(dir.file("t.csv"), trace);
  CHECK(io::read_trace_csv(dir.file("t.csv")) == trace);
  const auto cols = io::read_numeric_columns(dir.file("t.csv"));
  CHECK(cols.at("edge_count") == std::vector<double>{3, 5});
  CHECK(cols.at("wall_seconds") == std::vector<double>{0.0, 0.125});
}

TEST_CASE("manifest round trip keeps insertion order") {
  TempDir dir;
  const std::vector<std::pair<std::string, std::string>> entries{{"p", "10"}, {"kind", "random"}, {"b", "3"}};
  io::write_manifest(dir.file("m.txt"), entries);
  CHECK(io::read_file(dir.file("m.txt")) == "p=10\nkind=random\nb=3\n");
  const auto back = io::read_manifest(dir.file("m.txt"));
  CHECK(back.at("kind") == "random");
  CHECK(back.size() == 3);
}

TEST_CASE("missing files are I/O errors") {
  CHECK(code_of([] { (void)io::read_file("/nonexistent/ggmpl/file"); }) == ErrorCode::Io);
  CHECK(code_of([] { (void)io::read_edge_list("/nonexistent/ggmpl/g.txt"); }) == ErrorCode::Io);
  CHECK(code_of([] { io::write_file("/nonexistent/ggmpl/out.txt", "x"); }) == ErrorCode::Io);
}
