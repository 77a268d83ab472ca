#include "io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace ggmpl::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::Parse, where + ": " + what);
}

long long parse_int(const std::string& text, const std::string& where) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) parse_error(where, "expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) fail(ErrorCode::Io, "cannot format number");
  return {buf, ptr};
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) fail(ErrorCode::Parse, "expected a number, got '" + text + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

std::string edge_list_text(const Graph& g) {
  std::string out = "p=" + std::to_string(g.node_count()) + "\n";
  for (const Edge& e : g.edges()) out += std::to_string(e.i + 1) + " " + std::to_string(e.j + 1) + "\n";
  return out;
}

Graph parse_edge_list(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front().rfind("p=", 0) != 0) parse_error("edge list", "missing 'p=<int>' header");
  const long long p = parse_int(trim(lines.front().substr(2)), "edge list header");
  if (p < 1 || p > 1'000'000) parse_error("edge list header", "node count out of range");
  std::vector<Edge> edges;
  for (std::size_t t = 1; t < lines.size(); ++t) {
    std::istringstream in(lines[t]);
    std::string a, b, extra;
    if (!(in >> a >> b) || (in >> extra)) parse_error("edge list line " + std::to_string(t + 1), "expected 'i j'");
    const long long i = parse_int(a, "edge list line " + std::to_string(t + 1));
    const long long j = parse_int(b, "edge list line " + std::to_string(t + 1));
    if (i < 1 || j > p || i >= j)
      parse_error("edge list line " + std::to_string(t + 1), "pair must satisfy 1 <= i < j <= p");
    edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
  }
  try {
    return Graph::from_edges(static_cast<int>(p), edges);
  } catch (const Error& e) {
    parse_error("edge list", e.what());
  }
}

void write_edge_list(const std::string& path, const Graph& g) { write_file(path, edge_list_text(g)); }

Graph read_edge_list(const std::string& path) {
  try {
    return parse_edge_list(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) fail(ErrorCode::Parse, path + ": " + e.what());
    throw;
  }
}

void write_data_csv(const std::string& path, const Eigen::MatrixXd& x, std::span<const std::string> names) {
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != x.cols())
    fail(ErrorCode::DimensionMismatch, "variable name count does not match column count");
  std::string out;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    if (c) out += ',';
    out += names.empty() ? "V" + std::to_string(c + 1) : names[static_cast<std::size_t>(c)];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (c) out += ',';
      out += format_double(x(r, c));
    }
    out += '\n';
  }
  write_file(path, out);
}

DataTable read_data_csv(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.size() < 2) parse_error(path, "data CSV needs a header row and at least one data row");
  DataTable table;
  table.names = split(lines.front(), ',');
  const auto p = static_cast<Eigen::Index>(table.names.size());
  table.values.resize(static_cast<Eigen::Index>(lines.size() - 1), p);
  for (std::size_t t = 1; t < lines.size(); ++t) {
    const auto fields = split(lines[t], ',');
    if (static_cast<Eigen::Index>(fields.size()) != p)
      parse_error(path + " line " + std::to_string(t + 1),
                  "expected " + std::to_string(p) + " fields, got " + std::to_string(fields.size()));
    for (Eigen::Index c = 0; c < p; ++c) {
      try {
        table.values(static_cast<Eigen::Index>(t - 1), c) = parse_double(fields[static_cast<std::size_t>(c)]);
      } catch (const Error& e) {
        parse_error(path + " line " + std::to_string(t + 1), e.what());
      }
    }
  }
  return table;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  write_file(path, out);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty()) parse_error(path, "empty matrix file");
  const auto cols = static_cast<Eigen::Index>(split(lines.front(), ',').size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lines.size()), cols);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split(lines[r], ',');
    if (static_cast<Eigen::Index>(fields.size()) != cols) parse_error(path, "ragged matrix row " + std::to_string(r + 1));
    for (Eigen::Index c = 0; c < cols; ++c) {
      try {
        m(static_cast<Eigen::Index>(r), c) = parse_double(fields[static_cast<std::size_t>(c)]);
      } catch (const Error& e) {
        parse_error(path + " row " + std::to_string(r + 1), e.what());
      }
    }
  }
  return m;
}

void write_edge_probs(const std::string& path, int p, std::span<const double> probs) {
  if (static_cast<std::int64_t>(probs.size()) != pair_count(p))
    fail(ErrorCode::DimensionMismatch, "probability vector length does not match p(p-1)/2");
  std::string out = "i,j,prob\n";
  std::int64_t k = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j, ++k)
      if (probs[static_cast<std::size_t>(k)] > 0.0)
        out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + format_double(probs[static_cast<std::size_t>(k)]) + "\n";
  write_file(path, out);
}

std::vector<double> read_edge_probs(const std::string& path, int p) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty() || split(lines.front(), ',') != std::vector<std::string>{"i", "j", "prob"})
    parse_error(path, "expected header 'i,j,prob'");
  std::vector<double> probs(static_cast<std::size_t>(pair_count(p)), 0.0);
  std::vector<std::uint8_t> seen(probs.size(), 0);
  for (std::size_t t = 1; t < lines.size(); ++t) {
    const std::string where = path + " line " + std::to_string(t + 1);
    const auto fields = split(lines[t], ',');
    if (fields.size() != 3) parse_error(where, "expected 'i,j,prob'");
    const long long i = parse_int(fields[0], where);
    const long long j = parse_int(fields[1], where);
    if (i < 1 || i >= j) parse_error(where, "pair must satisfy 1 <= i < j");
    if (j > p)
      fail(ErrorCode::DimensionMismatch, where + ": node " + std::to_string(j) + " exceeds p=" + std::to_string(p));
    double v = 0.0;
    try {
      v = parse_double(fields[2]);
    } catch (const Error& e) {
      parse_error(where, e.what());
    }
    if (!(v >= 0.0 && v <= 1.0)) parse_error(where, "probability outside [0, 1]");
    const auto k = static_cast<std::size_t>(edge_index(p, static_cast<int>(i - 1), static_cast<int>(j - 1)));
    if (seen[k]) parse_error(where, "duplicate pair");
    seen[k] = 1;
    probs[k] = v;
  }
  return probs;
}

void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace) {
  std::string out = "iteration,edge_count,total_logmpl,wall_seconds\n";
  for (const TraceRecord& r : trace)
    out += std::to_string(r.iteration) + "," + std::to_string(r.edge_count) + "," + format_double(r.total_logmpl) +
           "," + format_double(r.wall_seconds) + "\n";
  write_file(path, out);
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty() ||
      split(lines.front(), ',') != std::vector<std::string>{"iteration", "edge_count", "total_logmpl", "wall_seconds"})
    parse_error(path, "expected header 'iteration,edge_count,total_logmpl,wall_seconds'");
  std::vector<TraceRecord> trace;
  for (std::size_t t = 1; t < lines.size(); ++t) {
    const std::string where = path + " line " + std::to_string(t + 1);
    const auto f = split(lines[t], ',');
    if (f.size() != 4) parse_error(where, "expected 4 fields");
    try {
      trace.push_back({parse_int(f[0], where), parse_int(f[1], where), parse_double(f[2]), parse_double(f[3])});
    } catch (const Error& e) {
      parse_error(where, e.what());
    }
  }
  return trace;
}

std::map<std::string, std::vector<double>> read_numeric_columns(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty()) parse_error(path, "empty CSV");
  const auto names = split(lines.front(), ',');
  std::vector<std::vector<double>> cols(names.size());
  for (std::size_t t = 1; t < lines.size(); ++t) {
    const auto f = split(lines[t], ',');
    if (f.size() != names.size()) parse_error(path + " line " + std::to_string(t + 1), "wrong field count");
    for (std::size_t c = 0; c < f.size(); ++c) {
      try {
        cols[c].push_back(parse_double(f[c]));
      } catch (const Error& e) {
        parse_error(path + " line " + std::to_string(t + 1), e.what());
      }
    }
  }
  std::map<std::string, std::vector<double>> out;
  for (std::size_t c = 0; c < names.size(); ++c) out[names[c]] = std::move(cols[c]);
  return out;
}

void write_manifest(const std::string& path, std::span<const std::pair<std::string, std::string>> entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
  write_file(path, out);
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const auto& line : lines_of(read_file(path))) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error(path, "expected key=value, got '" + line + "'");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace ggmpl::io
