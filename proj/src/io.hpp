#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"
#include "samplers.hpp"

namespace ggmpl::io {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Edge list: `p=<int>` header, then one `i j` pair (1-based, i < j) per line.
void write_edge_list(const std::string& path, const Graph& g);
Graph read_edge_list(const std::string& path);
std::string edge_list_text(const Graph& g);
Graph parse_edge_list(const std::string& text);

struct DataTable {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // n × p
};

/// Data CSV: header row of variable names, then n rows of p numbers.
void write_data_csv(const std::string& path, const Eigen::MatrixXd& x, std::span<const std::string> names = {});
DataTable read_data_csv(const std::string& path);

/// Dense headerless matrix CSV (used for precision matrices).
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

/// `i,j,prob` with a header row; only pairs with prob > 0 are written.
void write_edge_probs(const std::string& path, int p, std::span<const double> probs);
/// Canonical-order probabilities; pairs absent from the file are 0.
std::vector<double> read_edge_probs(const std::string& path, int p);

/// `iteration,edge_count,total_logmpl,wall_seconds`.
void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

/// Generic numeric CSV with a header row, returned column-wise by name.
std::map<std::string, std::vector<double>> read_numeric_columns(const std::string& path);

/// Plain `key=value` lines, in insertion order.
void write_manifest(const std::string& path, std::span<const std::pair<std::string, std::string>> entries);
std::map<std::string, std::string> read_manifest(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace ggmpl::io
