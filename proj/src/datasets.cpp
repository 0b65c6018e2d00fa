#include "datasets.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "common.hpp"

namespace tssort {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open for writing: " + path);
  return out;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, long row, size_t col, const std::string& path) {
  auto malformed = [&](const std::string& why) -> double {
    fail(Errc::parse_error, path + ": " + why + " at row " + std::to_string(row) + ", column " +
                                std::to_string(col + 1) + ": '" + cell + "'");
  };
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  if (begin == end) return malformed("empty cell");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return malformed("non-numeric cell");
  if (!std::isfinite(value)) return malformed("non-finite cell");
  return value;
}

}  // namespace

void save_panel_csv(const Panel& p, const std::string& path) {
  check_panel(p);
  std::ofstream out = open_out(path);
  for (int j = 0; j < p.cols(); ++j) {
    if (j) out << ',';
    out << (static_cast<size_t>(j) < p.names.size() ? p.names[static_cast<size_t>(j)]
                                                    : "x" + std::to_string(j));
  }
  out << '\n';
  for (long t = 0; t < p.rows(); ++t) {
    for (int j = 0; j < p.cols(); ++j) {
      if (j) out << ',';
      out << format_g17(p.data(t, j));
    }
    out << '\n';
  }
  if (!out) fail(Errc::io_error, "write failed: " + path);
}

Panel load_panel_csv(const std::string& path) {
  std::string content = read_all(path);
  std::istringstream in(content);
  std::string line;
  std::vector<std::vector<double>> rows;
  Panel p;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (line_no == 1) {
      p.names = cells;
      continue;
    }
    if (cells.size() != p.names.size())
      fail(Errc::parse_error, path + ": row " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(p.names.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (size_t c = 0; c < cells.size(); ++c)
      row.push_back(parse_cell(cells[c], line_no, c, path));
    rows.push_back(std::move(row));
  }
  if (p.names.empty()) fail(Errc::parse_error, path + ": empty file");
  if (rows.size() < 2) fail(Errc::parse_error, path + ": need at least 2 data rows");
  p.data.resize(static_cast<long>(rows.size()), static_cast<long>(p.names.size()));
  for (size_t t = 0; t < rows.size(); ++t)
    for (size_t j = 0; j < p.names.size(); ++j)
      p.data(static_cast<long>(t), static_cast<long>(j)) = rows[t][j];
  return p;
}

void save_summary_csv(const SummaryGraph& g, const std::string& path) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < g.d; ++i) {
    for (int j = 0; j < g.d; ++j) {
      if (j) out << ',';
      out << (g.edge(i, j) ? '1' : '0');
    }
    out << '\n';
  }
  if (!out) fail(Errc::io_error, "write failed: " + path);
}

SummaryGraph load_summary_csv(const std::string& path) {
  std::string content = read_all(path);
  std::istringstream in(content);
  std::string line;
  std::vector<std::vector<uint8_t>> rows;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    std::vector<uint8_t> row;
    row.reserve(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      std::string cell = cells[c];
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.pop_back();
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.erase(0, 1);
      if (cell == "0")
        row.push_back(0);
      else if (cell == "1")
        row.push_back(1);
      else
        fail(Errc::parse_error, path + ": non-binary cell at row " + std::to_string(line_no) +
                                    ", column " + std::to_string(c + 1) + ": '" + cells[c] + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::parse_error, path + ": empty file");
  size_t d = rows.size();
  for (const auto& row : rows)
    if (row.size() != d) fail(Errc::parse_error, path + ": matrix is not square");
  SummaryGraph g(static_cast<int>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      if (rows[i][j]) g.set_edge(static_cast<int>(i), static_cast<int>(j));
  return g;
}

void save_graph_json(const GraphFile& gf, const std::string& path) {
  const WeightedTsGraph& g = gf.graph;
  nlohmann::json j;
  j["d"] = g.d;
  j["tau_max"] = g.tau_max;
  nlohmann::json weights = nlohmann::json::array();
  for (const Matrix& w : g.weights) {
    nlohmann::json slice = nlohmann::json::array();
    for (int i = 0; i < g.d; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < g.d; ++c) row.push_back(w(i, c));
      slice.push_back(std::move(row));
    }
    weights.push_back(std::move(slice));
  }
  j["weights"] = std::move(weights);
  if (!gf.method.empty()) j["method"] = gf.method;
  if (gf.convergence) {
    j["convergence"] = {{"h", gf.convergence->h},
                        {"outer_iterations", gf.convergence->outer_iterations},
                        {"converged", gf.convergence->converged}};
  }
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) fail(Errc::io_error, "write failed: " + path);
}

GraphFile load_graph_json(const std::string& path) {
  std::string content = read_all(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": invalid JSON: " + e.what());
  }

  GraphFile gf;
  try {
    if (!j.is_object() || !j.contains("d") || !j.contains("tau_max") || !j.contains("weights"))
      fail(Errc::parse_error, path + ": expected object with d, tau_max, weights");
    gf.graph.d = j.at("d").get<int>();
    gf.graph.tau_max = j.at("tau_max").get<int>();
    if (gf.graph.d < 1 || gf.graph.tau_max < 0)
      fail(Errc::parse_error, path + ": invalid dimensions");
    const auto& weights = j.at("weights");
    if (!weights.is_array() || static_cast<int>(weights.size()) != gf.graph.tau_max + 1)
      fail(Errc::parse_error, path + ": weights must hold tau_max + 1 slices");
    for (const auto& slice : weights) {
      if (!slice.is_array() || static_cast<int>(slice.size()) != gf.graph.d)
        fail(Errc::parse_error, path + ": slice is not d x d");
      Matrix w(gf.graph.d, gf.graph.d);
      for (int i = 0; i < gf.graph.d; ++i) {
        const auto& row = slice.at(static_cast<size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != gf.graph.d)
          fail(Errc::parse_error, path + ": slice is not d x d");
        for (int c = 0; c < gf.graph.d; ++c) {
          double v = row.at(static_cast<size_t>(c)).get<double>();
          if (!std::isfinite(v)) fail(Errc::parse_error, path + ": non-finite weight");
          w(i, c) = v;
        }
      }
      gf.graph.weights.push_back(std::move(w));
    }
    if (j.contains("method")) gf.method = j.at("method").get<std::string>();
    if (j.contains("convergence")) {
      const auto& c = j.at("convergence");
      ConvergenceMeta meta;
      meta.h = c.at("h").get<double>();
      meta.outer_iterations = c.at("outer_iterations").get<int>();
      meta.converged = c.at("converged").get<bool>();
      gf.convergence = meta;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": schema error: " + e.what());
  }
  // Acyclicity of W_c is warning-level for external truths (1e-12 pattern).
  gf.wc_acyclic = is_acyclic(summary_of(gf.graph, EdgeScope::Contemporaneous, 1e-12));
  return gf;
}

void validate(const LabeledDataset& ds) {
  check_panel(ds.panel);
  if (ds.truth_ts) {
    if (ds.truth_ts->d != ds.panel.cols())
      fail(Errc::invalid_argument, "dataset " + ds.name + ": truth graph node count mismatch");
    if (ds.truth_summary) {
      SummaryGraph derived = summary_of(*ds.truth_ts, EdgeScope::All, 1e-12);
      if (derived.adj != ds.truth_summary->adj)
        fail(Errc::invalid_argument,
             "dataset " + ds.name + ": summary truth does not match ts-graph truth");
    }
  }
  if (ds.truth_summary && ds.truth_summary->d != ds.panel.cols())
    fail(Errc::invalid_argument, "dataset " + ds.name + ": summary truth node count mismatch");
}

LabeledDataset load_dataset_dir(const std::string& dir, int panel_index) {
  namespace fs = std::filesystem;
  LabeledDataset ds;
  ds.name = fs::path(dir).filename().string();
  fs::path panel_path = fs::path(dir) / ("panel_" + std::to_string(panel_index) + ".csv");
  if (!fs::exists(panel_path))
    fail(Errc::io_error, "missing panel file: " + panel_path.string());
  ds.panel = load_panel_csv(panel_path.string());

  fs::path json_truth = fs::path(dir) / "truth.json";
  fs::path csv_truth = fs::path(dir) / "truth.csv";
  if (fs::exists(json_truth)) {
    GraphFile gf = load_graph_json(json_truth.string());
    ds.truth_summary = summary_of(gf.graph, EdgeScope::All, 1e-12);
    ds.truth_ts = std::move(gf.graph);
  } else if (fs::exists(csv_truth)) {
    ds.truth_summary = load_summary_csv(csv_truth.string());
  }
  validate(ds);
  return ds;
}

}  // namespace tssort
