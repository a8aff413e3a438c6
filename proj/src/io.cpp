#include "proxkit/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace proxkit::io {

namespace {

std::vector<std::string> split_line(const std::string& line, bool comma) {
  std::vector<std::string> out;
  if (comma) {
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      // Trim surrounding whitespace.
      size_t a = cell.find_first_not_of(" \t\r");
      size_t b = cell.find_last_not_of(" \t\r");
      out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
  } else {
    std::istringstream ss(line);
    std::string cell;
    while (ss >> cell) out.push_back(cell);
  }
  return out;
}

double parse_cell(const std::string& cell, size_t row, size_t col,
                  const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    std::ostringstream os;
    os << path << ": non-numeric cell '" << cell << "' at row " << row
       << " column " << col;
    throw Error(os.str());
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(path + ": cannot open file");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw Error(path + ": empty file");
  const bool comma = lines.front().find(',') != std::string::npos;

  CsvTable table;
  table.header = split_line(lines.front(), comma);
  const size_t ncol = table.header.size();
  require(ncol >= 1, path + ": empty header row");
  if (lines.size() < 2) throw Error(path + ": no rows after the header");

  const size_t nrow = lines.size() - 1;
  table.values.resize(static_cast<Eigen::Index>(nrow),
                      static_cast<Eigen::Index>(ncol));
  for (size_t r = 0; r < nrow; ++r) {
    const auto cells = split_line(lines[r + 1], comma);
    if (cells.size() != ncol) {
      std::ostringstream os;
      os << path << ": row " << (r + 1) << " has " << cells.size()
         << " cells, expected " << ncol;
      throw Error(os.str());
    }
    for (size_t c = 0; c < ncol; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_cell(cells[c], r + 1, c + 1, path);
  }
  return table;
}

Dataset ingest_csv(const std::string& path, const std::string& response_col) {
  CsvTable table = read_table(path);
  int resp = 0;
  if (!response_col.empty()) {
    resp = -1;
    for (size_t c = 0; c < table.header.size(); ++c)
      if (table.header[c] == response_col) resp = static_cast<int>(c);
    if (resp < 0)
      throw Error(path + ": response column '" + response_col + "' not found");
  }
  require(table.header.size() >= 2,
          path + ": need at least one predictor besides the response");

  Dataset data;
  data.response = table.header[static_cast<size_t>(resp)];
  data.y = table.values.col(resp);
  data.A.resize(table.values.rows(), table.values.cols() - 1);
  int k = 0;
  for (int c = 0; c < table.values.cols(); ++c) {
    if (c == resp) continue;
    data.A.col(k) = table.values.col(c);
    data.names.push_back(table.header[static_cast<size_t>(c)]);
    ++k;
  }
  require(all_finite(data.A) && all_finite(data.y),
          path + ": non-finite entries");
  return data;
}

void write_trace_csv(const SolverTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open for writing");
  out << "iter,objective,residual,step,seconds\n";
  for (const auto& r : trace.iters) {
    out << r.iter << ',' << format_double(r.objective) << ','
        << format_double(r.residual) << ',' << format_double(r.step) << ','
        << format_double(r.seconds) << '\n';
  }
  if (!out) throw Error(path + ": write failed");
}

std::vector<IterRecord> read_trace_csv(const std::string& path) {
  CsvTable table = read_table(path);
  const std::vector<std::string> expect = {"iter", "objective", "residual",
                                           "step", "seconds"};
  require(table.header == expect, path + ": unexpected trace header");
  std::vector<IterRecord> out(static_cast<size_t>(table.values.rows()));
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    out[static_cast<size_t>(r)] =
        IterRecord{static_cast<int>(table.values(r, 0)), table.values(r, 1),
                   table.values(r, 2), table.values(r, 3), table.values(r, 4)};
  }
  return out;
}

void write_path_csv(const experiments::RegularizationPath& path,
                    const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error(file + ": cannot open for writing");
  out << "lambda,q,coef_index,coef_name,value,support,mse\n";
  for (const auto& cell : path.cells) {
    for (Eigen::Index j = 0; j < cell.x.size(); ++j) {
      const std::string name =
          static_cast<size_t>(j) < path.names.size()
              ? path.names[static_cast<size_t>(j)]
              : "x" + std::to_string(j);
      out << format_double(cell.lambda) << ',' << format_double(cell.q) << ','
          << j << ',' << name << ',' << format_double(cell.x[j]) << ','
          << cell.support << ',' << format_double(cell.mse) << '\n';
    }
  }
  if (!out) throw Error(file + ": write failed");
}

}  // namespace proxkit::io
