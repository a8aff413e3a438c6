#ifndef PROXKIT_IO_HPP
#define PROXKIT_IO_HPP

#include <string>
#include <vector>

#include "proxkit/experiments.hpp"
#include "proxkit/trace.hpp"

namespace proxkit::io {

// Comma- or whitespace-delimited numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Mat values;
};

// Throws with 1-based row/column diagnostics on ragged rows or non-numeric
// cells; an empty body is an error.
CsvTable read_table(const std::string& path);

struct Dataset {
  Mat A;
  Vec y;
  std::vector<std::string> names;  // predictor column names
  std::string response;
};

// Design/response split: `response_col` picks the response by name, the
// first column otherwise.
Dataset ingest_csv(const std::string& path,
                   const std::string& response_col = "");

// trace.csv with columns iter,objective,residual,step,seconds. Doubles are
// written with round-trip precision, so rereads reproduce values exactly.
void write_trace_csv(const SolverTrace& trace, const std::string& path);
std::vector<IterRecord> read_trace_csv(const std::string& path);

// path.csv with columns lambda,q,coef_index,coef_name,value,support,mse;
// one row per coefficient per grid cell.
void write_path_csv(const experiments::RegularizationPath& path,
                    const std::string& file);

}  // namespace proxkit::io

#endif  // PROXKIT_IO_HPP
