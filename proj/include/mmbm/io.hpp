#ifndef MMBM_IO_HPP
#define MMBM_IO_HPP

#include <string>

#include "mmbm/pipeline.hpp"

namespace mmbm {

struct ModelFile {
  Vec<double> v, d;
  Matrix<double> q;
};

// Model files are JSON documents {"v": [...], "d": [...], "q": [[...]]} with
// every number written as a shortest round-trip decimal string; plain JSON
// numbers are accepted on input.
ModelFile read_model(const std::string& path);
void write_model(const std::string& path, const Vec<double>& v, const Vec<double>& d,
                 const Matrix<double>& q);

// Solution files carry the model, the (s, P) decomposition of X, Psi, the
// density coefficients, the Perron vector and a diagnostics object; enough to
// re-evaluate both the density and the residual.
void write_solution(const std::string& path, const StationarySolution<double>& sol);
StationarySolution<double> read_solution(const std::string& path);

// End-to-end file driver used by the CLI: returns a process exit code
// (0 ok, 2 parse, 3 validation, 4 numerical failure).
int solve_file(const std::string& in_path, Mode mode, double h /* <=0 means auto */, double tol,
               const std::string& out_path);

std::string format_double(double x);

}  // namespace mmbm

#endif  // MMBM_IO_HPP
