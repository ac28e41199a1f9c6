#include "mmbm/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "mmbm/log.hpp"

namespace mmbm {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    const char* b = s.c_str();
    char* end = nullptr;
    double x = std::strtod(b, &end);
    if (end == b || *end != '\0')
      fail(ErrorCode::ParseError, std::string("bad numeric string for ") + what);
    return x;
  }
  fail(ErrorCode::ParseError, std::string("expected a number for ") + what);
}

Vec<double> parse_vector(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array");
  Vec<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(parse_number(e, what));
  return v;
}

Matrix<double> parse_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::ParseError, std::string(what) + " must be a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  Matrix<double> m;
  for (int i = 0; i < n; ++i) {
    Vec<double> row = parse_vector(j[i], what);
    if (i == 0) m = Matrix<double>(n, static_cast<int>(row.size()));
    if (static_cast<int>(row.size()) != m.cols())
      fail(ErrorCode::ParseError, std::string(what) + " rows have unequal lengths");
    for (int k = 0; k < m.cols(); ++k) m(i, k) = row[k];
  }
  return m;
}

json dump_vector(const Vec<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(format_double(x));
  return a;
}

json dump_matrix(const Matrix<double>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(format_double(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "invalid JSON in " + path);
  return j;
}

void store_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, "cannot open " + path + " for writing");
  out << j.dump(1) << '\n';
}

}  // namespace

ModelFile read_model(const std::string& path) {
  json j = load_file(path);
  if (!j.contains("v") || !j.contains("d") || !j.contains("q"))
    fail(ErrorCode::ParseError, "model file needs v, d and q");
  ModelFile m;
  m.v = parse_vector(j["v"], "v");
  m.d = parse_vector(j["d"], "d");
  m.q = parse_matrix(j["q"], "q");
  return m;
}

void write_model(const std::string& path, const Vec<double>& v, const Vec<double>& d,
                 const Matrix<double>& q) {
  json j;
  j["v"] = dump_vector(v);
  j["d"] = dump_vector(d);
  j["q"] = dump_matrix(q);
  store_file(path, j);
}

void write_solution(const std::string& path, const StationarySolution<double>& sol) {
  const MmbmModel& m = sol.model;
  json j;
  // Original-order copy of the model for round trips.
  Vec<double> v0(m.n), d0(m.n);
  Matrix<double> q0(m.n, m.n);
  for (int a = 0; a < m.n; ++a) {
    v0[m.perm[a]] = m.v[a];
    d0[m.perm[a]] = m.d[a];
    for (int b = 0; b < m.n; ++b) q0(m.perm[a], m.perm[b]) = m.Q(a, b);
  }
  j["model"]["v"] = dump_vector(v0);
  j["model"]["d"] = dump_vector(d0);
  j["model"]["q"] = dump_matrix(q0);

  j["mode"] = mode_name(sol.mode);
  j["h"] = format_double(sol.h);
  j["s"] = format_double(sol.pair.s);
  j["P"] = dump_matrix(sol.pair.P);
  j["psi"] = dump_matrix(sol.pair.Psi);
  j["p0"] = dump_vector(sol.p0);
  j["v_coef"] = dump_vector(sol.v_coef);
  j["xw"] = dump_vector(sol.xtriplet.w);  // w of the -X^T triplet
  j["u"] = dump_vector(sol.model.to_original(sol.u));
  json part;
  part["e1"] = std::vector<int>(m.perm.begin(), m.perm.begin() + m.n1);
  part["e2"] = std::vector<int>(m.perm.begin() + m.n1, m.perm.begin() + m.n1 + m.n2);
  part["e3"] = std::vector<int>(m.perm.begin() + m.n1 + m.n2, m.perm.end());
  j["partition"] = std::move(part);

  json diag;
  diag["iterations"] = sol.iterations;
  diag["residual"] = format_double(sol.residual);
  diag["recurrence"] = recurrence_name(sol.recurrence);
  diag["drift"] = format_double(sol.drift_c);
  diag["drift_discrete"] = format_double(sol.drift_d);
  diag["positive_recurrent"] = sol.has_density;
  j["diagnostics"] = std::move(diag);
  store_file(path, j);
}

StationarySolution<double> read_solution(const std::string& path) {
  json j = load_file(path);
  for (const char* key : {"model", "s", "P", "psi", "p0", "v_coef", "diagnostics"})
    if (!j.contains(key)) fail(ErrorCode::ParseError, std::string("solution file lacks ") + key);

  StationarySolution<double> sol;
  Vec<double> v = parse_vector(j["model"]["v"], "v");
  Vec<double> d = parse_vector(j["model"]["d"], "d");
  Matrix<double> q = parse_matrix(j["model"]["q"], "q");
  sol.model = validate_and_classify(v, d, q);

  sol.h = parse_number(j["h"], "h");
  sol.pair.s = parse_number(j["s"], "s");
  sol.pair.P = parse_matrix(j["P"], "P");
  sol.pair.Psi = j["psi"].empty() ? Matrix<double>(sol.pair.P.rows(), 0)
                                  : parse_matrix(j["psi"], "psi");
  sol.p0 = parse_vector(j["p0"], "p0");
  sol.v_coef = parse_vector(j["v_coef"], "v_coef");
  Vec<double> u0 = parse_vector(j["u"], "u");
  sol.u.resize(sol.model.n);
  for (int k = 0; k < sol.model.n; ++k) sol.u[k] = u0[sol.model.perm[k]];
  sol.iterations = j["diagnostics"]["iterations"].get<int>();
  sol.residual = parse_number(j["diagnostics"]["residual"], "residual");
  sol.has_density = j["diagnostics"]["positive_recurrent"].get<bool>();
  std::string rec = j["diagnostics"]["recurrence"].get<std::string>();
  sol.recurrence = rec == "positive-recurrent" ? Recurrence::PositiveRecurrent
                   : rec == "transient"        ? Recurrence::Transient
                                               : Recurrence::NullRecurrent;
  if (sol.pair.P.rows() != sol.model.head())
    fail(ErrorCode::ParseError, "solution block sizes disagree with the model");

  // The triplet for -X^T is determined by P, u and its stored w row.
  const int l = sol.model.head();
  sol.xtriplet.n = l;
  sol.xtriplet.off = Matrix<double>(l, l);
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < l; ++k)
      if (i != k) sol.xtriplet.off(i, k) = -sol.pair.P(k, i);
  sol.xtriplet.v = Vec<double>(sol.u.begin(), sol.u.begin() + l);
  sol.xtriplet.w = parse_vector(j["xw"], "xw");
  return sol;
}

int solve_file(const std::string& in_path, Mode mode, double h, double tol,
               const std::string& out_path) {
  try {
    ModelFile f = read_model(in_path);
    MmbmModel m = validate_and_classify(f.v, f.d, f.q);
    SolveOptions opt;
    opt.mode = mode;
    if (h > 0.0) opt.h = h;
    opt.tol = tol;
    StationarySolution<double> sol = solve<double>(m, opt);
    write_solution(out_path, sol);
    log_info("solved %s: %s, %d iterations, residual %.3g", in_path.c_str(),
             recurrence_name(sol.recurrence), sol.iterations, sol.residual);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  }
}

}  // namespace mmbm
