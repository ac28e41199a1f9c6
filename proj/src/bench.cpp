#include "mmbm/bench.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "mmbm/io.hpp"
#include "mmbm/log.hpp"
#include "mmbm/oracle.hpp"

namespace mmbm {

std::vector<BenchRow> run_bench(const std::vector<Family>& families,
                                const std::vector<int>& sizes, int seed_count,
                                const std::vector<Mode>& modes) {
  std::vector<BenchRow> rows;
  for (Family family : families)
    for (int n : sizes)
      for (int seed = 0; seed < seed_count; ++seed)
        for (Mode mode : modes) {
          BenchRow row;
          row.problem = std::string(family_name(family)) + std::to_string(n) + "#" +
                        std::to_string(seed);
          row.mode = mode_name(mode);
          try {
            ProblemSpec p = generate(family, n, static_cast<uint64_t>(seed));
            SolveOptions opt;
            opt.mode = mode;
            const auto t0 = std::chrono::steady_clock::now();
            StationarySolution<double> sol = solve<double>(p.model, opt);
            const auto t1 = std::chrono::steady_clock::now();
            row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
            row.h = sol.h;
            row.iterations = sol.iterations;
            row.residual = sol.residual;
            opt.h = sol.h;  // reference run uses the same step
            StationarySolution<DDouble> ref = oracle_solve(p.model, opt);
            ErrorReport err = compare(sol, ref);
            row.fwd_X = err.fwd_X;
            row.fwd_Psi = err.fwd_Psi;
            row.cw_X = err.cw_X;
          } catch (const Error& e) {
            row.status = error_code_name(e.code());
            log_info("bench cell %s failed: %s", row.problem.c_str(), e.what());
          }
          rows.push_back(std::move(row));
        }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "problem,mode,h,iterations,residual,fwd_X,fwd_Psi,cw_X,wall_time,status\n";
  for (const BenchRow& r : rows) {
    out << r.problem << ',' << r.mode << ',' << format_double(r.h) << ',' << r.iterations << ','
        << format_double(r.residual) << ',' << format_double(r.fwd_X) << ','
        << format_double(r.fwd_Psi) << ',' << format_double(r.cw_X) << ','
        << format_double(r.wall_seconds) << ',' << r.status << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, "cannot open " + path + " for writing");
  write_csv(out, rows);
}

}  // namespace mmbm
