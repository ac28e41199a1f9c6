#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmbm/bench.hpp"
#include "mmbm/io.hpp"
#include "mmbm/rng.hpp"

namespace {

mmbm::Mode parse_mode(const std::string& s) {
  if (s == "auto") return mmbm::Mode::Auto;
  if (s == "posv") return mmbm::Mode::PosV;
  if (s == "shifted") return mmbm::Mode::Shifted;
  if (s == "sda") return mmbm::Mode::SdaLike;
  mmbm::fail(mmbm::ErrorCode::ParseError, "unknown mode '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_gen(const std::string& family, int n, uint64_t seed, const std::string& out) {
  mmbm::ProblemSpec p = mmbm::generate(mmbm::parse_family(family), n, seed);
  mmbm::write_model(out, p.v, p.d, p.q);
  std::printf("wrote %s (%s)\n", out.c_str(), p.id().c_str());
  return 0;
}

int run_density(const std::string& in, const std::string& xs) {
  mmbm::StationarySolution<double> sol = mmbm::read_solution(in);
  for (const std::string& tok : split_list(xs)) {
    double x = std::stod(tok);
    mmbm::Vec<double> p = sol.model.to_original(mmbm::eval_density(sol, x));
    std::printf("%s", mmbm::format_double(x).c_str());
    for (double pi : p) std::printf(",%s", mmbm::format_double(pi).c_str());
    std::printf("\n");
  }
  return 0;
}

int run_bench_cmd(const std::string& families, const std::string& sizes, int seeds,
                  const std::string& modes, const std::string& out) {
  std::vector<mmbm::Family> fams;
  for (const auto& f : split_list(families)) fams.push_back(mmbm::parse_family(f));
  std::vector<int> ns;
  for (const auto& s : split_list(sizes)) ns.push_back(std::stoi(s));
  std::vector<mmbm::Mode> ms;
  for (const auto& s : split_list(modes)) ms.push_back(parse_mode(s));
  auto rows = mmbm::run_bench(fams, ns, seeds, ms);
  mmbm::write_csv(out, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Componentwise accurate stationary analysis of Markov-modulated Brownian motion"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a random test model");
  std::string gen_family = "rand";
  int gen_n = 8;
  uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--family", gen_family, "rand|rands|imb|imbs")->required();
  gen->add_option("--n", gen_n, "number of states")->required();
  gen->add_option("--seed", gen_seed, "64-bit seed")->required();
  gen->add_option("--out", gen_out, "output model file")->required();

  auto* solvec = app.add_subcommand("solve", "solve a model file");
  solvec->set_help_flag("--help", "print help");  // frees -h for the step option
  std::string solve_in, solve_out, solve_mode = "auto", solve_h = "auto";
  double solve_tol = -1.0;
  solvec->add_option("--in", solve_in, "input model file")->required();
  solvec->add_option("--mode", solve_mode, "auto|posv|shifted|sda");
  solvec->add_option("--h", solve_h, "step size, or 'auto'");
  solvec->add_option("--tol", solve_tol, "CR stopping tolerance");
  solvec->add_option("--out", solve_out, "output solution file")->required();

  auto* dens = app.add_subcommand("density", "evaluate the stationary density");
  std::string dens_in, dens_x;
  dens->add_option("--in", dens_in, "solution file")->required();
  dens->add_option("--x", dens_x, "comma-separated levels")->required();

  auto* bench = app.add_subcommand("bench", "batch accuracy benchmark");
  std::string bench_families, bench_sizes, bench_modes = "auto", bench_out;
  int bench_seeds = 1;
  bench->add_option("--families", bench_families, "comma-separated families")->required();
  bench->add_option("--sizes", bench_sizes, "comma-separated sizes")->required();
  bench->add_option("--seeds", bench_seeds, "seeds 0..K-1 per cell")->required();
  bench->add_option("--modes", bench_modes, "comma-separated modes");
  bench->add_option("--out", bench_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_family, gen_n, gen_seed, gen_out);
    if (solvec->parsed()) {
      double h = -1.0;
      if (solve_h != "auto") {
        try {
          size_t pos = 0;
          h = std::stod(solve_h, &pos);
          if (pos != solve_h.size()) throw std::invalid_argument(solve_h);
        } catch (const std::exception&) {
          mmbm::fail(mmbm::ErrorCode::ParseError, "--h expects a number or 'auto'");
        }
      }
      return mmbm::solve_file(solve_in, parse_mode(solve_mode), h, solve_tol, solve_out);
    }
    if (dens->parsed()) return run_density(dens_in, dens_x);
    if (bench->parsed())
      return run_bench_cmd(bench_families, bench_sizes, bench_seeds, bench_modes, bench_out);
  } catch (const mmbm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
