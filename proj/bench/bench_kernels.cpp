// Serial vs OpenMP timing of the full-pass kernels.
//
//   bench_kernels [--rows N] [--cols N] [--repeats N]

#include <chrono>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "ircg/kernels.hpp"
#include "ircg/problems.hpp"

using namespace ircg;

namespace {

double time_ms(int repeats, const std::function<void()>& f) {
  f();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < repeats; ++k) f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() / repeats;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-26s %12.3f %12.3f %9.2fx  %s\n", name, serial, parallel, serial / parallel,
              identical ? "bitwise-equal" : "differs");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t rows = 4000, cols = 500;
  int repeats = 20;
  CLI::App app{"Serial vs OpenMP timing of the full-pass kernels"};
  app.add_option("--rows", rows, "Matrix rows")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--cols", cols, "Matrix columns")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--repeats", repeats, "Timed repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  RegressionOptions opts;
  opts.n = rows;
  opts.d = cols;
  opts.n_val = 1;
  const auto data = gen_regression_data(opts);
  const LeastSquaresOracle oracle(data.a_tr, data.b_tr);
  Rng rng(1);
  Vector x(static_cast<Eigen::Index>(cols));
  for (auto& e : x) e = rng.normal() / static_cast<double>(cols);

  std::printf("rows=%zu cols=%zu threads=%d repeats=%d\n", rows, cols, kernels::max_threads(), repeats);
  std::printf("%-26s %12s %12s %10s\n", "kernel", "serial ms", "openmp ms", "speedup");

  Vector r_s, r_p;
  const double t_rs = time_ms(repeats, [&] { kernels::serial::residual(data.a_tr, x, data.b_tr, r_s); });
  const double t_rp = time_ms(repeats, [&] { kernels::residual(data.a_tr, x, data.b_tr, r_p); });
  report("residual", t_rs, t_rp, r_s == r_p);

  Vector g_s, g_p;
  const double t_ts = time_ms(repeats, [&] { kernels::serial::transposed_product(data.a_tr, r_s, 0.5, g_s); });
  const double t_tp = time_ms(repeats, [&] { kernels::transposed_product(data.a_tr, r_s, 0.5, g_p); });
  report("transposed_product", t_ts, t_tp, g_s == g_p);

  Vector m_s(x.size()), m_p(x.size());
  const double t_ms = time_ms(repeats, [&] { kernels::serial::mean_component_gradient(oracle, x, m_s); });
  const double t_mp = time_ms(repeats, [&] { kernels::mean_component_gradient(oracle, x, m_p); });
  report("mean_component_gradient", t_ms, t_mp, m_s == m_p);
  std::printf("mean_component_gradient max |serial - openmp| = %.3g\n", (m_s - m_p).cwiseAbs().maxCoeff());
  return 0;
}
