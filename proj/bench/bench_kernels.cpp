// Serial reference vs OpenMP for each parallel kernel. Prints best-of-N wall time and
// checks that both paths return identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "halfvar/examples.hpp"
#include "halfvar/kernels.hpp"

using namespace halfvar;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = INFINITY;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.4f %10.4f %7.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %10s %10s %8s\n", "kernel", "serial s", "omp s", "speedup");

  const auto b = harmonic_tent_example(50);
  ReparamOptions o;
  o.decomposition = b.decomposition;
  o.depth = 50;
  const Reparametrization r(b.path, o);
  const auto grid = uniform_grid(r.domain(), 200000);
  const auto speed = [&r](double s) { return r.flat_speed(s); };

  std::vector<double> gs, gp;
  const double ts = best_of(3, [&] { gs = evaluate_grid(speed, grid, Exec::serial); });
  const double tp = best_of(3, [&] { gp = evaluate_grid(speed, grid, Exec::parallel); });
  row("evaluate_grid", ts, tp, gs == gp);

  OracleSweep os, op;
  const double ts2 = best_of(3, [&] { os = oracle_sweep(1, 20000, 10, 1e-12, Exec::serial); });
  const double tp2 = best_of(3, [&] { op = oracle_sweep(1, 20000, 10, 1e-12, Exec::parallel); });
  row("oracle_sweep", ts2, tp2, os.max_abs_diff == op.max_abs_diff && os.mismatches == op.mismatches);

  std::vector<VartimesReport> vs, vp;
  const double ts3 = best_of(3, [&] { vs = vartimes_all(r, 10000, 1, 1.0, Exec::serial); });
  const double tp3 = best_of(3, [&] { vp = vartimes_all(r, 10000, 1, 1.0, Exec::parallel); });
  bool same = vs.size() == vp.size();
  for (std::size_t i = 0; same && i < vs.size(); ++i) same = vs[i].max_ratio == vp[i].max_ratio;
  row("vartimes_all", ts3, tp3, same);
  return 0;
}
