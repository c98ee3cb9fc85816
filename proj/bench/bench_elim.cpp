// Benchmark comparing the serial reference elimination against the
// OpenMP-parallel one on generator matrices and random dense matrices.

#include <chrono>
#include <cstdio>
#include <random>

#include "cubic/f2.hpp"
#include "cubic/lattice.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cubic;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now() - t0)
             .count() /
         1e6;
}

void bench_case(const char* name, const BitMat& m) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t r1 = gf2_rank_serial(m);
  double ts = seconds(t0);

  t0 = std::chrono::steady_clock::now();
  std::size_t r2 = gf2_rank(m);
  double tp = seconds(t0);

  double mbits = double(m.rows()) * m.cols() / 1e6;
  std::printf("%-24s %6zu x %6zu  rank %6zu  serial %8.3fs  parallel %8.3fs  x%.2f%s\n",
              name, m.rows(), m.cols(), r1, ts, tp, tp > 0 ? ts / tp : 0.0,
              r1 == r2 ? "" : "  RANK MISMATCH");
  (void)mbits;
}

}  // namespace

int main(int argc, char** argv) {
  int L = argc > 1 ? std::atoi(argv[1]) : 14;
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; both columns use the same code path\n");
#endif

  {
    LatticeCode lat(catalog_code(1), L);
    bench_case("css Z block", lat.generator_matrix(0));
  }
  {
    LatticeCode lat(catalog_code(0), L > 12 ? 12 : L);
    bench_case("non-css full block", lat.generator_matrix(0));
  }
  {
    std::mt19937_64 rng(42);
    std::size_t n = 4096;
    BitMat m(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
      Word* p = m.row(r);
      for (std::size_t w = 0; w < m.stride(); ++w) p[w] = rng();
    }
    bench_case("dense random", m);
  }
  return 0;
}
