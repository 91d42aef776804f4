// Benchmark comparing the serial reference kernels against the OpenMP
// variants.  Every comparison also checks that the two paths agree
// bit-for-bit, which is the contract that makes the parallel build
// deterministic.  --quick shrinks the sizes so the binary doubles as a smoke
// test under ctest.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdf/kernels.hpp"
#include "qdf/rng.hpp"
#include "qdf/symmetry.hpp"

namespace {

using namespace qdf;
using kernels::Exec;

Mat random_matrix(long rows, long cols, Rng& rng) {
  Mat m(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  return m;
}

bool bit_identical(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(Cplx) * static_cast<std::size_t>(a.size())) == 0;
}

template <typename Fn>
double time_best_ms(int reps, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

struct Row {
  std::string name;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  bool identical = false;
};

void print_row(const Row& r) {
  std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   speedup %6.2fx   %s\n",
              r.name.c_str(), r.serial_ms, r.parallel_ms,
              r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
              r.identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel benchmark"};
  bool quick = false;
  int reps = 3;
  app.add_flag("--quick", quick, "Small sizes; used as a smoke test");
  app.add_option("--reps", reps, "Repetitions per measurement (best-of)");
  CLI11_PARSE(app, argc, argv);

  std::printf("OpenMP support compiled in: %s\n\n",
              kernels::parallel_enabled() ? "yes" : "no");

  Rng rng = Rng::derive(42, 0);
  std::vector<Row> rows;
  bool all_identical = true;

  {
    const long side = quick ? 24 : 96;
    const Mat a = random_matrix(side, side, rng);
    const Mat b = random_matrix(side, side, rng);
    Row r{"kron " + std::to_string(side) + "x" + std::to_string(side)};
    Mat out_s, out_p;
    r.serial_ms = time_best_ms(reps, [&] { out_s = kernels::kron(a, b, Exec::Serial); });
    r.parallel_ms = time_best_ms(reps, [&] { out_p = kernels::kron(a, b, Exec::Parallel); });
    r.identical = bit_identical(out_s, out_p);
    rows.push_back(r);
  }

  {
    const int n = quick ? 8 : 12;
    const std::vector<int> dims(n, 2);
    const long side = 1L << n;
    const Mat m = random_matrix(side, side, rng);
    const std::vector<int> keep{0, 1, 2};
    Row r{"partial_trace 2^" + std::to_string(n) + " -> 2^3"};
    Mat out_s, out_p;
    r.serial_ms =
        time_best_ms(reps, [&] { out_s = kernels::partial_trace(m, dims, keep, Exec::Serial); });
    r.parallel_ms =
        time_best_ms(reps, [&] { out_p = kernels::partial_trace(m, dims, keep, Exec::Parallel); });
    r.identical = bit_identical(out_s, out_p);
    rows.push_back(r);
  }

  {
    const int n = quick ? 8 : 12;
    const std::vector<int> dims(n, 2);
    const long side = 1L << n;
    const Mat m = random_matrix(side, side, rng);
    Perm perm(n);
    for (int s = 0; s < n; ++s) perm[s] = (s + 1) % n;
    const std::vector<int> map = basis_index_map(perm, dims);
    Row r{"permute_basis 2^" + std::to_string(n)};
    Mat out_s, out_p;
    r.serial_ms =
        time_best_ms(reps, [&] { out_s = kernels::permute_basis(m, map, Exec::Serial); });
    r.parallel_ms =
        time_best_ms(reps, [&] { out_p = kernels::permute_basis(m, map, Exec::Parallel); });
    r.identical = bit_identical(out_s, out_p);
    rows.push_back(r);
  }

  {
    const int n = quick ? 8 : 11;
    const std::vector<int> dims(n, 2);
    const long side = 1L << n;
    const Mat a = random_matrix(4, 4, rng);
    Row r{"add_embedded_identity 2^" + std::to_string(n)};
    Mat out_s, out_p;
    r.serial_ms = time_best_ms(reps, [&] {
      out_s = Mat::Zero(side, side);
      kernels::add_embedded_identity(out_s, a, dims, {2, 5}, Cplx(1.0, 0.0), Exec::Serial);
    });
    r.parallel_ms = time_best_ms(reps, [&] {
      out_p = Mat::Zero(side, side);
      kernels::add_embedded_identity(out_p, a, dims, {2, 5}, Cplx(1.0, 0.0), Exec::Parallel);
    });
    r.identical = bit_identical(out_s, out_p);
    rows.push_back(r);
  }

  {
    const int n = quick ? 6 : 10;
    const std::vector<int> dims(n, 2);
    const long side = 1L << n;
    const Mat m = random_matrix(side, side, rng);
    const kernels::OrbitTable table =
        build_orbit_table(symmetric_group_generators(n), dims);
    Row r{"orbit_average 2^" + std::to_string(n) + " sym"};
    Mat out_s, out_p;
    r.serial_ms =
        time_best_ms(reps, [&] { out_s = kernels::orbit_average(m, table, Exec::Serial); });
    r.parallel_ms =
        time_best_ms(reps, [&] { out_p = kernels::orbit_average(m, table, Exec::Parallel); });
    r.identical = bit_identical(out_s, out_p);
    rows.push_back(r);
  }

  std::printf("%-28s %-22s %-24s\n", "kernel", "", "");
  for (const Row& r : rows) {
    print_row(r);
    all_identical = all_identical && r.identical;
  }
  std::printf("\n%s\n", all_identical ? "all kernels bit-identical across paths"
                                      : "MISMATCH between serial and parallel paths");
  return all_identical ? 0 : 1;
}
