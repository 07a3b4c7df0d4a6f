/*
 * Benchmark of the OpenMP singular-integral kernel against the serial
 * reference implementation.  Reports wall time, speedup and the maximum
 * pointwise discrepancy (which must be at numerical noise level).
 */
#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rs/fracnum.hpp"

using namespace rs;

namespace {

const double kPi = 3.14159265358979323846;

template <typename F>
double time_best_of(int reps, const F& f) {
    double best = 1e300;
    for (int r = 0; r < reps; r++) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void bench(const char* label, const Field& f, double s, double R) {
    Field a, b;
    const double tp = time_best_of(3, [&] { a = fraclap_singular(f, s, R, 0.0); });
    const double ts =
        time_best_of(3, [&] { b = fraclap_singular_serial(f, s, R, 0.0); });
    std::printf("%-28s parallel %8.3f ms   serial %8.3f ms   speedup %5.2fx   "
                "max|diff| %.3e\n",
                label, tp * 1e3, ts * 1e3, ts / tp, max_abs_diff(a, b));
}

}  // namespace

int main() {
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("singular-integral kernel benchmark (%d thread%s)\n", threads,
                threads == 1 ? "" : "s");

    Field f1 = field_from(1, 4096, [](const std::vector<double>& x) {
        return std::cos(2 * kPi * x[0]) + 0.3 * std::sin(2 * kPi * 5 * x[0]);
    });
    bench("1D n=4096 R=16 s=0.5", f1, 0.5, 16.0);
    bench("1D n=4096 R=16 s=0.8", f1, 0.8, 16.0);

    Field f2 = field_from(2, 64, [](const std::vector<double>& x) {
        return std::cos(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
    });
    bench("2D n=64 R=1 s=0.5", f2, 0.5, 1.0);
    bench("2D n=64 R=1 s=0.8", f2, 0.8, 1.0);
    return 0;
}
