// Wall-time comparison of the serial and OpenMP ensemble drivers.  Both must
// produce bit-identical results (each trajectory owns a counter-based noise
// stream and its own output slot); this binary checks that and reports the
// speedup actually obtained on this machine.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rds/ensemble.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
std::pair<double, std::vector<double>> timed(Fn&& fn) {
    const auto t0 = Clock::now();
    std::vector<double> r = fn();
    const auto t1 = Clock::now();
    return {std::chrono::duration<double>(t1 - t0).count(), std::move(r)};
}

int report(const char* name, double t_serial, double t_parallel, bool identical) {
    std::printf("%-14s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   results %s\n", name,
                t_serial, t_parallel, t_parallel > 0 ? t_serial / t_parallel : 0.0,
                identical ? "identical" : "DIFFER");
    return identical ? 0 : 1;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; 'parallel' runs the same loop serially\n");
#endif

    int rc = 0;
    const std::uint64_t seed = 20260825;
    const int count = 8;

    {
        rds::oy::FlowParams p;
        p.h = 0.01;
        p.T = 500;
        auto [ts, rs] = timed([&] { return rds::oy_final_ftle(p, seed, count, rds::ExecMode::serial); });
        auto [tp, rp] = timed([&] { return rds::oy_final_ftle(p, seed, count, rds::ExecMode::parallel); });
        rc |= report("flow ftle", ts, tp, rs == rp);
    }
    {
        const rds::fig8::Fig8Params p;
        const auto dist = rds::BoxIndexDist::geometric(p.n0, 0.5);
        auto run = [&](rds::ExecMode m) {
            return rds::fig8_final_exponents(p, dist, rds::Vec2{1.0, 1.0}, 3, 200000, seed, count, m);
        };
        auto [ts, rs] = timed([&] { return run(rds::ExecMode::serial); });
        auto [tp, rp] = timed([&] { return run(rds::ExecMode::parallel); });
        rc |= report("box chain", ts, tp, rs == rp);
    }
    {
        const auto dist = rds::BoxIndexDist::geometric(2, 0.5);
        auto run = [&](rds::ExecMode m) {
            return rds::slln_max_tail_ratio(dist, 2000000, seed, count, m);
        };
        auto [ts, rs] = timed([&] { return run(rds::ExecMode::serial); });
        auto [tp, rp] = timed([&] { return run(rds::ExecMode::parallel); });
        rc |= report("slln ratios", ts, tp, rs == rp);
    }
    return rc;
}
