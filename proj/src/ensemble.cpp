#include "rds/ensemble.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace rds {

namespace {

// Runs fn(id) for ids 0..count-1 into out.  The parallel path must not let
// exceptions escape an OpenMP region, so it records the first failure and
// rethrows after the loop.
template <typename Fn>
std::vector<double> run_indexed(int count, ExecMode mode, Fn&& fn) {
    if (count < 1) throw std::invalid_argument("ensemble: trajectory count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (mode == ExecMode::parallel) {
        bool failed = false;
        std::string err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < count; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    if (!failed) {
                        failed = true;
                        err = e.what();
                    }
                }
            }
        }
        if (failed) throw std::runtime_error("ensemble trajectory failed: " + err);
    } else {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    }
    return out;
}

} // namespace

std::vector<double> oy_final_ftle(const oy::FlowParams& params, std::uint64_t seed, int count,
                                  ExecMode mode) {
    params.validate();
    const DecimationPolicy policy = DecimationPolicy::geometric();
    return run_indexed(count, mode, [&](int id) {
        RngStream stream = spawn_stream(seed, static_cast<std::uint64_t>(id));
        const oy::OyRunResult r = oy::run_oy_experiment(params, stream, policy);
        return r.series.back().value;
    });
}

std::vector<double> fig8_final_exponents(const fig8::Fig8Params& params,
                                         const BoxIndexDist& dist, const Vec2& v, int n1,
                                         std::int64_t total_steps, std::uint64_t seed, int count,
                                         ExecMode mode) {
    params.validate();
    return run_indexed(count, mode, [&](int id) {
        RngStream stream = spawn_stream(seed, static_cast<std::uint64_t>(id));
        fig8::TargetLaw law = fig8::TargetLaw::iid(dist);
        const fig8::Fig8RunResult r =
            fig8::fig8_lyapunov_run(params, std::move(law), v, n1, total_steps, stream);
        return r.series.back().value;
    });
}

std::vector<double> slln_max_tail_ratio(const BoxIndexDist& dist, std::int64_t N,
                                        std::uint64_t seed, int count, ExecMode mode) {
    if (N < 2) throw std::invalid_argument("slln_max_tail_ratio: N must be >= 2");
    return run_indexed(count, mode, [&](int id) {
        RngStream stream = spawn_stream(seed, static_cast<std::uint64_t>(id));
        const Series s = fig8::slln_diagnostic(dist, stream, N);
        double worst = 0.0;
        for (const SeriesPoint& p : s)
            if (p.t >= N / 2 && p.value > worst) worst = p.value;
        return worst;
    });
}

} // namespace rds
