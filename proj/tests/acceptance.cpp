// Acceptance gate: ten end-to-end checks of the library, each printing one
// [PASS]/[FAIL] line with the measured quantities.  The exit status is the
// number of failed checks, so CI can gate on this binary alone.
//
// Every tolerance and threshold is pinned here, next to the check it guards;
// seeds are fixed so reruns are bit-identical.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "rds/core.hpp"
#include "rds/ensemble.hpp"
#include "rds/figure8.hpp"
#include "rds/io.hpp"
#include "rds/ottyorke.hpp"
#include "rds/rkf45.hpp"
#include "rds/rng.hpp"

#include "support.hpp"

namespace {

using rds::RngStream;
using rds::spawn_stream;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sfmt(const char* fmt, ...) {
    char buf[768];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int id, const char* name, const Outcome& o) {
    if (!o.pass) ++g_failures;
    std::printf("[%s] %02d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
}

constexpr std::uint64_t kSuiteSeed = 20260825ull;

// ---------------------------------------------------------------- check 1
// Splicing a word at any position must reproduce the whole-word derivative
// product: A over m+n steps equals (A over n steps from the shifted word and
// moved point) times (A over m steps).  200 random draws across the two
// concrete systems; dense matrices to relative 1e-12, log-domain products
// with exact sign agreement.
Outcome check_cocycle_splice() {
    const auto t0 = Clock::now();
    double worst_dense = 0.0;
    int dense_draws = 0;

    RngStream s = spawn_stream(kSuiteSeed, 11);
    const double eps_levels[3] = {0.0, 1e-4, 0.3};
    for (int i = 0; i < 100; ++i) {
        const rds::oy::OyUnitMap sys(0.03, eps_levels[i % 3], 0.01);
        const std::size_t m = s.next_u64() % 6;
        const std::size_t n = 1 + s.next_u64() % 5;
        const rds::NoiseWord w = rds::NoiseWord::draw(s, m + n, sys.noise_dim());
        const rds::Vec2 x0 = testsup::random_point(s, -3.0, 3.0);

        const rds::Mat2 whole = rds::cocycle_product(sys, w, x0, m + n);
        const rds::Mat2 head = rds::cocycle_product(sys, w, x0, m);
        const auto orbit = rds::compose_random_orbit(sys, w, x0, m);
        const rds::Mat2 tail = rds::cocycle_product(sys, w.shifted(m), orbit[m], n);
        worst_dense = std::max(worst_dense, testsup::mat_err(tail * head, whole));
        ++dense_draws;
    }

    int log_draws = 0;
    int log_bad = 0;
    for (int i = 0; i < 100; ++i) {
        const rds::fig8::Fig8Params fp;
        RngStream ts = spawn_stream(kSuiteSeed, 1000 + static_cast<std::uint64_t>(i));
        const int n1 = 2 + static_cast<int>(ts.next_u64() % 5);
        const long L = 5 + static_cast<long>(ts.next_u64() % 56);
        rds::fig8::TargetLaw law = rds::fig8::TargetLaw::iid(rds::BoxIndexDist::geometric(2, 0.5));
        const testsup::Fig8Trace tr = testsup::fig8_trace(fp, law, n1, L, ts);
        const long m = static_cast<long>(ts.next_u64() % static_cast<std::uint64_t>(L + 1));

        const rds::fig8::LogMat2 whole = testsup::fig8_product(tr, 1, L);
        const rds::fig8::LogMat2 head = testsup::fig8_product(tr, 1, m);
        const rds::fig8::LogMat2 tail = testsup::fig8_product(tr, m + 1, L);
        if (!testsup::logmat_close(tail * head, whole, 1e-12)) ++log_bad;
        ++log_draws;
    }

    const double dt = seconds_since(t0);
    const bool pass = dense_draws + log_draws == 200 && worst_dense <= 1e-12 && log_bad == 0 &&
                      dt < 10.0;
    return {pass, sfmt("%d draws; dense splice worst rel %.2e (<= 1e-12); "
                       "log-domain splices off: %d of %d; %.2f s (< 10 s)",
                       dense_draws + log_draws, worst_dense, log_bad, log_draws, dt)};
}

// ---------------------------------------------------------------- check 2
// Kick contrast of the flow experiment at T = 1e5: without kicks the
// exponent keeps oscillating (late-decade amplitudes stay above half the
// early-decade amplitude); a 1e-4 kick collapses the top-decade amplitude
// below 0.3 of its quiet value.  Thresholds and the seed are frozen; the
// measured quiet ratios sit near 0.64/0.62 and the kicked ratio near 0.024.
Outcome check_kick_contrast() {
    const auto t0 = Clock::now();
    rds::oy::FlowParams p;
    p.a = 0.03;
    p.h = 1e-3;
    p.T = 100000;

    p.epsilon = 0.0;
    RngStream quiet = spawn_stream(1, 0);
    const rds::oy::OyRunResult r0 = rds::oy::run_oy_experiment(p, quiet);
    const auto d = rds::io::decade_windows(r0.series, 2, 4);
    const double a2 = d[0].amplitude();
    const double a3 = d[1].amplitude();
    const double a4 = d[2].amplitude();

    p.epsilon = 1e-4;
    RngStream kicked = spawn_stream(1, 0);
    const rds::oy::OyRunResult r1 = rds::oy::run_oy_experiment(p, kicked);
    const double b4 = rds::io::decade_windows(r1.series, 4, 4)[0].amplitude();

    const bool sustained = a3 > 0.5 * a2 && a4 > 0.5 * a2;
    const bool collapsed = b4 < 0.3 * a4;
    const double dt = seconds_since(t0);
    return {sustained && collapsed,
            sfmt("quiet decade amplitudes %.5f / %.5f / %.5f (ratios %.3f, %.3f > 0.5); "
                 "kicked top decade %.5f (ratio %.4f < 0.3); %.1f s",
                 a2, a3, a4, a3 / a2, a4 / a2, b4, b4 / a4, dt)};
}

// ---------------------------------------------------------------- check 3
// Pinned values of the flow exponent: exactly 0 at the four side midpoints
// (the field has unit norm there) and exactly the -inf sentinel at the four
// corner equilibria.  Bitwise comparisons, no tolerance.
Outcome check_flow_exponent_pins() {
    const double a = 0.03;
    const rds::oy::SquarePoint mids[4] = {
        {M_PI / 2, 0.0}, {M_PI / 2, M_PI}, {0.0, M_PI / 2}, {M_PI, M_PI / 2}};
    const rds::oy::SquarePoint corners[4] = {{0.0, 0.0}, {0.0, M_PI}, {M_PI, 0.0}, {M_PI, M_PI}};

    int bad = 0;
    for (const double t : {1.0, 137.0}) {
        for (const auto& p : mids)
            if (rds::oy::ftle_flow(t, p, a) != 0.0) ++bad;
        for (const auto& p : corners)
            if (rds::oy::ftle_flow(t, p, a) != rds::kNegInf) ++bad;
    }
    return {bad == 0, sfmt("16 bitwise comparisons (4 midpoints -> 0, 4 corners -> -inf, "
                           "t in {1, 137}); mismatches: %d",
                           bad)};
}

// ---------------------------------------------------------------- check 4
// The stepped log-domain derivative product must match the closed-form
// block-product matrix at every return time: 100 random index sequences of
// up to 30 blocks, sign patterns exact, log magnitudes to 1e-12.
Outcome check_closed_form_at_returns() {
    const auto t0 = Clock::now();
    const rds::fig8::Fig8Params fp;
    const rds::Vec2 v{1.0, 1.0};

    int checked = 0;
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        RngStream s = spawn_stream(kSuiteSeed, 2000 + static_cast<std::uint64_t>(i));
        const int blocks = 2 + static_cast<int>(s.next_u64() % 29);
        std::vector<int> idx(static_cast<std::size_t>(blocks));
        for (int& n : idx) n = 2 + static_cast<int>(s.next_u64() % 8);

        const std::vector<std::int64_t> N = rds::fig8::return_times(idx, fp);
        rds::fig8::TargetLaw law =
            rds::fig8::TargetLaw::scripted({idx.begin() + 1, idx.end()});
        RngStream unused = spawn_stream(0, 0);
        const testsup::Fig8Trace tr = testsup::fig8_trace(
            fp, law, idx[0], static_cast<long>(N[static_cast<std::size_t>(blocks) - 2]), unused);

        for (int j = 1; j + 1 <= blocks; ++j) {
            const rds::fig8::LogMat2 want =
                rds::fig8::closed_form_cocycle(idx, static_cast<std::size_t>(j), 0, fp, v).matrix;
            const rds::fig8::LogMat2 got =
                testsup::fig8_product(tr, 1, static_cast<long>(N[static_cast<std::size_t>(j) - 1]));
            if (!testsup::logmat_close(got, want, 1e-12)) ++bad;
            ++checked;
        }
    }

    const double dt = seconds_since(t0);
    return {bad == 0 && dt < 5.0,
            sfmt("100 sequences, %d return times; signs exact, log magnitudes to 1e-12; "
                 "mismatches: %d; %.2f s (< 5 s)",
                 checked, bad, dt)};
}

// ---------------------------------------------------------------- check 5
// With an i.i.d. geometric target law the exponent of the impulsed box-chain
// map vanishes: after 1e5 steps every one of 20 independent trajectories
// must have |(1/n) log ||A v||| below 0.02.
Outcome check_impulsed_exponent_vanishes() {
    const auto t0 = Clock::now();
    const rds::fig8::Fig8Params fp;
    const std::vector<double> lams = rds::fig8_final_exponents(
        fp, rds::BoxIndexDist::geometric(2, 0.5), {0.0, 1.0}, 3, 100000, 1, 20,
        rds::ExecMode::parallel);

    double worst = 0.0;
    for (const double l : lams) worst = std::max(worst, std::abs(l));
    const double dt = seconds_since(t0);
    return {lams.size() == 20 && worst < 0.02,
            sfmt("20 trajectories, 1e5 steps each; worst |lambda| %.3e (< 0.02); %.2f s", worst,
                 dt)};
}

// ---------------------------------------------------------------- check 6
// Deterministic doubling chain: the exponent series keeps oscillating
// between 0 and -log kappa instead of converging.  At the last odd-block
// return inside 1e5 steps the closed-form value must lie within 0.01 of 0;
// one block-length later (still inside the horizon) it must lie within 5%
// of -log kappa.  The stepped run must agree with the closed form at both
// probe times to 1e-12.
Outcome check_deterministic_oscillation() {
    const rds::fig8::Fig8Params fp;
    const double lk = fp.log_kappa();
    const std::int64_t horizon = 100000;
    const rds::Vec2 v{0.0, 1.0};

    std::vector<int> idx;
    for (int n = 3; idx.size() < 18; n *= 2) idx.push_back(n);
    const std::vector<std::int64_t> N = rds::fig8::return_times(idx, fp);

    long peak_j = -1; // odd block counts: returns where the product re-aligns
    long dip_j = -1;  // same returns probed one full block later
    for (std::size_t j = 1; j + 1 <= idx.size(); j += 2) {
        if (N[j - 1] <= horizon) peak_j = static_cast<long>(j);
        if (N[j - 1] + idx[j] <= horizon) dip_j = static_cast<long>(j);
    }

    const std::int64_t t_peak = N[static_cast<std::size_t>(peak_j) - 1];
    const double lam_peak =
        rds::fig8::closed_form_cocycle(idx, static_cast<std::size_t>(peak_j), 0, fp, v)
            .log_norm_Av /
        static_cast<double>(t_peak);

    const std::int64_t t_dip = N[static_cast<std::size_t>(dip_j) - 1] +
                               idx[static_cast<std::size_t>(dip_j)];
    const double lam_dip =
        rds::fig8::closed_form_cocycle(idx, static_cast<std::size_t>(dip_j),
                                       idx[static_cast<std::size_t>(dip_j)], fp, v)
            .log_norm_Av /
        static_cast<double>(t_dip);

    const bool peak_ok = std::abs(lam_peak) <= 0.01;
    const bool dip_ok = std::abs(lam_dip + lk) <= 0.05 * lk;

    RngStream s = spawn_stream(0, 0);
    const rds::fig8::Fig8RunResult run = rds::fig8::fig8_lyapunov_run(
        fp, rds::fig8::TargetLaw::deterministic(), v, 3, horizon, s);
    const rds::SeriesPoint at_peak = run.series[static_cast<std::size_t>(t_peak - 1)];
    const rds::SeriesPoint at_dip = run.series[static_cast<std::size_t>(t_dip - 1)];
    const bool stepped_ok = at_peak.t == t_peak && at_dip.t == t_dip &&
                            std::abs(at_peak.value - lam_peak) <= 1e-12 &&
                            std::abs(at_dip.value - lam_dip) <= 1e-12;

    return {peak_ok && dip_ok && stepped_ok,
            sfmt("lambda(%lld) = %.3e (|.| <= 0.01); lambda(%lld) = %.6f vs -log kappa %.6f "
                 "(within 5%%); stepped run agrees to %.1e / %.1e",
                 static_cast<long long>(t_peak), lam_peak, static_cast<long long>(t_dip), lam_dip,
                 -lk, std::abs(at_peak.value - lam_peak), std::abs(at_dip.value - lam_dip))};
}

// ---------------------------------------------------------------- check 7
// The drawn index stays negligible against time: for 20 independent streams
// of 1e5+1 geometric draws, the largest draw_n / (n+1) over the second half
// of the run stays below 0.05.
Outcome check_index_tail_ratio() {
    const std::vector<double> ratios = rds::slln_max_tail_ratio(
        rds::BoxIndexDist::geometric(2, 0.5), 100001, 1, 20, rds::ExecMode::parallel);
    double worst = 0.0;
    for (const double r : ratios) worst = std::max(worst, r);
    return {ratios.size() == 20 && worst < 0.05,
            sfmt("20 streams, draw positions [50000, 100000]; worst max ratio %.2e (< 0.05)",
                 worst)};
}

// ---------------------------------------------------------------- check 8
// Shifting the start of an orbit by k steps moves a length-n time average by
// at most 2k sup|psi| / n, and the finite-time log growth rate (along the
// pushed direction) by at most 2k M / n, where M bounds the one-step log
// expansion/contraction.  100 sampled orbits, k <= 10, plain <= assertions.
Outcome check_shift_robustness() {
    const auto psi = [](const rds::Vec2& p) { return std::sin(p.x) + std::cos(p.y); };
    const double Psi = 2.0;

    const testsup::SinePerturbedSystem smooth;
    const rds::oy::OyUnitMap flow(0.03, 0.3, 0.01);

    int orbits = 0;
    int bad_avg = 0;
    int bad_log = 0;
    double tightest_avg = 0.0; // largest |gap| / bound seen, must stay <= 1
    double tightest_log = 0.0;
    for (int i = 0; i < 100; ++i) {
        RngStream s = spawn_stream(kSuiteSeed, 3000 + static_cast<std::uint64_t>(i));
        const bool use_flow = (i % 2 == 1);
        const rds::RandomMapSystem& sys =
            use_flow ? static_cast<const rds::RandomMapSystem&>(flow) : smooth;
        const std::size_t k = 1 + s.next_u64() % 10;
        const std::size_t n = use_flow ? 10 + s.next_u64() % 21 : 30 + s.next_u64() % 91;
        const rds::NoiseWord w = rds::NoiseWord::draw(s, n + k, sys.noise_dim());
        const rds::Vec2 x0 = use_flow ? testsup::random_point(s, -1.5, 1.5)
                                      : testsup::random_point(s, -1.0, 1.0);
        const auto orbit = rds::compose_random_orbit(sys, w, x0, n + k);

        double sum0 = 0.0, sumk = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            sum0 += psi(orbit[m]);
            sumk += psi(orbit[m + k]);
        }
        const double avg_gap = std::abs(sum0 - sumk) / static_cast<double>(n);
        const double avg_bound = 2.0 * static_cast<double>(k) * Psi / static_cast<double>(n);
        if (!(avg_gap <= avg_bound)) ++bad_avg;
        tightest_avg = std::max(tightest_avg, avg_gap / avg_bound);

        double M = 0.0;
        for (std::size_t m = 0; m < n + k; ++m) {
            const rds::Mat2 J = sys.jacobian(w.at(m), orbit[m]);
            M = std::max(M, std::max(std::log(J.op_norm()), std::log(J.inverse().op_norm())));
        }
        const rds::Vec2 v = testsup::random_unit_vector(s);
        const rds::Mat2 A_n = rds::cocycle_product(sys, w, x0, n);
        const rds::Mat2 A_k = rds::cocycle_product(sys, w, x0, k);
        const rds::Mat2 A_n_shift = rds::cocycle_product(sys, w.shifted(k), orbit[k], n);
        const rds::Vec2 pushed = A_k.apply(v);
        const rds::Vec2 vk = pushed * (1.0 / pushed.norm());

        const double lam = std::log(A_n.apply(v).norm()) / static_cast<double>(n);
        const double lam_shift = std::log(A_n_shift.apply(vk).norm()) / static_cast<double>(n);
        const double log_gap = std::abs(lam_shift - lam);
        const double log_bound = 2.0 * static_cast<double>(k) * M / static_cast<double>(n);
        if (!(log_gap <= log_bound)) ++bad_log;
        if (log_bound > 0.0) tightest_log = std::max(tightest_log, log_gap / log_bound);
        ++orbits;
    }

    return {orbits == 100 && bad_avg == 0 && bad_log == 0,
            sfmt("100 orbits, k <= 10; time-average bound violations: %d (max fill %.3f); "
                 "log-rate bound violations: %d (max fill %.3f)",
                 bad_avg, tightest_avg, bad_log, tightest_log)};
}

// ---------------------------------------------------------------- check 9
// Integrator quality on the transformed field: halving the step from 0.01
// to 0.005 must cut the error against an h = 1e-5 reference by at least 2^4;
// and 1000 steps at h = 1e-3 on the linear test field y' = 0.03 y must
// reproduce e^{0.03} to 1e-9.
//
// The field's expansion rate is of order one, so the h = 0.005 truncation
// error (~1e-14 relative) drowns in the roundoff a double run accumulates.
// The decay factor is therefore measured on an extended-precision mirror of
// the same tableau and field (truncation does not depend on the working
// precision), and the shipped double integrator is pinned to that mirror at
// both step sizes to within roundoff, which ties the two together.
struct LTan {
    long double z = 0.0L;
    long double w = 0.0L;
};

LTan lfield(const LTan& q, long double a) {
    const long double s = std::hypot(1.0L, q.z) / std::hypot(1.0L, q.w);
    return {-q.w * s + a * q.z, q.z / s + a * q.w};
}

LTan lrkf45_step(const LTan& y, long double a, long double h) {
    constexpr long double a21 = 1.0L / 4.0L;
    constexpr long double a31 = 3.0L / 32.0L, a32 = 9.0L / 32.0L;
    constexpr long double a41 = 1932.0L / 2197.0L, a42 = -7200.0L / 2197.0L,
                          a43 = 7296.0L / 2197.0L;
    constexpr long double a51 = 439.0L / 216.0L, a52 = -8.0L, a53 = 3680.0L / 513.0L,
                          a54 = -845.0L / 4104.0L;
    constexpr long double a61 = -8.0L / 27.0L, a62 = 2.0L, a63 = -3544.0L / 2565.0L,
                          a64 = 1859.0L / 4104.0L, a65 = -11.0L / 40.0L;
    constexpr long double b1 = 16.0L / 135.0L, b3 = 6656.0L / 12825.0L,
                          b4 = 28561.0L / 56430.0L, b5 = -9.0L / 50.0L, b6 = 2.0L / 55.0L;

    const LTan k1 = lfield(y, a);
    const LTan k2 = lfield({y.z + h * a21 * k1.z, y.w + h * a21 * k1.w}, a);
    const LTan k3 = lfield({y.z + h * (a31 * k1.z + a32 * k2.z),
                            y.w + h * (a31 * k1.w + a32 * k2.w)},
                           a);
    const LTan k4 = lfield({y.z + h * (a41 * k1.z + a42 * k2.z + a43 * k3.z),
                            y.w + h * (a41 * k1.w + a42 * k2.w + a43 * k3.w)},
                           a);
    const LTan k5 = lfield({y.z + h * (a51 * k1.z + a52 * k2.z + a53 * k3.z + a54 * k4.z),
                            y.w + h * (a51 * k1.w + a52 * k2.w + a53 * k3.w + a54 * k4.w)},
                           a);
    const LTan k6 = lfield(
        {y.z + h * (a61 * k1.z + a62 * k2.z + a63 * k3.z + a64 * k4.z + a65 * k5.z),
         y.w + h * (a61 * k1.w + a62 * k2.w + a63 * k3.w + a64 * k4.w + a65 * k5.w)},
        a);
    return {y.z + h * (b1 * k1.z + b3 * k3.z + b4 * k4.z + b5 * k5.z + b6 * k6.z),
            y.w + h * (b1 * k1.w + b3 * k3.w + b4 * k4.w + b5 * k5.w + b6 * k6.w)};
}

LTan lrun(LTan q, long double a, double h, int units) {
    const long steps = std::lround(1.0 / h); // same step count as the shipped unit step
    const long double lh = static_cast<long double>(h);
    for (int u = 0; u < units; ++u)
        for (long i = 0; i < steps; ++i) q = lrkf45_step(q, a, lh);
    return q;
}

Outcome check_integrator_order() {
    const double a = 0.03;
    const int units = 5;
    const rds::oy::TanPoint q0 = rds::oy::tan_transform({2.0, 0.02});
    const LTan l0{q0.z, q0.w};

    const LTan ref = lrun(l0, a, 1e-5, units);
    const LTan coarse = lrun(l0, a, 0.01, units);
    const LTan fine = lrun(l0, a, 0.005, units);
    const long double scale = std::max(1.0L, std::hypot(ref.z, ref.w));
    const double e1 = static_cast<double>(std::hypot(coarse.z - ref.z, coarse.w - ref.w) / scale);
    const double e2 = static_cast<double>(std::hypot(fine.z - ref.z, fine.w - ref.w) / scale);
    const bool order_ok = e2 > 0.0 && e1 / e2 >= 16.0;

    double worst_pin = 0.0;
    for (const double h : {0.01, 0.005}) {
        rds::oy::TanPoint q = q0;
        for (int u = 0; u < units; ++u) q = rds::oy::rkf45_unit_step(q, a, h);
        const LTan o = lrun(l0, a, h, units);
        worst_pin = std::max(
            worst_pin, static_cast<double>(std::hypot(q.z - o.z, q.w - o.w) / scale));
    }
    const bool pin_ok = worst_pin <= 1e-12;

    const auto growth = [](const std::array<double, 1>& u) {
        return std::array<double, 1>{0.03 * u[0]};
    };
    std::array<double, 1> y{1.0};
    for (int i = 0; i < 1000; ++i) y = rds::rkf45_step<1>(growth, y, 1e-3);
    const double exp_err = std::abs(y[0] - std::exp(0.03));
    const bool exp_ok = exp_err <= 1e-9;

    return {order_ok && pin_ok && exp_ok,
            sfmt("rel errors %.3e (h=0.01) / %.3e (h=0.005), decay factor %.1f (>= 16); "
                 "double run within %.1e of the mirror (<= 1e-12); linear field error %.2e "
                 "(<= 1e-9)",
                 e1, e2, e2 > 0.0 ? e1 / e2 : 0.0, worst_pin, exp_err)};
}

// ---------------------------------------------------------------- check 10
// Exponent pair identities from the QR accumulation: the constant squeeze
// diag(kappa^-2, kappa) yields (log kappa, -2 log kappa); isometries yield
// (0, 0); and on a smooth random system the pair sums to the mean
// log-determinant along the orbit.
Outcome check_exponent_pair_identities() {
    RngStream s = spawn_stream(kSuiteSeed, 4000);
    const rds::Vec2 x0{0.3, 0.4};
    const rds::NoiseWord w64 = rds::NoiseWord::draw(s, 64, 1);
    const double l2 = std::log(2.0);

    const testsup::ConstSqueezeSystem squeeze(2.0);
    const auto [sq1, sq2] = rds::qr_spectrum(squeeze, w64, x0, 64);
    const bool squeeze_ok = std::abs(sq1 - l2) <= 1e-13 && std::abs(sq2 + 2.0 * l2) <= 1e-13;

    const testsup::RotationSystem rot(0.7);
    const auto [r1, r2] = rds::qr_spectrum(rot, w64, x0, 64);
    const testsup::ShiftSystem shift;
    const auto [t1, t2] = rds::qr_spectrum(shift, w64, x0, 64);
    const bool iso_ok =
        std::abs(r1) <= 1e-13 && std::abs(r2) <= 1e-13 && t1 == 0.0 && t2 == 0.0;

    const testsup::SinePerturbedSystem smooth;
    double worst_residual = 0.0;
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 150 + s.next_u64() % 101;
        const rds::NoiseWord w = rds::NoiseWord::draw(s, n, smooth.noise_dim());
        const rds::Vec2 p0 = testsup::random_point(s, -1.0, 1.0);
        const auto [q1, q2] = rds::qr_spectrum(smooth, w, p0, n);
        const auto orbit = rds::compose_random_orbit(smooth, w, p0, n);
        double mean_logdet = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            mean_logdet += std::log(std::abs(smooth.jacobian(w.at(m), orbit[m]).det()));
        mean_logdet /= static_cast<double>(n);
        worst_residual = std::max(worst_residual, std::abs(q1 + q2 - mean_logdet));
    }
    const bool sum_ok = worst_residual <= 1e-10;

    return {squeeze_ok && iso_ok && sum_ok,
            sfmt("squeeze pair (%.15f, %.15f) vs (log 2, -2 log 2) to 1e-13; isometry pairs "
                 "zero; sum-rule residual %.2e (<= 1e-10) over 10 random systems",
                 sq1, sq2, worst_residual)};
}

Outcome guarded(Outcome (*check)()) {
    try {
        return check();
    } catch (const std::exception& e) {
        return {false, sfmt("threw: %s", e.what())};
    }
}

} // namespace

int main() {
    std::printf("acceptance gate (fixed seeds; exit status = number of failures)\n");

    report(1, "cocycle splice across both systems", guarded(check_cocycle_splice));
    report(2, "kick contrast of flow amplitude decades", guarded(check_kick_contrast));
    report(3, "flow exponent pinned values", guarded(check_flow_exponent_pins));
    report(4, "closed form at box-chain return times", guarded(check_closed_form_at_returns));
    report(5, "impulsed exponent ensemble vanishes", guarded(check_impulsed_exponent_vanishes));
    report(6, "deterministic chain keeps oscillating", guarded(check_deterministic_oscillation));
    report(7, "index tail ratio ensemble", guarded(check_index_tail_ratio));
    report(8, "orbit-shift robustness bounds", guarded(check_shift_robustness));
    report(9, "integrator order and linear-field value", guarded(check_integrator_order));
    report(10, "exponent pair identities", guarded(check_exponent_pair_identities));

    std::printf("%d/10 checks passed\n", 10 - g_failures);
    return g_failures;
}
