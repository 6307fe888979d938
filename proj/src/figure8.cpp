#include "rds/figure8.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace rds::fig8 {

namespace {

// Tolerance for the run-time membership guards.  Log coordinates are built
// from O(n) additions of log(kappa) with partial sums up to ~1e5, so the
// guards must absorb a few ulps of that accumulation; they exist to catch
// phase-accounting bugs, not to measure anything.
constexpr double kMembershipTol = 1e-5;

[[noreturn]] void escape_error(const char* where, const BlockState& s) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "fig8 step: point escaped expected region (%s): n=%d phase=%ld lx=%.17g ly=%.17g",
                  where, s.n, s.phase, s.lx, s.ly);
    throw std::runtime_error(buf);
}

bool log_in(double v, double lo, double hi) {
    return v >= lo - kMembershipTol && v <= hi + kMembershipTol;
}

} // namespace

void Fig8Params::validate() const {
    if (!(kappa > 1.0)) throw std::invalid_argument("fig8: kappa must exceed 1");
    if (!(1.0 < a && a < b && b < kappa))
        throw std::invalid_argument("fig8: need 1 < a < b < kappa");
    if (n0 < 1) throw std::invalid_argument("fig8: n0 must be >= 1");
    if (k0 < 1) throw std::invalid_argument("fig8: k0 must be >= 1");
}

double Fig8Params::log_kappa() const { return std::log(kappa); }

SignLog signlog_of(double x) {
    if (x == 0.0) return SignLog{};
    return SignLog{std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

SignLog signlog_pow(int sign, double log_magnitude) {
    if (sign == 0) return SignLog{};
    return SignLog{log_magnitude, sign > 0 ? 1 : -1};
}

SignLog signlog_mul(const SignLog& a, const SignLog& b) {
    if (a.s == 0 || b.s == 0) return SignLog{};
    return SignLog{a.lg + b.lg, a.s * b.s};
}

SignLog signlog_add(const SignLog& a, const SignLog& b) {
    if (a.s == 0) return b;
    if (b.s == 0) return a;
    const SignLog& hi = (a.lg >= b.lg) ? a : b;
    const SignLog& lo = (a.lg >= b.lg) ? b : a;
    if (hi.s == lo.s) return SignLog{hi.lg + std::log1p(std::exp(lo.lg - hi.lg)), hi.s};
    if (hi.lg == lo.lg) return SignLog{}; // exact cancellation
    return SignLog{hi.lg + std::log1p(-std::exp(lo.lg - hi.lg)), hi.s};
}

LogMat2 LogMat2::identity() {
    LogMat2 m;
    m.e[0][0] = SignLog{0.0, 1};
    m.e[1][1] = SignLog{0.0, 1};
    return m;
}

LogMat2 LogMat2::from_mat(const Mat2& m) {
    LogMat2 r;
    r.e[0][0] = signlog_of(m.a11);
    r.e[0][1] = signlog_of(m.a12);
    r.e[1][0] = signlog_of(m.a21);
    r.e[1][1] = signlog_of(m.a22);
    return r;
}

LogMat2 LogMat2::diagonal(const SignLog& d1, const SignLog& d2) {
    LogMat2 m;
    m.e[0][0] = d1;
    m.e[1][1] = d2;
    return m;
}

LogMat2 LogMat2::anti_diagonal(const SignLog& d12, const SignLog& d21) {
    LogMat2 m;
    m.e[0][1] = d12;
    m.e[1][0] = d21;
    return m;
}

LogMat2 LogMat2::operator*(const LogMat2& o) const {
    LogMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.e[i][j] = signlog_add(signlog_mul(e[i][0], o.e[0][j]),
                                    signlog_mul(e[i][1], o.e[1][j]));
    return r;
}

Mat2 LogMat2::to_mat() const {
    auto val = [](const SignLog& s) { return s.s == 0 ? 0.0 : s.s * std::exp(s.lg); };
    return Mat2{val(e[0][0]), val(e[0][1]), val(e[1][0]), val(e[1][1])};
}

SignLog LogMat2::log_abs_det() const {
    return signlog_add(signlog_mul(e[0][0], e[1][1]),
                       signlog_mul(SignLog{e[0][1].lg, -e[0][1].s}, e[1][0]));
}

std::array<SignLog, 2> log_apply(const LogMat2& m, const Vec2& v) {
    const SignLog vx = signlog_of(v.x);
    const SignLog vy = signlog_of(v.y);
    return {signlog_add(signlog_mul(m.e[0][0], vx), signlog_mul(m.e[0][1], vy)),
            signlog_add(signlog_mul(m.e[1][0], vx), signlog_mul(m.e[1][1], vy))};
}

double log_norm(const std::array<SignLog, 2>& u) {
    const bool z0 = (u[0].s == 0);
    const bool z1 = (u[1].s == 0);
    if (z0 && z1) return kNegInf;
    if (z0) return u[1].lg;
    if (z1) return u[0].lg;
    const double hi = std::max(u[0].lg, u[1].lg);
    const double lo = std::min(u[0].lg, u[1].lg);
    // log sqrt(e^(2 hi) + e^(2 lo))
    return hi + 0.5 * std::log1p(std::exp(2.0 * (lo - hi)));
}

Rect box_S(int n, const Fig8Params& params) {
    params.validate();
    if (n < params.n0)
        throw std::invalid_argument("box_S: index below the smallest admissible box");
    const double scale = std::pow(params.kappa, -n);
    return Rect{params.a, params.b, scale * params.a, scale * params.b};
}

std::pair<Vec2, Mat2> h_step(const Vec2& p, const Fig8Params& params) {
    const double k = params.kappa;
    return {Vec2{p.x / (k * k), k * p.y}, Mat2{1.0 / (k * k), 0.0, 0.0, k}};
}

std::pair<Vec2, Mat2> rotation_R(const Vec2& p, const Fig8Params& params) {
    return {Vec2{params.a + params.b - p.y, p.x}, Mat2{0.0, -1.0, 1.0, 0.0}};
}

std::pair<Vec2, LogMat2> block_map(int n, const Vec2& p, const Fig8Params& params) {
    if (!box_S(n, params).contains(p))
        throw std::invalid_argument("block_map: point is not in the requested box");
    const double kn = std::pow(params.kappa, n);
    const double lk = params.log_kappa();
    const Vec2 out{params.a + params.b - kn * p.y, p.x / (kn * kn)};
    const LogMat2 jac = LogMat2::anti_diagonal(signlog_pow(-1, n * lk),
                                               signlog_pow(+1, -2.0 * n * lk));
    return {out, jac};
}

ImpulseResult impulse(const Vec2& p, int target, const Fig8Params& params) {
    params.validate();
    if (target < params.n0)
        throw std::invalid_argument("impulse: target below the smallest admissible box");
    ImpulseResult r{p, LogMat2::identity(), -1};
    if (!(p.x >= params.a && p.x <= params.b) || !(p.y > 0.0)) return r;
    // S_m has y in kappa^-m [a, b]; since b/a < kappa at most one integer m
    // fits.  Locate the candidate from logs, then confirm with the closed box.
    const double lk = params.log_kappa();
    const long cand = std::lround((std::log(params.a) - std::log(p.y)) / lk);
    for (long m = cand - 1; m <= cand + 1; ++m) {
        if (m < params.n0 || m > 1000000) continue;
        if (!box_S(static_cast<int>(m), params).contains(p)) continue;
        const double shift = (static_cast<double>(m) - target) * lk;
        r.point = Vec2{p.x, p.y * std::exp(shift)};
        r.jac = LogMat2::diagonal(SignLog{0.0, 1}, signlog_pow(+1, shift));
        r.source_box = static_cast<int>(m);
        return r;
    }
    return r;
}

TargetLaw TargetLaw::iid(BoxIndexDist dist) {
    TargetLaw law(Kind::iid);
    law.dist_ = std::move(dist);
    return law;
}

TargetLaw TargetLaw::deterministic() { return TargetLaw(Kind::deterministic); }

TargetLaw TargetLaw::scripted(std::vector<int> targets) {
    TargetLaw law(Kind::scripted);
    law.script_ = std::move(targets);
    return law;
}

int TargetLaw::sample(int current_box, RngStream& stream) {
    switch (kind_) {
    case Kind::iid:
        return dist_.sample(stream);
    case Kind::deterministic:
        return current_box;
    case Kind::scripted:
        if (script_pos_ >= script_.size())
            throw std::runtime_error("TargetLaw: scripted target list exhausted");
        return script_[script_pos_++];
    }
    throw std::logic_error("TargetLaw: unknown kind");
}

Vec2 BlockState::point() const { return Vec2{std::exp(lx), std::exp(ly)}; }

BlockState BlockState::start(int n1, const Fig8Params& params) {
    params.validate();
    if (n1 < params.n0)
        throw std::invalid_argument("BlockState: start box below the smallest admissible index");
    BlockState s;
    s.n = n1;
    s.phase = 0;
    s.lx = std::log(0.5 * (params.a + params.b));
    s.ly = s.lx - n1 * params.log_kappa();
    return s;
}

BlockState BlockState::from_point(int n1, const Vec2& p, const Fig8Params& params) {
    if (!box_S(n1, params).contains(p))
        throw std::invalid_argument("BlockState: point is not in the requested box");
    BlockState s;
    s.n = n1;
    s.phase = 0;
    s.lx = std::log(p.x);
    s.ly = std::log(p.y);
    return s;
}

StepResult step_fig8(BlockState& s, RngStream& stream, TargetLaw& law, const Fig8Params& params) {
    const double lk = params.log_kappa();
    const double la = std::log(params.a);
    const double lb = std::log(params.b);
    StepResult out;
    out.jac = LogMat2::identity();

    if (s.phase == 0 &&
        !(log_in(s.lx, la, lb) && log_in(s.ly, la - s.n * lk, lb - s.n * lk)))
        escape_error("block entry", s);

    if (s.phase < s.n) {
        // Squeeze phase: H = diag(kappa^-2, kappa).
        s.lx -= 2.0 * lk;
        s.ly += lk;
        out.jac = LogMat2::diagonal(signlog_pow(+1, -2.0 * lk), signlog_pow(+1, lk));
        ++s.phase;
        return out;
    }

    if (s.phase < s.n + params.k0 - 1) {
        // Padding steps: the point rests with identity derivative.
        ++s.phase;
        return out;
    }

    // Final step of the block: quarter turn, then the impulse to the drawn
    // target.  The point must sit at the squeeze-phase exit in kappa^-2n [a,b] x [a,b].
    if (!(log_in(s.lx, la - 2.0 * s.n * lk, lb - 2.0 * s.n * lk) && log_in(s.ly, la, lb)))
        escape_error("rotation entry", s);

    const double y_lin = std::exp(s.ly); // O(1) by the guard above
    const double new_lx = std::log(params.a + params.b - y_lin);
    const double new_ly = s.lx; // rotated point lands in S_2n
    const int source_box = 2 * s.n;

    const int target = law.sample(source_box, stream);
    if (target < params.n0)
        throw std::runtime_error("step_fig8: drawn target below the smallest admissible box");

    const double shift = (static_cast<double>(source_box) - target) * lk;
    s.lx = new_lx;
    s.ly = new_ly + shift;
    s.n = target;
    s.phase = 0;

    // d(impulse o R) = diag(1, kappa^(2n - target)) * [[0, -1], [1, 0]].
    out.jac = LogMat2::anti_diagonal(signlog_pow(-1, 0.0), signlog_pow(+1, shift));
    out.block_completed = true;
    out.target = target;
    return out;
}

ReturnSchedule ReturnSchedule::from_indices(const std::vector<int>& indices,
                                            const Fig8Params& params) {
    ReturnSchedule sched;
    sched.n_sequence = indices;
    sched.N.reserve(indices.size());
    std::int64_t acc = 0;
    for (int n : indices) {
        if (n < params.n0) throw std::invalid_argument("ReturnSchedule: index below n0");
        acc += static_cast<std::int64_t>(n) + params.k0;
        sched.N.push_back(acc);
    }
    return sched;
}

std::vector<std::int64_t> return_times(const std::vector<int>& indices, const Fig8Params& params) {
    return ReturnSchedule::from_indices(indices, params).N;
}

ClosedFormResult closed_form_cocycle(const std::vector<int>& indices, std::size_t j, long ell,
                                     const Fig8Params& params, const Vec2& v) {
    params.validate();
    if (v.x == 0.0 && v.y == 0.0)
        throw std::invalid_argument("closed_form_cocycle: zero direction vector");
    if (indices.empty()) throw std::invalid_argument("closed_form_cocycle: empty index list");
    if (j + 1 > indices.size())
        throw std::invalid_argument("closed_form_cocycle: index list must cover block j+1");
    const int n_next = indices[j]; // n_{j+1}: the block being traversed
    if (ell < 0 || ell > n_next)
        throw std::invalid_argument("closed_form_cocycle: ell must lie in [0, n_{j+1}]");

    const double lk = params.log_kappa();
    const double n1 = static_cast<double>(indices[0]);
    const double l = static_cast<double>(ell);

    LogMat2 m;
    if (j % 2 == 1) {
        // j = 2k - 1 completed blocks: anti-diagonal with signs (-1)^k, (-1)^(k-1).
        const std::size_t k = (j + 1) / 2;
        const int sk = (k % 2 == 0) ? +1 : -1;
        m = LogMat2::anti_diagonal(signlog_pow(sk, (n1 - 2.0 * l) * lk),
                                   signlog_pow(-sk, (l - static_cast<double>(indices[j])) * lk));
    } else {
        // j = 2k completed blocks: diagonal with sign (-1)^k on both entries.
        // (j = 0 is covered: n_{2k+1} is then n_1 and the bottom exponent is ell.)
        const std::size_t k = j / 2;
        const int sk = (k % 2 == 0) ? +1 : -1;
        m = LogMat2::diagonal(signlog_pow(sk, -2.0 * l * lk),
                              signlog_pow(sk, (n1 - static_cast<double>(indices[j]) + l) * lk));
    }

    ClosedFormResult r;
    r.matrix = m;
    r.log_norm_Av = log_norm(log_apply(m, v));
    return r;
}

Fig8RunResult fig8_lyapunov_run(const Fig8Params& params, TargetLaw law, const Vec2& v, int n1,
                                std::int64_t total_steps, RngStream& stream) {
    params.validate();
    if (v.x == 0.0 && v.y == 0.0)
        throw std::invalid_argument("fig8_lyapunov_run: zero direction vector");
    if (total_steps < 0)
        throw std::invalid_argument("fig8_lyapunov_run: total_steps must be >= 0");

    Fig8RunResult out;
    out.indices.push_back(n1);
    BlockState s = BlockState::start(n1, params);
    LogMat2 acc = LogMat2::identity();
    out.series.reserve(static_cast<std::size_t>(total_steps));

    for (std::int64_t m = 1; m <= total_steps; ++m) {
        const StepResult st = step_fig8(s, stream, law, params);
        acc = st.jac * acc;
        if (st.block_completed) {
            out.returns.push_back(m);
            out.indices.push_back(st.target);
        }
        const double lam = log_norm(log_apply(acc, v)) / static_cast<double>(m);
        out.series.push_back(SeriesPoint{m, lam});
    }
    out.cocycle = acc;
    return out;
}

Series slln_diagnostic(const BoxIndexDist& dist, RngStream& stream, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("slln_diagnostic: N must be positive");
    Series out;
    out.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 0; n < N; ++n) {
        const int draw = dist.sample(stream);
        out.push_back(SeriesPoint{n, static_cast<double>(draw) / static_cast<double>(n + 1)});
    }
    return out;
}

} // namespace rds::fig8
