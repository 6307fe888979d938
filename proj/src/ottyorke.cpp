#include "rds/ottyorke.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rds/rkf45.hpp"

namespace rds::oy {

namespace detail {

double psin(double x) {
    const double half_pi = 0.5 * M_PI;
    const double m = std::nearbyint(x / half_pi);
    const double r = std::fma(-m, half_pi, x); // exact reduction
    switch (static_cast<long>(m) & 3L) {
        case 0: return std::sin(r);
        case 1: return std::cos(r);
        case 2: return -std::sin(r);
        default: return -std::cos(r);
    }
}

double pcos(double x) {
    const double half_pi = 0.5 * M_PI;
    const double m = std::nearbyint(x / half_pi);
    const double r = std::fma(-m, half_pi, x);
    switch (static_cast<long>(m) & 3L) {
        case 0: return std::cos(r);
        case 1: return -std::sin(r);
        case 2: return -std::cos(r);
        default: return std::sin(r);
    }
}

} // namespace detail

void FlowParams::validate() const {
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("flow: dissipation a must lie in (0,1)");
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("flow: kick amplitude must be >= 0");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("flow: step size must be positive");
    const long s = std::lround(1.0 / h);
    if (s < 1 || std::abs(static_cast<double>(s) * h - 1.0) > 1e-9)
        throw std::invalid_argument("flow: 1/h must be an integral step count");
    if (T < 0) throw std::invalid_argument("flow: T must be >= 0");
    if (!(x0.x > 0.0 && x0.x < M_PI && x0.y > 0.0 && x0.y < M_PI))
        throw std::invalid_argument("flow: x0 must lie in the open square (0,pi)^2");
}

Vec2 vector_field(const SquarePoint& p, double a) {
    const double sx = detail::psin(p.x), cx = detail::pcos(p.x);
    const double sy = detail::psin(p.y), cy = detail::pcos(p.y);
    return {sx * (cy - a * cx), -sy * (cx + a * cy)};
}

TanPoint tan_transform(const SquarePoint& p) {
    if (!(p.x > 0.0 && p.x < M_PI && p.y > 0.0 && p.y < M_PI))
        throw std::domain_error("tan_transform: point must lie in the open square (0,pi)^2");
    return {std::tan(p.x - 0.5 * M_PI), std::tan(p.y - 0.5 * M_PI)};
}

SquarePoint inverse_tan_transform(const TanPoint& q) {
    return {std::atan(q.z) + 0.5 * M_PI, std::atan(q.w) + 0.5 * M_PI};
}

TanPoint transformed_field(const TanPoint& q, double a) {
    const double hz = std::hypot(1.0, q.z);
    const double hw = std::hypot(1.0, q.w);
    const double s = hz / hw; // sqrt((1+z^2)/(1+w^2)) without overflow
    return {-q.w * s + a * q.z, q.z / s + a * q.w};
}

Mat2 transformed_field_jacobian(const TanPoint& q, double a) {
    const double hz = std::hypot(1.0, q.z);
    const double hw = std::hypot(1.0, q.w);
    const double c = (q.z / hz) * (q.w / hw); // z w / (hz hw), bounded by 1
    return {a - c, -(hz / hw) / (hw * hw), (hw / hz) / (hz * hz), a + c};
}

TanPoint rkf45_unit_step(const TanPoint& q, double a, double h) {
    const long steps = std::lround(1.0 / h);
    auto field = [a](const std::array<double, 2>& s) {
        const TanPoint d = transformed_field({s[0], s[1]}, a);
        return std::array<double, 2>{d.z, d.w};
    };
    std::array<double, 2> y{q.z, q.w};
    for (long i = 0; i < steps; ++i) {
        y = rkf45_step<2>(field, y, h);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
            throw std::runtime_error("rkf45_unit_step: non-finite state at sub-step " +
                                     std::to_string(i + 1) + " of " + std::to_string(steps));
    }
    return {y[0], y[1]};
}

std::pair<TanPoint, Mat2> rkf45_unit_step_with_tangent(const TanPoint& q, const Mat2& V,
                                                       double a, double h) {
    const long steps = std::lround(1.0 / h);
    // State layout: z, w, then the tangent frame column-by-column.
    auto field = [a](const std::array<double, 6>& s) {
        const TanPoint d = transformed_field({s[0], s[1]}, a);
        const Mat2 J = transformed_field_jacobian({s[0], s[1]}, a);
        return std::array<double, 6>{d.z,
                                     d.w,
                                     J.a11 * s[2] + J.a12 * s[3],
                                     J.a21 * s[2] + J.a22 * s[3],
                                     J.a11 * s[4] + J.a12 * s[5],
                                     J.a21 * s[4] + J.a22 * s[5]};
    };
    std::array<double, 6> y{q.z, q.w, V.a11, V.a21, V.a12, V.a22};
    for (long i = 0; i < steps; ++i) {
        y = rkf45_step<6>(field, y, h);
        for (double v : y)
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "rkf45_unit_step_with_tangent: non-finite state at sub-step " +
                    std::to_string(i + 1) + " of " + std::to_string(steps));
    }
    return {TanPoint{y[0], y[1]}, Mat2{y[2], y[4], y[3], y[5]}};
}

namespace {

constexpr double kBoundaryNudge = 1e-15;

struct AxisCell {
    long k = 0;      // period-cell index
    double u = 0.0;  // in-cell coordinate, in (0, pi)
    bool nudged = false;
};

AxisCell locate_cell(double x) {
    AxisCell c;
    c.k = static_cast<long>(std::floor(x / M_PI));
    c.u = x - static_cast<double>(c.k) * M_PI;
    if (c.u < 0.0) { // quotient rounded up across the edge
        c.k -= 1;
        c.u = x - static_cast<double>(c.k) * M_PI;
    }
    if (c.u == 0.0) {
        // Exactly on the lower edge: the point arrived from below (the tan
        // image of that edge is +infinity in the cell underneath), so treat
        // it as the top of the lower cell, nudged into the interior.
        c.k -= 1;
        c.u = M_PI - kBoundaryNudge;
        c.nudged = true;
    } else if (c.u >= M_PI) {
        c.u = M_PI - kBoundaryNudge;
        c.nudged = true;
    }
    return c;
}

struct FoldOutcome {
    TanPoint folded;
    SquarePoint raw;     // kicked square coordinates, before folding
    double dz = 1.0;     // d folded.z / d q.z
    double dw = 1.0;
    bool nudged = false;
};

// Largest tan-coordinate magnitude the state is allowed to reach.  The
// transformed field grows |z| by at most a factor e^(1+a) < e^2 per unit
// step, so clamping here keeps the next integration leg clear of double
// overflow (1e300 * e^2 << 1.8e308) while preserving the full usable range.
constexpr double kTanCoordinateCap = 1e300;

FoldOutcome fold_detail(const TanPoint& q, double omega, double xi, double eps) {
    FoldOutcome out;
    const double kick_x = eps * omega, kick_y = eps * xi;
    if (kick_x == 0.0 && kick_y == 0.0) {
        // Zero kick: the point cannot leave the square, and unfolding to
        // square coordinates and re-folding would quantize the state (tan of
        // the nearest double below pi caps |z| near 1.6e16, pinning the orbit
        // ~1e-16 away from the corners).  Pass the state through bit-exactly,
        // up to the range clamp.
        out.folded.z = std::clamp(q.z, -kTanCoordinateCap, kTanCoordinateCap);
        out.folded.w = std::clamp(q.w, -kTanCoordinateCap, kTanCoordinateCap);
        out.raw.x = std::atan(q.z) + 0.5 * M_PI;
        out.raw.y = std::atan(q.w) + 0.5 * M_PI;
        return out; // dz = dw = 1
    }
    out.raw.x = std::atan(q.z) + 0.5 * M_PI + kick_x;
    out.raw.y = std::atan(q.w) + 0.5 * M_PI + kick_y;

    const AxisCell cx = locate_cell(out.raw.x);
    const AxisCell cy = locate_cell(out.raw.y);
    out.nudged = cx.nudged || cy.nudged;

    // Re-entry rule: cells with k+l even use the reversed branch (-tan), odd
    // cells the plain translate (+tan).  The home cell k = l = 0 is the
    // reference frame itself and passes through unreflected, so a
    // zero-amplitude kick is the exact identity.
    const bool home = (cx.k == 0 && cy.k == 0);
    const double s = (((cx.k + cy.k) & 1L) == 0 && !home) ? -1.0 : 1.0;

    out.folded.z = s * std::tan(cx.u - 0.5 * M_PI);
    out.folded.w = s * std::tan(cy.u - 0.5 * M_PI);
    // d/dz [s tan(atan(z) + c - k pi)] = s (1 + tan^2) / (1 + z^2).
    out.dz = s * (1.0 + out.folded.z * out.folded.z) / (1.0 + q.z * q.z);
    out.dw = s * (1.0 + out.folded.w * out.folded.w) / (1.0 + q.w * q.w);
    return out;
}

} // namespace

TanPoint apply_noise_and_fold(const TanPoint& q, std::pair<double, double> draws, double eps,
                              FoldDiagnostics* diag) {
    const FoldOutcome out = fold_detail(q, draws.first, draws.second, eps);
    if (diag && out.nudged) diag->boundary_nudges += 1;
    return out.folded;
}

double ftle_flow(double t, const SquarePoint& p, double a) {
    if (!(t > 0.0))
        throw std::domain_error("ftle_flow: time must be positive");
    const Vec2 f = vector_field(p, a);
    const double n2 = f.x * f.x + f.y * f.y;
    if (n2 == 0.0) return kNegInf;
    return 0.5 * std::log(n2) / t;
}

double ftle_flow_tan(double t, const TanPoint& q, double a) {
    if (!(t > 0.0))
        throw std::domain_error("ftle_flow_tan: time must be positive");
    // x = atan(z) + pi/2 gives sin x = 1/hz and cos x = -z/hz exactly.
    const double hz = std::hypot(1.0, q.z);
    const double hw = std::hypot(1.0, q.w);
    const double f1 = (-q.w / hw + a * q.z / hz) / hz;
    const double f2 = (q.z / hz + a * q.w / hw) / hw;
    const double n = std::hypot(f1, f2);
    if (n == 0.0) return kNegInf;
    return std::log(n) / t;
}

OyRunResult run_oy_experiment(const FlowParams& params, RngStream& stream,
                              const DecimationPolicy& policy) {
    params.validate();
    OyRunResult result;
    DecimationPolicy::Cursor cursor(policy);

    TanPoint q = tan_transform(params.x0);
    for (std::int64_t t = 1; t <= params.T; ++t) {
        try {
            q = rkf45_unit_step(q, params.a, params.h);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("oy run: unit time " + std::to_string(t) + ": " + e.what());
        }
        const auto draws = draw_uniform_pair(stream); // consumed for every t
        const FoldOutcome fo = fold_detail(q, draws.first, draws.second, params.epsilon);
        if (fo.nudged) result.fold.boundary_nudges += 1;
        q = fo.folded;
        if (cursor.record(t) || t == params.T) // the last step is always kept
            result.series.push_back({t, ftle_flow_tan(static_cast<double>(t), q, params.a)});
    }
    return result;
}

double tangent_flow_check(const FlowParams& params, std::int64_t t_units) {
    params.validate();
    const double a = params.a;
    auto field = [a](const std::array<double, 4>& s) {
        const TanPoint d = transformed_field({s[0], s[1]}, a);
        const Mat2 J = transformed_field_jacobian({s[0], s[1]}, a);
        return std::array<double, 4>{d.z, d.w, J.a11 * s[2] + J.a12 * s[3],
                                     J.a21 * s[2] + J.a22 * s[3]};
    };

    const TanPoint q0 = tan_transform(params.x0);
    const TanPoint v0 = transformed_field(q0, a);
    std::array<double, 4> y{q0.z, q0.w, v0.z, v0.w};
    const long steps = params.steps_per_unit();
    for (std::int64_t t = 0; t < t_units; ++t)
        for (long i = 0; i < steps; ++i) y = rkf45_step<4>(field, y, params.h);

    const TanPoint ft = transformed_field({y[0], y[1]}, a);
    const double num = std::hypot(y[2] - ft.z, y[3] - ft.w);
    const double den = std::max(std::hypot(ft.z, ft.w), 1e-300);
    return num / den;
}

Vec2 OyUnitMap::step(std::span<const double> t, const Vec2& x) const {
    const TanPoint q = rkf45_unit_step({x.x, x.y}, a_, h_);
    const FoldOutcome fo = fold_detail(q, t[0], t[1], epsilon_);
    return {fo.folded.z, fo.folded.w};
}

Mat2 OyUnitMap::jacobian(std::span<const double> t, const Vec2& x) const {
    const auto [q, V] = rkf45_unit_step_with_tangent({x.x, x.y}, Mat2::identity(), a_, h_);
    const FoldOutcome fo = fold_detail(q, t[0], t[1], epsilon_);
    return Mat2::diagonal(fo.dz, fo.dw) * V;
}

} // namespace rds::oy
