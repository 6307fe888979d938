#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "rds/geometry.hpp"
#include "rds/rng.hpp"
#include "rds/series.hpp"
#include "rds/system.hpp"

namespace rds::oy {

// Point of the unit square [0,pi]^2 (flow coordinates).
struct SquarePoint {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const SquarePoint&) const = default;
};

// Point in unbounded coordinates z = tan(x - pi/2), w = tan(y - pi/2); the
// square interior maps onto the whole plane, which keeps the integration
// well-conditioned near the boundary equilibria.
struct TanPoint {
    double z = 0.0;
    double w = 0.0;
    bool operator==(const TanPoint&) const = default;
};

struct FlowParams {
    double a = 0.03;        // dissipation; saddles at the corners for 0 < a < 1
    double epsilon = 1e-4;  // kick amplitude applied once per unit time
    double h = 1e-3;        // integrator step; 1/h must be integral to 1e-9
    std::int64_t T = 100000; // number of unit-time steps
    SquarePoint x0{(3.0 + M_PI) / 2.0, (3.0 + M_PI) / 2.0};

    void validate() const;
    long steps_per_unit() const { return std::lround(1.0 / h); }
};

namespace detail {
// sin/cos with the argument reduced by exact multiples of M_PI/2 (fma keeps
// the reduction exact).  This pins the zeros of the trig factors to the
// representable doubles 0, M_PI/2, M_PI, ...  so the square's equilibria sit
// exactly on floating-point grid points; elsewhere it agrees with std::sin /
// std::cos to rounding.
double psin(double x);
double pcos(double x);
} // namespace detail

// Right-hand side of the flow on the square:
//   dx/dt = sin x (cos y - a cos x)
//   dy/dt = -sin y (cos x + a cos y)
// Zero exactly at the four corners; unit norm at the four side midpoints.
Vec2 vector_field(const SquarePoint& p, double a);

// Coordinate change and its inverse.  tan_transform requires both
// coordinates strictly inside (0, pi) and throws std::domain_error otherwise;
// the inverse is total.
TanPoint tan_transform(const SquarePoint& p);
SquarePoint inverse_tan_transform(const TanPoint& q);

// Push-forward of vector_field through the tan change of coordinates:
//   dz/dt = -w s + a z,   dw/dt = z / s + a w,   s = sqrt((1+z^2)/(1+w^2)).
// Evaluated via hypot so that |z|, |w| up to ~1e300 stay finite.
TanPoint transformed_field(const TanPoint& q, double a);

// Exact derivative matrix of transformed_field (rows d(zdot), d(wdot)).
Mat2 transformed_field_jacobian(const TanPoint& q, double a);

// Integrate the transformed field over one time unit with round(1/h) fixed
// RKF45 steps.  Throws std::runtime_error if the state goes non-finite.
TanPoint rkf45_unit_step(const TanPoint& q, double a, double h);

// Same, carrying a tangent frame V through the variational equation with the
// same stages (so the result is the exact derivative of the discrete step).
std::pair<TanPoint, Mat2> rkf45_unit_step_with_tangent(const TanPoint& q, const Mat2& V,
                                                       double a, double h);

struct FoldDiagnostics {
    std::int64_t boundary_nudges = 0;
};

// The once-per-unit-time renormalization: convert to square coordinates, add
// the kick (eps*omega, eps*xi), locate the containing period cell
// [k pi,(k+1) pi] x [l pi,(l+1) pi], and re-tangent relative to that cell,
// with sign -tan for k+l even and +tan for k+l odd.  The home cell
// k = l = 0 is the reference frame and maps through unchanged; a zero kick
// (in particular eps = 0) passes the state through bit-exactly, clamped to
// |z|,|w| <= 1e300 so the next integration leg cannot overflow.  A point
// landing exactly on a cell boundary is treated as the top of the lower cell
// and nudged 1e-15 into its interior (counted in diagnostics).
TanPoint apply_noise_and_fold(const TanPoint& q, std::pair<double, double> draws, double eps,
                              FoldDiagnostics* diag = nullptr);

// Finite-time exponent of the flow seeded along the field direction:
// lambda(t) = (1/t) * (1/2) * log(f1^2 + f2^2) at the current point.
// Returns kNegInf when the field vanishes exactly (corner hit).
double ftle_flow(double t, const SquarePoint& p, double a);

// The same quantity evaluated at a tan-coordinates point, using
// sin x = 1/sqrt(1+z^2), cos x = -z/sqrt(1+z^2).  Square coordinates resolve
// distances to the corners only down to the spacing of doubles near pi
// (~1e-16, flooring log||f|| at about -37); this form tracks ||f|| down to
// ~1e-300, which matters for the noiseless runs whose orbits hug the corners
// ever closer.
double ftle_flow_tan(double t, const TanPoint& q, double a);

struct OyRunResult {
    Series series;           // lambda at recorded integer times
    FoldDiagnostics fold;
};

// Full experiment: integrate unit steps, kick + fold each unit time (the two
// uniform draws are consumed even when epsilon = 0, so runs with different
// epsilon share one noise path), record lambda at the resulting point via
// the tan-coordinates evaluation.
OyRunResult run_oy_experiment(const FlowParams& params, RngStream& stream,
                              const DecimationPolicy& policy = DecimationPolicy::none());

// Consistency of the tangent flow: integrating v(0) = F(q0) along the
// variational equation must track F(q(t)).  Returns the relative residual
// after t_units; shrinks with the step size.
double tangent_flow_check(const FlowParams& params, std::int64_t t_units);

// The unit-time map as a random map of the plane (tan coordinates): noise
// parameter (omega, xi) in [-1,1]^2, step = integrate + kick + fold,
// derivative = variational solution times the fold's diagonal factor.
class OyUnitMap : public RandomMapSystem {
  public:
    OyUnitMap(double a, double epsilon, double h) : a_(a), epsilon_(epsilon), h_(h) {}

    std::size_t noise_dim() const override { return 2; }
    Vec2 step(std::span<const double> t, const Vec2& x) const override;
    Mat2 jacobian(std::span<const double> t, const Vec2& x) const override;

  private:
    double a_;
    double epsilon_;
    double h_;
};

} // namespace rds::oy
