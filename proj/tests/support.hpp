#pragma once

// Shared fixtures for the test binaries: closed-form toy systems whose
// orbits and derivatives are known by hand, a finite-difference derivative
// oracle, and small numeric helpers.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rds/core.hpp"
#include "rds/figure8.hpp"
#include "rds/geometry.hpp"
#include "rds/noise_word.hpp"
#include "rds/rng.hpp"
#include "rds/system.hpp"

namespace testsup {

inline double rel_err(double got, double want) {
    const double scale = std::max(1.0, std::abs(want));
    return std::abs(got - want) / scale;
}

inline double mat_err(const rds::Mat2& got, const rds::Mat2& want) {
    return (got - want).frobenius() / std::max(1.0, want.frobenius());
}

// Central-difference derivative of sys.step, the independent check that a
// system's jacobian() really is the derivative of its step().
inline rds::Mat2 fd_jacobian(const rds::RandomMapSystem& sys, std::span<const double> t,
                             const rds::Vec2& x, double h = 1e-6) {
    const rds::Vec2 px1 = sys.step(t, {x.x + h, x.y});
    const rds::Vec2 mx1 = sys.step(t, {x.x - h, x.y});
    const rds::Vec2 px2 = sys.step(t, {x.x, x.y + h});
    const rds::Vec2 mx2 = sys.step(t, {x.x, x.y - h});
    return {(px1.x - mx1.x) / (2 * h), (px2.x - mx2.x) / (2 * h),
            (px1.y - mx1.y) / (2 * h), (px2.y - mx2.y) / (2 * h)};
}

// x -> x + (t, t): scalar noise, identity derivative.  Orbits are running
// sums of the word, so every orbit value is checkable by hand.
class ShiftSystem : public rds::RandomMapSystem {
  public:
    std::size_t noise_dim() const override { return 1; }
    rds::Vec2 step(std::span<const double> t, const rds::Vec2& x) const override {
        return {x.x + t[0], x.y + t[0]};
    }
    rds::Mat2 jacobian(std::span<const double>, const rds::Vec2&) const override {
        return rds::Mat2::identity();
    }
};

// Constant linear map diag(kappa^-2, kappa); the n-step cocycle is
// diag(kappa^-2n, kappa^n) regardless of the word or the point.
class ConstSqueezeSystem : public rds::RandomMapSystem {
  public:
    explicit ConstSqueezeSystem(double kappa = 2.0) : k_(kappa) {}
    std::size_t noise_dim() const override { return 1; }
    rds::Vec2 step(std::span<const double>, const rds::Vec2& x) const override {
        return {x.x / (k_ * k_), k_ * x.y};
    }
    rds::Mat2 jacobian(std::span<const double>, const rds::Vec2&) const override {
        return rds::Mat2::diagonal(1.0 / (k_ * k_), k_);
    }

  private:
    double k_;
};

// Constant rotation: isometry, so both exponents vanish for every word.
class RotationSystem : public rds::RandomMapSystem {
  public:
    explicit RotationSystem(double theta = 0.7) : c_(std::cos(theta)), s_(std::sin(theta)) {}
    std::size_t noise_dim() const override { return 1; }
    rds::Vec2 step(std::span<const double>, const rds::Vec2& x) const override {
        return {c_ * x.x - s_ * x.y, s_ * x.x + c_ * x.y};
    }
    rds::Mat2 jacobian(std::span<const double>, const rds::Vec2&) const override {
        return {c_, -s_, s_, c_};
    }

  private:
    double c_, s_;
};

// A smooth nonlinear system with two-dimensional noise and an everywhere
// invertible derivative: det DF = 0.99 - 0.4 cos(y) (0.1 - 0.4 sin(x)) is
// bounded away from zero, so QR accumulation never degenerates.
class SinePerturbedSystem : public rds::RandomMapSystem {
  public:
    std::size_t noise_dim() const override { return 2; }
    rds::Vec2 step(std::span<const double> t, const rds::Vec2& x) const override {
        return {1.1 * x.x + 0.4 * std::sin(x.y) + 0.3 * t[0],
                0.9 * x.y + 0.4 * std::cos(x.x) + 0.1 * x.x + 0.3 * t[1]};
    }
    rds::Mat2 jacobian(std::span<const double>, const rds::Vec2& x) const override {
        return {1.1, 0.4 * std::cos(x.y), -0.4 * std::sin(x.x) + 0.1, 0.9};
    }
};

// Uniform point of [lo, hi]^2.
inline rds::Vec2 random_point(rds::RngStream& s, double lo, double hi) {
    const double span = hi - lo;
    return {lo + span * s.next_unit(), lo + span * s.next_unit()};
}

inline rds::Vec2 random_unit_vector(rds::RngStream& s) {
    const double phi = 2.0 * M_PI * s.next_unit();
    return {std::cos(phi), std::sin(phi)};
}

// Step-by-step trace of the box-chain map: the per-step log-domain
// derivatives plus the block bookkeeping, for composing partial cocycles in
// arbitrary splits.
struct Fig8Trace {
    std::vector<rds::fig8::LogMat2> step_jacs; // entry m-1 = derivative of step m
    std::vector<int> indices;                  // n_1, n_2, ...
    std::vector<std::int64_t> returns;         // N(1), N(2), ...
};

inline Fig8Trace fig8_trace(const rds::fig8::Fig8Params& p, rds::fig8::TargetLaw law, int n1,
                            long steps, rds::RngStream& s) {
    Fig8Trace tr;
    tr.indices.push_back(n1);
    rds::fig8::BlockState st = rds::fig8::BlockState::start(n1, p);
    for (long m = 1; m <= steps; ++m) {
        const rds::fig8::StepResult r = rds::fig8::step_fig8(st, s, law, p);
        tr.step_jacs.push_back(r.jac);
        if (r.block_completed) {
            tr.returns.push_back(m);
            tr.indices.push_back(r.target);
        }
    }
    return tr;
}

// Left product of the trace's steps first..last (1-based, inclusive).
inline rds::fig8::LogMat2 fig8_product(const Fig8Trace& tr, long first, long last) {
    rds::fig8::LogMat2 acc = rds::fig8::LogMat2::identity();
    for (long m = first; m <= last; ++m)
        acc = tr.step_jacs[static_cast<std::size_t>(m - 1)] * acc;
    return acc;
}

// Element-wise comparison of log-domain matrices: signs must agree exactly,
// log magnitudes within tol (absolute for |lg| <= 1, else relative).
inline bool logmat_close(const rds::fig8::LogMat2& got, const rds::fig8::LogMat2& want,
                         double tol) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const rds::fig8::SignLog& g = got.e[i][j];
            const rds::fig8::SignLog& w = want.e[i][j];
            if (g.s != w.s) return false;
            if (g.s == 0) continue; // both exact zeros
            if (std::abs(g.lg - w.lg) > tol * std::max(1.0, std::abs(w.lg))) return false;
        }
    return true;
}

} // namespace testsup
