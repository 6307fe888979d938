#include "rds/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rds {

std::vector<Vec2> compose_random_orbit(const RandomMapSystem& sys, const NoiseWord& w,
                                       const Vec2& x0, std::size_t n) {
    if (n > w.size())
        throw std::length_error("compose_random_orbit: word shorter than requested orbit");
    std::vector<Vec2> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(x0);
    Vec2 x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        x = sys.step(w.at(i), x);
        orbit.push_back(x);
    }
    return orbit;
}

SkewState skew_step(const RandomMapSystem& sys, const NoiseWord& w, const SkewState& s) {
    if (s.pos >= w.size())
        throw std::out_of_range("skew_step: noise word exhausted");
    return SkewState{s.pos + 1, sys.step(w.at(s.pos), s.point)};
}

Mat2 cocycle_product(const RandomMapSystem& sys, const NoiseWord& w, const Vec2& x0,
                     std::size_t n) {
    if (n > w.size())
        throw std::length_error("cocycle_product: word shorter than requested product");
    Mat2 A = Mat2::identity();
    Vec2 x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        A = sys.jacobian(w.at(i), x) * A;
        x = sys.step(w.at(i), x);
    }
    return A;
}

double lyapunov_ftle_discrete(const Mat2& A, const Vec2& v, std::size_t n) {
    if (v.x == 0.0 && v.y == 0.0)
        throw std::domain_error("lyapunov_ftle_discrete: zero direction vector");
    if (n == 0)
        throw std::domain_error("lyapunov_ftle_discrete: zero step count");
    const double r = A.apply(v).norm();
    if (r == 0.0) return kNegInf;
    return std::log(r) / static_cast<double>(n);
}

double birkhoff_average(const std::function<double(const Vec2&)>& psi,
                        const std::vector<Vec2>& orbit) {
    if (orbit.empty())
        throw std::invalid_argument("birkhoff_average: empty orbit");
    double sum = 0.0;
    for (const Vec2& p : orbit) sum += psi(p);
    return sum / static_cast<double>(orbit.size());
}

namespace {

// Shared QR loop; calls sink(step_1based, sum_log_r11, sum_log_r22) after
// every step.
template <typename Sink>
void qr_accumulate(const RandomMapSystem& sys, const NoiseWord& w, const Vec2& x0, std::size_t n,
                   Sink&& sink) {
    if (n == 0)
        throw std::domain_error("qr_spectrum: zero step count");
    if (n > w.size())
        throw std::length_error("qr_spectrum: word shorter than requested run");

    Vec2 q1{1.0, 0.0}, q2{0.0, 1.0};
    double sum1 = 0.0, sum2 = 0.0;
    Vec2 x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 J = sys.jacobian(w.at(i), x);
        if (!std::isfinite(J.det()))
            throw std::runtime_error("qr_spectrum: non-finite Jacobian at step " +
                                     std::to_string(i + 1));
        // Push the orthonormal frame and re-orthonormalize (Gram-Schmidt).
        Vec2 b1 = J.apply(q1);
        Vec2 b2 = J.apply(q2);
        const double r11 = b1.norm();
        if (r11 == 0.0)
            throw std::runtime_error("qr_spectrum: singular Jacobian at step " +
                                     std::to_string(i + 1));
        q1 = b1 * (1.0 / r11);
        const double r12 = q1.dot(b2);
        Vec2 u2 = b2 - q1 * r12;
        const double r22 = u2.norm();
        if (r22 == 0.0)
            throw std::runtime_error("qr_spectrum: singular Jacobian at step " +
                                     std::to_string(i + 1));
        q2 = u2 * (1.0 / r22);
        sum1 += std::log(r11);
        sum2 += std::log(r22);
        sink(i + 1, sum1, sum2);
        x = sys.step(w.at(i), x);
    }
}

} // namespace

std::pair<double, double> qr_spectrum(const RandomMapSystem& sys, const NoiseWord& w,
                                      const Vec2& x0, std::size_t n) {
    double s1 = 0.0, s2 = 0.0;
    qr_accumulate(sys, w, x0, n, [&](std::size_t, double a, double b) {
        s1 = a;
        s2 = b;
    });
    double l1 = s1 / static_cast<double>(n);
    double l2 = s2 / static_cast<double>(n);
    if (l1 < l2) std::swap(l1, l2);
    return {l1, l2};
}

SpectrumSeries qr_spectrum_series(const RandomMapSystem& sys, const NoiseWord& w, const Vec2& x0,
                                  std::size_t n, const DecimationPolicy& policy) {
    SpectrumSeries out;
    DecimationPolicy::Cursor cursor(policy);
    qr_accumulate(sys, w, x0, n, [&](std::size_t t, double a, double b) {
        if (!cursor.record(static_cast<std::int64_t>(t)) && t != n) return;
        double l1 = a / static_cast<double>(t);
        double l2 = b / static_cast<double>(t);
        if (l1 < l2) std::swap(l1, l2);
        const auto tt = static_cast<std::int64_t>(t);
        out.lambda1.push_back({tt, l1});
        out.lambda2.push_back({tt, l2});
    });
    return out;
}

} // namespace rds
