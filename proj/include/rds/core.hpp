#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rds/geometry.hpp"
#include "rds/noise_word.hpp"
#include "rds/series.hpp"
#include "rds/system.hpp"

namespace rds {

// Orbit x_0, f_{t_1}(x_0), f_{t_2}(f_{t_1}(x_0)), ... up to n steps
// (n+1 points).  Throws std::length_error if the word has fewer than n
// entries.
std::vector<Vec2> compose_random_orbit(const RandomMapSystem& sys, const NoiseWord& w,
                                       const Vec2& x0, std::size_t n);

// One step of the skew product: shift the word, move the point by the map
// selected by the consumed entry.
SkewState skew_step(const RandomMapSystem& sys, const NoiseWord& w, const SkewState& s);

// n-step derivative cocycle A^(n)(w, x0) = Df_{t_n}(x_{n-1}) ... Df_{t_1}(x_0),
// accumulated as a left product.
Mat2 cocycle_product(const RandomMapSystem& sys, const NoiseWord& w, const Vec2& x0,
                     std::size_t n);

// Finite-time exponent (1/n) log ||A v||.  Throws std::domain_error on v = 0;
// returns kNegInf when A v underflows to the zero vector.
double lyapunov_ftle_discrete(const Mat2& A, const Vec2& v, std::size_t n);

// (1/n) sum of psi over the first n points of the orbit (all points given).
// Throws std::invalid_argument on an empty orbit.
double birkhoff_average(const std::function<double(const Vec2&)>& psi,
                        const std::vector<Vec2>& orbit);

// Both finite-time exponents via QR (Benettin) accumulation: at each step the
// pushed frame J*Q is re-orthonormalized by Gram-Schmidt and the logs of the
// triangular diagonal accumulate.  Returns the pair sorted descending.
// Throws std::runtime_error naming the step if a Jacobian is singular.
std::pair<double, double> qr_spectrum(const RandomMapSystem& sys, const NoiseWord& w,
                                      const Vec2& x0, std::size_t n);

// Same accumulation, recording the running pair (sorted descending at each
// recorded time) as two series.
struct SpectrumSeries {
    Series lambda1;
    Series lambda2;
};
SpectrumSeries qr_spectrum_series(const RandomMapSystem& sys, const NoiseWord& w, const Vec2& x0,
                                  std::size_t n,
                                  const DecimationPolicy& policy = DecimationPolicy::none());

} // namespace rds
