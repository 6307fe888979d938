#pragma once

#include <cstdint>
#include <vector>

#include "rds/figure8.hpp"
#include "rds/ottyorke.hpp"
#include "rds/rng.hpp"

namespace rds {

// The ensemble drivers run many independent trajectories, one noise stream
// per trajectory id.  `parallel` distributes trajectories over OpenMP
// threads; `serial` is the plain loop kept as the reference.  Because each
// trajectory draws from its own counter-based stream and writes only its own
// slot, both modes produce bit-identical results (asserted in the tests, and
// timed against each other in the benchmark).
enum class ExecMode { serial, parallel };

// Final flow exponent lambda(T) for trajectory ids 0..count-1.
std::vector<double> oy_final_ftle(const oy::FlowParams& params, std::uint64_t seed, int count,
                                  ExecMode mode);

// Final (1/T) log ||A^(T) v|| of the impulsed box-chain map for ids 0..count-1.
std::vector<double> fig8_final_exponents(const fig8::Fig8Params& params,
                                         const BoxIndexDist& dist, const Vec2& v, int n1,
                                         std::int64_t total_steps, std::uint64_t seed, int count,
                                         ExecMode mode);

// Largest value of draw_n / (n+1) over n in [N/2, N) for ids 0..count-1.
std::vector<double> slln_max_tail_ratio(const BoxIndexDist& dist, std::int64_t N,
                                        std::uint64_t seed, int count, ExecMode mode);

} // namespace rds
