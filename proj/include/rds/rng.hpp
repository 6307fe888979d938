#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rds {

// Counter-based stream of pseudo-random numbers.
//
// Every output is a pure function of (seed, stream_id, counter): the value at
// position k is mix64(key(seed, stream_id) + (k+1) * GAMMA), where mix64 is
// Stafford's "mix13" finalizer of SplitMix64 and GAMMA is the usual SplitMix64
// golden-ratio increment.  This gives
//   * random access (the counter can be set or skipped without generating),
//   * cheap splitting: streams for different ids are decorrelated by hashing
//     the id into the key, so trajectories can be farmed out to threads while
//     each consumes exactly its own sequence, and
//   * a stable contract: the mapping (seed, id, counter) -> u64 is frozen;
//     outputs never depend on call order, thread count, or platform.
class RngStream {
  public:
    RngStream() = default;

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id),
          key_(mix64(mix64(seed + kGamma) ^ mix64(stream_id * kIdSalt + kGamma))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t counter() const { return counter_; }
    void set_counter(std::uint64_t c) { counter_ = c; }

    // Value at the current counter position; advances the counter by one.
    std::uint64_t next_u64() { return at(counter_++); }

    // Pure random access: does not disturb the stream position.
    std::uint64_t at(std::uint64_t counter) const {
        return mix64(key_ + (counter + 1) * kGamma);
    }

    // Uniform draw in [0, 1), 53 mantissa bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform draw in [-1, 1).
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kIdSalt = 0xBF58476D1CE4E5B9ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// Independent stream for one trajectory of an ensemble.
inline RngStream spawn_stream(std::uint64_t seed, std::uint64_t trajectory_id) {
    return RngStream(seed, trajectory_id);
}

// One noise entry for the flow experiment: a pair of independent U[-1,1]
// coordinates.  Consumes exactly two counter positions.
inline std::pair<double, double> draw_uniform_pair(RngStream& s) {
    const double a = s.next_symmetric();
    const double b = s.next_symmetric();
    return {a, b};
}

// Additive noise for the flow experiment: a cube of side 2*epsilon centred at
// the origin, sampled componentwise.  epsilon = 0 is legal and still consumes
// the same number of counter positions, so runs at different noise levels see
// an identical stream alignment.
struct UniformCubeNoise {
    double epsilon = 0.0;
    int dim = 2;

    void validate() const {
        if (!(epsilon >= 0.0))
            throw std::invalid_argument("UniformCubeNoise: epsilon must be >= 0");
        if (dim < 1) throw std::invalid_argument("UniformCubeNoise: dim must be >= 1");
    }

    // One kick: dim independent components, each uniform on [-epsilon, epsilon].
    std::vector<double> draw(RngStream& s) const {
        std::vector<double> kick(static_cast<std::size_t>(dim));
        for (double& c : kick) c = epsilon * s.next_symmetric();
        return kick;
    }
};

// Law of the impulse target index: an integer n >= n0, either geometric
// (p_n = (1-q) q^(n-n0)) or an explicit finite table of probabilities
// starting at n0.
class BoxIndexDist {
  public:
    static BoxIndexDist geometric(int n0, double q) {
        if (n0 < 2) throw std::invalid_argument("BoxIndexDist: n0 must be >= 2");
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("BoxIndexDist: geometric ratio q must lie in (0,1)");
        BoxIndexDist d;
        d.n0_ = n0;
        d.q_ = q;
        return d;
    }

    static BoxIndexDist explicit_table(int n0, std::vector<double> probs) {
        if (n0 < 2) throw std::invalid_argument("BoxIndexDist: n0 must be >= 2");
        if (probs.empty()) throw std::invalid_argument("BoxIndexDist: empty probability table");
        double sum = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0)) throw std::invalid_argument("BoxIndexDist: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("BoxIndexDist: probabilities must sum to 1");
        BoxIndexDist d;
        d.n0_ = n0;
        d.probs_ = std::move(probs);
        return d;
    }

    int n0() const { return n0_; }
    bool is_geometric() const { return probs_.empty(); }
    double geometric_q() const { return q_; }

    // Exact mean of the law: n0 + q/(1-q) for the geometric case, the finite
    // weighted sum for an explicit table.
    double mean() const {
        if (is_geometric()) return n0_ + q_ / (1.0 - q_);
        double m = 0.0;
        for (std::size_t j = 0; j < probs_.size(); ++j)
            m += (n0_ + static_cast<double>(j)) * probs_[j];
        return m;
    }

    // Inversion sampling; consumes exactly one draw from the stream.
    int sample(RngStream& s) const {
        const double u = s.next_unit();
        if (is_geometric()) {
            // Smallest j with CDF(n0+j) > u, i.e. j = floor(log(1-u)/log q).
            const double j = std::floor(std::log1p(-u) / std::log(q_));
            return n0_ + static_cast<int>(j);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < probs_.size(); ++j) {
            acc += probs_[j];
            if (u < acc) return n0_ + static_cast<int>(j);
        }
        return n0_ + static_cast<int>(probs_.size()) - 1;
    }

  private:
    BoxIndexDist() = default;
    int n0_ = 2;
    double q_ = 0.5;
    std::vector<double> probs_; // empty <=> geometric
};

inline int sample_box_index(const BoxIndexDist& d, RngStream& s) { return d.sample(s); }
inline double mean_index(const BoxIndexDist& d) { return d.mean(); }

} // namespace rds
