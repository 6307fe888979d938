#pragma once

#include <cstdint>
#include <vector>

namespace rds {

// One sample of a scalar diagnostic indexed by (integer) time.
struct SeriesPoint {
    std::int64_t t = 0;
    double value = 0.0;
    bool operator==(const SeriesPoint&) const = default;
};

// Time-ordered series with strictly increasing t.  Values may be the -inf
// sentinel (a logarithm of an exact zero); consumers that cannot represent it
// must skip such entries explicitly.
using Series = std::vector<SeriesPoint>;
using FtleSeries = Series;

// Which integer times of a long run are recorded.
//   none      - every step.
//   geometric - every step up to `dense_until`, then only times on a grid
//               growing by `ratio` (each recorded time is the rounding of
//               g, g *= ratio, ...).
class DecimationPolicy {
  public:
    static DecimationPolicy none() { return DecimationPolicy{}; }

    static DecimationPolicy geometric(double ratio = 1.01, std::int64_t dense_until = 1000) {
        DecimationPolicy p;
        p.geometric_ = true;
        p.ratio_ = ratio;
        p.dense_until_ = dense_until;
        return p;
    }

    // Default used by the command-line driver: dense for short runs, 1%-spaced
    // geometric grid for anything past 10^5 recorded times.
    static DecimationPolicy auto_for(std::int64_t total_steps) {
        return total_steps <= 100000 ? none() : geometric();
    }

    bool is_geometric() const { return geometric_; }

    // Stateful cursor over recorded times.
    class Cursor {
      public:
        explicit Cursor(const DecimationPolicy& p) : p_(p), next_grid_(p.dense_until_ + 1.0) {}

        bool record(std::int64_t t) {
            if (!p_.geometric_ || t <= p_.dense_until_) return true;
            if (t >= static_cast<std::int64_t>(next_grid_ + 0.5)) {
                while (static_cast<std::int64_t>(next_grid_ + 0.5) <= t) next_grid_ *= p_.ratio_;
                return true;
            }
            return false;
        }

      private:
        const DecimationPolicy& p_;
        double next_grid_;
    };

  private:
    bool geometric_ = false;
    double ratio_ = 1.01;
    std::int64_t dense_until_ = 1000;
};

} // namespace rds
