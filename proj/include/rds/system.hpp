#pragma once

#include <cstddef>
#include <span>

#include "rds/geometry.hpp"
#include "rds/noise_word.hpp"

namespace rds {

// A family of maps f_t of the plane, indexed by a noise parameter t in
// [-1,1]^noise_dim.  step applies f_t; jacobian returns the exact derivative
// D f_t at x (exact for the computed map, so that finite differences of step
// reproduce it).
class RandomMapSystem {
  public:
    virtual ~RandomMapSystem() = default;

    virtual std::size_t noise_dim() const = 0;
    virtual Vec2 step(std::span<const double> t, const Vec2& x) const = 0;
    virtual Mat2 jacobian(std::span<const double> t, const Vec2& x) const = 0;
};

// One state of the skew product over the noise shift: the position in the
// noise word (everything before pos has been consumed) plus the current
// phase-space point.
struct SkewState {
    std::size_t pos = 0;
    Vec2 point;
};

} // namespace rds
