#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "rds/rng.hpp"

namespace rds {

// A finite word of noise parameters t_1, ..., t_N, each a point of the cube
// [-1,1]^dim.  Entry i is applied at step i+1 (first entry innermost in the
// composition f_{t_N} o ... o f_{t_1}).
class NoiseWord {
  public:
    NoiseWord() = default;

    NoiseWord(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
        if (dim_ == 0) throw std::invalid_argument("NoiseWord: dimension must be positive");
        if (data_.size() % dim_ != 0)
            throw std::invalid_argument("NoiseWord: flat storage not a multiple of dim");
        for (double v : data_)
            if (!(v >= -1.0 && v <= 1.0))
                throw std::invalid_argument("NoiseWord: component outside [-1,1]");
    }

    // Convenience for scalar-noise words: NoiseWord({0.5, -0.25}).
    NoiseWord(std::initializer_list<double> scalars)
        : NoiseWord(1, std::vector<double>(scalars)) {}

    static NoiseWord draw(RngStream& s, std::size_t length, std::size_t dim) {
        std::vector<double> flat(length * dim);
        for (double& v : flat) v = s.next_symmetric();
        return NoiseWord(dim, std::move(flat));
    }

    std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> at(std::size_t i) const {
        if (i >= size()) throw std::out_of_range("NoiseWord: entry index past end of word");
        return {data_.data() + i * dim_, dim_};
    }

    // The suffix starting at entry k: the word "shifted" k times.
    std::span<const double> suffix_flat(std::size_t k) const {
        if (k > size()) throw std::out_of_range("NoiseWord: shift past end of word");
        return {data_.data() + k * dim_, data_.size() - k * dim_};
    }

    NoiseWord shifted(std::size_t k) const {
        auto tail = suffix_flat(k);
        return NoiseWord(dim_, std::vector<double>(tail.begin(), tail.end()));
    }

  private:
    std::size_t dim_ = 1;
    std::vector<double> data_;
};

} // namespace rds
