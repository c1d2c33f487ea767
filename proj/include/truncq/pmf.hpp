#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace truncq {

// Discrete distribution on a dyadic grid: mass[i] sits at
// (origin + i) * 2^-scale_bits + offset.  The offset carries the
// tail-mean correction of the effective-sum window.
struct Pmf {
  int scale_bits = 0;
  std::int64_t origin = 0;
  double offset = 0.0;
  std::vector<double> mass;

  double value_at(std::size_t i) const {
    return std::ldexp(static_cast<double>(origin + static_cast<std::int64_t>(i)), -scale_bits) +
           offset;
  }
  double total_mass() const;
  double mean() const;
  double variance() const;

  // Clamp small negative masses (>= -1e-12) to zero and renormalize.
  // Throws if a mass is more negative than that.
  void clamp_and_normalize();
};

}  // namespace truncq
