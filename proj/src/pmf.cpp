#include "truncq/pmf.hpp"

#include <stdexcept>

namespace truncq {

double Pmf::total_mass() const {
  double s = 0.0, comp = 0.0;
  for (double m : mass) {
    const double t = s + m;
    comp += (s - t) + m;
    s = t;
  }
  return s + comp;
}

double Pmf::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) s += value_at(i) * mass[i];
  return s;
}

double Pmf::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double d = value_at(i) - mu;
    s += d * d * mass[i];
  }
  return s;
}

void Pmf::clamp_and_normalize() {
  for (double& m : mass) {
    if (m < 0.0) {
      if (m < -1e-12) throw std::logic_error("Pmf: mass below clamp threshold");
      m = 0.0;
    }
  }
  const double total = total_mass();
  if (total <= 0.0) throw std::logic_error("Pmf: zero total mass");
  for (double& m : mass) m /= total;
}

}  // namespace truncq
