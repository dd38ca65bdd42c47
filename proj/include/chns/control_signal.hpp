#pragma once

#include <cstddef>
#include <vector>

#include "chns/grid.hpp"

namespace chns {

// Piecewise-constant-in-time forcing. Interval i covers
// [breakpoints[i], breakpoints[i+1]) and carries values[i]; the last interval
// is closed at T. When the signal comes from the low-mode parameterization,
// `modes()[i]` holds the coefficients that synthesize values[i].
class ControlSignal {
 public:
  ControlSignal(std::vector<double> breakpoints, std::vector<VelocityField> values,
                std::vector<std::vector<double>> modes = {});

  // U = 0 on [tau, T] as a single interval.
  static ControlSignal zero(const Grid& grid, double tau, double T);
  // A single constant value on [tau, T].
  static ControlSignal constant(const VelocityField& value, double tau, double T);

  double tau() const noexcept { return breakpoints_.front(); }
  double T() const noexcept { return breakpoints_.back(); }
  std::size_t intervals() const noexcept { return values_.size(); }
  const Grid& grid() const noexcept { return values_.front().grid(); }

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<VelocityField>& values() const noexcept { return values_; }
  const std::vector<std::vector<double>>& modes() const noexcept { return modes_; }
  bool has_modes() const noexcept { return !modes_.empty(); }

  // Index of the interval containing t (clamped to the window).
  std::size_t interval_at(double t) const noexcept;
  const VelocityField& at(double t) const noexcept { return values_[interval_at(t)]; }

  // Largest L2 norm over the intervals.
  double max_norm() const;

  // Restriction to [a, b] (a sub-window of [tau, T]); breakpoints inside are kept.
  ControlSignal restrict(double a, double b) const;
  // This signal followed by `next`, which must start where this one ends.
  ControlSignal concat(const ControlSignal& next) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<VelocityField> values_;
  std::vector<std::vector<double>> modes_;
};

}  // namespace chns
