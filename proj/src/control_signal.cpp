#include "chns/control_signal.hpp"

#include <algorithm>
#include <cmath>

#include "chns/error.hpp"
#include "chns/spectral.hpp"

namespace chns {

ControlSignal::ControlSignal(std::vector<double> breakpoints, std::vector<VelocityField> values,
                             std::vector<std::vector<double>> modes)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), modes_(std::move(modes)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw DomainError("ControlSignal: need n >= 1 values and n + 1 breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw DomainError("ControlSignal: breakpoints must be strictly increasing");
    }
  }
  if (!modes_.empty() && modes_.size() != values_.size()) {
    throw DomainError("ControlSignal: one mode vector per interval expected");
  }
  for (const auto& v : values_) {
    require_same_grid(v.grid(), values_.front().grid(), "ControlSignal");
    if (!v.all_finite()) throw DomainError("ControlSignal: non-finite control value");
    require_solenoidal(v, "ControlSignal");
  }
}

ControlSignal ControlSignal::zero(const Grid& grid, double tau, double T) {
  return ControlSignal({tau, T}, {VelocityField(grid)});
}

ControlSignal ControlSignal::constant(const VelocityField& value, double tau, double T) {
  return ControlSignal({tau, T}, {value});
}

std::size_t ControlSignal::interval_at(double t) const noexcept {
  // upper_bound over the interior breakpoints: t == b_i belongs to interval i.
  const auto first = breakpoints_.begin() + 1;
  const auto last = breakpoints_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, t) - first);
}

double ControlSignal::max_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, l2_norm(v));
  return m;
}

ControlSignal ControlSignal::restrict(double a, double b) const {
  if (!(a < b) || a < tau() || b > T()) throw DomainError("ControlSignal::restrict: bad sub-window");
  std::vector<double> bp{a};
  std::vector<VelocityField> vals;
  std::vector<std::vector<double>> md;
  const std::size_t i0 = interval_at(a);
  for (std::size_t i = i0; i < intervals(); ++i) {
    if (i > i0) {
      if (breakpoints_[i] >= b) break;
      bp.push_back(breakpoints_[i]);
    }
    vals.push_back(values_[i]);
    if (has_modes()) md.push_back(modes_[i]);
  }
  bp.push_back(b);
  return ControlSignal(std::move(bp), std::move(vals), std::move(md));
}

ControlSignal ControlSignal::concat(const ControlSignal& next) const {
  if (next.tau() != T()) throw DomainError("ControlSignal::concat: windows do not meet");
  std::vector<double> bp = breakpoints_;
  bp.insert(bp.end(), next.breakpoints_.begin() + 1, next.breakpoints_.end());
  std::vector<VelocityField> vals = values_;
  vals.insert(vals.end(), next.values_.begin(), next.values_.end());
  std::vector<std::vector<double>> md;
  if (has_modes() && next.has_modes()) {
    md = modes_;
    md.insert(md.end(), next.modes_.begin(), next.modes_.end());
  }
  return ControlSignal(std::move(bp), std::move(vals), std::move(md));
}

}  // namespace chns
