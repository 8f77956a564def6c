#include "dcc/params.hpp"

#include <cmath>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

bool unbounded_below(double lo) { return std::isinf(lo) && lo < 0; }
bool unbounded_above(double hi) { return std::isinf(hi) && hi > 0; }

}  // namespace

bool ParamSpace::contains(const std::vector<double>& values) const {
  if (values.size() != coords_.size()) return false;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    double v = values[i];
    if (!std::isfinite(v)) return false;
    if (!(v > coords_[i].lower && v < coords_[i].upper)) return false;
  }
  return true;
}

std::vector<double> ParamSpace::to_unconstrained(
    const std::vector<double>& theta) const {
  std::vector<double> u(theta.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const auto& c = coords_[i];
    double v = theta[i];
    if (unbounded_below(c.lower) && unbounded_above(c.upper)) {
      u[i] = v;
    } else if (unbounded_above(c.upper)) {
      u[i] = std::log(v - c.lower);
    } else if (unbounded_below(c.lower)) {
      u[i] = std::log(c.upper - v);
    } else {
      // scaled logit on (lower, upper)
      double t = (v - c.lower) / (c.upper - c.lower);
      u[i] = std::log(t / (1.0 - t));
    }
  }
  return u;
}

std::vector<double> ParamSpace::from_unconstrained(
    const std::vector<double>& u) const {
  std::vector<double> theta(u.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const auto& c = coords_[i];
    double x = u[i];
    if (unbounded_below(c.lower) && unbounded_above(c.upper)) {
      theta[i] = x;
    } else if (unbounded_above(c.upper)) {
      theta[i] = c.lower + std::exp(x);
    } else if (unbounded_below(c.lower)) {
      theta[i] = c.upper - std::exp(x);
    } else {
      double s = 1.0 / (1.0 + std::exp(-x));
      theta[i] = c.lower + (c.upper - c.lower) * s;
    }
  }
  return theta;
}

double ParamSpace::log_jacobian(const std::vector<double>& u) const {
  double lj = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const auto& c = coords_[i];
    double x = u[i];
    if (unbounded_below(c.lower) && unbounded_above(c.upper)) {
      // identity, zero contribution
    } else if (unbounded_above(c.upper) || unbounded_below(c.lower)) {
      lj += x;  // |d theta / d u| = exp(u)
    } else {
      // d theta/du = (upper-lower) s (1-s)
      double s = 1.0 / (1.0 + std::exp(-x));
      lj += std::log(c.upper - c.lower) + std::log(s) + std::log1p(-s);
    }
  }
  return lj;
}

ParamVector::ParamVector(std::vector<double> values,
                         std::shared_ptr<const ParamSpace> space)
    : values_(std::move(values)), space_(std::move(space)) {
  if (!space_) throw invalid_input("ParamVector requires a parameter space");
  if (!space_->contains(values_)) {
    std::string msg = "parameter outside its declared space:";
    for (std::size_t i = 0; i < values_.size(); ++i) {
      msg += ' ' + space_->coord(static_cast<int>(i)).name + '=' +
             std::to_string(values_[i]);
    }
    throw invalid_input(msg);
  }
}

}  // namespace dcc
