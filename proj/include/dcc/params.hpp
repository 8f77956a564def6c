#ifndef DCC_PARAMS_HPP
#define DCC_PARAMS_HPP

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace dcc {

// Description of a parameter space: per-coordinate names and open-interval
// bounds. Positivity is expressed as (0, inf), stationarity as (-1, 1).
class ParamSpace {
 public:
  struct Coord {
    std::string name;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
  };

  ParamSpace() = default;
  explicit ParamSpace(std::vector<Coord> coords) : coords_(std::move(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  const Coord& coord(int i) const { return coords_[i]; }
  const std::vector<Coord>& coords() const { return coords_; }

  bool contains(const std::vector<double>& values) const;

  // Bijection between the constrained space and R^dim: identity for
  // unbounded coordinates, log for half-open, scaled logit for bounded.
  std::vector<double> to_unconstrained(const std::vector<double>& theta) const;
  std::vector<double> from_unconstrained(const std::vector<double>& u) const;
  // log |d theta / d u| at the unconstrained point u; added to flat-weight
  // targets so sampling in u leaves the constrained-space law unchanged.
  double log_jacobian(const std::vector<double>& u) const;

 private:
  std::vector<Coord> coords_;
};

// A parameter vector validated against its space: every coordinate lies
// strictly inside its declared bounds.
class ParamVector {
 public:
  ParamVector() = default;
  ParamVector(std::vector<double> values,
              std::shared_ptr<const ParamSpace> space);

  int dim() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const ParamSpace& space() const { return *space_; }
  std::shared_ptr<const ParamSpace> space_ptr() const { return space_; }

 private:
  std::vector<double> values_;
  std::shared_ptr<const ParamSpace> space_;
};

}  // namespace dcc

#endif  // DCC_PARAMS_HPP
