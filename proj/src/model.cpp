#include "dcc/model.hpp"

#include <numeric>

#include "dcc/errors.hpp"

namespace dcc {

double ModelClass::loglik(const ParamVector& theta, const Dataset& data,
                          Rng* rng) const {
  auto z = incremental_logliks(theta, data, rng);
  return std::accumulate(z.begin(), z.end(), 0.0);
}

ParamVector ModelClass::make_params(std::vector<double> values) const {
  return ParamVector(std::move(values), param_space());
}

void DccConfig::validate() const {
  if (n_theta < 1) throw invalid_input("DccConfig: N must be >= 1");
  if (m_test < 2) throw invalid_input("DccConfig: M must be >= 2");
  if (m_cal < 2) throw invalid_input("DccConfig: M' must be >= 2");
  if (particles < 1) throw invalid_input("DccConfig: particle count must be >= 1");
}

}  // namespace dcc
