// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_COMPETITORS_HPP
#define RBTC_COMPETITORS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbtc/data_sample.hpp"
#include "rbtc/estimation.hpp"

namespace rbtc {

// Lifetime models fitted side by side in the real-data comparisons.
enum class ModelId {
  RBTC,  // record-based transmuted Chen (omega, kappa, p)
  C,     // Chen (omega, kappa)
  TW,    // transmuted Weibull (beta, eta, lambda)
  TGR,   // transmuted generalized Rayleigh (beta, alpha, lambda)
  GR,    // generalized Rayleigh (beta, alpha)
  TRTW,  // record-based transmuted Weibull (varpi, theta, p)
  W,     // Weibull (beta = shape, eta = scale)
  TEE,   // transmuted exponentiated exponential (beta, alpha, lambda)
};

// Per-parameter feasible domain, used to pick the optimizer transform.
enum class ParamDomain {
  Positive,    // (0, inf), optimized on a log scale
  UnitOpen,    // (0, 1), optimized on a logit scale
  SignedUnit,  // (-1, 1), optimized through atanh
};

struct ModelSpec {
  ModelId id;
  std::string name;  // short table label, e.g. "TGR"
  std::vector<std::string> param_names;
  std::vector<ParamDomain> domains;
  int param_count() const { return static_cast<int>(domains.size()); }
};

const ModelSpec& model_spec(ModelId id);
std::optional<ModelId> model_from_name(std::string_view name);
std::vector<ModelId> all_models();

// Pointwise evaluators.  `params` must match model_spec(id).param_count();
// domain violations throw std::domain_error.
double model_cdf(ModelId id, std::span<const double> params, double x);
double model_pdf(ModelId id, std::span<const double> params, double x);
double model_log_pdf(ModelId id, std::span<const double> params, double x);

double model_log_likelihood(ModelId id, std::span<const double> params,
                            const DataSample& data);

struct ModelFit {
  ModelId model;
  std::vector<double> params;
  double neg2_loglik = 0.0;
  std::optional<std::vector<double>> std_errors;
  bool converged = false;
  int restarts_used = 0;
};

// Maximum likelihood fit of any model in the registry; ModelId::RBTC
// delegates to fit(EstimatorKind::MLE, ...) so both entry points agree.
// Standard errors come from the observed information when it is positive
// definite and are omitted otherwise.
ModelFit fit_model(ModelId id, const DataSample& data,
                   const FitOptions& options = {});

}  // namespace rbtc

#endif  // RBTC_COMPETITORS_HPP
