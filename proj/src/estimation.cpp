/*
 * Copyright 2026 the rbtc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rbtc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rbtc/optimize.hpp"

namespace rbtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpacingFloor = 1e-300;

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

double neg_loglik(const RbtcParams& params, const DataSample& data) {
  double sum = 0.0;
  for (double x : data.values()) {
    const double lp = log_pdf(params, x);
    if (!std::isfinite(lp)) return kInf;
    sum -= lp;
  }
  return sum;
}

std::vector<double> cdf_at_sorted(const RbtcParams& params,
                                  const DataSample& data) {
  std::vector<double> f(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    f[i] = cdf(params, data.sorted()[i]);
  }
  return f;
}

double lse_objective(const RbtcParams& params, const DataSample& data,
                     bool weighted) {
  const auto f = cdf_at_sorted(params, data);
  const double n = static_cast<double>(data.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    const double resid = f[i] - rank / (n + 1.0);
    double w = 1.0;
    if (weighted) {
      w = (n + 1.0) * (n + 1.0) * (n + 2.0) / (rank * (n - rank + 1.0));
    }
    sum += w * resid * resid;
  }
  return finite_or_inf(sum);
}

double cvme_objective(const RbtcParams& params, const DataSample& data) {
  const auto f = cdf_at_sorted(params, data);
  const double n = static_cast<double>(data.size());
  double sum = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    const double resid = f[i] - (2.0 * rank - 1.0) / (2.0 * n);
    sum += resid * resid;
  }
  return finite_or_inf(sum);
}

double ade_objective(const RbtcParams& params, const DataSample& data) {
  const std::size_t n = data.size();
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lf = log_cdf(params, data.sorted()[i]);
    const double ls = log_survival(params, data.sorted()[n - 1 - i]);
    if (!std::isfinite(lf) || !std::isfinite(ls)) return kInf;
    sum += (2.0 * static_cast<double>(i + 1) - 1.0) * (lf + ls);
  }
  return finite_or_inf(-dn - sum / dn);
}

double rtade_objective(const RbtcParams& params, const DataSample& data) {
  const std::size_t n = data.size();
  const double dn = static_cast<double>(n);
  double sum_f = 0.0;
  double sum_tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_f += cdf(params, data.sorted()[i]);
    // log(1 - F) at the reversed order statistic x_(n+1-i).
    const double ls = log_survival(params, data.sorted()[n - 1 - i]);
    if (!std::isfinite(ls)) return kInf;
    sum_tail += (2.0 * static_cast<double>(i + 1) - 1.0) * ls;
  }
  return finite_or_inf(dn / 2.0 - 2.0 * sum_f - sum_tail / dn);
}

double mpse_objective(const RbtcParams& params, const DataSample& data) {
  const SpacingSet sp = spacings(params, data);
  double sum = 0.0;
  for (double d : sp.d) sum += std::log(d);
  return finite_or_inf(-sum / static_cast<double>(sp.d.size()));
}

double msade_objective(const RbtcParams& params, const DataSample& data) {
  const SpacingSet sp = spacings(params, data);
  const double target = 1.0 / static_cast<double>(sp.d.size());
  double sum = 0.0;
  for (double d : sp.d) sum += std::fabs(d - target);
  return finite_or_inf(sum);
}

double msalde_objective(const RbtcParams& params, const DataSample& data,
                        bool literal) {
  const SpacingSet sp = spacings(params, data);
  const double log_target =
      -std::log(static_cast<double>(sp.d.size()));
  double sum = 0.0;
  for (double d : sp.d) {
    sum += literal ? std::fabs(d - log_target)
                   : std::fabs(std::log(d) - log_target);
  }
  return finite_or_inf(sum);
}

// (log omega, log kappa, logit p) <-> raw.
std::vector<double> to_transformed(const RbtcParams& params) {
  return {std::log(params.omega), std::log(params.kappa),
          std::log(params.p / (1.0 - params.p))};
}

RbtcParams from_transformed(const std::vector<double>& z) {
  const double omega = std::exp(z[0]);
  const double kappa = std::exp(z[1]);
  const double p = 1.0 / (1.0 + std::exp(-z[2]));
  return RbtcParams(omega, kappa, p);
}

}  // namespace

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::MLE: return "mle";
    case EstimatorKind::LSE: return "lse";
    case EstimatorKind::WLSE: return "wlse";
    case EstimatorKind::ADE: return "ade";
    case EstimatorKind::CvME: return "cvme";
    case EstimatorKind::MPSE: return "mpse";
    case EstimatorKind::RTADE: return "rtade";
    case EstimatorKind::MSADE: return "msade";
    case EstimatorKind::MSALDE: return "msalde";
  }
  return "?";
}

std::optional<EstimatorKind> estimator_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (EstimatorKind kind : all_estimators()) {
    if (lower == estimator_name(kind)) return kind;
  }
  return std::nullopt;
}

std::vector<EstimatorKind> all_estimators() {
  return {EstimatorKind::MLE,   EstimatorKind::LSE,   EstimatorKind::WLSE,
          EstimatorKind::ADE,   EstimatorKind::CvME,  EstimatorKind::MPSE,
          EstimatorKind::RTADE, EstimatorKind::MSADE, EstimatorKind::MSALDE};
}

SpacingSet spacings(const RbtcParams& params, const DataSample& data) {
  const std::size_t n = data.size();
  SpacingSet out;
  out.d.resize(n + 1);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = cdf(params, data.sorted()[i]);
    out.d[i] = std::max(fi - prev, kSpacingFloor);
    prev = fi;
  }
  out.d[n] = std::max(1.0 - prev, kSpacingFloor);
  return out;
}

double objective(EstimatorKind kind, const RbtcParams& params,
                 const DataSample& data, const FitOptions& options) {
  switch (kind) {
    case EstimatorKind::MLE: return neg_loglik(params, data);
    case EstimatorKind::LSE: return lse_objective(params, data, false);
    case EstimatorKind::WLSE: return lse_objective(params, data, true);
    case EstimatorKind::ADE: return ade_objective(params, data);
    case EstimatorKind::CvME: return cvme_objective(params, data);
    case EstimatorKind::MPSE: return mpse_objective(params, data);
    case EstimatorKind::RTADE: return rtade_objective(params, data);
    case EstimatorKind::MSADE: return msade_objective(params, data);
    case EstimatorKind::MSALDE:
      return msalde_objective(params, data, options.msalde_literal);
  }
  return kInf;
}

namespace {

void check_fit_inputs(const DataSample& data, const FitOptions& options) {
  if (data.size() < 4) {
    throw std::invalid_argument("fit: need at least 4 observations");
  }
  if (data.sorted().front() == data.sorted().back()) {
    throw std::invalid_argument(
        "fit: degenerate sample (all values identical)");
  }
  if (options.restarts < 0 || options.restarts > 8) {
    throw std::invalid_argument("fit: restarts must lie in [0, 8]");
  }
}

// Factor-of-two perturbation design around a center point; the first entry
// is the center itself.
std::array<RbtcParams, 9> start_design(const RbtcParams& c) {
  const double o = c.omega;
  const double k = c.kappa;
  return {{{o, k, c.p},
           {o, k, 0.25},
           {o, k, 0.75},
           {2.0 * o, k, 0.25},
           {0.5 * o, k, 0.75},
           {o, 2.0 * k, 0.25},
           {o, 0.5 * k, 0.75},
           {2.0 * o, 0.5 * k, 0.5},
           {0.5 * o, 2.0 * k, 0.5}}};
}

FitResult run_multistart(EstimatorKind kind, const DataSample& data,
                         const RbtcParams& center,
                         const FitOptions& options) {
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;

  auto full_obj = [&](const std::vector<double>& z) {
    return objective(kind, from_transformed(z), data, options);
  };

  const std::array<RbtcParams, 9> starts = start_design(center);
  const int n_starts = options.restarts + 1;
  NelderMeadResult best;
  best.fx = kInf;
  bool have_best = false;
  for (int si = 0; si < n_starts; ++si) {
    const NelderMeadResult run =
        nelder_mead(full_obj, to_transformed(starts[si]), nm);
    if (!have_best || run.fx < best.fx) {
      best = run;
      have_best = true;
    }
  }

  FitResult out{kind,          from_transformed(best.x),
                best.fx,       0.0,
                std::nullopt,  best.converged && std::isfinite(best.fx),
                best.iterations, n_starts - 1};
  out.neg2_loglik = 2.0 * neg_loglik(out.params, data);
  if (kind == EstimatorKind::MLE && out.converged) {
    try {
      out.std_errors = standard_errors(data, out.params);
    } catch (const std::runtime_error&) {
      out.std_errors = std::nullopt;
    }
  }
  return out;
}

}  // namespace

FitResult fit(EstimatorKind kind, const DataSample& data,
              const FitOptions& options) {
  check_fit_inputs(data, options);

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;

  // Anchor: fit (omega, kappa) under the same criterion with p pinned at
  // 1/2, started from a median match of the Chen core
  // (omega0 = log 2 / (e^median - 1) at kappa0 = 1).
  const auto& sorted = data.sorted();
  const std::size_t n = data.size();
  const double med = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double omega0 =
      std::clamp(std::log(2.0) / std::expm1(med), 1e-8, 1e8);
  auto anchor_obj = [&](const std::vector<double>& z) {
    const RbtcParams trial(std::exp(z[0]), std::exp(z[1]), 0.5);
    return objective(kind, trial, data, options);
  };
  const NelderMeadResult anchor =
      nelder_mead(anchor_obj, {std::log(omega0), 0.0}, nm);

  const RbtcParams center(std::exp(anchor.x[0]), std::exp(anchor.x[1]), 0.5);
  return run_multistart(kind, data, center, options);
}

FitResult fit_from(EstimatorKind kind, const DataSample& data,
                   const RbtcParams& start, const FitOptions& options) {
  check_fit_inputs(data, options);
  RbtcParams center = start;
  // The design explores p through logit coordinates; nudge an endpoint
  // start strictly inside.
  if (center.p <= 0.0 || center.p >= 1.0) {
    center = RbtcParams(center.omega, center.kappa,
                        std::clamp(center.p, 1e-6, 1.0 - 1e-6));
  }
  return run_multistart(kind, data, center, options);
}

std::array<double, 3> standard_errors(const DataSample& data,
                                      const RbtcParams& estimate) {
  auto nll = [&](const std::vector<double>& theta) {
    if (!(theta[0] > 0.0) || !(theta[1] > 0.0) || !(theta[2] > 0.0) ||
        !(theta[2] < 1.0)) {
      return kInf;
    }
    return neg_loglik(RbtcParams(theta[0], theta[1], theta[2]), data);
  };
  const std::vector<double> theta{estimate.omega, estimate.kappa, estimate.p};
  const std::vector<double> hess = fd_hessian(nll, theta);
  for (double v : hess) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(
          "standard_errors: non-finite observed information (estimate too "
          "close to the boundary)");
    }
  }
  const std::vector<double> eig = sym_eigenvalues(hess, 3);
  if (eig.front() <= 0.0) {
    throw std::runtime_error(
        "standard_errors: observed information not positive definite "
        "(smallest eigenvalue " +
        std::to_string(eig.front()) + ")");
  }
  const std::vector<double> inv = invert_matrix(hess, 3);
  return {std::sqrt(inv[0]), std::sqrt(inv[4]), std::sqrt(inv[8])};
}

}  // namespace rbtc
