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
#include "rbtc/competitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbtc/optimize.hpp"
#include "rbtc/special_fn.hpp"

namespace rbtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<ModelSpec>& registry() {
  static const std::vector<ModelSpec> specs = {
      {ModelId::RBTC,
       "RBTC",
       {"omega", "kappa", "p"},
       {ParamDomain::Positive, ParamDomain::Positive, ParamDomain::UnitOpen}},
      {ModelId::C,
       "C",
       {"omega", "kappa"},
       {ParamDomain::Positive, ParamDomain::Positive}},
      {ModelId::TW,
       "TW",
       {"beta", "eta", "lambda"},
       {ParamDomain::Positive, ParamDomain::Positive,
        ParamDomain::SignedUnit}},
      {ModelId::TGR,
       "TGR",
       {"beta", "alpha", "lambda"},
       {ParamDomain::Positive, ParamDomain::Positive,
        ParamDomain::SignedUnit}},
      {ModelId::GR,
       "GR",
       {"beta", "alpha"},
       {ParamDomain::Positive, ParamDomain::Positive}},
      {ModelId::TRTW,
       "TRTW",
       {"varpi", "theta", "p"},
       {ParamDomain::Positive, ParamDomain::Positive, ParamDomain::UnitOpen}},
      {ModelId::W,
       "W",
       {"beta", "eta"},
       {ParamDomain::Positive, ParamDomain::Positive}},
      {ModelId::TEE,
       "TEE",
       {"beta", "alpha", "lambda"},
       {ParamDomain::Positive, ParamDomain::Positive,
        ParamDomain::SignedUnit}},
  };
  return specs;
}

void check_params(ModelId id, std::span<const double> params) {
  const ModelSpec& spec = model_spec(id);
  if (static_cast<int>(params.size()) != spec.param_count()) {
    throw std::invalid_argument("model " + spec.name + " expects " +
                                std::to_string(spec.param_count()) +
                                " parameters");
  }
  for (int i = 0; i < spec.param_count(); ++i) {
    const double v = params[i];
    bool ok = true;
    switch (spec.domains[i]) {
      case ParamDomain::Positive: ok = v > 0.0 && std::isfinite(v); break;
      case ParamDomain::UnitOpen: ok = v >= 0.0 && v <= 1.0; break;
      case ParamDomain::SignedUnit: ok = v >= -1.0 && v <= 1.0; break;
    }
    if (!ok) {
      throw std::domain_error("model " + spec.name + ": parameter " +
                              spec.param_names[i] + " out of domain");
    }
  }
}

double check_x(double x) {
  if (!(x > 0.0)) throw std::domain_error("model support is x > 0");
  return x;
}

// Quadratic transmutation (1 + lambda) G - lambda G^2 and its density
// factor 1 + lambda - 2 lambda G, applied to a base pair (G, log g).
double transmute_cdf(double g_cdf, double lambda) {
  return (1.0 + lambda) * g_cdf - lambda * g_cdf * g_cdf;
}

double transmute_log_pdf(double base_log_pdf, double g_cdf, double lambda) {
  const double factor = 1.0 + lambda - 2.0 * lambda * g_cdf;
  if (!(factor > 0.0)) return -kInf;
  return base_log_pdf + std::log(factor);
}

// Base cdfs.
double weibull_cdf(double beta, double eta, double x) {
  return -std::expm1(-std::pow(x / eta, beta));
}
double weibull_log_pdf(double beta, double eta, double x) {
  const double z = x / eta;
  return std::log(beta) - std::log(eta) + (beta - 1.0) * std::log(z) -
         std::pow(z, beta);
}
double gr_cdf(double beta, double alpha, double x) {
  const double y = alpha * x;
  return std::pow(-std::expm1(-y * y), beta);
}
double gr_log_pdf(double beta, double alpha, double x) {
  const double y2 = alpha * x * alpha * x;
  return std::log(2.0) + std::log(beta) + 2.0 * std::log(alpha) +
         std::log(x) - y2 + (beta - 1.0) * log1mexp(-y2);
}
double ee_cdf(double beta, double alpha, double x) {
  return std::pow(-std::expm1(-alpha * x), beta);
}
double ee_log_pdf(double beta, double alpha, double x) {
  return std::log(beta) + std::log(alpha) - alpha * x +
         (beta - 1.0) * log1mexp(-alpha * x);
}

}  // namespace

const ModelSpec& model_spec(ModelId id) {
  for (const ModelSpec& spec : registry()) {
    if (spec.id == id) return spec;
  }
  throw std::invalid_argument("unknown model id");
}

std::optional<ModelId> model_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "CHEN") upper = "C";
  if (upper == "WEIBULL") upper = "W";
  for (const ModelSpec& spec : registry()) {
    if (upper == spec.name) return spec.id;
  }
  return std::nullopt;
}

std::vector<ModelId> all_models() {
  std::vector<ModelId> out;
  for (const ModelSpec& spec : registry()) out.push_back(spec.id);
  return out;
}

double model_cdf(ModelId id, std::span<const double> params, double x) {
  check_params(id, params);
  check_x(x);
  switch (id) {
    case ModelId::RBTC:
      return cdf(RbtcParams(params[0], params[1], params[2]), x);
    case ModelId::C: {
      const double t = std::pow(x, params[1]);
      const double s = -params[0] * std::expm1(t);
      return -std::expm1(s);
    }
    case ModelId::TW:
      return transmute_cdf(weibull_cdf(params[0], params[1], x), params[2]);
    case ModelId::TGR:
      return transmute_cdf(gr_cdf(params[0], params[1], x), params[2]);
    case ModelId::GR:
      return gr_cdf(params[0], params[1], x);
    case ModelId::TRTW: {
      // G + p (1 - G) log(1 - G) with G = 1 - e^(-theta x^varpi), i.e.
      // survival e^-u (1 + p u) at u = theta x^varpi.
      const double u = params[1] * std::pow(x, params[0]);
      return -std::expm1(-u) - params[2] * u * std::exp(-u);
    }
    case ModelId::W:
      return weibull_cdf(params[0], params[1], x);
    case ModelId::TEE:
      return transmute_cdf(ee_cdf(params[0], params[1], x), params[2]);
  }
  throw std::invalid_argument("unknown model id");
}

double model_log_pdf(ModelId id, std::span<const double> params, double x) {
  check_params(id, params);
  check_x(x);
  switch (id) {
    case ModelId::RBTC:
      return log_pdf(RbtcParams(params[0], params[1], params[2]), x);
    case ModelId::C: {
      const double t = std::pow(x, params[1]);
      return std::log(params[0]) + std::log(params[1]) +
             (params[1] - 1.0) * std::log(x) + t - params[0] * std::expm1(t);
    }
    case ModelId::TW:
      return transmute_log_pdf(weibull_log_pdf(params[0], params[1], x),
                               weibull_cdf(params[0], params[1], x),
                               params[2]);
    case ModelId::TGR:
      return transmute_log_pdf(gr_log_pdf(params[0], params[1], x),
                               gr_cdf(params[0], params[1], x), params[2]);
    case ModelId::GR:
      return gr_log_pdf(params[0], params[1], x);
    case ModelId::TRTW: {
      const double u = params[1] * std::pow(x, params[0]);
      const double factor = 1.0 + params[2] * (u - 1.0);
      if (!(factor > 0.0)) return -kInf;
      return std::log(params[1]) + std::log(params[0]) +
             (params[0] - 1.0) * std::log(x) - u + std::log(factor);
    }
    case ModelId::W:
      return weibull_log_pdf(params[0], params[1], x);
    case ModelId::TEE:
      return transmute_log_pdf(ee_log_pdf(params[0], params[1], x),
                               ee_cdf(params[0], params[1], x), params[2]);
  }
  throw std::invalid_argument("unknown model id");
}

double model_pdf(ModelId id, std::span<const double> params, double x) {
  const double lp = model_log_pdf(id, params, x);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double model_log_likelihood(ModelId id, std::span<const double> params,
                            const DataSample& data) {
  double sum = 0.0;
  for (double x : data.values()) {
    const double lp = model_log_pdf(id, params, x);
    if (!std::isfinite(lp)) return -kInf;
    sum += lp;
  }
  return sum;
}

namespace {

double transform_to(ParamDomain domain, double raw) {
  switch (domain) {
    case ParamDomain::Positive: return std::log(raw);
    case ParamDomain::UnitOpen: return std::log(raw / (1.0 - raw));
    case ParamDomain::SignedUnit: return std::atanh(raw);
  }
  return raw;
}

double transform_from(ParamDomain domain, double z) {
  switch (domain) {
    case ParamDomain::Positive: return std::exp(z);
    case ParamDomain::UnitOpen: return 1.0 / (1.0 + std::exp(-z));
    case ParamDomain::SignedUnit: return std::tanh(z);
  }
  return z;
}

std::vector<double> base_start(ModelId id, const DataSample& data) {
  const auto& sorted = data.sorted();
  const std::size_t n = data.size();
  const double med = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double log2 = std::log(2.0);
  switch (id) {
    case ModelId::C:
      return {std::clamp(log2 / std::expm1(med), 1e-8, 1e8), 1.0};
    case ModelId::W: return {1.0, med / log2};
    case ModelId::GR: return {1.0, std::sqrt(log2) / med};
    case ModelId::TEE: return {1.0, log2 / med, 0.0};
    case ModelId::TW: return {1.0, med / log2, 0.0};
    case ModelId::TGR: return {1.0, std::sqrt(log2) / med, 0.0};
    case ModelId::TRTW: return {1.0, log2 / med, 0.5};
    default: break;
  }
  throw std::invalid_argument("base_start: unsupported model");
}

// Deterministic perturbation design mirroring the three-parameter fit:
// factors of two on the positive parameters, the bounded parameter pushed
// to either side of its start.
std::vector<std::vector<double>> start_design(ModelId id,
                                              const DataSample& data,
                                              int restarts) {
  const ModelSpec& spec = model_spec(id);
  const std::vector<double> base = base_start(id, data);
  const bool has_unit = spec.param_count() == 3;
  auto with = [&](double f0, double f1, int unit_side) {
    std::vector<double> s = base;
    s[0] *= f0;
    s[1] *= f1;
    if (has_unit && unit_side != 0) {
      s[2] = spec.domains[2] == ParamDomain::SignedUnit
                 ? (unit_side > 0 ? 0.5 : -0.5)
                 : (unit_side > 0 ? 0.75 : 0.25);
    }
    return s;
  };
  const std::vector<std::vector<double>> design = {
      with(1, 1, 0),  with(2, 1, 1),    with(0.5, 1, -1),
      with(1, 2, 1),  with(1, 0.5, -1), with(2, 0.5, 0),
      with(0.5, 2, 0), with(2, 2, 1),   with(0.5, 0.5, -1)};
  const int count = std::clamp(restarts, 0, 8) + 1;
  return {design.begin(), design.begin() + count};
}

}  // namespace

ModelFit fit_model(ModelId id, const DataSample& data,
                   const FitOptions& options) {
  if (id == ModelId::RBTC) {
    const FitResult r = fit(EstimatorKind::MLE, data, options);
    ModelFit out;
    out.model = id;
    out.params = {r.params.omega, r.params.kappa, r.params.p};
    out.neg2_loglik = r.neg2_loglik;
    if (r.std_errors) {
      out.std_errors = std::vector<double>(r.std_errors->begin(),
                                           r.std_errors->end());
    }
    out.converged = r.converged;
    out.restarts_used = r.restarts_used;
    return out;
  }

  if (data.size() < 4) {
    throw std::invalid_argument("fit_model: need at least 4 observations");
  }
  const ModelSpec& spec = model_spec(id);
  const int dim = spec.param_count();

  auto nll = [&](const std::vector<double>& z) {
    std::vector<double> raw(dim);
    for (int i = 0; i < dim; ++i) {
      raw[i] = transform_from(spec.domains[i], z[i]);
    }
    const double ll = model_log_likelihood(id, raw, data);
    return std::isfinite(ll) ? -ll : kInf;
  };

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;

  const auto starts = start_design(id, data, options.restarts);
  NelderMeadResult best;
  best.fx = kInf;
  bool have_best = false;
  for (const auto& start : starts) {
    std::vector<double> z(dim);
    for (int i = 0; i < dim; ++i) {
      z[i] = transform_to(spec.domains[i], start[i]);
    }
    const NelderMeadResult run = nelder_mead(nll, z, nm);
    if (!have_best || run.fx < best.fx) {
      best = run;
      have_best = true;
    }
  }

  ModelFit out;
  out.model = id;
  out.params.resize(dim);
  for (int i = 0; i < dim; ++i) {
    out.params[i] = transform_from(spec.domains[i], best.x[i]);
  }
  out.neg2_loglik = 2.0 * best.fx;
  out.converged = best.converged && std::isfinite(best.fx);
  out.restarts_used = static_cast<int>(starts.size()) - 1;

  // Observed-information standard errors on the raw scale, omitted when the
  // Hessian is not positive definite (e.g. a transmutation weight pinned at
  // an endpoint).
  auto raw_nll = [&](const std::vector<double>& raw) {
    for (int i = 0; i < dim; ++i) {
      switch (spec.domains[i]) {
        case ParamDomain::Positive:
          if (!(raw[i] > 0.0)) return kInf;
          break;
        case ParamDomain::UnitOpen:
          if (!(raw[i] > 0.0 && raw[i] < 1.0)) return kInf;
          break;
        case ParamDomain::SignedUnit:
          if (!(raw[i] > -1.0 && raw[i] < 1.0)) return kInf;
          break;
      }
    }
    const double ll = model_log_likelihood(id, raw, data);
    return std::isfinite(ll) ? -ll : kInf;
  };
  if (out.converged) {
    const std::vector<double> hess = fd_hessian(raw_nll, out.params);
    bool finite = true;
    for (double v : hess) finite = finite && std::isfinite(v);
    if (finite) {
      const std::vector<double> eig = sym_eigenvalues(hess, dim);
      if (eig.front() > 0.0) {
        const std::vector<double> inv = invert_matrix(hess, dim);
        std::vector<double> se(dim);
        for (int i = 0; i < dim; ++i) se[i] = std::sqrt(inv[i * dim + i]);
        out.std_errors = se;
      }
    }
  }
  return out;
}

}  // namespace rbtc
