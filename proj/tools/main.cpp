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
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbtc/competitors.hpp"
#include "rbtc/datasets.hpp"
#include "rbtc/estimation.hpp"
#include "rbtc/gof.hpp"
#include "rbtc/sampling.hpp"
#include "rbtc/simulation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoConverge = 2;

std::string fmt(double v, bool full) {
  char buf[40];
  std::snprintf(buf, sizeof buf, full ? "%.17g" : "%.6g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write to " + out_path);
  out << text;
}

rbtc::SamplerKind sampler_from_name(const std::string& name) {
  if (name == "ar") return rbtc::SamplerKind::AR;
  if (name == "inverse") return rbtc::SamplerKind::Inverse;
  if (name == "mixture") return rbtc::SamplerKind::RecordMixture;
  throw CLI::ValidationError("--sampler",
                             "must be one of ar, inverse, mixture");
}

// One fitted model with its goodness-of-fit summary.
struct FittedRow {
  std::string model;
  std::vector<std::string> param_names;
  std::vector<double> params;
  std::optional<std::vector<double>> std_errors;
  double neg2_loglik = 0.0;
  rbtc::GofReport gof;
  bool converged = false;
};

FittedRow row_from_model_fit(const rbtc::ModelFit& mf,
                             const rbtc::DataSample& data) {
  const rbtc::ModelSpec& spec = rbtc::model_spec(mf.model);
  FittedRow row;
  row.model = spec.name;
  row.param_names = spec.param_names;
  row.params = mf.params;
  row.std_errors = mf.std_errors;
  row.neg2_loglik = mf.neg2_loglik;
  row.converged = mf.converged;
  const std::vector<double> params = mf.params;
  const rbtc::ModelId id = mf.model;
  row.gof = rbtc::gof_report(
      [id, params](double x) { return rbtc::model_cdf(id, params, x); },
      data, mf.neg2_loglik);
  return row;
}

FittedRow row_from_fit_result(const rbtc::FitResult& fr,
                              const rbtc::DataSample& data) {
  FittedRow row;
  row.model = "RBTC";
  row.param_names = {"omega", "kappa", "p"};
  row.params = {fr.params.omega, fr.params.kappa, fr.params.p};
  if (fr.std_errors) {
    row.std_errors = std::vector<double>(fr.std_errors->begin(),
                                         fr.std_errors->end());
  }
  row.neg2_loglik = fr.neg2_loglik;
  row.converged = fr.converged;
  const rbtc::RbtcParams params = fr.params;
  row.gof = rbtc::gof_report(
      [params](double x) { return rbtc::cdf(params, x); }, data,
      fr.neg2_loglik);
  return row;
}

std::string render_rows_human(const std::vector<FittedRow>& rows) {
  std::ostringstream out;
  for (const FittedRow& row : rows) {
    out << row.model;
    if (!row.converged) out << "  [not converged]";
    out << "\n";
    for (std::size_t i = 0; i < row.params.size(); ++i) {
      out << "  " << row.param_names[i] << " = " << fmt(row.params[i], false);
      if (row.std_errors) {
        out << "  (se " << fmt((*row.std_errors)[i], false) << ")";
      }
      out << "\n";
    }
    out << "  -2logL = " << fmt(row.neg2_loglik, false) << "\n";
    out << "  KS = " << fmt(row.gof.ks, false)
        << "  (p = " << fmt(row.gof.p_ks, false) << ")\n";
    out << "  AD = " << fmt(row.gof.ad, false)
        << "  (p = " << fmt(row.gof.p_ad, false) << ")\n";
    out << "  CvM = " << fmt(row.gof.cvm, false)
        << "  (p = " << fmt(row.gof.p_cvm, false) << ")\n";
  }
  return out.str();
}

std::string render_rows_table(const std::vector<FittedRow>& rows,
                              bool markdown) {
  std::ostringstream out;
  const char* sep = markdown ? " | " : ",";
  if (markdown) out << "| ";
  out << "model" << sep << "params" << sep << "std_errors" << sep
      << "neg2_loglik" << sep << "ks" << sep << "p_ks" << sep << "ad" << sep
      << "p_ad" << sep << "cvm" << sep << "p_cvm" << sep << "converged";
  if (markdown) out << " |";
  out << "\n";
  if (markdown) {
    out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  }
  const bool full = !markdown;
  for (const FittedRow& row : rows) {
    std::string params;
    std::string ses;
    for (std::size_t i = 0; i < row.params.size(); ++i) {
      if (i) {
        params += ';';
        ses += ';';
      }
      params += row.param_names[i] + "=" + fmt(row.params[i], full);
      ses += row.std_errors ? fmt((*row.std_errors)[i], full)
                            : std::string("-");
    }
    if (markdown) out << "| ";
    out << row.model << sep << params << sep << ses << sep
        << fmt(row.neg2_loglik, full) << sep << fmt(row.gof.ks, full) << sep
        << fmt(row.gof.p_ks, full) << sep << fmt(row.gof.ad, full) << sep
        << fmt(row.gof.p_ad, full) << sep << fmt(row.gof.cvm, full) << sep
        << fmt(row.gof.p_cvm, full) << sep
        << (row.converged ? "yes" : "no");
    if (markdown) out << " |";
    out << "\n";
  }
  return out.str();
}

json row_to_json(const FittedRow& row) {
  json params = json::object();
  for (std::size_t i = 0; i < row.params.size(); ++i) {
    params[row.param_names[i]] = row.params[i];
  }
  json j{{"model", row.model},
         {"params", params},
         {"neg2_loglik", row.neg2_loglik},
         {"converged", row.converged},
         {"gof",
          {{"ks", row.gof.ks},
           {"p_ks", row.gof.p_ks},
           {"ad", row.gof.ad},
           {"p_ad", row.gof.p_ad},
           {"cvm", row.gof.cvm},
           {"p_cvm", row.gof.p_cvm}}}};
  if (row.std_errors) {
    json ses = json::object();
    for (std::size_t i = 0; i < row.params.size(); ++i) {
      ses[row.param_names[i]] = (*row.std_errors)[i];
    }
    j["std_errors"] = ses;
  }
  return j;
}

std::string render_rows(const std::vector<FittedRow>& rows,
                        const std::string& format) {
  if (format == "human") return render_rows_human(rows);
  if (format == "csv") return render_rows_table(rows, false);
  if (format == "markdown") return render_rows_table(rows, true);
  if (format == "json") {
    // Single-row commands (fit, gof) emit one object; compare emits the
    // ranked array.
    if (rows.size() == 1) return row_to_json(rows[0]).dump(2) + "\n";
    json arr = json::array();
    for (const FittedRow& row : rows) arr.push_back(row_to_json(row));
    return arr.dump(2) + "\n";
  }
  throw CLI::ValidationError("--format",
                             "must be human, csv, markdown or json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Record-based transmuted Chen lifetime toolkit: fitting, model "
      "comparison, sampling, goodness of fit and simulation studies"};
  app.require_subcommand(1);

  // ---- fit ----------------------------------------------------------
  std::string fit_data;
  std::string fit_model_name = "rbtc";
  std::string fit_estimator = "mle";
  std::string fit_format = "human";
  std::string fit_out;
  bool fit_msalde_literal = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one model to a dataset");
  fit_cmd->add_option("--data", fit_data,
                      "Data source: path or builtin:failure_time / "
                      "builtin:iron_sheet")
      ->required();
  fit_cmd->add_option("--model", fit_model_name, "Model to fit");
  fit_cmd->add_option("--estimator", fit_estimator,
                      "Estimation criterion (RBTC model only)");
  fit_cmd->add_option("--format", fit_format, "human, csv, markdown, json");
  fit_cmd->add_option("--out", fit_out, "Write output to file");
  fit_cmd->add_flag("--msalde-literal", fit_msalde_literal,
                    "Evaluate the published minimum-spacing absolute-log "
                    "criterion literally (constant in the parameters; kept "
                    "for auditability)");

  // ---- compare ------------------------------------------------------
  std::string cmp_data;
  std::string cmp_format = "human";
  std::string cmp_out;
  auto* cmp_cmd = app.add_subcommand(
      "compare", "Fit every model in the registry by maximum likelihood "
                 "and rank by the Kolmogorov-Smirnov statistic");
  cmp_cmd->add_option("--data", cmp_data, "Data source")->required();
  cmp_cmd->add_option("--format", cmp_format, "human, csv, markdown, json");
  cmp_cmd->add_option("--out", cmp_out, "Write output to file");

  // ---- sample -------------------------------------------------------
  double smp_omega = 1.0;
  double smp_kappa = 1.0;
  double smp_p = 0.5;
  std::size_t smp_n = 10;
  std::uint64_t smp_seed = 42;
  std::string smp_sampler = "mixture";
  std::string smp_out;
  auto* smp_cmd =
      app.add_subcommand("sample", "Draw pseudo-random variates");
  smp_cmd->add_option("--omega", smp_omega, "omega > 0")->required();
  smp_cmd->add_option("--kappa", smp_kappa, "kappa > 0")->required();
  smp_cmd->add_option("--p", smp_p, "mixture weight in [0, 1]")->required();
  smp_cmd->add_option("--n", smp_n, "number of draws")->required();
  smp_cmd->add_option("--seed", smp_seed, "stream seed");
  smp_cmd->add_option("--sampler", smp_sampler, "ar, inverse or mixture");
  smp_cmd->add_option("--out", smp_out, "Write draws to file");

  // ---- simulate -----------------------------------------------------
  std::string sim_config_path;
  std::string sim_out;
  std::string sim_format = "markdown";
  int sim_workers = 0;
  bool sim_workers_set = false;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Run a bias/MSE/MRE study from a config file");
  sim_cmd->add_option("--config", sim_config_path, "Study config file")
      ->required();
  sim_cmd->add_option("--out", sim_out,
                      "Write the long-format study CSV to this path");
  sim_cmd->add_option("--format", sim_format,
                      "Summary printed to stdout: csv or markdown");
  sim_cmd
      ->add_option("--workers", sim_workers,
                   "Worker threads (0 = hardware)")
      ->envname("RBTC_WORKERS")
      ->each([&](const std::string&) { sim_workers_set = true; });

  // ---- gof ----------------------------------------------------------
  std::string gof_data;
  std::string gof_model_name = "rbtc";
  std::string gof_estimator = "mle";
  std::string gof_params_str;
  std::string gof_format = "human";
  std::string gof_out;
  auto* gof_cmd = app.add_subcommand(
      "gof", "Goodness-of-fit statistics, fitting first unless --params "
             "pins the parameter point");
  gof_cmd->add_option("--data", gof_data, "Data source")->required();
  gof_cmd->add_option("--model", gof_model_name, "Model");
  gof_cmd->add_option("--estimator", gof_estimator,
                      "Estimation criterion (RBTC model only)");
  gof_cmd->add_option("--params", gof_params_str,
                      "Comma-separated parameter values; skips fitting");
  gof_cmd->add_option("--format", gof_format, "human, csv, markdown, json");
  gof_cmd->add_option("--out", gof_out, "Write output to file");

  // ---- table --------------------------------------------------------
  double tbl_omega = 1.0;
  double tbl_kappa = 1.0;
  double tbl_p = 0.5;
  double tbl_min = 0.0;
  double tbl_max = 0.0;
  int tbl_points = 21;
  std::string tbl_quantiles;
  std::string tbl_format = "human";
  std::string tbl_out;
  auto* tbl_cmd = app.add_subcommand(
      "table", "Tabulate cdf/pdf/hazard on an x grid, or quantiles");
  tbl_cmd->add_option("--omega", tbl_omega, "omega > 0")->required();
  tbl_cmd->add_option("--kappa", tbl_kappa, "kappa > 0")->required();
  tbl_cmd->add_option("--p", tbl_p, "mixture weight in [0, 1]")->required();
  tbl_cmd->add_option("--min", tbl_min, "grid start (default 1% quantile)");
  tbl_cmd->add_option("--max", tbl_max, "grid end (default 99% quantile)");
  tbl_cmd->add_option("--points", tbl_points, "grid size");
  tbl_cmd->add_option("--quantiles", tbl_quantiles,
                      "comma-separated u values: print quantiles instead");
  tbl_cmd->add_option("--format", tbl_format, "human, csv, markdown");
  tbl_cmd->add_option("--out", tbl_out, "Write output to file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (fit_cmd->parsed()) {
      const rbtc::DataSample data = rbtc::load_data(fit_data);
      const auto model = rbtc::model_from_name(fit_model_name);
      if (!model) throw std::invalid_argument("unknown model: " +
                                              fit_model_name);
      FittedRow row;
      if (*model == rbtc::ModelId::RBTC) {
        const auto kind = rbtc::estimator_from_name(fit_estimator);
        if (!kind) {
          throw std::invalid_argument("unknown estimator: " + fit_estimator);
        }
        rbtc::FitOptions options;
        options.msalde_literal = fit_msalde_literal;
        row = row_from_fit_result(rbtc::fit(*kind, data, options), data);
      } else {
        row = row_from_model_fit(rbtc::fit_model(*model, data), data);
      }
      write_output(render_rows({row}, fit_format), fit_out);
      return row.converged ? kExitOk : kExitNoConverge;
    }

    if (cmp_cmd->parsed()) {
      const rbtc::DataSample data = rbtc::load_data(cmp_data);
      std::vector<FittedRow> rows;
      for (rbtc::ModelId id : rbtc::all_models()) {
        try {
          rows.push_back(row_from_model_fit(rbtc::fit_model(id, data), data));
        } catch (const std::exception& e) {
          std::cerr << "warning: " << rbtc::model_spec(id).name
                    << " fit failed: " << e.what() << "\n";
        }
      }
      std::stable_sort(rows.begin(), rows.end(),
                       [](const FittedRow& a, const FittedRow& b) {
                         if (a.converged != b.converged) return a.converged;
                         return a.gof.ks < b.gof.ks;
                       });
      write_output(render_rows(rows, cmp_format), cmp_out);
      const bool all_ok = std::all_of(rows.begin(), rows.end(),
                                      [](const FittedRow& r) {
                                        return r.converged;
                                      });
      return all_ok && rows.size() == rbtc::all_models().size()
                 ? kExitOk
                 : kExitNoConverge;
    }

    if (smp_cmd->parsed()) {
      const rbtc::RbtcParams params(smp_omega, smp_kappa, smp_p);
      rbtc::RngStream rng(smp_seed, 0);
      std::vector<double> draws;
      switch (sampler_from_name(smp_sampler)) {
        case rbtc::SamplerKind::AR: {
          const rbtc::ArProposal proposal = rbtc::tune_proposal(params);
          draws = rbtc::sample_ar(params, proposal, rng, smp_n);
          break;
        }
        case rbtc::SamplerKind::Inverse:
          draws = rbtc::sample_inverse(params, rng, smp_n);
          break;
        case rbtc::SamplerKind::RecordMixture:
          draws = rbtc::sample_record_mixture(params, rng, smp_n);
          break;
      }
      std::string text;
      for (double v : draws) text += fmt(v, true) + "\n";
      write_output(text, smp_out);
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      rbtc::SimConfig config = rbtc::load_sim_config(sim_config_path);
      if (sim_workers_set) config.workers = sim_workers;
      const rbtc::SimStudyResult result = rbtc::run_study(config);
      if (!sim_out.empty()) {
        write_output(rbtc::write_study_csv(result), sim_out);
      }
      const rbtc::TableFormat table_format =
          sim_format == "csv" ? rbtc::TableFormat::Csv
                              : rbtc::TableFormat::Markdown;
      std::cout << rbtc::emit_table(result, table_format);
      int flagged = 0;
      for (const rbtc::SimCell& cell : result.cells) {
        if (cell.flagged) {
          ++flagged;
          std::cerr << "warning: cell " << cell.case_label << " n=" << cell.n
                    << " " << rbtc::estimator_name(cell.estimator) << ": "
                    << cell.failures << "/" << result.replications
                    << " replications failed\n";
        }
      }
      return flagged == 0 ? kExitOk : kExitNoConverge;
    }

    if (gof_cmd->parsed()) {
      const rbtc::DataSample data = rbtc::load_data(gof_data);
      const auto model = rbtc::model_from_name(gof_model_name);
      if (!model) {
        throw std::invalid_argument("unknown model: " + gof_model_name);
      }
      FittedRow row;
      if (!gof_params_str.empty()) {
        std::vector<double> params;
        std::istringstream in(gof_params_str);
        std::string tok;
        while (std::getline(in, tok, ',')) params.push_back(std::stod(tok));
        const rbtc::ModelSpec& spec = rbtc::model_spec(*model);
        if (static_cast<int>(params.size()) != spec.param_count()) {
          throw std::invalid_argument("--params must supply " +
                                      std::to_string(spec.param_count()) +
                                      " values for " + spec.name);
        }
        row.model = spec.name;
        row.param_names = spec.param_names;
        row.params = params;
        row.converged = true;
        const double ll = rbtc::model_log_likelihood(*model, params, data);
        row.neg2_loglik = -2.0 * ll;
        const rbtc::ModelId id = *model;
        row.gof = rbtc::gof_report(
            [id, params](double x) { return rbtc::model_cdf(id, params, x); },
            data, row.neg2_loglik);
      } else if (*model == rbtc::ModelId::RBTC) {
        const auto kind = rbtc::estimator_from_name(gof_estimator);
        if (!kind) {
          throw std::invalid_argument("unknown estimator: " + gof_estimator);
        }
        row = row_from_fit_result(rbtc::fit(*kind, data), data);
      } else {
        row = row_from_model_fit(rbtc::fit_model(*model, data), data);
      }
      write_output(render_rows({row}, gof_format), gof_out);
      return row.converged ? kExitOk : kExitNoConverge;
    }

    if (tbl_cmd->parsed()) {
      const rbtc::RbtcParams params(tbl_omega, tbl_kappa, tbl_p);
      std::ostringstream out;
      const bool markdown = tbl_format == "markdown";
      const char* sep = markdown ? " | " : (tbl_format == "csv" ? "," : "  ");
      if (!tbl_quantiles.empty()) {
        if (markdown) out << "| ";
        out << "u" << sep << "quantile";
        if (markdown) out << " |\n|---|---|";
        out << "\n";
        std::istringstream in(tbl_quantiles);
        std::string tok;
        while (std::getline(in, tok, ',')) {
          const double u = std::stod(tok);
          if (markdown) out << "| ";
          out << fmt(u, false) << sep
              << fmt(rbtc::quantile(params, u), true);
          if (markdown) out << " |";
          out << "\n";
        }
      } else {
        if (tbl_points < 2) {
          throw std::invalid_argument("--points must be >= 2");
        }
        const double lo =
            tbl_min > 0.0 ? tbl_min : rbtc::quantile(params, 0.01);
        const double hi =
            tbl_max > 0.0 ? tbl_max : rbtc::quantile(params, 0.99);
        if (!(hi > lo)) {
          throw std::invalid_argument("--max must exceed --min");
        }
        if (markdown) out << "| ";
        out << "x" << sep << "pdf" << sep << "cdf" << sep << "survival" << sep
            << "hazard";
        if (markdown) out << " |\n|---|---|---|---|---|";
        out << "\n";
        for (int i = 0; i < tbl_points; ++i) {
          const double x = lo + (hi - lo) * i / (tbl_points - 1.0);
          if (markdown) out << "| ";
          out << fmt(x, false) << sep << fmt(rbtc::pdf(params, x), false)
              << sep << fmt(rbtc::cdf(params, x), false) << sep
              << fmt(rbtc::survival(params, x), false) << sep
              << fmt(rbtc::hazard(params, x), false);
          if (markdown) out << " |";
          out << "\n";
        }
      }
      write_output(out.str(), tbl_out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
