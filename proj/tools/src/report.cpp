#include "plp/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "plp/cli/failure_file.hpp"

#ifndef PLP_VERSION_STRING
#define PLP_VERSION_STRING "unknown"
#endif

namespace plp::cli {

using json = nlohmann::ordered_json;

const char* tool_version()
{
  return PLP_VERSION_STRING;
}

std::string format_csv_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json estimator_block(const std::string& name, const PlpParams& params)
{
  const bayes::IntensityForm form = bayes::intensity_form(params);
  return json{{"name", name},
              {"beta", params.beta},
              {"theta", params.theta},
              {"intensity", {{"a", form.coefficient}, {"b", form.exponent}}},
              {"reliability",
               {{"form", "exp{-c (t^p - t_prev^p)}"},
                {"c", std::pow(params.theta, -params.beta)},
                {"p", params.beta}}}};
}

json input_block(const std::string& path, const FailureTimes& data, const std::vector<std::string>& warnings)
{
  return json{{"path", path}, {"n", data.size()}, {"t_1", data.first()}, {"t_n", data.last()}, {"warnings", warnings}};
}

json loss_block(const bayes::HtLoss& loss)
{
  return json{{"f1", loss.f1}, {"f2", loss.f2}};
}

json quadrature_block(const bayes::QuadratureConfig& quad)
{
  json q{{"rel_tol", quad.rel_tol},
         {"abs_tol", quad.abs_tol},
         {"max_refinements", quad.max_refinements},
         {"tail_nats", quad.tail_nats},
         {"upper_strategy", "double the step from the mode until log h is tail_nats below its peak"}};
  if (quad.lower) {
    q["lower"] = *quad.lower;
  } else {
    q["lower"] = "prior support lower bound";
  }
  return q;
}

json trajectory_block(const FailureTimes& data, std::size_t n_min)
{
  return json{{"n_min", n_min}, {"values", mle_beta_trajectory(data, n_min)}};
}

std::string report_csv(const json& report)
{
  std::string out = "estimator,beta,theta,a,b\n";
  for (const auto& e : report.at("estimators")) {
    out += e.at("name").get<std::string>();
    for (double v : {e.at("beta").get<double>(), e.at("theta").get<double>(), e.at("intensity").at("a").get<double>(),
                     e.at("intensity").at("b").get<double>()}) {
      out += ',';
      out += format_csv_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string campaign_csv(const montecarlo::SimResult& result)
{
  std::string out = "theta,n,estimator,mean,mse,replicates,errors\n";
  for (const auto& c : result.cells) {
    out += format_csv_number(c.theta) + ',' + std::to_string(c.n) + ',' + c.estimator + ',' +
           format_csv_number(c.mean) + ',' + format_csv_number(c.mse) + ',' + std::to_string(c.replicates) + ',' +
           std::to_string(c.errors) + '\n';
  }
  return out;
}

json campaign_json(const montecarlo::SimResult& result,
                   const RunConfig& config,
                   const std::vector<montecarlo::EfficiencyTable>& efficiency,
                   const std::vector<std::pair<double, std::string>>& efficiency_keys)
{
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.metadata.config_hash));
  const auto& sim = config.sim;
  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"theta", c.theta},
                     {"n", c.n},
                     {"estimator", c.estimator},
                     {"mean", c.mean},
                     {"mse", c.mse},
                     {"replicates", c.replicates},
                     {"errors", c.errors}});
  }
  json re = json::array();
  for (std::size_t i = 0; i < efficiency.size(); ++i) {
    const auto& t = efficiency[i];
    auto form = [](const bayes::IntensityForm& f) { return json{{"a", f.coefficient}, {"b", f.exponent}}; };
    re.push_back({{"theta", efficiency_keys[i].first},
                  {"prior", efficiency_keys[i].second},
                  {"range", {t.range.first, t.range.second}},
                  {"V", form(t.truth)},
                  {"V_mle", form(t.mle)},
                  {"V_bayes_star", form(t.bayes_star)},
                  {"V_bayes", form(t.bayes)},
                  {"imse_mle", t.imse_mle},
                  {"imse_bayes_star", t.imse_bayes_star},
                  {"imse_bayes", t.imse_bayes},
                  {"re_bayes_vs_mle", t.re_bayes_vs_mle},
                  {"re_bayes_vs_bayes_star", t.re_bayes_vs_bayes_star}});
  }
  return json{{"tool", "plp"},
              {"version", tool_version()},
              {"command", "simulate"},
              {"metadata",
               {{"master_seed", result.metadata.master_seed},
                {"config_hash", hash},
                {"wall_seconds", result.metadata.wall_seconds},
                {"threads", result.metadata.threads}}},
              {"config",
               {{"theta_values", sim.theta_values},
                {"sample_sizes", sim.sample_sizes},
                {"replicates", sim.replicates},
                {"beta_source", config.beta_source_description},
                {"priors", config.prior_descriptions},
                {"loss", loss_block(sim.loss)},
                {"quadrature", quadrature_block(sim.quad)},
                {"re_range", {config.re_range.first, config.re_range.second}}}},
              {"cells", cells},
              {"relative_efficiency", re}};
}

std::string curve_csv(const json& report, double t_lo, double t_hi, std::size_t points, const std::vector<std::string>& only)
{
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !std::isfinite(t_hi)) {
    throw InputError("curve range must satisfy 0 < t_lo < t_hi");
  }
  if (points < 2) {
    throw InputError("curve needs at least 2 points");
  }
  if (!report.is_object() || !report.contains("estimators") || !report["estimators"].is_array() ||
      report["estimators"].empty()) {
    throw InputError("report has no fitted intensities ('estimators' array)");
  }
  std::vector<double> ts(points);
  const double step = std::log(t_hi / t_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    ts[i] = t_lo * std::exp(step * static_cast<double>(i));
  }
  ts.front() = t_lo;
  ts.back() = t_hi;

  std::string out = "estimator,t,intensity\n";
  std::size_t emitted = 0;
  for (const auto& e : report["estimators"]) {
    std::string name;
    bayes::IntensityForm form{};
    try {
      name = e.at("name").get<std::string>();
      form = bayes::IntensityForm{e.at("intensity").at("a").get<double>(), e.at("intensity").at("b").get<double>()};
    } catch (const json::exception&) {
      throw InputError("report estimator entry lacks name or intensity {a, b}");
    }
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) {
      continue;
    }
    ++emitted;
    for (double t : ts) {
      out += name + ',' + format_csv_number(t) + ',' + format_csv_number(form(t)) + '\n';
    }
  }
  if (emitted == 0) {
    throw InputError("no estimator in the report matches the requested names");
  }
  return out;
}

} // namespace plp::cli
