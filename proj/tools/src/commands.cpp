#include "plp/cli/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "plp/bayes.hpp"
#include "plp/cli/config.hpp"
#include "plp/cli/failure_file.hpp"
#include "plp/cli/report.hpp"
#include "plp/errors.hpp"
#include "plp/montecarlo.hpp"

namespace plp::cli {

using json = nlohmann::ordered_json;

namespace {

struct Output
{
  std::string path;
  std::string content;
};

void write_outputs(const std::vector<Output>& outputs, std::ostream& out)
{
  // Files go to a temporary name first and are renamed once all are written.
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  for (const auto& o : outputs) {
    if (o.path.empty()) {
      continue;
    }
    std::filesystem::path tmp = o.path + ".tmp";
    std::ofstream f(tmp, std::ios::binary);
    if (!f || !(f << o.content) || !f.flush()) {
      throw InputError("cannot write " + o.path);
    }
    staged.emplace_back(tmp, o.path);
  }
  for (const auto& [tmp, dst] : staged) {
    std::filesystem::rename(tmp, dst);
  }
  for (const auto& o : outputs) {
    if (o.path.empty()) {
      out << o.content;
    }
  }
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag)
{
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "not a number: '" + item + "'");
    }
  }
  if (v.size() != expected) {
    throw CLI::ValidationError(flag, "expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return v;
}

struct CommonData
{
  std::string path;
  bool sorted_ok = false;
  std::size_t n_min = 5;
  std::string format = "json";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonData& c)
{
  cmd->add_option("file", c.path, "Failure-time file: one positive decimal per line, '#' comments")->required();
  cmd->add_flag("--sorted-ok", c.sorted_ok, "Sort unsorted input (with a warning) instead of rejecting it");
  cmd->add_option("--n-min", c.n_min, "First truncation of the MLE trajectory")->check(CLI::Range(2, 1000000));
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out_path, "Write the report to this file instead of stdout");
}

Output render(const json& report, const CommonData& c)
{
  std::string text = c.format == "csv" ? report_csv(report) : report.dump(2) + "\n";
  return Output{c.out_path, std::move(text)};
}

std::size_t effective_n_min(std::size_t requested, const FailureTimes& data)
{
  return std::max<std::size_t>(2, std::min(requested, data.size()));
}

ParsedTimes load(const CommonData& c)
{
  ParseOptions opts;
  opts.sorted_ok = c.sorted_ok;
  return parse_failure_file(c.path, opts);
}

json mle_report(const CommonData& c)
{
  const ParsedTimes parsed = load(c);
  const FailureTimes& data = parsed.times;
  const double beta = mle_beta(data);
  const double theta = mle_theta(data, beta);
  json r{{"tool", "plp"},
         {"version", tool_version()},
         {"command", "mle"},
         {"input", input_block(c.path, data, parsed.warnings)},
         {"estimators", json::array({estimator_block("mle", PlpParams(beta, theta))})},
         {"mle_trajectory", trajectory_block(data, effective_n_min(c.n_min, data))}};
  return r;
}

struct BayesOptions
{
  std::vector<std::string> priors{"burr"};
  double f1 = 1.0;
  double f2 = 1.0;
  std::optional<double> theta;
  std::optional<double> bandwidth;
  std::string burr;
  std::string invgamma;
  std::string kde_sample;
  double rel_tol = 1e-9;
  int max_refinements = 30;
  double tail_nats = 45.0;
};

json bayes_report(const CommonData& c, const BayesOptions& o)
{
  const ParsedTimes parsed = load(c);
  const FailureTimes& data = parsed.times;
  const double beta_mle = mle_beta(data);
  const double theta_mle = mle_theta(data, beta_mle);
  const double theta = o.theta.value_or(theta_mle);
  const std::size_t n_min = effective_n_min(c.n_min, data);

  bayes::HtLoss loss{o.f1, o.f2};
  loss.validate();
  bayes::QuadratureConfig quad;
  quad.rel_tol = o.rel_tol;
  quad.max_refinements = o.max_refinements;
  quad.tail_nats = o.tail_nats;
  quad.validate();

  std::optional<priors::BurrParams> burr;
  if (!o.burr.empty()) {
    const auto v = parse_list(o.burr, 4, "--burr");
    burr = priors::BurrParams{v[0], v[1], v[2], v[3]};
  }
  std::optional<priors::InvGammaParams> invgamma;
  if (!o.invgamma.empty()) {
    const auto v = parse_list(o.invgamma, 2, "--invgamma");
    invgamma = priors::InvGammaParams{v[0], v[1]};
  }
  std::optional<PriorSample> kde_sample;
  if (!o.kde_sample.empty()) {
    kde_sample = PriorSample{parse_value_file(o.kde_sample), o.kde_sample};
  }

  PriorResolver resolver(trajectory_sample(data, n_min, c.path));
  json estimators = json::array({estimator_block("mle", PlpParams(beta_mle, theta_mle))});
  json prior_blocks = json::array();
  json posterior_blocks = json::array();
  for (const auto& name : o.priors) {
    const auto kind = *priors::parse_prior_kind(name);
    ResolvedPrior rp = [&] {
      switch (kind) {
      case priors::PriorKind::burr:
        return burr ? resolver.burr(*burr, name, "--burr") : resolver.automatic(kind);
      case priors::PriorKind::inverted_gamma:
        return invgamma ? resolver.invgamma(*invgamma, name, "--invgamma") : resolver.automatic(kind);
      case priors::PriorKind::kde_gaussian:
      case priors::PriorKind::kde_epanechnikov:
        return resolver.kde(kind == priors::PriorKind::kde_gaussian ? priors::Kernel::gaussian
                                                                     : priors::Kernel::epanechnikov,
                            o.bandwidth, kde_sample, name);
      case priors::PriorKind::jeffreys:
        break;
      }
      return resolver.automatic(kind);
    }();
    rp.description["label"] = rp.label;
    prior_blocks.push_back(rp.description);

    const bayes::LogPosterior post = bayes::make_log_posterior(bayes::PosteriorSpec{data, theta, rp.prior});
    const bayes::HtEstimate est = bayes::ht_bayes_estimate_detail(post, loss, quad);
    const double mean = bayes::posterior_mean(post, quad);
    const bayes::BayesIntensity bi = bayes::bayes_intensity(data, est.value);
    estimators.push_back(estimator_block("bayes_ht:" + rp.label, bi.params));
    estimators.push_back(estimator_block("bayes_ht_star:" + rp.label, PlpParams(est.value, theta)));
    posterior_blocks.push_back({{"prior", rp.label},
                                {"mode", est.window.mode},
                                {"window", {est.window.lower, est.window.upper}},
                                {"numerator", est.numerator},
                                {"denominator", est.denominator},
                                {"posterior_mean", mean}});
  }

  return json{{"tool", "plp"},
              {"version", tool_version()},
              {"command", "bayes"},
              {"input", input_block(c.path, data, parsed.warnings)},
              {"theta_mode", o.theta ? "supplied" : "mle-derived"},
              {"theta", theta},
              {"loss", loss_block(loss)},
              {"quadrature", quadrature_block(quad)},
              {"priors", prior_blocks},
              {"estimators", estimators},
              {"posterior", posterior_blocks},
              {"mle_trajectory", trajectory_block(data, n_min)}};
}

struct SimulateOptions
{
  std::string config_path;
  std::string out_prefix;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format;
};

std::vector<Output> simulate(const SimulateOptions& o)
{
  RunConfig rc = load_run_config(o.config_path);
  if (o.seed) {
    rc.sim.master_seed = *o.seed;
  }
  rc.sim.threads = o.threads;
  const montecarlo::SimResult result = montecarlo::run_campaign(rc.sim);

  std::vector<montecarlo::EfficiencyTable> eff;
  std::vector<std::pair<double, std::string>> keys;
  if (const auto* fixed = std::get_if<montecarlo::FixedBeta>(&rc.sim.beta_source)) {
    for (double theta : rc.sim.theta_values) {
      for (const auto& p : rc.sim.priors) {
        // Only the largest sample size, where the averaged fits are most stable.
        const std::size_t n = *std::max_element(rc.sim.sample_sizes.begin(), rc.sim.sample_sizes.end());
        try {
          eff.push_back(montecarlo::efficiency_table(result, theta, n, p.label, fixed->value, rc.re_range));
          keys.emplace_back(theta, p.label);
        } catch (const EstimationError&) {
          // A degenerate MLE fit has no defined RE; leave the row out.
        }
      }
    }
  }

  const std::string csv = campaign_csv(result);
  const std::string js = campaign_json(result, rc, eff, keys).dump(2) + "\n";
  std::optional<std::string> prefix = rc.output_prefix;
  if (!o.out_prefix.empty()) {
    prefix = o.out_prefix;
  }
  OutputFormat format = rc.output_format.value_or(prefix ? OutputFormat::both : OutputFormat::csv);
  if (o.format == "csv") {
    format = OutputFormat::csv;
  } else if (o.format == "json") {
    format = OutputFormat::json;
  } else if (o.format == "both") {
    format = OutputFormat::both;
  }
  std::vector<Output> outs;
  if (prefix) {
    if (format != OutputFormat::json) {
      outs.push_back({*prefix + ".csv", csv});
    }
    if (format != OutputFormat::csv) {
      outs.push_back({*prefix + ".json", js});
    }
  } else {
    if (format != OutputFormat::json) {
      outs.push_back({"", csv});
    }
    if (format != OutputFormat::csv) {
      outs.push_back({"", js});
    }
  }
  return outs;
}

struct CurveOptions
{
  std::string report_path;
  std::optional<double> t_lo;
  std::optional<double> t_hi;
  std::size_t points = 100;
  std::vector<std::string> estimators;
  std::string out_path;
};

Output curve(const CurveOptions& o)
{
  json report;
  try {
    report = json::parse(read_text_file(o.report_path));
  } catch (const json::parse_error& e) {
    throw InputError(o.report_path + ": invalid JSON: " + e.what());
  }
  double lo = 0.0;
  double hi = 0.0;
  try {
    lo = o.t_lo ? *o.t_lo : report.at("input").at("t_1").get<double>();
    hi = o.t_hi ? *o.t_hi : report.at("input").at("t_n").get<double>();
  } catch (const json::exception&) {
    throw InputError("report has no input range; pass --t-lo and --t-hi");
  }
  return Output{o.out_path, curve_csv(report, lo, hi, o.points, o.estimators)};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Power law process reliability estimation: MLE and Higgins-Tsokos Bayes estimates", "plp"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  CommonData mle_opts;
  auto* mle_cmd = app.add_subcommand("mle", "Maximum likelihood estimates of (beta, theta)");
  add_common(mle_cmd, mle_opts);

  CommonData bayes_common;
  BayesOptions bayes_opts;
  auto* bayes_cmd = app.add_subcommand("bayes", "Higgins-Tsokos Bayes estimate of beta with adjusted theta");
  add_common(bayes_cmd, bayes_common);
  bayes_cmd->add_option("--prior", bayes_opts.priors, "Prior(s): burr, jeffreys, invgamma, kde-gauss, kde-epan")
    ->check(CLI::IsMember({"burr", "jeffreys", "invgamma", "kde-gauss", "kde-epan"}))
    ->capture_default_str();
  bayes_cmd->add_option("--f1", bayes_opts.f1, "H-T loss weight f1")->check(CLI::PositiveNumber)->capture_default_str();
  bayes_cmd->add_option("--f2", bayes_opts.f2, "H-T loss weight f2")->check(CLI::PositiveNumber)->capture_default_str();
  bayes_cmd->add_option("--theta", bayes_opts.theta, "Known theta (default: MLE of the same data)")
    ->check(CLI::PositiveNumber);
  bayes_cmd->add_option("--bandwidth", bayes_opts.bandwidth, "KDE bandwidth (default: AMISE)")
    ->check(CLI::PositiveNumber);
  bayes_cmd->add_option("--burr", bayes_opts.burr, "Burr hyperparameters alpha,gamma,delta,kappa");
  bayes_cmd->add_option("--invgamma", bayes_opts.invgamma, "Inverted gamma hyperparameters v,mu");
  bayes_cmd->add_option("--kde-sample", bayes_opts.kde_sample, "File of beta values for the KDE priors")
    ->check(CLI::ExistingFile);
  bayes_cmd->add_option("--rel-tol", bayes_opts.rel_tol, "Quadrature relative tolerance")
    ->check(CLI::PositiveNumber)->capture_default_str();
  bayes_cmd->add_option("--max-refinements", bayes_opts.max_refinements, "Quadrature bisection depth limit")
    ->check(CLI::Range(1, 60))->capture_default_str();
  bayes_cmd->add_option("--tail-nats", bayes_opts.tail_nats, "Log drop below the peak that ends the window")
    ->check(CLI::PositiveNumber)->capture_default_str();

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo campaign from a JSON config");
  sim_cmd->add_option("config", sim_opts.config_path, "Campaign configuration (JSON)")->required();
  sim_cmd->add_option("--out", sim_opts.out_prefix, "Write PREFIX.csv and PREFIX.json");
  sim_cmd->add_option("--seed", sim_opts.seed, "Override master_seed");
  sim_cmd->add_option("--threads", sim_opts.threads, "Worker threads (0: all cores); never changes results")
    ->capture_default_str();
  sim_cmd->add_option("--format", sim_opts.format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));

  CurveOptions curve_opts;
  auto* curve_cmd = app.add_subcommand("curve", "Plot data of fitted intensities from a report");
  curve_cmd->add_option("report", curve_opts.report_path, "Report JSON from mle or bayes")->required();
  curve_cmd->add_option("--t-lo", curve_opts.t_lo, "First abscissa (default t_1)")->check(CLI::PositiveNumber);
  curve_cmd->add_option("--t-hi", curve_opts.t_hi, "Last abscissa (default t_n)")->check(CLI::PositiveNumber);
  curve_cmd->add_option("--points", curve_opts.points, "Number of log-spaced points")
    ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))->capture_default_str();
  curve_cmd->add_option("--estimator", curve_opts.estimators, "Only these estimators (repeatable)");
  curve_cmd->add_option("--out", curve_opts.out_path, "Write the CSV to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "plp: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    std::vector<Output> outputs;
    if (*mle_cmd) {
      outputs.push_back(render(mle_report(mle_opts), mle_opts));
    } else if (*bayes_cmd) {
      outputs.push_back(render(bayes_report(bayes_common, bayes_opts), bayes_common));
    } else if (*sim_cmd) {
      outputs = simulate(sim_opts);
    } else if (*curve_cmd) {
      outputs.push_back(curve(curve_opts));
    }
    write_outputs(outputs, out);
    return exit_ok;
  } catch (const CLI::ValidationError& e) {
    err << "plp: " << e.what() << "\n";
    return exit_usage;
  } catch (const InputError& e) {
    err << "plp: " << e.what() << "\n";
    return exit_input;
  } catch (const DomainError& e) {
    err << "plp: invalid input: " << e.what() << "\n";
    return exit_input;
  } catch (const QuadratureError& e) {
    err << "plp: numerical failure: " << e.what() << "\n"
        << "  integrals: numerator=" << e.numerator() << " denominator=" << e.denominator() << "\n"
        << "  limits: [" << e.lower() << ", " << e.upper() << "]\n";
    return exit_numerical;
  } catch (const EstimationError& e) {
    err << "plp: numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

} // namespace plp::cli
