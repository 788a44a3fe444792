#include "plp/cli/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "plp/cli/failure_file.hpp"
#include "plp/datasets.hpp"
#include "plp/errors.hpp"

namespace plp::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t default_n_min = 5;

[[noreturn]] void bad(const std::string& where, const std::string& what)
{
  throw InputError("config: " + where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
  if (!obj.is_object()) {
    bad(where, "expected an object");
  }
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) {
      bad(where, "unknown key '" + key + "'");
    }
  }
}

double positive(const json& v, const std::string& where)
{
  if (!v.is_number()) {
    bad(where, "expected a number");
  }
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) {
    bad(where, "must be positive and finite");
  }
  return x;
}

double non_negative(const json& v, const std::string& where)
{
  if (!v.is_number()) {
    bad(where, "expected a number");
  }
  const double x = v.get<double>();
  if (!(x >= 0.0) || !std::isfinite(x)) {
    bad(where, "must be non-negative and finite");
  }
  return x;
}

std::uint64_t unsigned_int(const json& v, const std::string& where, std::uint64_t min)
{
  if (!v.is_number_integer()) {
    bad(where, "expected an integer");
  }
  if (v.is_number_unsigned()) {
    const auto x = v.get<std::uint64_t>();
    if (x < min) {
      bad(where, "must be at least " + std::to_string(min));
    }
    return x;
  }
  const auto x = v.get<std::int64_t>();
  if (x < 0 || static_cast<std::uint64_t>(x) < min) {
    bad(where, "must be at least " + std::to_string(min));
  }
  return static_cast<std::uint64_t>(x);
}

priors::BurrParams parse_burr(const json& obj, const std::string& where, bool allow_extra_type)
{
  if (allow_extra_type) {
    only_keys(obj, where, {"type", "label", "alpha", "gamma", "delta", "kappa"});
  } else {
    only_keys(obj, where, {"alpha", "gamma", "delta", "kappa"});
  }
  for (const char* k : {"alpha", "gamma", "delta", "kappa"}) {
    if (!obj.contains(k)) {
      bad(where, std::string("missing '") + k + "'");
    }
  }
  priors::BurrParams p{positive(obj["alpha"], where + ".alpha"), non_negative(obj["gamma"], where + ".gamma"),
                       positive(obj["delta"], where + ".delta"), positive(obj["kappa"], where + ".kappa")};
  return p;
}

//! A prior request validated in the first pass and resolved afterwards.
struct PriorRequest
{
  priors::PriorKind kind;
  std::string label;
  std::optional<priors::BurrParams> burr;
  std::optional<priors::InvGammaParams> invgamma;
  std::optional<double> bandwidth;
  std::optional<std::vector<double>> sample;
  std::string sample_source;
};

PriorRequest parse_prior(const json& v, const std::string& where, const std::filesystem::path& base_dir)
{
  auto kind_of = [&](const json& name) {
    if (!name.is_string()) {
      bad(where, "prior name must be a string");
    }
    const auto kind = priors::parse_prior_kind(name.get<std::string>());
    if (!kind) {
      bad(where, "unknown prior '" + name.get<std::string>() + "' (expected burr, jeffreys, invgamma, kde-gauss, kde-epan)");
    }
    return *kind;
  };
  if (v.is_string()) {
    const auto kind = kind_of(v);
    return PriorRequest{kind, std::string(priors::prior_kind_name(kind)), {}, {}, {}, {}, {}};
  }
  if (!v.is_object() || !v.contains("type")) {
    bad(where, "expected a prior name or an object with a 'type'");
  }
  PriorRequest req{};
  req.kind = kind_of(v["type"]);
  req.label = std::string(priors::prior_kind_name(req.kind));
  if (v.contains("label")) {
    if (!v["label"].is_string() || v["label"].get<std::string>().empty()) {
      bad(where + ".label", "expected a non-empty string");
    }
    req.label = v["label"].get<std::string>();
  }
  switch (req.kind) {
  case priors::PriorKind::burr:
    if (v.size() > (v.contains("label") ? 2u : 1u)) {
      req.burr = parse_burr(v, where, true);
    }
    break;
  case priors::PriorKind::jeffreys:
    only_keys(v, where, {"type", "label"});
    break;
  case priors::PriorKind::inverted_gamma:
    only_keys(v, where, {"type", "label", "v", "mu"});
    if (v.contains("v") != v.contains("mu")) {
      bad(where, "give both 'v' and 'mu' or neither");
    }
    if (v.contains("v")) {
      req.invgamma = priors::InvGammaParams{positive(v["v"], where + ".v"), positive(v["mu"], where + ".mu")};
    }
    break;
  case priors::PriorKind::kde_gaussian:
  case priors::PriorKind::kde_epanechnikov:
    only_keys(v, where, {"type", "label", "bandwidth", "sample", "sample_file"});
    if (v.contains("bandwidth")) {
      req.bandwidth = positive(v["bandwidth"], where + ".bandwidth");
    }
    if (v.contains("sample") && v.contains("sample_file")) {
      bad(where, "give 'sample' or 'sample_file', not both");
    }
    if (v.contains("sample")) {
      if (!v["sample"].is_array() || v["sample"].empty()) {
        bad(where + ".sample", "expected a non-empty array of numbers");
      }
      std::vector<double> s;
      for (std::size_t i = 0; i < v["sample"].size(); ++i) {
        s.push_back(positive(v["sample"][i], where + ".sample[" + std::to_string(i) + "]"));
      }
      req.sample = std::move(s);
      req.sample_source = "config";
    }
    if (v.contains("sample_file")) {
      if (!v["sample_file"].is_string()) {
        bad(where + ".sample_file", "expected a path string");
      }
      std::filesystem::path p = v["sample_file"].get<std::string>();
      if (p.is_relative()) {
        p = base_dir / p;
      }
      req.sample = parse_value_file(p);
      req.sample_source = p.string();
    }
    break;
  }
  return req;
}

priors::Kernel kernel_of(priors::PriorKind kind)
{
  return kind == priors::PriorKind::kde_gaussian ? priors::Kernel::gaussian : priors::Kernel::epanechnikov;
}

} // namespace

json burr_json(const priors::BurrParams& p)
{
  return json{{"alpha", p.alpha}, {"gamma", p.gamma}, {"delta", p.delta}, {"kappa", p.kappa}};
}

PriorSample trajectory_sample(const FailureTimes& data, std::size_t n_min, std::string source)
{
  return PriorSample{mle_beta_trajectory(data, n_min),
                     "mle_beta_trajectory(" + source + ", n_min=" + std::to_string(n_min) + ")"};
}

PriorResolver::PriorResolver(PriorSample sample)
  : sample_(std::move(sample))
  , factory_(sample_.values)
{}

const priors::BurrParams& PriorResolver::burr_reference()
{
  return factory_.burr_reference();
}

ResolvedPrior PriorResolver::burr(const priors::BurrParams& p, std::string label, std::string source)
{
  p.validate();
  json d{{"kind", "burr"}, {"hyperparameters", burr_json(p)}, {"source", std::move(source)},
         {"integration_lower", p.gamma}};
  return ResolvedPrior{std::move(label), p, std::move(d)};
}

ResolvedPrior PriorResolver::invgamma(const priors::InvGammaParams& p, std::string label, std::string source)
{
  p.validate();
  json d{{"kind", "invgamma"}, {"hyperparameters", {{"v", p.shape_v}, {"mu", p.scale_mu}}},
         {"source", std::move(source)}, {"integration_lower", 0.0}};
  return ResolvedPrior{std::move(label), p, std::move(d)};
}

ResolvedPrior PriorResolver::kde(priors::Kernel kernel,
                                 std::optional<double> bandwidth,
                                 std::optional<PriorSample> sample,
                                 std::string label)
{
  const PriorSample& s = sample ? *sample : sample_;
  json d{{"kind", kernel == priors::Kernel::gaussian ? "kde-gauss" : "kde-epan"},
         {"kernel", std::string(priors::kernel_name(kernel))},
         {"sample_size", s.values.size()},
         {"sample_source", s.source},
         {"integration_lower", 0.0}};
  double h = 0.0;
  if (bandwidth) {
    h = *bandwidth;
    d["bandwidth_source"] = "supplied";
  } else {
    // The AMISE reference is a Burr fit to the KDE's own sample.
    const priors::BurrParams ref =
      sample ? priors::burr_fit(s.values).params : factory_.burr_reference();
    h = priors::amise_bandwidth(kernel, ref, s.values.size());
    d["bandwidth_source"] = "amise";
    d["amise_reference_burr"] = burr_json(ref);
  }
  d["bandwidth"] = h;
  d["hyperparameters"] = {{"bandwidth", h}};
  priors::KernelSpec spec(kernel, h, s.values);
  return ResolvedPrior{std::move(label), std::move(spec), std::move(d)};
}

ResolvedPrior PriorResolver::automatic(priors::PriorKind kind, std::string label)
{
  if (label.empty()) {
    label = std::string(priors::prior_kind_name(kind));
  }
  switch (kind) {
  case priors::PriorKind::burr:
    return burr(factory_.burr_reference(), std::move(label), "maximum likelihood fit to " + sample_.source);
  case priors::PriorKind::jeffreys:
    return ResolvedPrior{std::move(label), priors::JeffreysPrior{},
                         json{{"kind", "jeffreys"},
                              {"hyperparameters", json::object()},
                              {"source", "improper 1/beta, unnormalised"},
                              {"integration_lower", 0.0}}};
  case priors::PriorKind::inverted_gamma:
    return invgamma(priors::inverted_gamma_moment_match(sample_.values), std::move(label),
                    "moment match of 1/beta over " + sample_.source);
  case priors::PriorKind::kde_gaussian:
  case priors::PriorKind::kde_epanechnikov:
    return kde(kernel_of(kind), std::nullopt, std::nullopt, std::move(label));
  }
  throw DomainError("unknown prior kind");
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir)
{
  only_keys(doc, "top level",
            {"theta_values", "sample_sizes", "replicates", "beta_source", "priors", "f1", "f2", "master_seed",
             "quadrature", "re_range", "output"});
  RunConfig rc;
  auto& sim = rc.sim;

  for (const char* key : {"theta_values", "sample_sizes"}) {
    if (!doc.contains(key)) {
      bad(key, "required");
    }
    if (!doc[key].is_array() || doc[key].empty()) {
      bad(key, "expected a non-empty array");
    }
  }
  for (std::size_t i = 0; i < doc["theta_values"].size(); ++i) {
    sim.theta_values.push_back(positive(doc["theta_values"][i], "theta_values[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < doc["sample_sizes"].size(); ++i) {
    sim.sample_sizes.push_back(unsigned_int(doc["sample_sizes"][i], "sample_sizes[" + std::to_string(i) + "]", 2));
  }
  if (doc.contains("replicates")) {
    sim.replicates = unsigned_int(doc["replicates"], "replicates", 1);
  }
  if (doc.contains("f1")) {
    sim.loss.f1 = positive(doc["f1"], "f1");
  }
  if (doc.contains("f2")) {
    sim.loss.f2 = positive(doc["f2"], "f2");
  }
  sim.master_seed = 1;
  if (doc.contains("master_seed")) {
    sim.master_seed = unsigned_int(doc["master_seed"], "master_seed", 0);
  }

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    only_keys(q, "quadrature", {"rel_tol", "abs_tol", "max_refinements", "tail_nats", "lower"});
    if (q.contains("rel_tol")) {
      sim.quad.rel_tol = positive(q["rel_tol"], "quadrature.rel_tol");
    }
    if (q.contains("abs_tol")) {
      sim.quad.abs_tol = positive(q["abs_tol"], "quadrature.abs_tol");
    }
    if (q.contains("max_refinements")) {
      sim.quad.max_refinements = static_cast<int>(unsigned_int(q["max_refinements"], "quadrature.max_refinements", 1));
    }
    if (q.contains("tail_nats")) {
      sim.quad.tail_nats = positive(q["tail_nats"], "quadrature.tail_nats");
    }
    if (q.contains("lower")) {
      sim.quad.lower = non_negative(q["lower"], "quadrature.lower");
    }
  }

  if (doc.contains("re_range")) {
    const json& r = doc["re_range"];
    if (!r.is_array() || r.size() != 2) {
      bad("re_range", "expected [t_lo, t_hi]");
    }
    rc.re_range = {positive(r[0], "re_range[0]"), positive(r[1], "re_range[1]")};
    if (!(rc.re_range.second > rc.re_range.first)) {
      bad("re_range", "t_hi must exceed t_lo");
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    only_keys(o, "output", {"prefix", "format"});
    if (o.contains("prefix")) {
      if (!o["prefix"].is_string() || o["prefix"].get<std::string>().empty()) {
        bad("output.prefix", "expected a non-empty string");
      }
      std::filesystem::path p = o["prefix"].get<std::string>();
      rc.output_prefix = (p.is_relative() ? base_dir / p : p).string();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "csv") {
        rc.output_format = OutputFormat::csv;
      } else if (f == "json") {
        rc.output_format = OutputFormat::json;
      } else if (f == "both") {
        rc.output_format = OutputFormat::both;
      } else {
        bad("output.format", "expected \"csv\", \"json\" or \"both\"");
      }
    }
  }

  // beta_source: {"fixed": b} | {"burr": "auto"} | {"burr": {alpha, gamma, delta, kappa}}
  enum class BetaMode
  {
    fixed,
    burr_auto,
    burr_given
  };
  BetaMode beta_mode = BetaMode::fixed;
  double fixed_beta = 0.7054;
  priors::BurrParams beta_burr{};
  if (doc.contains("beta_source")) {
    const json& b = doc["beta_source"];
    only_keys(b, "beta_source", {"fixed", "burr"});
    if (b.size() != 1) {
      bad("beta_source", "expected exactly one of 'fixed' or 'burr'");
    }
    if (b.contains("fixed")) {
      fixed_beta = positive(b["fixed"], "beta_source.fixed");
    } else if (b["burr"].is_string()) {
      if (b["burr"].get<std::string>() != "auto") {
        bad("beta_source.burr", "expected \"auto\" or an object of Burr parameters");
      }
      beta_mode = BetaMode::burr_auto;
    } else {
      beta_burr = parse_burr(b["burr"], "beta_source.burr", false);
      beta_mode = BetaMode::burr_given;
    }
  }

  std::vector<PriorRequest> requests;
  if (doc.contains("priors")) {
    const json& p = doc["priors"];
    if (!p.is_array()) {
      bad("priors", "expected an array");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      requests.push_back(parse_prior(p[i], "priors[" + std::to_string(i) + "]", base_dir));
    }
  } else {
    requests.push_back(PriorRequest{priors::PriorKind::burr, "burr", {}, {}, {}, {}, {}});
  }
  std::set<std::string> labels;
  for (const auto& r : requests) {
    if (r.label == "mle" || !labels.insert(r.label).second) {
      bad("priors", "duplicate or reserved label '" + r.label + "'");
    }
  }

  // Everything is validated; now fit what needs fitting.
  try {
    PriorResolver resolver(trajectory_sample(datasets::crow_1974(), default_n_min, "crow_1974"));
    switch (beta_mode) {
    case BetaMode::fixed:
      sim.beta_source = montecarlo::FixedBeta{fixed_beta};
      rc.beta_source_description = {{"fixed", fixed_beta}};
      break;
    case BetaMode::burr_auto:
      sim.beta_source = resolver.burr_reference();
      rc.beta_source_description = {{"burr", burr_json(resolver.burr_reference())},
                                    {"source", "maximum likelihood fit to " + resolver.sample().source}};
      break;
    case BetaMode::burr_given:
      beta_burr.validate();
      sim.beta_source = beta_burr;
      rc.beta_source_description = {{"burr", burr_json(beta_burr)}, {"source", "config"}};
      break;
    }
    for (auto& r : requests) {
      ResolvedPrior resolved = [&] {
        if (r.burr) {
          return resolver.burr(*r.burr, r.label, "config");
        }
        if (r.invgamma) {
          return resolver.invgamma(*r.invgamma, r.label, "config");
        }
        if (r.kind == priors::PriorKind::kde_gaussian || r.kind == priors::PriorKind::kde_epanechnikov) {
          std::optional<PriorSample> s;
          if (r.sample) {
            s = PriorSample{*r.sample, r.sample_source};
          }
          return resolver.kde(kernel_of(r.kind), r.bandwidth, s, r.label);
        }
        return resolver.automatic(r.kind, r.label);
      }();
      resolved.description["label"] = resolved.label;
      rc.prior_descriptions.push_back(resolved.description);
      sim.priors.push_back(montecarlo::PriorEntry{resolved.label, std::move(resolved.prior)});
    }
    sim.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

} // namespace plp::cli
