#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "plp/montecarlo.hpp"
#include "plp/prior.hpp"

namespace plp::cli {

//! A prior plus a record of where its hyperparameters came from.
struct ResolvedPrior
{
  std::string label;
  priors::Prior prior;
  //! JSON description for reports: kind, hyperparameters, provenance.
  nlohmann::ordered_json description;
};

//! Sample used for auto-fitted priors: the MLE trajectory of a dataset.
struct PriorSample
{
  std::vector<double> values;
  std::string source;
};

PriorSample trajectory_sample(const FailureTimes& data, std::size_t n_min, std::string source);

//! Shared auto-fit state: one Burr reference fit per sample.
class PriorResolver
{
public:
  explicit PriorResolver(PriorSample sample);

  //! Hyperparameters from the sample (Burr ML fit, inverted-gamma moment
  //! match, KDE with AMISE bandwidth against the Burr fit).
  ResolvedPrior automatic(priors::PriorKind kind, std::string label = {});
  ResolvedPrior burr(const priors::BurrParams& p, std::string label, std::string source);
  ResolvedPrior invgamma(const priors::InvGammaParams& p, std::string label, std::string source);
  //! Bandwidth from the flag when given, else AMISE against `reference`
  //! (or the resolver's own Burr fit when absent).
  ResolvedPrior kde(priors::Kernel kernel,
                    std::optional<double> bandwidth,
                    std::optional<PriorSample> sample,
                    std::string label);

  const priors::BurrParams& burr_reference();
  const PriorSample& sample() const noexcept { return sample_; }

private:
  PriorSample sample_;
  priors::PriorFactory factory_;
};

nlohmann::ordered_json burr_json(const priors::BurrParams& p);

enum class OutputFormat
{
  csv,
  json,
  both,
};

//! Campaign configuration file after schema validation.
struct RunConfig
{
  montecarlo::SimConfig sim;
  std::vector<nlohmann::ordered_json> prior_descriptions;
  nlohmann::ordered_json beta_source_description;
  std::pair<double, double> re_range = montecarlo::default_re_range;
  std::optional<std::string> output_prefix;
  std::optional<OutputFormat> output_format;
};

//! Validates the whole document before anything is computed except the
//! prior auto-fits, which need the Crow trajectory. Unknown keys, wrong
//! types and out-of-range values raise InputError naming the key.
RunConfig parse_run_config(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace plp::cli
