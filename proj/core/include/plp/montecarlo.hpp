#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "plp/bayes.hpp"
#include "plp/errors.hpp"
#include "plp/prior.hpp"
#include "plp/process.hpp"

namespace plp::montecarlo {

struct FixedBeta
{
  double value;
};

//! Where each replicate's true beta comes from.
using BetaSource = std::variant<FixedBeta, priors::BurrParams>;

//! A prior under a stable label; the label names the estimator columns
//! (beta_<label>, theta_<label>).
struct PriorEntry
{
  std::string label;
  priors::Prior prior;
};

struct SimConfig
{
  std::vector<double> theta_values;
  std::vector<std::size_t> sample_sizes;
  std::size_t replicates = 500;
  BetaSource beta_source = FixedBeta{0.7054};
  std::vector<PriorEntry> priors;
  bayes::HtLoss loss;
  std::uint64_t master_seed = 0;
  bayes::QuadratureConfig quad;
  //! Worker threads; 0 means hardware concurrency. Never affects results.
  unsigned threads = 1;
  //! Keep per-replicate records (always on for sensitivity_sweep).
  bool keep_replicates = false;

  //! Throws DomainError on empty lists, n < 2, non-positive theta, duplicate
  //! or empty prior labels.
  void validate() const;
};

//! One (theta, n, estimator) table entry.
struct CellSummary
{
  double theta;
  std::size_t n;
  std::string estimator;
  double mean;
  double mse;
  //! Replicates requested for the cell.
  std::size_t replicates;
  //! Replicates excluded because an estimator threw.
  std::size_t errors;
};

struct ReplicateRecord
{
  std::size_t theta_index;
  std::size_t n_index;
  std::size_t index;
  double true_beta;
  std::uint64_t dataset_hash;
  double beta_mle;
  double theta_mle;
  //! One entry per configured prior, in config order.
  std::vector<double> beta_bayes;
  std::vector<double> theta_bayes;
  //! Hash of the dataset each prior actually scored.
  std::vector<std::uint64_t> prior_dataset_hash;
  bool failed;
  std::string error;
};

struct CampaignMetadata
{
  std::uint64_t master_seed;
  std::uint64_t config_hash;
  double wall_seconds;
  unsigned threads;
};

struct SimResult
{
  //! Ordered by theta, then n, then estimator (beta_mle, beta_<label>...,
  //! theta_mle, theta_<label>...).
  std::vector<CellSummary> cells;
  CampaignMetadata metadata;
  std::vector<ReplicateRecord> records;

  //! Throws std::out_of_range if absent.
  const CellSummary& cell(double theta, std::size_t n, const std::string& estimator) const;
};

//! Thrown when more than 1% of a cell's replicates fail.
class CampaignError : public EstimationError
{
public:
  using EstimationError::EstimationError;
};

//! Fingerprint of everything in the config that affects results (threads
//! and keep_replicates excluded).
std::uint64_t config_hash(const SimConfig& config);

//! For every (theta, n) cell and replicate k: draw beta, simulate n failure
//! times, score MLE and each prior's H-T estimate with adjusted theta.
//! Replicate k of cell c draws from RandomStream::for_replicate(seed, c, k),
//! so the result does not depend on scheduling or thread count.
SimResult run_campaign(const SimConfig& config);

//! run_campaign with per-replicate records kept; needs >= 2 priors. All
//! priors score the same simulated dataset in each replicate.
SimResult sensitivity_sweep(const SimConfig& config);

//! The true beta and dataset of one replicate, regenerated from the seed.
struct ReplicateData
{
  double true_beta;
  FailureTimes data;
};
ReplicateData replicate_dataset(const SimConfig& config,
                                std::size_t theta_index,
                                std::size_t n_index,
                                std::size_t index);

//! Mean squared deviation; pairwise summation.
double mse(std::span<const double> estimates, std::span<const double> truths);

//! Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

//! Integral of [fitted(t) - V(t)]^2 over (t_lo, t_hi), 0 < t_lo < t_hi.
double imse(const bayes::IntensityForm& fitted, const PlpParams& truth, std::pair<double, double> range);

//! imse_bayes / imse_mle. Throws EstimationError when imse_mle is 0.
double relative_efficiency(double imse_bayes, double imse_mle);

//! Intensity forms and relative efficiencies built from a campaign cell's
//! average estimates: V from the truth, V_MLE from mean MLEs, V*_B from the
//! mean Bayes beta with the mean MLE theta, V_B from mean Bayes beta and mean
//! adjusted theta.
struct EfficiencyTable
{
  std::pair<double, double> range;
  bayes::IntensityForm truth;
  bayes::IntensityForm mle;
  bayes::IntensityForm bayes_star;
  bayes::IntensityForm bayes;
  double imse_mle;
  double imse_bayes_star;
  double imse_bayes;
  double re_bayes_vs_mle;
  double re_bayes_vs_bayes_star;
};

EfficiencyTable efficiency_table(const SimResult& result,
                                 double theta,
                                 std::size_t n,
                                 const std::string& prior_label,
                                 double true_beta,
                                 std::pair<double, double> range);

//! (t_1, t_n) of the Crow data.
inline constexpr std::pair<double, double> default_re_range{0.7, 3256.3};

} // namespace plp::montecarlo
