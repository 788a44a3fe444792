#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "plp/bayes.hpp"
#include "plp/cli/config.hpp"
#include "plp/montecarlo.hpp"
#include "plp/process.hpp"

namespace plp::cli {

//! Tool version string written into every report.
const char* tool_version();

//! %.6g, the precision of every CSV number.
std::string format_csv_number(double v);

//! One fitted (beta, theta) pair as a report block. The intensity is
//! a t^b with a = beta/theta^beta, b = beta - 1; the conditional reliability
//! is exp{-c (t^p - t_prev^p)} with c = theta^-beta, p = beta.
nlohmann::ordered_json estimator_block(const std::string& name, const PlpParams& params);

nlohmann::ordered_json input_block(const std::string& path, const FailureTimes& data, const std::vector<std::string>& warnings);
nlohmann::ordered_json loss_block(const bayes::HtLoss& loss);
nlohmann::ordered_json quadrature_block(const bayes::QuadratureConfig& quad);
nlohmann::ordered_json trajectory_block(const FailureTimes& data, std::size_t n_min);

//! Estimator table of a report as CSV: estimator,beta,theta,a,b.
std::string report_csv(const nlohmann::ordered_json& report);

//! theta,n,estimator,mean,mse,replicates,errors
std::string campaign_csv(const montecarlo::SimResult& result);

nlohmann::ordered_json campaign_json(const montecarlo::SimResult& result,
                             const RunConfig& config,
                             const std::vector<montecarlo::EfficiencyTable>& efficiency,
                             const std::vector<std::pair<double, std::string>>& efficiency_keys);

//! Long-format plot data estimator,t,intensity at `points` log-spaced
//! abscissae from t_lo to t_hi inclusive. `only` filters estimators by name.
std::string curve_csv(const nlohmann::ordered_json& report,
                      double t_lo,
                      double t_hi,
                      std::size_t points,
                      const std::vector<std::string>& only);

} // namespace plp::cli
