#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "amle/abc.hpp"
#include "amle/kde.hpp"
#include "amle/models.hpp"

namespace amle {

enum class BandwidthSelector { kSilverman, kLscv1d };

struct KdeOptions {
  BandwidthSelector bandwidth = BandwidthSelector::kSilverman;
  int n_starts = 50;
  double tol = 0.0;  // 0 = auto (1e-8 * max bandwidth)
};

/// Full pipeline configuration: ABC sampling + KDE mode search.
struct AmleConfig {
  AbcConfig abc;
  KdeOptions kde;
};

/// Conditional results for one discrete value combination.
struct DiscreteConditional {
  Eigen::VectorXd mode;  // continuous coordinates of the conditional KDE mode
  double kde_max = 0.0;
  int count = 0;
  double score = 0.0;  // (count / m) * kde_max, the joint posterior score
};

struct AmleResult {
  ParameterVector theta;          // the point estimate, in space order
  double density_at_mode = 0.0;
  double acceptance_rate = 0.0;
  std::uint64_t proposals_used = 0;
  Eigen::VectorXd posterior_mean;  // mean of accepted continuous coordinates
  std::map<std::vector<long>, DiscreteConditional> per_discrete_value;  // discrete case only
};

/// ABC sample -> KDE -> mode, for spaces with continuous dims only.
AmleResult estimate(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                    const AmleConfig& cfg, RngSeed seed);

/// Mixed-space variant: partitions the accepted draws by discrete value,
/// fits a conditional KDE per retained value (>= 2 draws), scores each by
/// empirical mass times conditional density maximum, and returns the best.
AmleResult estimate_discrete(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                             const AmleConfig& cfg, RngSeed seed);

/// Re-simulates the observed dataset each replicate (fresh-data studies).
struct ObservationGenerator {
  ParameterVector theta_true;
  RngSeed data_seed;
};

using ObservationSource = std::variant<SummaryVector, ObservationGenerator>;

enum class ReplicateStatus { kOk, kPartialSample, kDegenerate, kFailed };

std::string to_string(ReplicateStatus s);

struct ReplicateRow {
  int replicate = 0;
  RngSeed seed;
  ReplicateStatus status = ReplicateStatus::kOk;
  std::string message;
  AmleResult result;  // valid when status == kOk
};

struct ParameterQuartiles {
  std::string name;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct StudyResult {
  std::vector<ReplicateRow> rows;
  std::vector<ParameterQuartiles> summary;  // over successful replicates
  int failures = 0;
};

/// R independent AMLE runs with per-replicate derived streams. Fixed-data
/// mode shares the observed summary; fresh-data mode re-simulates the
/// observation per replicate. Individual failures are recorded, not fatal.
StudyResult replicate_study(const ModelSpec& model, const ParameterSpace& space, const ObservationSource& source,
                            const AmleConfig& cfg, int replicates, RngSeed seed);

}  // namespace amle
