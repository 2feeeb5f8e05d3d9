#pragma once

// Seeded Monte Carlo experiments. Trial t at sample size n draws from seed
// trial_seed(master_seed, n, t), trials run in parallel, and results are
// reduced in trial order so outputs are identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entlab/bounds.hpp"
#include "entlab/constructions.hpp"
#include "entlab/dist_core.hpp"
#include "entlab/hypotheses.hpp"
#include "entlab/serialization.hpp"

namespace entlab {

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t n, std::uint64_t trial);

struct HteldSourceSpec {
  double gamma = 2.0;
  double eps = 0.1;
  std::uint64_t label_seed = 0;
};

// Labels for a random entropy-limited marginal.
enum class LabelRule { random, coin, zero };

struct EntropyLimitedSourceSpec {
  double h_max = 2.0;
  std::size_t support = 16;
  std::uint64_t seed = 0;
  LabelRule labels = LabelRule::random;
};

struct ExplicitSourceSpec {
  JointPmf joint;
};

using DistributionSpec = std::variant<HteldSourceSpec, EntropyLimitedSourceSpec, ExplicitSourceSpec>;

enum class LearnerId { memorizer, center, constant0, constant1 };

struct ExperimentConfig {
  DistributionSpec distribution;
  LearnerId learner = LearnerId::memorizer;
  std::vector<std::size_t> n_list;
  double eps = 0.1;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::string output;  // empty: stdout
};

// Throws ConfigError. Relative "path" entries resolve against base_dir.
ExperimentConfig parse_experiment_config(const Json& j, const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

// A labeled data source with exactly computable true risk.
class Source {
 public:
  explicit Source(JointPmf joint);
  explicit Source(LabeledHteld hteld);

  Dataset sample(std::size_t n, std::uint64_t seed) const;
  double true_risk(const Hypothesis& h) const;
  // H(X) in bits.
  double entropy_bits() const;
  ProjectionSpec high_prob_set(Threshold alpha) const;
  // Sample range of x, or nullopt when the support is implicit.
  std::optional<std::size_t> x_support_size() const;

 private:
  std::variant<JointPmf, LabeledHteld> impl_;
  std::optional<JointPmf> joint_;  // cached table of a materialized HTELD
};

Source make_source(const DistributionSpec& spec);

struct GapEstimate {
  std::size_t n = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;  // fraction of trials with |R_S - R| >= eps
  double ci95 = 0.0;
  double mean_gap = 0.0;
  double mean_true_risk = 0.0;
  double mean_empirical_risk = 0.0;
};

double binomial_ci95(double p_hat, std::size_t trials);

std::vector<GapEstimate> gap_experiment(const ExperimentConfig& cfg);
std::string gap_csv(const std::vector<GapEstimate>& rows);

struct HardnessRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_risk = 0.0;
  double threshold = 0.0;
  double frac_at_least = 0.0;  // fraction of trials with true risk >= threshold
  double ci95 = 0.0;
};

// Memorizer (default label 0) on HTELD(gamma, eps) with one fixed labeling.
// threshold defaults to 0.9 * eps / 2.
std::vector<HardnessRow> hteld_hardness(double gamma, double eps, const std::vector<std::size_t>& n_list,
                                        std::size_t trials, std::uint64_t master_seed,
                                        std::optional<double> threshold = std::nullopt);
std::string hardness_csv(const std::vector<HardnessRow>& rows);

struct Lemma4Row {
  std::size_t n = 0;
  std::size_t trials = 0;
  double bound = 0.0;
  // |R_S(h_S) - R_S(g_alpha(h_S))| >= eps.
  double p_hat_gap = 0.0;
  // The empirical tail frequency S(X < alpha) >= eps, which contains the event above.
  double p_hat_tail = 0.0;
  double se_gap = 0.0;
  double se_tail = 0.0;
  bool within_bound = false;  // both estimates <= bound + 3 s.e.
};

struct Lemma4Report {
  double neg_log2_alpha = 0.0;
  double tail_mass = 0.0;
  std::vector<Lemma4Row> rows;
};

// Memorizer on fair-coin labels over p, alpha = 2^{-H/(r eps)}.
Lemma4Report lemma4_verify(const Pmf& p, double eps, double r, const std::vector<std::size_t>& n_list,
                           std::size_t trials, std::uint64_t seed);
std::string lemma4_csv(const Lemma4Report& report);

struct Fig2Row {
  double eps = 0.0;
  double markov_bound = 0.0;
  double factorized_bound = 0.0;
};

// eps_i = i / (points + 1) for i = 1..points.
std::vector<Fig2Row> fig2_data(std::size_t points);
std::string fig2_csv(const std::vector<Fig2Row>& rows);
std::string fig2_svg(const std::vector<Fig2Row>& rows);

struct PriorDemoRow {
  std::size_t support = 0;
  double big_c = 0.0;
  double bound = 0.0;
  double coupon_expected = 0.0;   // n H_n
  double coupon_simulated = 0.0;  // mean over coupon_trials
  double ratio = 0.0;             // bound / coupon_expected
};

PriorDemoRow prior_bound_demo(std::size_t support, double delta, double eps, std::uint64_t seed,
                              double i_hat = 1.0, std::size_t coupon_trials = 200);
std::string prior_demo_csv(const std::vector<PriorDemoRow>& rows);

}  // namespace entlab
