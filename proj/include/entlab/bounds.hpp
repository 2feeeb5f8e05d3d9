#pragma once

// Closed-form bound calculators. Quantities that can be astronomically large
// come back as BoundValue (log2 domain).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "entlab/constructions.hpp"
#include "entlab/dist_core.hpp"
#include "entlab/hypotheses.hpp"
#include "entlab/learners.hpp"

namespace entlab {

class BoundValue {
 public:
  static BoundValue from_log2(double log2_value);
  static BoundValue from_linear(double value);

  double log2_value() const { return log2_value_; }
  // Present when 2^log2_value is a finite, normal double.
  std::optional<double> linear_value() const { return linear_; }

 private:
  explicit BoundValue(double log2_value);

  double log2_value_;
  std::optional<double> linear_;
};

// Base of the log(1/delta) confidence term.
enum class ConfidenceLogBase { two, e };

inline constexpr ConfidenceLogBase kDefaultConfidenceBase = ConfidenceLogBase::two;

double confidence_log(double delta, ConfidenceLogBase base = kDefaultConfidenceBase);

// N = (2^{6h/eps} + log(1/delta)) / eps^2.
BoundValue sample_complexity(double h, double eps, double delta,
                             ConfidenceLogBase base = kDefaultConfidenceBase);

// Both readings of the closing sample-size display of the upper-bound proof,
//   printed:   (2^{h/(r eps'^2)} + 2 + log(1/delta)) / (2 log2(e) (1-r)^2 eps')
//   corrected: (2^{h/(r eps')}   + 2 + log(1/delta)) / (2 log2(e) (1-r)^2 eps'^2)
// with eps' = eps / 3. Only the corrected reading follows from the union
// bound it concludes; see union_failure_log2.
struct ProofFormSampleSize {
  BoundValue printed;
  BoundValue corrected;
};
ProofFormSampleSize proof_form_sample_size(double h, double eps, double delta, double r = 0.5,
                                           ConfidenceLogBase base = kDefaultConfidenceBase);

// log2 of the union-bound failure probability behind the upper bound at
// sample size n: |F_alpha| 2 e^{-2 n eps'^2} + e^{-2 n (1-r)^2 eps'^2},
// with log2 |F_alpha| = 2^{h/(r eps')} and eps' = eps / 3.
double union_failure_log2(double h, double eps, double n, double r = 0.5);

// 2^{(h-1)/eps}.
BoundValue hteld_lower_bound(double h, double eps);

// min(1, class_size 2 e^{-2 n eps^2}).
double finite_class_bound(double class_size, std::uint64_t n, double eps);
double finite_class_bound_log2_size(double log2_class_size, std::uint64_t n, double eps);

// e^{-2 n (1-r)^2 eps^2}.
double hoeffding_partition_bound(std::uint64_t n, double eps, double r);

// H / log2(1/alpha), clipped to [0, 1].
double markov_entropy_tail(double h, Threshold alpha);
double markov_entropy_tail(double h, double alpha);

// 1 - e^{-eps}.
double factorized_tail_bound(double eps);

// 1 - (1 - z)^l, valid for z <= 1/(2l - 1).
double m_l(double z, std::uint64_t l);

struct MonteCarloEstimate {
  double p_hat = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo estimate of Pr{Z_1 + ... + Z_l >= 1} with Z_i i.i.d. Bernoulli(z).
MonteCarloEstimate m_l_achievability(double z, std::uint64_t l, std::uint64_t trials, std::uint64_t seed);

// L sigma^2 / (H(X)^2 ((1-eps)/eps)^2), deliberately unclipped.
double chebyshev_tail_bound(std::uint64_t l, double var_hw_bits2, double h_x, double eps);

struct RestrictedClassParams {
  double eta = 0.0;
  double p_min = 0.0;
  double big_c = 0.0;
  std::size_t support_size = 0;  // after pruning zero-probability symbols
};

struct RestrictedClassRejection {
  std::string reason;
};

using RestrictedClassResult = std::variant<RestrictedClassParams, RestrictedClassRejection>;

// Zero-probability symbols are pruned before the check; big_c = 1.01 / p_min.
RestrictedClassResult restricted_class_check(const Pmf& p, double eta);
RestrictedClassResult restricted_class_check(const Hteld& p, double eta);

// C^2 log(1/delta) I_hat / eps^2 (logarithmic factors in n dropped).
double prior_bound_samples(const RestrictedClassParams& rc, double delta, double i_hat, double eps,
                           ConfidenceLogBase base = kDefaultConfidenceBase);

// E_{X,Y}[-sum_xhat p(xhat|X) log2 p(Y|xhat)] with the decoder p(y|xhat)
// obtained from j and enc by exact marginalization.
double cross_entropy_risk(const Encoder& enc, const JointPmf& j);
// Same loss with the decoder marginalized from `decoder_source` instead,
// e.g. a decoder fitted on the training sample scored against the truth.
double cross_entropy_risk(const Encoder& enc, const JointPmf& j, const JointPmf& decoder_source);
double empirical_cross_entropy_risk(const Encoder& enc, const Dataset& s, std::size_t x_support_size);

}  // namespace entlab
