#pragma once

// Special distribution families: heavy-tailed entropy-limited distributions
// (HTELD), random entropy-limited Pmfs, and i.i.d. Bernoulli products.

#include <cstdint>
#include <optional>

#include "entlab/dist_core.hpp"

namespace entlab {

// Parameters of a realized HTELD: mass 1 - eps on symbol 0 and alpha on each of
// the m tail symbols 1..m. m is an integer (stored as a double because it can
// exceed 2^64); the log2 fields stay exact when m or alpha leave double range.
struct HteldSpec {
  double gamma = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  double log2_alpha = 0.0;
  double m = 0.0;
  double log2_m = 0.0;
  // The real-valued tail size before rounding, log2 of (2^{(gamma - H(eps))/eps}).
  double log2_m_unrounded = 0.0;
  double achieved_entropy = 0.0;

  bool heavy_tail() const { return m >= 2.0; }
};

struct HteldOptions {
  // Reject the degenerate single-element tail (alpha > eps / 2).
  bool require_heavy_tail = false;
  // Tail sizes above this are kept implicit.
  double materialize_limit = 16777216.0;  // 2^24
};

// -(1 - eps) log2(1 - eps) - eps log2(alpha).
double hteld_entropy_closed_form(double eps, double log2_alpha);

class Hteld {
 public:
  Hteld(HteldSpec spec, std::optional<Pmf> pmf) : spec_(spec), pmf_(std::move(pmf)) {}

  const HteldSpec& spec() const { return spec_; }
  bool materialized() const { return pmf_.has_value(); }
  // Throws for implicit distributions.
  const Pmf& pmf() const;

  bool in_support(Symbol x) const;
  bool in_tail(Symbol x) const { return x >= 1 && in_support(x); }
  double prob(Symbol x) const;
  double log2_prob(Symbol x) const;

  // Number of support symbols as a double (m + 1).
  double support_size() const { return spec_.m + 1.0; }

  // Inverse CDF on the head/tail split, then a uniform tail index.
  // Throws when the tail cannot be indexed by 64-bit symbols.
  Symbol sample_symbol(std::uint64_t split_bits, std::uint64_t index_bits) const;

 private:
  HteldSpec spec_;
  std::optional<Pmf> pmf_;
};

// Errors: "entropy below feasibility" when gamma < H(eps); "tail not heavy"
// only under options.require_heavy_tail.
Hteld build_hteld(double gamma, double eps, const HteldOptions& options = {});

// An HTELD with labels: symbol 0 has label 0, tail symbols carry i.i.d.
// uniform labels that are a pure function of (label_seed, x).
class LabeledHteld {
 public:
  LabeledHteld(Hteld dist, std::uint64_t label_seed) : dist_(std::move(dist)), label_seed_(label_seed) {}

  const Hteld& dist() const { return dist_; }
  std::uint64_t label_seed() const { return label_seed_; }

  Label label(Symbol x) const;
  // Materialized HTELDs only.
  JointPmf joint() const;
  Dataset sample(std::size_t n, std::uint64_t seed) const;
  std::string source_id() const;

 private:
  Hteld dist_;
  std::uint64_t label_seed_;
};

// A Pmf with entropy <= h_max: a Dirichlet(1,...,1) draw tempered
// (q proportional to p^beta) until its entropy drops below h_max.
Pmf random_entropy_limited(double h_max, std::size_t support_size, std::uint64_t seed);

// X = (W_1, ..., W_L) with W_i i.i.d. Bernoulli(p). Outcomes are summarized by
// their success count; nothing is enumerated over the 2^L support.
class FactorizedBernoulli {
 public:
  FactorizedBernoulli(std::uint64_t l, double p);

  std::uint64_t l() const { return l_; }
  double p() const { return p_; }
  double entropy_rate_bits() const { return entropy_rate_bits_; }
  double total_entropy_bits() const { return static_cast<double>(l_) * entropy_rate_bits_; }
  double total_entropy_nats() const;

  // log2 probability of one particular outcome with k successes.
  double log2_prob_of_outcome(std::uint64_t successes) const;
  // -log2 rho(X) for an outcome with k successes.
  double surprisal_bits(std::uint64_t successes) const { return -log2_prob_of_outcome(successes); }
  // Var(-log2 p(W)) for a single component.
  double surprisal_variance_bits2() const;

  std::uint64_t sample_successes(std::uint64_t seed, std::uint64_t index) const;

 private:
  std::uint64_t l_;
  double p_;
  double entropy_rate_bits_;
};

FactorizedBernoulli factorized_bernoulli(std::uint64_t l, double p);

// Pr{at least two successes} in L Bernoulli(p) trials.
double typicality_demo(std::uint64_t l, double p);

}  // namespace entlab
