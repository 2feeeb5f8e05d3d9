#pragma once

// Binary hypotheses, their true and empirical risks, the probability-weighted
// disagreement distance, and the alpha-probable input projection.

#include <cstdint>
#include <map>
#include <vector>

#include "entlab/constructions.hpp"
#include "entlab/dist_core.hpp"

namespace entlab {

// A total classifier X -> {0, 1}: a finite set of explicitly stored labels and
// a default label for every other symbol. Explicit entries may coincide with
// the default; they still count as "recorded" (e.g. seen by a learner).
class Hypothesis {
 public:
  explicit Hypothesis(Label default_label = 0);

  // Explicit label for every x in [0, labels.size()).
  static Hypothesis from_labels(const std::vector<Label>& labels, Label default_label = 0);
  static Hypothesis from_entries(const std::map<Symbol, Label>& entries, Label default_label);
  // Labels given by the bits of `mask` over symbols 0..width-1 (bit x is f(x)).
  static Hypothesis from_mask(std::uint64_t mask, std::size_t width);
  static Hypothesis constant(Label label) { return Hypothesis(label); }

  Label operator()(Symbol x) const {
    if (x < dense_.size()) {
      const std::int8_t v = dense_[x];
      return v < 0 ? default_ : static_cast<Label>(v);
    }
    if (sparse_.empty()) {
      return default_;
    }
    auto it = sparse_.find(x);
    return it == sparse_.end() ? default_ : it->second;
  }

  Label default_label() const { return default_; }
  std::map<Symbol, Label> entries() const;
  std::size_t entry_count() const;

  template <class Fn>
  void for_each_entry(Fn&& fn) const {
    for (std::size_t x = 0; x < dense_.size(); ++x) {
      if (dense_[x] >= 0) {
        fn(static_cast<Symbol>(x), static_cast<Label>(dense_[x]));
      }
    }
    for (const auto& [x, label] : sparse_) {
      fn(x, label);
    }
  }

  Hypothesis complement() const;

  // Equality as functions on all symbols.
  bool operator==(const Hypothesis& other) const;

 private:
  std::vector<std::int8_t> dense_;  // -1: no explicit entry
  std::map<Symbol, Label> sparse_;  // keys >= dense_.size()
  Label default_;
};

// A probability threshold alpha held exactly, either as a linear value or as
// -log2(alpha) in extended precision (for alpha = 2^{-H/eps} forms).
class Threshold {
 public:
  static Threshold linear(double alpha);
  static Threshold from_neg_log2(long double bits);
  // alpha = 2^{-h/eps}.
  static Threshold entropy_ratio(double h, double eps);

  double value() const;
  long double neg_log2() const;
  bool is_linear() const { return linear_; }

  // rho(x) >= alpha, judged in the domain the threshold was given in.
  bool admits(double prob, double log2_prob) const;

 private:
  Threshold(bool linear, double alpha, long double bits) : linear_(linear), alpha_(alpha), bits_(bits) {}

  bool linear_;
  double alpha_;
  long double bits_;
};

// X_{>= alpha} for one distribution.
class ProjectionSpec {
 public:
  // Explicit high set (sorted, unique).
  ProjectionSpec(Threshold alpha, std::vector<Symbol> members);
  // Every symbol of an implicit support 0..support_max is in the high set.
  static ProjectionSpec whole_implicit_support(Threshold alpha, double support_max);

  const Threshold& alpha() const { return alpha_; }
  bool covers_implicit_support() const { return implicit_all_; }
  const std::vector<Symbol>& members() const { return members_; }
  bool contains(Symbol x) const;
  // |X_{>= alpha}|.
  double size() const;
  // log2 |F_alpha| = |X_{>= alpha}|.
  double log2_center_count() const { return size(); }
  // log2 log2 of the bound |F_alpha| <= 2^{1/alpha}, i.e. -log2(alpha).
  double log2_log2_center_bound() const { return static_cast<double>(alpha_.neg_log2()); }

 private:
  Threshold alpha_;
  std::vector<Symbol> members_;
  bool implicit_all_ = false;
  double support_max_ = 0.0;
};

double true_risk(const Hypothesis& f, const JointPmf& j);
// Implicit-support risk: explicit entries are scored against the realized
// labels; the remaining tail mass is charged with its label randomness
// marginalized (each unrecorded tail symbol errs with probability 1/2).
double true_risk(const Hypothesis& f, const LabeledHteld& source);

std::size_t error_count(const Hypothesis& f, const Dataset& s);
// (1/N) sum 1(f(x_i) != y_i).
double empirical_risk(const Hypothesis& f, const Dataset& s);

double hypothesis_distance(const Hypothesis& f, const Hypothesis& g, const Pmf& p);
double hypothesis_distance(const Hypothesis& f, const Hypothesis& g, const Hteld& p);

ProjectionSpec high_prob_set(const Pmf& p, Threshold alpha);
ProjectionSpec high_prob_set(const Hteld& p, Threshold alpha);

// g_alpha(f): f on X_{>= alpha}, 0 elsewhere.
Hypothesis project(const Hypothesis& f, const ProjectionSpec& spec);

// log2 of the bound |F_alpha| <= 2^{2^{h/eps}}, i.e. 2^{h/eps}.
double covering_size_bound(double h, double eps);

// theta_alpha = rho(x not in X_{>= alpha}).
double tail_mass(const Pmf& p, Threshold alpha);
double tail_mass(const Hteld& p, Threshold alpha);

struct DecompositionTerms {
  double gap = 0.0;    // |R_S(h) - R(h)|
  double term1 = 0.0;  // |R_S(g(h)) - R(g(h))|
  double term2 = 0.0;  // |R(g(h)) - R(h)|
  double term3 = 0.0;  // |R_S(g(h)) - R_S(h)|
  // term1 + term2 + term3, summed exactly then rounded.
  double total = 0.0;
  // gap <= term1 + term2 + term3 evaluated in exact rational arithmetic.
  bool triangle_holds = false;
};

// All four risks are evaluated exactly (rationals), so `gap <= total` holds
// in floating point whenever the exact inequality does.
DecompositionTerms decomposition_terms(const Hypothesis& h, const ProjectionSpec& spec, const Dataset& s,
                                       const JointPmf& j);

}  // namespace entlab
