#include "entlab/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace entlab {

namespace {

constexpr std::size_t kDenseKeyLimit = std::size_t{1} << 24;

void check_label(Label label) {
  if (label > 1) {
    throw Error("Hypothesis: label must be 0 or 1");
  }
}

}  // namespace

Hypothesis::Hypothesis(Label default_label) : default_(default_label) { check_label(default_label); }

Hypothesis Hypothesis::from_labels(const std::vector<Label>& labels, Label default_label) {
  Hypothesis h(default_label);
  h.dense_.resize(labels.size());
  for (std::size_t x = 0; x < labels.size(); ++x) {
    check_label(labels[x]);
    h.dense_[x] = static_cast<std::int8_t>(labels[x]);
  }
  return h;
}

Hypothesis Hypothesis::from_entries(const std::map<Symbol, Label>& entries, Label default_label) {
  Hypothesis h(default_label);
  if (entries.empty()) {
    return h;
  }
  const Symbol max_key = entries.rbegin()->first;
  const bool dense = max_key < kDenseKeyLimit && max_key <= 8 * entries.size() + 1024;
  if (dense) {
    h.dense_.assign(max_key + 1, -1);
    for (const auto& [x, label] : entries) {
      check_label(label);
      h.dense_[x] = static_cast<std::int8_t>(label);
    }
  } else {
    for (const auto& [x, label] : entries) {
      check_label(label);
    }
    h.sparse_ = entries;
  }
  return h;
}

Hypothesis Hypothesis::from_mask(std::uint64_t mask, std::size_t width) {
  if (width > 64) {
    throw Error("Hypothesis: mask width above 64");
  }
  std::vector<Label> labels(width);
  for (std::size_t x = 0; x < width; ++x) {
    labels[x] = static_cast<Label>((mask >> x) & 1u);
  }
  return from_labels(labels, 0);
}

std::map<Symbol, Label> Hypothesis::entries() const {
  std::map<Symbol, Label> out;
  for_each_entry([&out](Symbol x, Label label) { out.emplace(x, label); });
  return out;
}

std::size_t Hypothesis::entry_count() const {
  return sparse_.size() + static_cast<std::size_t>(std::count_if(
                              dense_.begin(), dense_.end(), [](std::int8_t v) { return v >= 0; }));
}

Hypothesis Hypothesis::complement() const {
  Hypothesis out = *this;
  out.default_ = static_cast<Label>(1 - default_);
  for (auto& v : out.dense_) {
    if (v >= 0) {
      v = static_cast<std::int8_t>(1 - v);
    }
  }
  for (auto& [x, label] : out.sparse_) {
    label = static_cast<Label>(1 - label);
  }
  return out;
}

bool Hypothesis::operator==(const Hypothesis& other) const {
  if (default_ != other.default_) {
    return false;
  }
  bool same = true;
  auto check = [&](Symbol x, Label) { same = same && (*this)(x) == other(x); };
  for_each_entry(check);
  other.for_each_entry(check);
  return same;
}

Threshold Threshold::linear(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error("Threshold: alpha outside (0, 1]");
  }
  return Threshold(true, alpha, -std::log2(static_cast<long double>(alpha)));
}

Threshold Threshold::from_neg_log2(long double bits) {
  if (!(bits >= 0.0L) || !std::isfinite(static_cast<double>(bits))) {
    throw Error("Threshold: -log2(alpha) must be finite and >= 0");
  }
  return Threshold(false, static_cast<double>(std::exp2(-bits)), bits);
}

Threshold Threshold::entropy_ratio(double h, double eps) {
  if (!(eps > 0.0)) {
    throw Error("Threshold: eps must be positive");
  }
  return from_neg_log2(static_cast<long double>(h) / static_cast<long double>(eps));
}

double Threshold::value() const { return alpha_; }

long double Threshold::neg_log2() const { return bits_; }

bool Threshold::admits(double prob, double log2_prob) const {
  if (linear_ && prob >= 1e-300) {
    return prob >= alpha_;
  }
  if (log2_prob == -std::numeric_limits<double>::infinity()) {
    return false;
  }
  return static_cast<long double>(log2_prob) >= -bits_;
}

ProjectionSpec::ProjectionSpec(Threshold alpha, std::vector<Symbol> members)
    : alpha_(alpha), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

ProjectionSpec ProjectionSpec::whole_implicit_support(Threshold alpha, double support_max) {
  ProjectionSpec spec(alpha, {});
  spec.implicit_all_ = true;
  spec.support_max_ = support_max;
  return spec;
}

bool ProjectionSpec::contains(Symbol x) const {
  if (implicit_all_) {
    return static_cast<double>(x) <= support_max_;
  }
  return std::binary_search(members_.begin(), members_.end(), x);
}

double ProjectionSpec::size() const {
  return implicit_all_ ? support_max_ + 1.0 : static_cast<double>(members_.size());
}

double true_risk(const Hypothesis& f, const JointPmf& j) {
  std::vector<double> terms(j.x_support_size());
  for (std::size_t x = 0; x < terms.size(); ++x) {
    terms[x] = j.prob(x, static_cast<Label>(1 - f(x)));
  }
  return stable_sum(terms);
}

double true_risk(const Hypothesis& f, const LabeledHteld& source) {
  const Hteld& dist = source.dist();
  if (dist.materialized()) {
    return true_risk(f, source.joint());
  }
  const HteldSpec& spec = dist.spec();
  long double risk = 0.0L;
  double recorded_tail = 0.0;
  bool head_recorded = false;
  f.for_each_entry([&](Symbol x, Label label) {
    if (!dist.in_support(x)) {
      return;
    }
    if (x == 0) {
      head_recorded = true;
    } else {
      recorded_tail += 1.0;
    }
    if (label != source.label(x)) {
      risk += dist.prob(x);
    }
  });
  if (!head_recorded && f.default_label() != 0) {
    risk += 1.0 - spec.eps;
  }
  const long double unrecorded_mass = static_cast<long double>(spec.eps) -
                                      static_cast<long double>(spec.alpha) * recorded_tail;
  risk += 0.5L * std::max(0.0L, unrecorded_mass);
  return static_cast<double>(risk);
}

std::size_t error_count(const Hypothesis& f, const Dataset& s) {
  std::size_t errors = 0;
  for (const auto& [x, y] : s.pairs) {
    errors += f(x) != y;
  }
  return errors;
}

double empirical_risk(const Hypothesis& f, const Dataset& s) {
  if (s.empty()) {
    throw Error("empty sample");
  }
  return static_cast<double>(error_count(f, s)) / static_cast<double>(s.size());
}

double hypothesis_distance(const Hypothesis& f, const Hypothesis& g, const Pmf& p) {
  std::vector<double> terms(p.support_size(), 0.0);
  for (std::size_t x = 0; x < terms.size(); ++x) {
    if (f(x) != g(x)) {
      terms[x] = p.prob(x);
    }
  }
  return stable_sum(terms);
}

double hypothesis_distance(const Hypothesis& f, const Hypothesis& g, const Hteld& p) {
  if (p.materialized()) {
    return hypothesis_distance(f, g, p.pmf());
  }
  // Symbols recorded by either hypothesis are compared one by one; every other
  // symbol takes both defaults.
  std::map<Symbol, bool> recorded;
  auto collect = [&](Symbol x, Label) {
    if (p.in_support(x)) {
      recorded.emplace(x, f(x) != g(x));
    }
  };
  f.for_each_entry(collect);
  g.for_each_entry(collect);

  long double differing = 0.0L;
  long double recorded_mass = 0.0L;
  for (const auto& [x, differs] : recorded) {
    recorded_mass += p.prob(x);
    if (differs) {
      differing += p.prob(x);
    }
  }
  if (f.default_label() != g.default_label()) {
    differing += std::max(0.0L, 1.0L - recorded_mass);
  }
  return static_cast<double>(differing);
}

ProjectionSpec high_prob_set(const Pmf& p, Threshold alpha) {
  std::vector<Symbol> members;
  for (std::size_t x = 0; x < p.support_size(); ++x) {
    if (alpha.admits(p.prob(x), p.log2_prob(x))) {
      members.push_back(x);
    }
  }
  return ProjectionSpec(alpha, std::move(members));
}

ProjectionSpec high_prob_set(const Hteld& p, Threshold alpha) {
  if (p.materialized()) {
    return high_prob_set(p.pmf(), alpha);
  }
  const HteldSpec& spec = p.spec();
  if (alpha.admits(spec.alpha, spec.log2_alpha)) {
    return ProjectionSpec::whole_implicit_support(alpha, spec.m);
  }
  std::vector<Symbol> members;
  if (alpha.admits(1.0 - spec.eps, std::log2(1.0 - spec.eps))) {
    members.push_back(0);
  }
  return ProjectionSpec(alpha, std::move(members));
}

Hypothesis project(const Hypothesis& f, const ProjectionSpec& spec) {
  if (spec.covers_implicit_support()) {
    return f;
  }
  std::map<Symbol, Label> entries;
  for (Symbol x : spec.members()) {
    entries.emplace(x, f(x));
  }
  return Hypothesis::from_entries(entries, 0);
}

double covering_size_bound(double h, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error("covering_size_bound: eps outside (0, 1)");
  }
  return std::exp2(h / eps);
}

double tail_mass(const Pmf& p, Threshold alpha) {
  std::vector<double> terms(p.support_size(), 0.0);
  for (std::size_t x = 0; x < terms.size(); ++x) {
    if (!alpha.admits(p.prob(x), p.log2_prob(x))) {
      terms[x] = p.prob(x);
    }
  }
  return stable_sum(terms);
}

double tail_mass(const Hteld& p, Threshold alpha) {
  if (p.materialized()) {
    return tail_mass(p.pmf(), alpha);
  }
  const HteldSpec& spec = p.spec();
  double mass = 0.0;
  if (!alpha.admits(1.0 - spec.eps, std::log2(1.0 - spec.eps))) {
    mass += 1.0 - spec.eps;
  }
  if (!alpha.admits(spec.alpha, spec.log2_alpha)) {
    mass += spec.eps;
  }
  return mass;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

Rational exact_true_risk(const Hypothesis& f, const JointPmf& j) {
  Rational risk = 0;
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    risk += Rational(j.prob(x, static_cast<Label>(1 - f(x))));
  }
  return risk;
}

Rational exact_empirical_risk(const Hypothesis& f, const Dataset& s) {
  return Rational(error_count(f, s)) / Rational(s.size());
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

DecompositionTerms decomposition_terms(const Hypothesis& h, const ProjectionSpec& spec, const Dataset& s,
                                       const JointPmf& j) {
  if (s.empty()) {
    throw Error("empty sample");
  }
  const Hypothesis g = project(h, spec);
  const Rational emp_h = exact_empirical_risk(h, s);
  const Rational emp_g = exact_empirical_risk(g, s);
  const Rational true_h = exact_true_risk(h, j);
  const Rational true_g = exact_true_risk(g, j);

  const Rational gap = abs(emp_h - true_h);
  const Rational t1 = abs(emp_g - true_g);
  const Rational t2 = abs(true_g - true_h);
  const Rational t3 = abs(emp_g - emp_h);
  const Rational total = t1 + t2 + t3;

  DecompositionTerms out;
  out.gap = to_double(gap);
  out.term1 = to_double(t1);
  out.term2 = to_double(t2);
  out.term3 = to_double(t3);
  out.total = to_double(total);
  out.triangle_holds = gap <= total;
  return out;
}

}  // namespace entlab
