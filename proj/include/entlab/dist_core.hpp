#pragma once

// Finite discrete distributions, information measures in bits, seeded
// sampling and empirical plug-in estimates.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entlab/error.hpp"

namespace entlab {

using Symbol = std::uint64_t;
using Label = std::uint8_t;

inline constexpr double kSumTolerance = 1e-12;

// Compensated (Neumaier) summation.
double stable_sum(std::span<const double> values);

// A probability mass function over symbols 0..support_size-1.
//
// Probabilities are kept in the linear domain together with their log2 values.
// Pmfs built with from_log2_weights keep exact log2 values even where the
// linear probability underflows.
class Pmf {
 public:
  // Throws unless every entry is >= 0 and the total is 1 within kSumTolerance.
  explicit Pmf(std::vector<double> probs);

  static Pmf from_weights(std::span<const double> weights);
  static Pmf from_log2_weights(std::span<const double> log2_weights);
  static Pmf uniform(std::size_t support_size);
  static Pmf point_mass(std::size_t support_size, std::size_t at);

  std::size_t support_size() const { return prob_.size(); }
  double prob(std::size_t x) const { return prob_.at(x); }
  // -inf for zero-probability symbols.
  double log2_prob(std::size_t x) const { return log2_.at(x); }
  std::span<const double> probs() const { return prob_; }
  std::span<const double> log2_probs() const { return log2_; }

  // Smallest strictly positive probability.
  double min_positive() const;

  bool operator==(const Pmf& other) const { return prob_ == other.prob_; }

 private:
  Pmf(std::vector<double> probs, std::vector<double> log2_probs);

  std::vector<double> prob_;
  std::vector<double> log2_;
};

// A joint distribution over (x, y) with y in {0, 1}, stored x-major.
class JointPmf {
 public:
  using Row = std::array<double, 2>;

  explicit JointPmf(std::vector<Row> table);

  // rho(x, y) = rho(x) rho(y | x); each entry of p_y1_given_x is rho(y=1 | x).
  static JointPmf from_marginal_and_conditional(const Pmf& px, std::span<const double> p_y1_given_x);

  std::size_t x_support_size() const { return table_.size(); }
  double prob(std::size_t x, Label y) const { return table_.at(x)[y]; }
  const std::vector<Row>& table() const { return table_; }

  Pmf marginal_x() const;
  Row marginal_y() const;

  bool operator==(const JointPmf& other) const { return table_ == other.table_; }

 private:
  std::vector<Row> table_;
};

struct LabeledPoint {
  Symbol x;
  Label y;
  bool operator==(const LabeledPoint&) const = default;
};

// An i.i.d. training sample together with the provenance needed to regenerate it.
struct Dataset {
  std::vector<LabeledPoint> pairs;
  std::uint64_t seed = 0;
  std::string source_id;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  bool operator==(const Dataset&) const = default;
};

double entropy(const Pmf& p);
double mutual_information(const JointPmf& j);
double binary_entropy(double eps);

// Conditional entropy H(Y | X) of the joint.
double conditional_entropy_y_given_x(const JointPmf& j);

// Stable identifier derived from the table contents.
std::string source_id_of(const JointPmf& j);

// n i.i.d. draws by inverse CDF over the x-major cell order; draw i uses the
// counter block (seed, i).
Dataset sample(const JointPmf& j, std::size_t n, std::uint64_t seed);
Dataset sample(const JointPmf& j, std::size_t n, std::uint64_t seed, std::string source_id);

// Plug-in estimate: cell (x, y) holds count(x, y) / N.
JointPmf empirical(const Dataset& s, std::size_t x_support_size);

double total_variation(const JointPmf& a, const JointPmf& b);

}  // namespace entlab
