#include "entlab/dist_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "entlab/rng.hpp"

namespace entlab {

double stable_sum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

namespace {

void validate_probabilities(std::span<const double> probs, const char* what) {
  if (probs.empty()) {
    throw Error(std::string(what) + ": empty support");
  }
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(std::string(what) + ": negative or non-finite probability");
    }
  }
  const double total = stable_sum(probs);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(std::string(what) + ": probabilities do not sum to 1");
  }
}

std::vector<double> log2_of(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  std::transform(probs.begin(), probs.end(), out.begin(), [](double p) {
    return p > 0.0 ? std::log2(p) : -std::numeric_limits<double>::infinity();
  });
  return out;
}

// p * log2(p) given log2(p), with 0 log 0 = 0.
double plogp(double log2p) {
  if (log2p == -std::numeric_limits<double>::infinity()) {
    return 0.0;
  }
  return std::exp2(log2p) * log2p;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) {
  validate_probabilities(probs, "Pmf");
  log2_ = log2_of(probs);
  prob_ = std::move(probs);
}

Pmf::Pmf(std::vector<double> probs, std::vector<double> log2_probs)
    : prob_(std::move(probs)), log2_(std::move(log2_probs)) {}

Pmf Pmf::from_weights(std::span<const double> weights) {
  if (weights.empty()) {
    throw Error("Pmf: empty support");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("Pmf: negative or non-finite weight");
    }
  }
  const double total = stable_sum(weights);
  if (!(total > 0.0)) {
    throw Error("Pmf: weights sum to zero");
  }
  std::vector<double> probs(weights.size());
  std::transform(weights.begin(), weights.end(), probs.begin(), [total](double w) { return w / total; });
  return Pmf(std::move(probs));
}

Pmf Pmf::from_log2_weights(std::span<const double> log2_weights) {
  if (log2_weights.empty()) {
    throw Error("Pmf: empty support");
  }
  const double top = *std::max_element(log2_weights.begin(), log2_weights.end());
  if (!std::isfinite(top)) {
    throw Error("Pmf: no finite log2 weight");
  }
  std::vector<double> scaled(log2_weights.size());
  std::transform(log2_weights.begin(), log2_weights.end(), scaled.begin(),
                 [top](double l) { return std::exp2(l - top); });
  const double log2_total = top + std::log2(stable_sum(scaled));

  std::vector<double> log2p(log2_weights.size());
  std::vector<double> probs(log2_weights.size());
  for (std::size_t i = 0; i < log2_weights.size(); ++i) {
    log2p[i] = log2_weights[i] - log2_total;
    probs[i] = std::exp2(log2p[i]);
  }
  if (std::abs(stable_sum(probs) - 1.0) > kSumTolerance) {
    throw Error("Pmf: probabilities do not sum to 1");
  }
  return Pmf(std::move(probs), std::move(log2p));
}

Pmf Pmf::uniform(std::size_t support_size) {
  if (support_size == 0) {
    throw Error("Pmf: empty support");
  }
  return Pmf(std::vector<double>(support_size, 1.0 / static_cast<double>(support_size)));
}

Pmf Pmf::point_mass(std::size_t support_size, std::size_t at) {
  if (at >= support_size) {
    throw Error("Pmf: point mass outside support");
  }
  std::vector<double> probs(support_size, 0.0);
  probs[at] = 1.0;
  return Pmf(std::move(probs));
}

double Pmf::min_positive() const {
  double best = std::numeric_limits<double>::infinity();
  for (double p : prob_) {
    if (p > 0.0) {
      best = std::min(best, p);
    }
  }
  return best;
}

JointPmf::JointPmf(std::vector<Row> table) : table_(std::move(table)) {
  std::vector<double> flat;
  flat.reserve(table_.size() * 2);
  for (const auto& row : table_) {
    flat.push_back(row[0]);
    flat.push_back(row[1]);
  }
  validate_probabilities(flat, "JointPmf");
}

JointPmf JointPmf::from_marginal_and_conditional(const Pmf& px, std::span<const double> p_y1_given_x) {
  if (p_y1_given_x.size() != px.support_size()) {
    throw Error("JointPmf: conditional size does not match marginal");
  }
  std::vector<Row> table(px.support_size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    const double q = p_y1_given_x[x];
    if (!(q >= 0.0 && q <= 1.0)) {
      throw Error("JointPmf: conditional outside [0, 1]");
    }
    table[x] = {px.prob(x) * (1.0 - q), px.prob(x) * q};
  }
  return JointPmf(std::move(table));
}

Pmf JointPmf::marginal_x() const {
  std::vector<double> probs(table_.size());
  for (std::size_t x = 0; x < table_.size(); ++x) {
    probs[x] = table_[x][0] + table_[x][1];
  }
  return Pmf::from_weights(probs);
}

JointPmf::Row JointPmf::marginal_y() const {
  std::vector<double> col0(table_.size()), col1(table_.size());
  for (std::size_t x = 0; x < table_.size(); ++x) {
    col0[x] = table_[x][0];
    col1[x] = table_[x][1];
  }
  return {stable_sum(col0), stable_sum(col1)};
}

double entropy(const Pmf& p) {
  std::vector<double> terms(p.support_size());
  const auto log2p = p.log2_probs();
  std::transform(log2p.begin(), log2p.end(), terms.begin(), plogp);
  return std::max(0.0, -stable_sum(terms));
}

double mutual_information(const JointPmf& j) {
  const Pmf px = j.marginal_x();
  const auto py = j.marginal_y();
  std::vector<double> terms;
  terms.reserve(j.x_support_size() * 2);
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    for (Label y = 0; y < 2; ++y) {
      const double pxy = j.prob(x, y);
      if (pxy > 0.0) {
        terms.push_back(pxy * std::log2(pxy / (px.prob(x) * py[y])));
      }
    }
  }
  // Rounding can push an independent joint a few ulps below zero.
  return std::max(0.0, stable_sum(terms));
}

double binary_entropy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error("binary_entropy: argument outside [0, 1]");
  }
  if (eps == 0.0 || eps == 1.0) {
    return 0.0;
  }
  return -eps * std::log2(eps) - (1.0 - eps) * std::log2(1.0 - eps);
}

double conditional_entropy_y_given_x(const JointPmf& j) {
  std::vector<double> terms;
  terms.reserve(j.x_support_size() * 2);
  for (const auto& row : j.table()) {
    const double px = row[0] + row[1];
    for (double pxy : row) {
      if (pxy > 0.0) {
        terms.push_back(-pxy * std::log2(pxy / px));
      }
    }
  }
  return std::max(0.0, stable_sum(terms));
}

std::string source_id_of(const JointPmf& j) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  auto feed = [&hash](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash ^= (word >> (8 * i)) & 0xFF;
      hash *= 0x100000001B3ull;
    }
  };
  feed(j.x_support_size());
  for (const auto& row : j.table()) {
    feed(std::bit_cast<std::uint64_t>(row[0]));
    feed(std::bit_cast<std::uint64_t>(row[1]));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "joint-%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Dataset sample(const JointPmf& j, std::size_t n, std::uint64_t seed) {
  return sample(j, n, seed, source_id_of(j));
}

Dataset sample(const JointPmf& j, std::size_t n, std::uint64_t seed, std::string source_id) {
  if (n == 0) {
    throw Error("sample: n must be >= 1");
  }
  const std::size_t cells = j.x_support_size() * 2;
  std::vector<double> cumulative(cells);
  std::size_t last_positive = 0;
  long double running = 0.0L;
  for (std::size_t c = 0; c < cells; ++c) {
    const double p = j.prob(c / 2, static_cast<Label>(c % 2));
    running += p;
    cumulative[c] = static_cast<double>(running);
    if (p > 0.0) {
      last_positive = c;
    }
  }

  const rng::CounterStream stream(seed);
  Dataset out;
  out.seed = seed;
  out.source_id = std::move(source_id);
  out.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.unit_at(i);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t cell = it == cumulative.end() ? last_positive : static_cast<std::size_t>(it - cumulative.begin());
    out.pairs.push_back({static_cast<Symbol>(cell / 2), static_cast<Label>(cell % 2)});
  }
  return out;
}

JointPmf empirical(const Dataset& s, std::size_t x_support_size) {
  if (s.empty()) {
    throw Error("empty sample");
  }
  std::vector<std::array<std::size_t, 2>> counts(x_support_size, {0, 0});
  for (const auto& [x, y] : s.pairs) {
    if (x >= x_support_size || y > 1) {
      throw Error("empirical: sample point outside support");
    }
    ++counts[x][y];
  }
  const double n = static_cast<double>(s.size());
  std::vector<JointPmf::Row> table(x_support_size);
  for (std::size_t x = 0; x < x_support_size; ++x) {
    table[x] = {static_cast<double>(counts[x][0]) / n, static_cast<double>(counts[x][1]) / n};
  }
  return JointPmf(std::move(table));
}

double total_variation(const JointPmf& a, const JointPmf& b) {
  if (a.x_support_size() != b.x_support_size()) {
    throw Error("total_variation: support mismatch");
  }
  std::vector<double> diffs;
  diffs.reserve(a.x_support_size() * 2);
  for (std::size_t x = 0; x < a.x_support_size(); ++x) {
    for (Label y = 0; y < 2; ++y) {
      diffs.push_back(std::abs(a.prob(x, y) - b.prob(x, y)));
    }
  }
  return 0.5 * stable_sum(diffs);
}

}  // namespace entlab
