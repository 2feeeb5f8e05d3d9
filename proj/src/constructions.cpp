#include "entlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "entlab/rng.hpp"

namespace entlab {

double hteld_entropy_closed_form(double eps, double log2_alpha) {
  const double head = 1.0 - eps;
  const double head_term = head > 0.0 ? -head * std::log2(head) : 0.0;
  return head_term - eps * log2_alpha;
}

const Pmf& Hteld::pmf() const {
  if (!pmf_) {
    throw Error("Hteld: distribution is implicit");
  }
  return *pmf_;
}

bool Hteld::in_support(Symbol x) const { return static_cast<double>(x) <= spec_.m; }

double Hteld::prob(Symbol x) const {
  if (!in_support(x)) {
    return 0.0;
  }
  return x == 0 ? 1.0 - spec_.eps : spec_.alpha;
}

double Hteld::log2_prob(Symbol x) const {
  if (!in_support(x)) {
    return -std::numeric_limits<double>::infinity();
  }
  return x == 0 ? std::log2(1.0 - spec_.eps) : spec_.log2_alpha;
}

Symbol Hteld::sample_symbol(std::uint64_t split_bits, std::uint64_t index_bits) const {
  if (rng::unit_from_bits(split_bits) < 1.0 - spec_.eps) {
    return 0;
  }
  if (!(spec_.m < 0x1.0p64)) {
    throw Error("Hteld: tail too large to index with 64-bit symbols");
  }
  return 1 + rng::bounded_from_bits(index_bits, static_cast<std::uint64_t>(spec_.m));
}

Hteld build_hteld(double gamma, double eps, const HteldOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error("build_hteld: eps outside (0, 1)");
  }
  if (gamma < binary_entropy(eps) - 1e-12) {
    throw Error("entropy below feasibility");
  }

  HteldSpec spec;
  spec.gamma = gamma;
  spec.eps = eps;
  spec.log2_m_unrounded = std::max(0.0, (gamma - binary_entropy(eps)) / eps);

  // Round m to the nearest integer >= 1 and re-solve alpha = eps / m.
  if (spec.log2_m_unrounded < 1000.0) {
    spec.m = std::max(1.0, std::round(std::exp2(spec.log2_m_unrounded)));
    spec.log2_m = std::log2(spec.m);
  } else {
    // Beyond double range; rounding to an integer does not change log2 m.
    spec.m = std::numeric_limits<double>::infinity();
    spec.log2_m = spec.log2_m_unrounded;
  }
  spec.log2_alpha = std::log2(eps) - spec.log2_m;
  spec.alpha = std::isfinite(spec.m) ? eps / spec.m : std::exp2(spec.log2_alpha);

  if (options.require_heavy_tail && spec.alpha > eps / 2.0) {
    throw Error("tail not heavy");
  }

  std::optional<Pmf> pmf;
  if (spec.m <= options.materialize_limit) {
    const auto tail = static_cast<std::size_t>(spec.m);
    std::vector<double> probs(tail + 1, spec.alpha);
    probs[0] = 1.0 - eps;
    pmf.emplace(std::move(probs));
    spec.achieved_entropy = entropy(*pmf);
  } else {
    spec.achieved_entropy = hteld_entropy_closed_form(eps, spec.log2_alpha);
  }
  return Hteld(spec, std::move(pmf));
}

Label LabeledHteld::label(Symbol x) const {
  if (x == 0) {
    return 0;
  }
  return static_cast<Label>(rng::CounterStream(label_seed_, 0x4C4142454Cull).bits_at(x) >> 63);
}

JointPmf LabeledHteld::joint() const {
  const Pmf& px = dist_.pmf();
  std::vector<double> q(px.support_size());
  for (std::size_t x = 0; x < q.size(); ++x) {
    q[x] = label(x);
  }
  return JointPmf::from_marginal_and_conditional(px, q);
}

Dataset LabeledHteld::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) {
    throw Error("sample: n must be >= 1");
  }
  const rng::CounterStream stream(seed);
  Dataset out;
  out.seed = seed;
  out.source_id = source_id();
  out.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto block = stream.block_at(i);
    const std::uint64_t split = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    const std::uint64_t index = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    const Symbol x = dist_.sample_symbol(split, index);
    out.pairs.push_back({x, label(x)});
  }
  return out;
}

std::string LabeledHteld::source_id() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "hteld(gamma=%.17g,eps=%.17g,label_seed=%llu)", dist_.spec().gamma,
                dist_.spec().eps, static_cast<unsigned long long>(label_seed_));
  return buf;
}

namespace {

Pmf tempered(std::span<const double> log2p, double beta) {
  std::vector<double> weights(log2p.size());
  std::transform(log2p.begin(), log2p.end(), weights.begin(), [beta](double l) { return beta * l; });
  return Pmf::from_log2_weights(weights);
}

}  // namespace

Pmf random_entropy_limited(double h_max, std::size_t support_size, std::uint64_t seed) {
  if (support_size == 0) {
    throw Error("random_entropy_limited: empty support");
  }
  if (h_max > std::log2(static_cast<double>(support_size)) + 1e-12) {
    throw Error("random_entropy_limited: h_max exceeds log2(support_size)");
  }

  rng::SequentialEngine engine(seed, 0x44495249ull);
  std::vector<double> log2_weights(support_size);
  for (auto& w : log2_weights) {
    w = std::log2(-std::log(engine.open_unit()));
  }
  const Pmf base = Pmf::from_log2_weights(log2_weights);
  const auto argmax = static_cast<std::size_t>(
      std::max_element(base.probs().begin(), base.probs().end()) - base.probs().begin());

  if (entropy(base) <= h_max) {
    return base;
  }
  if (h_max <= 1e-12) {
    return Pmf::point_mass(support_size, argmax);
  }

  constexpr double kTolerance = 1e-6;
  double lo = 1.0;
  double hi = 2.0;
  while (entropy(tempered(base.log2_probs(), hi)) > h_max) {
    lo = hi;
    hi *= 2.0;
    if (hi > 0x1.0p60) {
      return Pmf::point_mass(support_size, argmax);
    }
  }
  Pmf best = tempered(base.log2_probs(), hi);
  while (h_max - entropy(best) > kTolerance && hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    Pmf candidate = tempered(base.log2_probs(), mid);
    if (entropy(candidate) > h_max) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(candidate);
    }
  }
  return best;
}

FactorizedBernoulli::FactorizedBernoulli(std::uint64_t l, double p) : l_(l), p_(p) {
  if (l == 0) {
    throw Error("factorized_bernoulli: l must be >= 1");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("factorized_bernoulli: p outside (0, 1)");
  }
  entropy_rate_bits_ = binary_entropy(p);
}

double FactorizedBernoulli::total_entropy_nats() const { return total_entropy_bits() * std::log(2.0); }

double FactorizedBernoulli::log2_prob_of_outcome(std::uint64_t successes) const {
  if (successes > l_) {
    return -std::numeric_limits<double>::infinity();
  }
  const double k = static_cast<double>(successes);
  const double failures = static_cast<double>(l_ - successes);
  return k * std::log2(p_) + failures * std::log1p(-p_) / std::log(2.0);
}

double FactorizedBernoulli::surprisal_variance_bits2() const {
  const double spread = std::log2((1.0 - p_) / p_);
  return p_ * (1.0 - p_) * spread * spread;
}

std::uint64_t FactorizedBernoulli::sample_successes(std::uint64_t seed, std::uint64_t index) const {
  rng::SequentialEngine engine(rng::mix_seed(seed, index), 0x42494E4Full);
  std::binomial_distribution<std::uint64_t> draw(l_, p_);
  return draw(engine);
}

FactorizedBernoulli factorized_bernoulli(std::uint64_t l, double p) { return FactorizedBernoulli(l, p); }

double typicality_demo(std::uint64_t l, double p) {
  if (l < 2) {
    throw Error("typicality_demo: l must be >= 2");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error("typicality_demo: p outside [0, 1]");
  }
  if (p == 0.0) {
    return 0.0;
  }
  if (p == 1.0) {
    return 1.0;
  }
  const double L = static_cast<double>(l);
  // ln Pr{0 successes} and ln Pr{exactly 1 success}.
  const double log_none = L * std::log1p(-p);
  const double log_one = std::log(L) + std::log(p) + (L - 1.0) * std::log1p(-p);
  return -std::expm1(log_none) - std::exp(log_one);
}

}  // namespace entlab
