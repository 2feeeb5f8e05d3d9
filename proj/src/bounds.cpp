#include "entlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entlab/rng.hpp"

namespace entlab {

namespace {

constexpr double kLog2E = std::numbers::log2e;

void check_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(std::string(what) + " outside (0, 1)");
  }
}

// log2(2^a + 2^b).
double log2_add(double a, double b) {
  if (a < b) {
    std::swap(a, b);
  }
  if (b == -std::numeric_limits<double>::infinity()) {
    return a;
  }
  return a + std::log1p(std::exp2(b - a)) * kLog2E;
}

// log2(2^exponent + c) for c >= 0.
double log2_pow2_plus(double exponent, double c) {
  return log2_add(exponent, c > 0.0 ? std::log2(c) : -std::numeric_limits<double>::infinity());
}

}  // namespace

BoundValue::BoundValue(double log2_value) : log2_value_(log2_value) {
  if (std::isfinite(log2_value) && log2_value > -1022.0 && log2_value < 1024.0) {
    linear_ = std::exp2(log2_value);
  }
}

BoundValue BoundValue::from_log2(double log2_value) { return BoundValue(log2_value); }

BoundValue BoundValue::from_linear(double value) {
  BoundValue out(value > 0.0 ? std::log2(value) : -std::numeric_limits<double>::infinity());
  if (value > 0.0 && std::isfinite(value)) {
    out.linear_ = value;
  }
  return out;
}

double confidence_log(double delta, ConfidenceLogBase base) {
  check_open_unit(delta, "delta");
  return base == ConfidenceLogBase::two ? -std::log2(delta) : -std::log(delta);
}

BoundValue sample_complexity(double h, double eps, double delta, ConfidenceLogBase base) {
  check_open_unit(eps, "eps");
  const double log2_numerator = log2_pow2_plus(6.0 * h / eps, confidence_log(delta, base));
  return BoundValue::from_log2(log2_numerator - 2.0 * std::log2(eps));
}

ProofFormSampleSize proof_form_sample_size(double h, double eps, double delta, double r,
                                           ConfidenceLogBase base) {
  check_open_unit(eps, "eps");
  if (!(r > 0.0 && r < 1.0)) {
    throw Error("r outside (0, 1)");
  }
  const double eps_p = eps / 3.0;
  const double extra = 2.0 + confidence_log(delta, base);
  const double log2_den_common = std::log2(2.0 * kLog2E * (1.0 - r) * (1.0 - r));
  const double printed = log2_pow2_plus(h / (r * eps_p * eps_p), extra) - log2_den_common - std::log2(eps_p);
  const double corrected = log2_pow2_plus(h / (r * eps_p), extra) - log2_den_common - 2.0 * std::log2(eps_p);
  return {BoundValue::from_log2(printed), BoundValue::from_log2(corrected)};
}

double union_failure_log2(double h, double eps, double n, double r) {
  check_open_unit(eps, "eps");
  const double eps_p = eps / 3.0;
  const double log2_class = std::exp2(h / (r * eps_p));
  const double finite_term = log2_class + 1.0 - 2.0 * n * eps_p * eps_p * kLog2E;
  const double partition_term = -2.0 * n * (1.0 - r) * (1.0 - r) * eps_p * eps_p * kLog2E;
  return log2_add(finite_term, partition_term);
}

BoundValue hteld_lower_bound(double h, double eps) {
  check_open_unit(eps, "eps");
  return BoundValue::from_log2((h - 1.0) / eps);
}

double finite_class_bound(double class_size, std::uint64_t n, double eps) {
  if (!(class_size >= 1.0)) {
    throw Error("finite_class_bound: class size must be >= 1");
  }
  return finite_class_bound_log2_size(std::log2(class_size), n, eps);
}

double finite_class_bound_log2_size(double log2_class_size, std::uint64_t n, double eps) {
  if (n == 0) {
    throw Error("finite_class_bound: n must be >= 1");
  }
  const double log_bound =
      log2_class_size / kLog2E + std::numbers::ln2 - 2.0 * static_cast<double>(n) * eps * eps;
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double hoeffding_partition_bound(std::uint64_t n, double eps, double r) {
  if (n == 0) {
    throw Error("hoeffding_partition_bound: n must be >= 1");
  }
  check_open_unit(eps, "eps");
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error("r outside [0, 1]");
  }
  return std::exp(-2.0 * static_cast<double>(n) * (1.0 - r) * (1.0 - r) * eps * eps);
}

double markov_entropy_tail(double h, Threshold alpha) {
  const long double bits = alpha.neg_log2();
  if (!(bits > 0.0L)) {
    throw Error("markov_entropy_tail: alpha must be < 1");
  }
  const double bound = static_cast<double>(static_cast<long double>(h) / bits);
  return std::clamp(bound, 0.0, 1.0);
}

double markov_entropy_tail(double h, double alpha) {
  if (!(alpha < 1.0)) {
    throw Error("markov_entropy_tail: alpha must be < 1");
  }
  return markov_entropy_tail(h, Threshold::linear(alpha));
}

double factorized_tail_bound(double eps) {
  check_open_unit(eps, "eps");
  return -std::expm1(-eps);
}

double m_l(double z, std::uint64_t l) {
  if (l == 0) {
    throw Error("m_l: l must be >= 1");
  }
  if (!(z >= 0.0) || z > 1.0 / (2.0 * static_cast<double>(l) - 1.0)) {
    throw Error("m_L closed form not established");
  }
  return -std::expm1(static_cast<double>(l) * std::log1p(-z));
}

MonteCarloEstimate m_l_achievability(double z, std::uint64_t l, std::uint64_t trials, std::uint64_t seed) {
  if (!(z >= 0.0 && z < 1.0)) {
    throw Error("m_l_achievability: z outside [0, 1)");
  }
  if (l == 0 || trials == 0) {
    throw Error("m_l_achievability: l and trials must be >= 1");
  }
  const rng::CounterStream stream(seed, 0x4D4C4143ull);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::uint64_t i = 0; i < l; ++i) {
      if (stream.unit_at(t * l + i) < z) {
        ++hits;
        break;
      }
    }
  }
  MonteCarloEstimate out;
  out.trials = trials;
  out.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) / static_cast<double>(trials));
  return out;
}

double chebyshev_tail_bound(std::uint64_t l, double var_hw_bits2, double h_x, double eps) {
  if (!(h_x > 0.0)) {
    throw Error("chebyshev_tail_bound: H(X) must be positive");
  }
  check_open_unit(eps, "eps");
  const double ratio = (1.0 - eps) / eps;
  return static_cast<double>(l) * var_hw_bits2 / (h_x * h_x * ratio * ratio);
}

namespace {

RestrictedClassResult check_min_prob(double p_min, std::size_t support, double eta) {
  if (!(eta > 0.0)) {
    throw Error("restricted_class_check: eta must be positive");
  }
  if (p_min < eta) {
    return RestrictedClassRejection{"min probability below eta"};
  }
  return RestrictedClassParams{eta, p_min, 1.01 / p_min, support};
}

}  // namespace

RestrictedClassResult restricted_class_check(const Pmf& p, double eta) {
  const auto probs = p.probs();
  const auto support = static_cast<std::size_t>(std::count_if(probs.begin(), probs.end(), [](double v) { return v > 0.0; }));
  return check_min_prob(p.min_positive(), support, eta);
}

RestrictedClassResult restricted_class_check(const Hteld& p, double eta) {
  if (!std::isfinite(p.spec().m)) {
    if (!(eta > 0.0)) {
      throw Error("restricted_class_check: eta must be positive");
    }
    return RestrictedClassRejection{"support not finite in double range"};
  }
  const double p_min = std::min(p.spec().alpha, 1.0 - p.spec().eps);
  const double support = p.support_size();
  const auto count = support < 0x1.0p63 ? static_cast<std::size_t>(support) : std::numeric_limits<std::size_t>::max();
  return check_min_prob(p_min, count, eta);
}

double prior_bound_samples(const RestrictedClassParams& rc, double delta, double i_hat, double eps,
                           ConfidenceLogBase base) {
  if (!(i_hat >= 0.0)) {
    throw Error("prior_bound_samples: I_hat must be >= 0");
  }
  check_open_unit(eps, "eps");
  return rc.big_c * rc.big_c * confidence_log(delta, base) * i_hat / (eps * eps);
}

namespace {

// Decoder p(y | xhat) per cell; cells without mass are marked invalid.
struct Decoder {
  std::vector<std::array<double, 2>> posterior;
  std::vector<bool> valid;
};

Decoder marginalize_decoder(const Encoder& enc, const JointPmf& j) {
  Decoder d;
  d.posterior.assign(enc.k(), {0.0, 0.0});
  d.valid.assign(enc.k(), false);
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    for (std::size_t c = 0; c < enc.k(); ++c) {
      const double w = enc.prob(x, c);
      d.posterior[c][0] += j.prob(x, 0) * w;
      d.posterior[c][1] += j.prob(x, 1) * w;
    }
  }
  for (std::size_t c = 0; c < enc.k(); ++c) {
    const double mass = d.posterior[c][0] + d.posterior[c][1];
    if (mass > 0.0) {
      d.valid[c] = true;
      d.posterior[c][0] /= mass;
      d.posterior[c][1] /= mass;
    }
  }
  return d;
}

double score(const Encoder& enc, const JointPmf& j, const Decoder& d) {
  std::vector<double> terms;
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    for (Label y = 0; y < 2; ++y) {
      const double pxy = j.prob(x, y);
      if (pxy == 0.0) {
        continue;
      }
      for (std::size_t c = 0; c < enc.k(); ++c) {
        const double w = enc.prob(x, c);
        if (w == 0.0 || !d.valid[c]) {
          continue;
        }
        const double q = d.posterior[c][y];
        terms.push_back(q > 0.0 ? -pxy * w * std::log2(q) : std::numeric_limits<double>::infinity());
      }
    }
  }
  return stable_sum(terms);
}

}  // namespace

double cross_entropy_risk(const Encoder& enc, const JointPmf& j) { return score(enc, j, marginalize_decoder(enc, j)); }

double cross_entropy_risk(const Encoder& enc, const JointPmf& j, const JointPmf& decoder_source) {
  return score(enc, j, marginalize_decoder(enc, decoder_source));
}

double empirical_cross_entropy_risk(const Encoder& enc, const Dataset& s, std::size_t x_support_size) {
  return cross_entropy_risk(enc, empirical(s, x_support_size));
}

}  // namespace entlab
