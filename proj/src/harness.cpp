#include "entlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "entlab/error.hpp"
#include "entlab/learners.hpp"
#include "entlab/parallel.hpp"
#include "entlab/rng.hpp"

namespace entlab {

namespace {

constexpr std::uint64_t kLabelRuleStream = 0x52554C45ull;
constexpr std::uint64_t kHardnessLabelSalt = 0x4841524Cull;
constexpr std::uint64_t kCouponStream = 0x434F5550ull;

// Comma-separated rows terminated by LF.
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  Csv& cell(double v) { return raw(format_decimal(v)); }
  Csv& cell(std::size_t v) { return raw(std::to_string(v)); }
  Csv& cell(bool v) { return raw(v ? "1" : "0"); }
  void end_row() {
    out_ << '\n';
    fresh_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  Csv& raw(const std::string& s) {
    out_ << (fresh_ ? "" : ",") << s;
    fresh_ = false;
    return *this;
  }

  std::ostringstream out_;
  bool fresh_ = true;
};

double mean_of(std::vector<double> values) {
  return values.empty() ? 0.0 : stable_sum(values) / static_cast<double>(values.size());
}

double standard_error(double p_hat, std::size_t trials) {
  return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(trials));
}

void check_n_list(const std::vector<std::size_t>& n_list) {
  if (n_list.empty()) {
    throw ConfigError("n_list must be nonempty");
  }
  if (n_list.front() == 0) {
    throw ConfigError("n_list entries must be >= 1");
  }
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw ConfigError("n_list must be ascending");
  }
}

void check_trials(std::size_t trials) {
  if (trials == 0) {
    throw ConfigError("trials must be >= 1");
  }
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("config: missing \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config: wrong type for \"") + key + "\"");
  }
}

template <typename T>
T optional_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  return required<T>(j, key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const char* where) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
    }
  }
}

DistributionSpec parse_distribution(const Json& d, const std::string& base_dir) {
  if (!d.is_object()) {
    throw ConfigError("config: \"distribution\" must be an object");
  }
  const auto type = required<std::string>(d, "type");
  if (type == "hteld") {
    reject_unknown(d, {"type", "gamma", "eps", "label_seed"}, "distribution");
    return HteldSourceSpec{required<double>(d, "gamma"), required<double>(d, "eps"),
                           optional_field<std::uint64_t>(d, "label_seed", 0)};
  }
  if (type == "entropy_limited") {
    reject_unknown(d, {"type", "h_max", "support", "seed", "labels"}, "distribution");
    const auto labels = optional_field<std::string>(d, "labels", "random");
    LabelRule rule;
    if (labels == "random") {
      rule = LabelRule::random;
    } else if (labels == "coin") {
      rule = LabelRule::coin;
    } else if (labels == "zero") {
      rule = LabelRule::zero;
    } else {
      throw ConfigError("distribution: labels must be random, coin or zero");
    }
    return EntropyLimitedSourceSpec{required<double>(d, "h_max"), required<std::size_t>(d, "support"),
                                    optional_field<std::uint64_t>(d, "seed", 0), rule};
  }
  if (type == "joint") {
    reject_unknown(d, {"type", "path", "table"}, "distribution");
    if (d.contains("table") == d.contains("path")) {
      throw ConfigError("distribution: joint needs exactly one of \"path\" or \"table\"");
    }
    if (d.contains("table")) {
      return ExplicitSourceSpec{joint_from_json(d)};
    }
    std::filesystem::path path = required<std::string>(d, "path");
    if (path.is_relative()) {
      path = std::filesystem::path(base_dir) / path;
    }
    return ExplicitSourceSpec{joint_from_json(read_json_file(path.string()))};
  }
  throw ConfigError("distribution: unknown type \"" + type + "\"");
}

LearnerId parse_learner(const std::string& name) {
  if (name == "memorizer") {
    return LearnerId::memorizer;
  }
  if (name == "center") {
    return LearnerId::center;
  }
  if (name == "constant0") {
    return LearnerId::constant0;
  }
  if (name == "constant1") {
    return LearnerId::constant1;
  }
  throw ConfigError("config: unknown learner \"" + name + "\"");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t n, std::uint64_t trial) {
  return rng::mix_seed(rng::mix_seed(master_seed, n), trial);
}

ExperimentConfig parse_experiment_config(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  reject_unknown(j, {"distribution", "learner", "n_list", "eps", "trials", "master_seed", "output"}, "config");
  if (!j.contains("distribution")) {
    throw ConfigError("config: missing \"distribution\"");
  }
  ExperimentConfig cfg;
  cfg.distribution = parse_distribution(j.at("distribution"), base_dir);
  cfg.learner = parse_learner(optional_field<std::string>(j, "learner", "memorizer"));
  cfg.n_list = required<std::vector<std::size_t>>(j, "n_list");
  cfg.eps = required<double>(j, "eps");
  cfg.trials = required<std::size_t>(j, "trials");
  cfg.master_seed = optional_field<std::uint64_t>(j, "master_seed", 0);
  cfg.output = optional_field<std::string>(j, "output", "");
  check_n_list(cfg.n_list);
  check_trials(cfg.trials);
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
    throw ConfigError("config: eps outside (0, 1)");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_experiment_config(read_json_file(path), parent.empty() ? "." : parent.string());
}

Source::Source(JointPmf joint) : impl_(std::move(joint)) {}

Source::Source(LabeledHteld hteld) : impl_(std::move(hteld)) {
  const auto& h = std::get<LabeledHteld>(impl_);
  if (h.dist().materialized()) {
    joint_ = h.joint();
  }
}

Dataset Source::sample(std::size_t n, std::uint64_t seed) const {
  if (const auto* j = std::get_if<JointPmf>(&impl_)) {
    return entlab::sample(*j, n, seed);
  }
  return std::get<LabeledHteld>(impl_).sample(n, seed);
}

double Source::true_risk(const Hypothesis& h) const {
  if (const auto* j = std::get_if<JointPmf>(&impl_)) {
    return entlab::true_risk(h, *j);
  }
  if (joint_) {
    return entlab::true_risk(h, *joint_);
  }
  return entlab::true_risk(h, std::get<LabeledHteld>(impl_));
}

double Source::entropy_bits() const {
  if (const auto* j = std::get_if<JointPmf>(&impl_)) {
    return entropy(j->marginal_x());
  }
  return std::get<LabeledHteld>(impl_).dist().spec().achieved_entropy;
}

ProjectionSpec Source::high_prob_set(Threshold alpha) const {
  if (const auto* j = std::get_if<JointPmf>(&impl_)) {
    return entlab::high_prob_set(j->marginal_x(), alpha);
  }
  return entlab::high_prob_set(std::get<LabeledHteld>(impl_).dist(), alpha);
}

std::optional<std::size_t> Source::x_support_size() const {
  if (const auto* j = std::get_if<JointPmf>(&impl_)) {
    return j->x_support_size();
  }
  if (joint_) {
    return joint_->x_support_size();
  }
  return std::nullopt;
}

Source make_source(const DistributionSpec& spec) {
  if (const auto* h = std::get_if<HteldSourceSpec>(&spec)) {
    Hteld dist = [&] {
      try {
        return build_hteld(h->gamma, h->eps);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(std::string("distribution: ") + e.what());
      }
    }();
    if (!dist.materialized() && !(dist.spec().log2_m < 64.0)) {
      throw ConfigError("distribution: HTELD tail too large to sample with 64-bit symbols");
    }
    return Source(LabeledHteld(std::move(dist), h->label_seed));
  }
  if (const auto* e = std::get_if<EntropyLimitedSourceSpec>(&spec)) {
    Pmf px = [&] {
      try {
        return random_entropy_limited(e->h_max, e->support, e->seed);
      } catch (const Error& err) {
        throw ConfigError(std::string("distribution: ") + err.what());
      }
    }();
    std::vector<double> p1(e->support, 0.0);
    const rng::CounterStream labels(e->seed, kLabelRuleStream);
    for (std::size_t x = 0; x < e->support; ++x) {
      switch (e->labels) {
        case LabelRule::random:
          p1[x] = static_cast<double>(labels.bits_at(x) & 1u);
          break;
        case LabelRule::coin:
          p1[x] = 0.5;
          break;
        case LabelRule::zero:
          break;
      }
    }
    return Source(JointPmf::from_marginal_and_conditional(px, p1));
  }
  return Source(std::get<ExplicitSourceSpec>(spec).joint);
}

double binomial_ci95(double p_hat, std::size_t trials) { return 1.96 * standard_error(p_hat, trials); }

std::vector<GapEstimate> gap_experiment(const ExperimentConfig& cfg) {
  check_n_list(cfg.n_list);
  check_trials(cfg.trials);
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
    throw ConfigError("config: eps outside (0, 1)");
  }
  const Source source = make_source(cfg.distribution);
  std::optional<ProjectionSpec> centers;
  if (cfg.learner == LearnerId::center) {
    centers = source.high_prob_set(Threshold::entropy_ratio(source.entropy_bits(), cfg.eps));
  }

  struct Trial {
    double gap, risk, empirical;
  };
  std::vector<GapEstimate> out;
  for (std::size_t n : cfg.n_list) {
    std::vector<Trial> trials(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) {
      const Dataset s = source.sample(n, trial_seed(cfg.master_seed, n, t));
      Hypothesis h = Hypothesis::constant(0);
      switch (cfg.learner) {
        case LearnerId::memorizer:
          h = memorizer_fit(s);
          break;
        case LearnerId::center:
          h = center_learner(s, *centers);
          break;
        case LearnerId::constant0:
          break;
        case LearnerId::constant1:
          h = Hypothesis::constant(1);
          break;
      }
      const double risk = source.true_risk(h);
      const double emp = empirical_risk(h, s);
      trials[t] = {std::abs(emp - risk), risk, emp};
    });

    GapEstimate est;
    est.n = n;
    est.trials = cfg.trials;
    std::vector<double> gaps, risks, emps;
    std::size_t hits = 0;
    for (const auto& t : trials) {
      gaps.push_back(t.gap);
      risks.push_back(t.risk);
      emps.push_back(t.empirical);
      hits += t.gap >= cfg.eps;
    }
    est.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    est.ci95 = binomial_ci95(est.p_hat, cfg.trials);
    est.mean_gap = mean_of(std::move(gaps));
    est.mean_true_risk = mean_of(std::move(risks));
    est.mean_empirical_risk = mean_of(std::move(emps));
    out.push_back(est);
  }
  return out;
}

std::string gap_csv(const std::vector<GapEstimate>& rows) {
  Csv csv({"n", "trials", "p_hat", "ci95", "mean_gap", "mean_true_risk", "mean_empirical_risk"});
  for (const auto& r : rows) {
    csv.cell(r.n).cell(r.trials).cell(r.p_hat).cell(r.ci95).cell(r.mean_gap).cell(r.mean_true_risk).cell(
        r.mean_empirical_risk);
    csv.end_row();
  }
  return csv.str();
}

std::vector<HardnessRow> hteld_hardness(double gamma, double eps, const std::vector<std::size_t>& n_list,
                                        std::size_t trials, std::uint64_t master_seed,
                                        std::optional<double> threshold) {
  check_n_list(n_list);
  check_trials(trials);
  const double thr = threshold.value_or(0.45 * eps);
  const Source source =
      make_source(HteldSourceSpec{gamma, eps, rng::mix_seed(master_seed, kHardnessLabelSalt)});

  std::vector<HardnessRow> out;
  for (std::size_t n : n_list) {
    std::vector<double> risks(trials);
    parallel_for(trials, [&](std::size_t t) {
      const Dataset s = source.sample(n, trial_seed(master_seed, n, t));
      risks[t] = source.true_risk(memorizer_fit(s, 0));
    });
    HardnessRow row;
    row.n = n;
    row.trials = trials;
    row.threshold = thr;
    const auto hits = std::count_if(risks.begin(), risks.end(), [thr](double r) { return r >= thr; });
    row.frac_at_least = static_cast<double>(hits) / static_cast<double>(trials);
    row.ci95 = binomial_ci95(row.frac_at_least, trials);
    row.mean_risk = mean_of(std::move(risks));
    out.push_back(row);
  }
  return out;
}

std::string hardness_csv(const std::vector<HardnessRow>& rows) {
  Csv csv({"n", "trials", "mean_risk", "threshold", "frac_at_least", "ci95"});
  for (const auto& r : rows) {
    csv.cell(r.n).cell(r.trials).cell(r.mean_risk).cell(r.threshold).cell(r.frac_at_least).cell(r.ci95);
    csv.end_row();
  }
  return csv.str();
}

Lemma4Report lemma4_verify(const Pmf& p, double eps, double r, const std::vector<std::size_t>& n_list,
                           std::size_t trials, std::uint64_t seed) {
  check_n_list(n_list);
  check_trials(trials);
  if (!(eps > 0.0 && eps < 1.0) || !(r > 0.0 && r < 1.0)) {
    throw ConfigError("lemma4: eps and r must lie in (0, 1)");
  }
  const JointPmf joint =
      JointPmf::from_marginal_and_conditional(p, std::vector<double>(p.support_size(), 0.5));
  const Threshold alpha = Threshold::entropy_ratio(entropy(p), r * eps);
  const ProjectionSpec spec = entlab::high_prob_set(p, alpha);
  std::vector<bool> tail(p.support_size());
  for (std::size_t x = 0; x < tail.size(); ++x) {
    tail[x] = !spec.contains(x);
  }

  Lemma4Report report;
  report.neg_log2_alpha = static_cast<double>(alpha.neg_log2());
  report.tail_mass = tail_mass(p, alpha);
  for (std::size_t n : n_list) {
    std::vector<std::array<bool, 2>> events(trials);
    parallel_for(trials, [&](std::size_t t) {
      const Dataset s = sample(joint, n, trial_seed(seed, n, t));
      const Hypothesis h = memorizer_fit(s);
      const Hypothesis g = project(h, spec);
      const double diff =
          std::abs(static_cast<double>(error_count(h, s)) - static_cast<double>(error_count(g, s))) /
          static_cast<double>(n);
      const auto in_tail = std::count_if(s.pairs.begin(), s.pairs.end(), [&](const LabeledPoint& pt) {
        return tail[pt.x];
      });
      events[t] = {diff >= eps, static_cast<double>(in_tail) / static_cast<double>(n) >= eps};
    });
    Lemma4Row row;
    row.n = n;
    row.trials = trials;
    row.bound = hoeffding_partition_bound(n, eps, r);
    std::size_t gap_hits = 0, tail_hits = 0;
    for (const auto& e : events) {
      gap_hits += e[0];
      tail_hits += e[1];
    }
    row.p_hat_gap = static_cast<double>(gap_hits) / static_cast<double>(trials);
    row.p_hat_tail = static_cast<double>(tail_hits) / static_cast<double>(trials);
    row.se_gap = standard_error(row.p_hat_gap, trials);
    row.se_tail = standard_error(row.p_hat_tail, trials);
    row.within_bound = row.p_hat_gap <= row.bound + 3.0 * row.se_gap && row.p_hat_tail <= row.bound + 3.0 * row.se_tail;
    report.rows.push_back(row);
  }
  return report;
}

std::string lemma4_csv(const Lemma4Report& report) {
  Csv csv({"n", "trials", "bound", "p_hat_gap", "se_gap", "p_hat_tail", "se_tail", "within_bound"});
  for (const auto& r : report.rows) {
    csv.cell(r.n).cell(r.trials).cell(r.bound).cell(r.p_hat_gap).cell(r.se_gap).cell(r.p_hat_tail).cell(r.se_tail).cell(
        r.within_bound);
    csv.end_row();
  }
  return csv.str();
}

std::vector<Fig2Row> fig2_data(std::size_t points) {
  if (points < 2) {
    throw ConfigError("fig2: points must be >= 2");
  }
  std::vector<Fig2Row> rows(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double eps = static_cast<double>(i + 1) / static_cast<double>(points + 1);
    rows[i] = {eps, eps, factorized_tail_bound(eps)};
  }
  return rows;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
  Csv csv({"eps", "markov_bound", "factorized_bound"});
  for (const auto& r : rows) {
    csv.cell(r.eps).cell(r.markov_bound).cell(r.factorized_bound);
    csv.end_row();
  }
  return csv.str();
}

std::string fig2_svg(const std::vector<Fig2Row>& rows) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + v * plot_w; };
  auto py = [&](double v) { return kTop + (1.0 - v) * plot_h; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto polyline = [&](auto value, const char* color) {
    std::string pts;
    for (const auto& r : rows) {
      pts += fmt(px(r.eps)) + "," + fmt(py(value(r))) + " ";
    }
    if (!pts.empty()) {
      pts.pop_back();
    }
    return std::string("<polyline fill=\"none\" stroke=\"") + color + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(px(1)) << "\" y2=\""
      << fmt(py(0)) << "\"/>\n";
  svg << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(px(0)) << "\" y2=\""
      << fmt(py(1)) << "\"/>\n";
  svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    svg << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(py(0) + 18) << "\" text-anchor=\"middle\">" << fmt(v)
        << "</text>\n";
    svg << "<text x=\"" << fmt(px(0) - 8) << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\">" << fmt(v)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(px(0.5)) << "\" y=\"" << fmt(kHeight - 10) << "\" text-anchor=\"middle\">eps</text>\n";
  svg << "<text x=\"" << fmt(px(0.05)) << "\" y=\"" << fmt(py(0.95)) << "\" fill=\"#1f77b4\">markov: eps</text>\n";
  svg << "<text x=\"" << fmt(px(0.05)) << "\" y=\"" << fmt(py(0.88)) << "\" fill=\"#d62728\">factorized: 1 - exp(-eps)</text>\n";
  svg << "</g>\n";
  svg << polyline([](const Fig2Row& r) { return r.markov_bound; }, "#1f77b4");
  svg << polyline([](const Fig2Row& r) { return r.factorized_bound; }, "#d62728");
  svg << "</svg>\n";
  return svg.str();
}

PriorDemoRow prior_bound_demo(std::size_t support, double delta, double eps, std::uint64_t seed, double i_hat,
                              std::size_t coupon_trials) {
  if (support == 0) {
    throw ConfigError("prior-demo: support must be >= 1");
  }
  check_trials(coupon_trials);
  const Pmf uniform = Pmf::uniform(support);
  const auto check = restricted_class_check(uniform, uniform.min_positive());
  const auto& rc = std::get<RestrictedClassParams>(check);

  PriorDemoRow row;
  row.support = support;
  row.big_c = rc.big_c;
  row.bound = prior_bound_samples(rc, delta, i_hat, eps);
  std::vector<double> harmonic(support);
  for (std::size_t i = 0; i < support; ++i) {
    harmonic[i] = 1.0 / static_cast<double>(i + 1);
  }
  row.coupon_expected = static_cast<double>(support) * stable_sum(harmonic);

  std::vector<double> draws(coupon_trials);
  parallel_for(coupon_trials, [&](std::size_t t) {
    rng::SequentialEngine engine(rng::mix_seed(seed, support), kCouponStream + t);
    std::vector<bool> seen(support, false);
    std::size_t distinct = 0, count = 0;
    while (distinct < support) {
      const auto x = rng::bounded_from_bits(engine(), support);
      ++count;
      if (!seen[x]) {
        seen[x] = true;
        ++distinct;
      }
    }
    draws[t] = static_cast<double>(count);
  });
  row.coupon_simulated = mean_of(std::move(draws));
  row.ratio = row.bound / row.coupon_expected;
  return row;
}

std::string prior_demo_csv(const std::vector<PriorDemoRow>& rows) {
  Csv csv({"support", "big_c", "bound", "coupon_expected", "coupon_simulated", "ratio"});
  for (const auto& r : rows) {
    csv.cell(r.support).cell(r.big_c).cell(r.bound).cell(r.coupon_expected).cell(r.coupon_simulated).cell(r.ratio);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace entlab
