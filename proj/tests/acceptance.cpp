// Acceptance checks, one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "entlab/bounds.hpp"
#include "entlab/constructions.hpp"
#include "entlab/harness.hpp"
#include "entlab/hypotheses.hpp"
#include "entlab/ib_solver.hpp"
#include "entlab/learners.hpp"
#include "entlab/rng.hpp"
#include "entlab/serialization.hpp"
#include "test_support.hpp"

#ifndef ENTLAB_CLI
#error "ENTLAB_CLI must name the CLI executable"
#endif

namespace fs = std::filesystem;
using namespace entlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

template <class Engine>
void shuffle(std::vector<std::size_t>& v, Engine& e) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[e() % i]);
  }
}

// |R(f) - R(f')| <= Pr{f != f'} for all pairs on alphabets up to 6 symbols.
Outcome disagreement_exhaustive() {
  std::uint64_t pairs = 0, violations = 0;
  double worst = -1.0;
  for (std::size_t size = 1; size <= 6; ++size) {
    const std::uint64_t count = std::uint64_t{1} << size;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const JointPmf j = testing::random_joint(size, 1000 * size + seed);
      const Pmf px = j.marginal_x();
      std::vector<Hypothesis> hs;
      std::vector<double> risk;
      for (std::uint64_t m = 0; m < count; ++m) {
        hs.push_back(Hypothesis::from_mask(m, size));
        risk.push_back(true_risk(hs.back(), j));
      }
      for (std::uint64_t a = 0; a < count; ++a) {
        for (std::uint64_t b = 0; b < count; ++b) {
          const double excess = std::abs(risk[a] - risk[b]) - hypothesis_distance(hs[a], hs[b], px);
          worst = std::max(worst, excess);
          violations += excess > 1e-12;
          ++pairs;
        }
      }
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs, " + std::to_string(violations) +
                               " violations, max excess " + fmt(worst)};
}

// |X_{>=alpha}| <= 1/alpha and d(f, g_alpha(f)) <= eps for all 2^12 hypotheses.
Outcome projection_covering() {
  std::uint64_t checks = 0, violations = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t support = 4 + seed % 9;
    const Pmf p = random_entropy_limited(2.0, support, seed);
    const double h = entropy(p);
    for (double eps : {0.25, 0.5}) {
      const Threshold alpha = Threshold::entropy_ratio(h, eps);
      const ProjectionSpec spec = high_prob_set(p, alpha);
      if (!(spec.size() <= std::exp2(static_cast<double>(alpha.neg_log2())))) {
        ++violations;
      }
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << 12); ++m) {
        const Hypothesis f = Hypothesis::from_mask(m, 12);
        const double d = hypothesis_distance(f, project(f, spec), p);
        worst = std::max(worst, d / eps);
        violations += d > eps;
        ++checks;
      }
    }
  }
  return {violations == 0, std::to_string(checks) + " projections, " + std::to_string(violations) +
                               " violations, max d/eps " + fmt(worst)};
}

// Pointwise triangle inequality behind the three-part decomposition.
Outcome decomposition_pointwise() {
  std::uint64_t violations = 0;
  rng::SequentialEngine e(0x4C31);
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const JointPmf j = testing::random_joint(8, t);
    const Hypothesis h = testing::random_hypothesis(8, t ^ 0x9E37);
    const Dataset s = sample(j, 1 + e() % 60, t);
    const double eps = 0.05 + 0.9 * e.unit();
    const ProjectionSpec spec = high_prob_set(j.marginal_x(), Threshold::entropy_ratio(entropy(j.marginal_x()), eps));
    const DecompositionTerms d = decomposition_terms(h, spec, s, j);
    violations += !(d.triangle_holds && d.gap <= d.total);
  }
  return {violations == 0, "10000 triples, " + std::to_string(violations) + " violations"};
}

Outcome projection_gap_tail() {
  const Pmf p = random_entropy_limited(2.0, 16, 4);
  const Lemma4Report rep = lemma4_verify(p, 0.2, 0.5, {10, 100, 1000}, 10000, 11);
  bool ok = rep.rows.size() == 3;
  std::string detail = "H=" + fmt(entropy(p)) + " tail_mass=" + fmt(rep.tail_mass);
  for (const auto& r : rep.rows) {
    ok = ok && r.within_bound && r.p_hat_gap <= r.bound + 3.0 * r.se_gap;
    detail += "; n=" + std::to_string(r.n) + " p_gap=" + fmt(r.p_hat_gap) + " p_tail=" + fmt(r.p_hat_tail) +
              " bound=" + fmt(r.bound);
  }
  return {ok, detail};
}

std::string run_capture(const std::string& args, const fs::path& out_file, int* status = nullptr) {
  const std::string cmd = std::string("\"") + ENTLAB_CLI + "\" " + args + " > \"" + out_file.string() + "\"";
  const int rc = std::system(cmd.c_str());
  if (status) {
    *status = rc;
  }
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome worked_numbers(const fs::path& dir) {
  const double lb = hteld_lower_bound(2.0, 0.01).log2_value();
  const double log2_m = build_hteld(1.0, 0.01).spec().log2_m_unrounded;
  int rc = 0;
  const std::string report = run_capture("hteld --gamma 1 --eps 0.01", dir / "hteld.json", &rc);
  bool flagged = false;
  try {
    const Json j = Json::parse(report);
    flagged = j.at("reference_mismatch").get<bool>() && j.at("reference_log2_m").get<double>() == 94.0;
  } catch (const std::exception&) {
    flagged = false;
  }
  const bool ok = lb == 100.0 && std::abs(log2_m - 91.92) <= 0.01 && flagged && rc == 0;
  return {ok, "log2 lower bound " + fmt(lb) + ", log2 M " + fmt(log2_m) + ", reference mismatch flagged " +
                  (flagged ? "yes" : "no")};
}

Outcome hteld_hardness_check() {
  const double m = build_hteld(2.0, 0.1).spec().m;
  const auto n_big = static_cast<std::size_t>(20.0 * m);
  const auto rows = hteld_hardness(2.0, 0.1, {1000, n_big}, 200, 2024);
  const bool ok = rows[0].frac_at_least >= 0.95 && rows[1].mean_risk < 0.025;
  return {ok, "M=" + fmt(m) + "; n=1000 frac(risk>=" + fmt(rows[0].threshold) + ")=" + fmt(rows[0].frac_at_least) +
                  " mean=" + fmt(rows[0].mean_risk) + "; n=" + std::to_string(n_big) + " mean=" + fmt(rows[1].mean_risk)};
}

Outcome factorized_and_typicality() {
  const double typ = typicality_demo(std::uint64_t{1} << 20, std::ldexp(1.0, -20));
  const double target = 1.0 - 2.0 / std::exp(1.0);
  bool ok = std::abs(typ - target) <= 1e-3;
  std::string detail = "typicality " + fmt(typ) + " vs " + fmt(target);

  const auto rows = fig2_data(10000);
  const bool ordered = std::all_of(rows.begin(), rows.end(),
                                   [](const Fig2Row& r) { return r.factorized_bound <= r.markov_bound; });
  const double ratio = factorized_tail_bound(1e-3) / 1e-3;
  ok = ok && ordered && rows.size() == 10000 && std::abs(ratio - 1.0) <= 1e-3;
  detail += "; fig2 ordered " + std::string(ordered ? "yes" : "no") + ", ratio at 1e-3 " + fmt(ratio);

  const std::pair<double, std::uint64_t> cases[] = {{0.1, 3}, {0.05, 9}, {0.01, 50}};
  std::uint64_t seed = 70;
  for (const auto& [z, l] : cases) {
    const auto est = m_l_achievability(z, l, 1000000, seed++);
    const double exact = m_l(z, l);
    const bool close = std::abs(est.p_hat - exact) <= 3.0 * est.standard_error;
    ok = ok && close;
    detail += "; m_" + std::to_string(l) + "(" + fmt(z) + ") " + fmt(est.p_hat) + " vs " + fmt(exact);
  }
  return {ok, detail};
}

// Balanced datasets with distinct x: the constrained brute-force optimum is
// the overfitting encoder.
Outcome overfit_certification() {
  rng::SequentialEngine e(0x4558);
  std::size_t matched = 0, exact_stats = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 2 * (1 + e() % 6);
    std::vector<std::size_t> xs(12);
    std::iota(xs.begin(), xs.end(), 0);
    shuffle(xs, e);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = i < n / 2 ? 0 : 1;
    }
    shuffle(labels, e);
    Dataset s;
    for (std::size_t i = 0; i < n; ++i) {
      s.pairs.push_back({xs[i], static_cast<Label>(labels[i])});
    }
    const JointPmf emp = empirical(s, 12);
    const auto bf = brute_force_encoder(IbProblem{emp, 1.0, 2, Criterion::entropy});
    matched += same_partition(bf.constrained, overfit_encoder(s), emp.marginal_x());
    const auto& st = bf.constrained_stats;
    exact_stats += st.i_x_xhat == 1.0 && st.i_y_xhat == 1.0 && st.h_xhat == 1.0;
  }
  return {matched == 200 && exact_stats == 200,
          std::to_string(matched) + "/200 match overfit encoder, " + std::to_string(exact_stats) +
              "/200 with stats exactly (1, 1, 1)"};
}

JointPmf planted_joint(std::uint64_t seed) {
  rng::SequentialEngine e(seed, 0x504C);
  const std::size_t n = 4 + e() % 7;
  const Pmf px = testing::random_pmf(n, seed);
  const double a = 0.05 + 0.4 * e.unit();
  const double b = 0.55 + 0.4 * e.unit();
  std::vector<double> p1(n);
  for (std::size_t x = 0; x < n; ++x) {
    p1[x] = x < 2 ? (x == 0 ? a : b) : ((e() & 1) ? a : b);
  }
  return JointPmf::from_marginal_and_conditional(px, p1);
}

Outcome ib_solver_check() {
  std::size_t good_joints = 0;
  std::size_t min_hits = 8;
  const std::size_t joints = 10;
  for (std::uint64_t seed = 0; seed < joints; ++seed) {
    const IbProblem prob{planted_joint(seed), 100.0, 2, Criterion::mutual_info};
    const auto res = solve_with_restarts(prob, {10000, 1e-9, seed});
    const double target = mutual_information(prob.joint);
    std::size_t hits = 0;
    for (const auto& run : res.runs) {
      hits += std::abs(encoder_stats(run.encoder, prob.joint).i_y_xhat - target) <= 1e-6;
    }
    min_hits = std::min(min_hits, hits);
    good_joints += hits >= 7;
  }
  std::size_t monotone = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const JointPmf j = testing::random_joint(2 + seed % 9, 500 + seed);
    const IbProblem prob{j, 0.5 + static_cast<double>(seed % 10), 2 + seed % 3, Criterion::mutual_info};
    const auto sol = solve_self_consistent(prob, {10000, 1e-9, seed});
    bool ok = true;
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
      const double prev = sol.objective_trace[i - 1];
      ok = ok && sol.objective_trace[i] <= prev + 1e-12 * (1.0 + std::abs(prev));
    }
    monotone += ok;
  }
  return {good_joints == joints && monotone == 100,
          std::to_string(good_joints) + "/" + std::to_string(joints) + " planted joints with >=7/8 restarts (min " +
              std::to_string(min_hits) + "), " + std::to_string(monotone) + "/100 monotone traces"};
}

Outcome prior_demo_check() {
  const auto row = prior_bound_demo(16, 0.1, 0.1, 1);
  const auto check = restricted_class_check(build_hteld(2.0, 0.1), 0.01);
  const bool rejected = std::holds_alternative<RestrictedClassRejection>(check);
  return {row.ratio > 1e3 && rejected,
          "ratio " + fmt(row.ratio) + ", HTELD(2, 0.1) rejected at eta=0.01: " + (rejected ? "yes" : "no")};
}

Outcome determinism_check(const fs::path& dir) {
  {
    std::ofstream(dir / "joint.json") << to_json(testing::random_joint(6, 3)).dump(2);
    Json cfg = Json::parse(R"({"distribution": {"type": "hteld", "gamma": 2.0, "eps": 0.1, "label_seed": 5},
      "learner": "memorizer", "n_list": [100, 1000], "eps": 0.1, "trials": 50, "master_seed": 17})");
    std::ofstream(dir / "gap.json") << cfg.dump(2);
    Json cfg2 = cfg;
    cfg2["distribution"] = Json::parse(R"({"type": "joint", "path": "joint.json"})");
    cfg2["learner"] = "center";
    std::ofstream(dir / "gap_joint.json") << cfg2.dump(2);
  }
  const std::string joint = "\"" + (dir / "joint.json").string() + "\"";
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"bound --kind sample --entropy 1 --eps 0.6 --delta 0.1", {}},
      {"bound --kind proof --entropy 2 --eps 0.01 --delta 0.5", {}},
      {"hteld --gamma 2 --eps 0.1", {}},
      {"ib --joint " + joint + " --beta 3 --k 3 --method selfconsistent --seed 9", {}},
      {"ib --joint " + joint + " --beta 3 --k 3 --criterion entropy --method bruteforce", {}},
      {"ib --joint " + joint + " --beta 3 --k 2 --criterion entropy --method greedy", {}},
      {"sample --joint " + joint + " --n 500 --seed 4 --out \"" + (dir / "s.csv").string() + "\"",
       {"s.csv", "s.csv.json"}},
      {"gap-sim --config \"" + (dir / "gap.json").string() + "\"", {}},
      {"gap-sim --config \"" + (dir / "gap_joint.json").string() + "\"", {}},
      {"hteld-hardness --gamma 2 --eps 0.1 --n 100,1000 --trials 50 --seed 3", {}},
      {"lemma4 --h-max 2 --support 16 --pmf-seed 1 --eps 0.2 --r 0.5 --n 10,100 --trials 500 --seed 2", {}},
      {"fig2 --points 500 --svg \"" + (dir / "fig2.svg").string() + "\"", {"fig2.svg"}},
      {"prior-demo --supports 2,4,16 --seed 8", {}},
  };
  auto suite_digest = [&](int pass, std::vector<std::size_t>& per_command, bool& all_ok) {
    std::string all;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      int rc = 0;
      std::string out = run_capture(commands[i].first, dir / ("stdout_" + std::to_string(pass)), &rc);
      all_ok = all_ok && rc == 0 && (!out.empty() || !commands[i].second.empty());
      for (const auto& file : commands[i].second) {
        std::ifstream in(dir / file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out += ss.str();
        all_ok = all_ok && !ss.str().empty();
        fs::remove(dir / file);
      }
      per_command.push_back(std::hash<std::string>{}(out));
      all += out;
    }
    return std::hash<std::string>{}(all);
  };
  std::vector<std::size_t> first, second;
  bool ran = true;
  const std::size_t a = suite_digest(1, first, ran);
  const std::size_t b = suite_digest(2, second, ran);
  std::size_t same = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    same += first[i] == second[i];
  }
  std::ostringstream hex;
  hex << std::hex << a;
  return {ran && a == b && same == commands.size(),
          std::to_string(same) + "/" + std::to_string(commands.size()) + " commands identical, suite hash " +
              hex.str() + (ran ? "" : ", some command failed")};
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "entlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"disagreement bounds risk difference (exhaustive)", disagreement_exhaustive},
      {"projection covering", projection_covering},
      {"pointwise three-part decomposition", decomposition_pointwise},
      {"projection gap tail vs partition bound", projection_gap_tail},
      {"HTELD worked numbers", [&] { return worked_numbers(dir); }},
      {"HTELD hardness", hteld_hardness_check},
      {"factorized tail and typicality", factorized_and_typicality},
      {"overfitting encoder certification", overfit_certification},
      {"IB solver recovery and monotonicity", ib_solver_check},
      {"restricted-class prior bound demo", prior_demo_check},
      {"CLI determinism", [&] { return determinism_check(dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << " [" << fmt(secs) << " s]" << std::endl;
  }
  fs::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
