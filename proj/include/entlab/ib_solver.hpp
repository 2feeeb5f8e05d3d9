#pragma once

// Information bottleneck objectives and solvers over a finite joint p(x, y).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "entlab/dist_core.hpp"
#include "entlab/learners.hpp"

namespace entlab {

enum class Criterion { mutual_info, entropy };

struct IbProblem {
  JointPmf joint;
  double beta = 1.0;
  std::size_t k = 2;
  Criterion criterion = Criterion::mutual_info;
};

// Throws Error on beta < 0 or k == 0.
void validate(const IbProblem& prob);

// C(p) - beta * I(Y;Xhat), with C = I(X;Xhat) or H(Xhat).
double ib_objective(const Encoder& enc, const IbProblem& prob);

struct SelfConsistentOptions {
  std::size_t max_iters = 10000;
  double tol = 1e-9;  // on the largest change of any encoder entry
  std::uint64_t seed = 0;
};

struct IbSolution {
  Encoder encoder;
  bool converged = false;
  std::size_t iterations = 0;
  // Objective after initialization and after every update.
  std::vector<double> objective_trace;
};

// Alternating minimization for the classic criterion. Zero-mass symbols are
// assigned to cell 0.
IbSolution solve_self_consistent(const IbProblem& prob, const SelfConsistentOptions& options = {});

struct RestartResult {
  IbSolution best;
  std::size_t best_index = 0;
  std::vector<IbSolution> runs;  // restart r uses seed mix_seed(options.seed, r)
};

RestartResult solve_with_restarts(const IbProblem& prob, const SelfConsistentOptions& options = {},
                                  std::size_t restarts = 8);

inline constexpr double kMaxEnumeration = 2e6;

struct BruteForceResult {
  // Minimizer of ib_objective over deterministic encoders.
  Encoder lagrangian;
  double lagrangian_objective = 0.0;
  EncoderStats lagrangian_stats;
  // Minimizer of C among encoders attaining the largest I(Y;Xhat).
  Encoder constrained;
  EncoderStats constrained_stats;
  std::uint64_t enumerated = 0;
};

// Enumerates every partition of the positive-mass symbols into at most k
// cells (one canonical encoder per relabeling class). Throws Error when
// k^|X| exceeds kMaxEnumeration.
BruteForceResult brute_force_encoder(const IbProblem& prob);

// Agglomerative merging from singletons: merges the cheapest pair while more
// than k cells remain, then keeps merging while that lowers the objective.
Encoder greedy_merge_ib(const IbProblem& prob);

// Requires criterion == entropy. Exhaustive when the enumeration fits,
// greedy otherwise.
Encoder deterministic_ib(const IbProblem& prob);

}  // namespace entlab
