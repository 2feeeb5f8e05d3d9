#include "entlab/ib_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "entlab/error.hpp"
#include "entlab/parallel.hpp"
#include "entlab/rng.hpp"

namespace entlab {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr std::uint64_t kInitStream = 0x49424E4954ull;

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

std::vector<std::size_t> positive_symbols(const JointPmf& j) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    if (j.prob(x, 0) + j.prob(x, 1) > 0.0) {
      out.push_back(x);
    }
  }
  return out;
}

// Per-cell objective contribution of a deterministic cell holding masses
// (y0, y1): -m log2 m - beta * sum_y p(c,y) log2(p(c,y) / (m p(y))).
double cell_term(double y0, double y1, const JointPmf::Row& py, double beta) {
  const double m = y0 + y1;
  if (m <= 0.0) {
    return 0.0;
  }
  double info = 0.0;
  if (y0 > 0.0) {
    info += y0 * std::log2(y0 / (m * py[0]));
  }
  if (y1 > 0.0) {
    info += y1 * std::log2(y1 / (m * py[1]));
  }
  return -xlog2x(m) - beta * info;
}

Encoder encoder_from_cells(const std::vector<std::size_t>& cell_of_positive, const std::vector<std::size_t>& positive,
                           std::size_t k, std::size_t x_count) {
  std::vector<std::size_t> assignment(x_count, 0);
  for (std::size_t i = 0; i < positive.size(); ++i) {
    assignment[positive[i]] = cell_of_positive[i];
  }
  return Encoder::deterministic(k, assignment, 0);
}

}  // namespace

void validate(const IbProblem& prob) {
  if (!(prob.beta >= 0.0) || !std::isfinite(prob.beta)) {
    throw Error("IbProblem: beta must be finite and >= 0");
  }
  if (prob.k == 0) {
    throw Error("IbProblem: k must be >= 1");
  }
}

double ib_objective(const Encoder& enc, const IbProblem& prob) {
  const EncoderStats stats = encoder_stats(enc, prob.joint);
  const double c = prob.criterion == Criterion::mutual_info ? stats.i_x_xhat : stats.h_xhat;
  return c - prob.beta * stats.i_y_xhat;
}

IbSolution solve_self_consistent(const IbProblem& prob, const SelfConsistentOptions& options) {
  validate(prob);
  if (prob.criterion != Criterion::mutual_info) {
    throw Error("solve_self_consistent: requires the mutual_info criterion");
  }
  const JointPmf& j = prob.joint;
  const std::size_t n = j.x_support_size();
  const std::size_t k = prob.k;
  const Pmf px = j.marginal_x();

  std::vector<double> q(n * k, 0.0);
  const rng::CounterStream stream(options.seed, kInitStream);
  for (std::size_t x = 0; x < n; ++x) {
    if (px.prob(x) <= 0.0) {
      q[x * k] = 1.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      // Exponential(1) draws give a uniform point on the simplex.
      const double u = stream.unit_at(x * k + c) + 0x1.0p-54;
      q[x * k + c] = -std::log(u);
      total += q[x * k + c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      q[x * k + c] /= total;
    }
  }

  auto make_encoder = [&] { return Encoder(k, n, q, 0); };
  IbSolution sol{make_encoder(), false, 0, {}};
  sol.objective_trace.push_back(ib_objective(sol.encoder, prob));

  std::vector<double> mass(k), decoder1(k), logw(k), next(n * k);
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    std::fill(mass.begin(), mass.end(), 0.0);
    std::fill(decoder1.begin(), decoder1.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t c = 0; c < k; ++c) {
        mass[c] += px.prob(x) * q[x * k + c];
        decoder1[c] += j.prob(x, 1) * q[x * k + c];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      decoder1[c] = mass[c] > 0.0 ? std::clamp(decoder1[c] / mass[c], 0.0, 1.0) : 0.0;
    }

    double change = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (px.prob(x) <= 0.0) {
        std::copy_n(q.begin() + static_cast<std::ptrdiff_t>(x * k), k, next.begin() + static_cast<std::ptrdiff_t>(x * k));
        continue;
      }
      const double p1 = j.prob(x, 1) / px.prob(x);
      const double p0 = 1.0 - p1;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (mass[c] <= 0.0) {
          logw[c] = -std::numeric_limits<double>::infinity();
          continue;
        }
        double kl = 0.0;
        const double d1 = decoder1[c];
        const double d0 = 1.0 - d1;
        if (p0 > 0.0) {
          kl += d0 > 0.0 ? p0 * std::log2(p0 / d0) : std::numeric_limits<double>::infinity();
        }
        if (p1 > 0.0) {
          kl += d1 > 0.0 ? p1 * std::log2(p1 / d1) : std::numeric_limits<double>::infinity();
        }
        logw[c] = std::log2(mass[c]) - prob.beta * std::max(0.0, kl);
        best = std::max(best, logw[c]);
      }
      double total = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double w = std::isfinite(logw[c]) ? std::exp2(logw[c] - best) : 0.0;
        next[x * k + c] = w;
        total += w;
      }
      for (std::size_t c = 0; c < k; ++c) {
        next[x * k + c] /= total;
        change = std::max(change, std::abs(next[x * k + c] - q[x * k + c]));
      }
    }
    q.swap(next);
    sol.encoder = make_encoder();
    sol.objective_trace.push_back(ib_objective(sol.encoder, prob));
    sol.iterations = iter + 1;
    if (change < options.tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

RestartResult solve_with_restarts(const IbProblem& prob, const SelfConsistentOptions& options, std::size_t restarts) {
  if (restarts == 0) {
    throw Error("solve_with_restarts: restarts must be >= 1");
  }
  std::vector<std::optional<IbSolution>> slots(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    SelfConsistentOptions local = options;
    local.seed = rng::mix_seed(options.seed, r);
    slots[r] = solve_self_consistent(prob, local);
  });

  RestartResult out{*slots[0], 0, {}};
  out.runs.reserve(restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    if (slots[r]->objective_trace.back() < out.best.objective_trace.back()) {
      out.best = *slots[r];
      out.best_index = r;
    }
    out.runs.push_back(std::move(*slots[r]));
  }
  return out;
}

BruteForceResult brute_force_encoder(const IbProblem& prob) {
  validate(prob);
  const JointPmf& j = prob.joint;
  const auto positive = positive_symbols(j);
  const std::size_t n = positive.size();
  const double log10_size = static_cast<double>(n) * std::log10(static_cast<double>(prob.k));
  if (log10_size > std::log10(kMaxEnumeration)) {
    throw Error("brute_force_encoder: enumeration too large (" + std::to_string(prob.k) + "^" + std::to_string(n) +
                " encoders)");
  }
  const auto py = j.marginal_y();

  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]), a[i] < k.
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max of a[0..i]
  std::vector<double> y0(prob.k), y1(prob.k);

  std::vector<std::size_t> best_cells, constrained_cells;
  double best_objective = std::numeric_limits<double>::infinity();
  double best_info = -1.0, best_cost = 0.0;
  std::uint64_t enumerated = 0;

  auto evaluate = [&] {
    ++enumerated;
    std::fill(y0.begin(), y0.end(), 0.0);
    std::fill(y1.begin(), y1.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      y0[a[i]] += j.prob(positive[i], 0);
      y1[a[i]] += j.prob(positive[i], 1);
    }
    double h = 0.0, info = 0.0;
    for (std::size_t c = 0; c < prob.k; ++c) {
      const double m = y0[c] + y1[c];
      if (m <= 0.0) {
        continue;
      }
      h -= xlog2x(m);
      if (y0[c] > 0.0) {
        info += y0[c] * std::log2(y0[c] / (m * py[0]));
      }
      if (y1[c] > 0.0) {
        info += y1[c] * std::log2(y1[c] / (m * py[1]));
      }
    }
    h = std::max(0.0, h);
    info = std::max(0.0, info);
    const double objective = h - prob.beta * info;
    if (objective < best_objective - kTieTolerance) {
      best_objective = objective;
      best_cells = a;
    }
    // Earlier strings win ties, so the sparsest partition is kept.
    if (info > best_info + kTieTolerance || (info >= best_info - kTieTolerance && h < best_cost - kTieTolerance)) {
      best_info = std::max(best_info, info);
      best_cost = h;
      constrained_cells = a;
    }
  };

  if (n == 0) {
    evaluate();
  } else {
    while (true) {
      evaluate();
      std::size_t i = n;
      while (i-- > 1) {
        if (a[i] + 1 < prob.k && a[i] <= prefix_max[i - 1]) {
          break;
        }
      }
      if (i == 0 || i >= n) {
        break;
      }
      ++a[i];
      prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
      for (std::size_t t = i + 1; t < n; ++t) {
        a[t] = 0;
        prefix_max[t] = prefix_max[i];
      }
    }
  }

  BruteForceResult out{encoder_from_cells(best_cells, positive, prob.k, j.x_support_size()),
                       best_objective,
                       {},
                       encoder_from_cells(constrained_cells, positive, prob.k, j.x_support_size()),
                       {},
                       enumerated};
  out.lagrangian_stats = encoder_stats(out.lagrangian, j);
  out.constrained_stats = encoder_stats(out.constrained, j);
  return out;
}

Encoder greedy_merge_ib(const IbProblem& prob) {
  validate(prob);
  const JointPmf& j = prob.joint;
  const auto positive = positive_symbols(j);
  const auto py = j.marginal_y();

  struct Cell {
    std::vector<std::size_t> members;  // indices into positive
    double y0, y1, term;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    const double y0 = j.prob(positive[i], 0);
    const double y1 = j.prob(positive[i], 1);
    cells.push_back({{i}, y0, y1, cell_term(y0, y1, py, prob.beta)});
  }

  while (cells.size() > 1) {
    double best_delta = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        const double merged = cell_term(cells[a].y0 + cells[b].y0, cells[a].y1 + cells[b].y1, py, prob.beta);
        const double delta = merged - cells[a].term - cells[b].term;
        if (delta < best_delta) {
          best_delta = delta;
          bi = a;
          bj = b;
        }
      }
    }
    if (cells.size() <= prob.k && !(best_delta < 0.0)) {
      break;
    }
    Cell& target = cells[bi];
    target.members.insert(target.members.end(), cells[bj].members.begin(), cells[bj].members.end());
    target.y0 += cells[bj].y0;
    target.y1 += cells[bj].y1;
    target.term = cell_term(target.y0, target.y1, py, prob.beta);
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  std::vector<std::size_t> cell_of(positive.size(), 0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t i : cells[c].members) {
      cell_of[i] = c;
    }
  }
  return encoder_from_cells(cell_of, positive, prob.k, j.x_support_size());
}

Encoder deterministic_ib(const IbProblem& prob) {
  validate(prob);
  if (prob.criterion != Criterion::entropy) {
    throw Error("deterministic_ib: requires the entropy criterion");
  }
  const double n = static_cast<double>(positive_symbols(prob.joint).size());
  if (n * std::log10(static_cast<double>(prob.k)) <= std::log10(kMaxEnumeration)) {
    return brute_force_encoder(prob).lagrangian;
  }
  return greedy_merge_ib(prob);
}

}  // namespace entlab
