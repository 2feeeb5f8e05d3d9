#include "entlab/learners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

namespace entlab {

Encoder::Encoder(std::size_t k, std::size_t x_count, std::vector<double> cond, std::size_t default_cell)
    : k_(k), x_count_(x_count), cond_(std::move(cond)), default_cell_(default_cell) {
  if (k_ == 0) {
    throw Error("Encoder: k must be >= 1");
  }
  if (default_cell_ >= k_) {
    throw Error("Encoder: default cell outside 0..k-1");
  }
  if (cond_.size() != k_ * x_count_) {
    throw Error("Encoder: table size does not match x_count * k");
  }
  for (std::size_t x = 0; x < x_count_; ++x) {
    const auto r = row(x);
    for (double v : r) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error("Encoder: negative or non-finite entry");
      }
    }
    if (std::abs(stable_sum(r) - 1.0) > 1e-9) {
      throw Error("Encoder: row does not sum to 1");
    }
  }
}

Encoder Encoder::deterministic(std::size_t k, std::span<const std::size_t> assignment, std::size_t default_cell) {
  std::vector<double> cond(assignment.size() * k, 0.0);
  for (std::size_t x = 0; x < assignment.size(); ++x) {
    if (assignment[x] >= k) {
      throw Error("Encoder: cell outside 0..k-1");
    }
    cond[x * k + assignment[x]] = 1.0;
  }
  return Encoder(k, assignment.size(), std::move(cond), default_cell);
}

Encoder Encoder::identity(std::size_t x_count) {
  std::vector<std::size_t> assignment(x_count);
  for (std::size_t x = 0; x < x_count; ++x) {
    assignment[x] = x;
  }
  return deterministic(std::max<std::size_t>(x_count, 1), assignment);
}

Encoder Encoder::constant(std::size_t k, std::size_t x_count, std::size_t cell) {
  return deterministic(k, std::vector<std::size_t>(x_count, cell), cell);
}

bool Encoder::is_deterministic() const {
  return std::all_of(cond_.begin(), cond_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

std::size_t Encoder::argmax_cell(Symbol x) const {
  if (x >= x_count_) {
    return default_cell_;
  }
  const auto r = row(x);
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

std::vector<std::size_t> Encoder::assignment() const {
  std::vector<std::size_t> out(x_count_);
  for (std::size_t x = 0; x < x_count_; ++x) {
    out[x] = argmax_cell(x);
  }
  return out;
}

Encoder harden(const Encoder& enc) {
  return Encoder::deterministic(enc.k(), enc.assignment(), enc.default_cell());
}

namespace {

std::vector<std::size_t> relabel_order(const std::vector<std::size_t>& assignment, std::size_t k,
                                       const Pmf& px) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> relabel(k, kUnset);
  std::size_t next = 0;
  for (std::size_t x = 0; x < assignment.size(); ++x) {
    if (x < px.support_size() && px.prob(x) > 0.0 && relabel[assignment[x]] == kUnset) {
      relabel[assignment[x]] = next++;
    }
  }
  for (auto& r : relabel) {
    if (r == kUnset) {
      r = next++;
    }
  }
  return relabel;
}

}  // namespace

Encoder canonicalize(const Encoder& enc, const Pmf& px) {
  const auto relabel = relabel_order(enc.assignment(), enc.k(), px);
  std::vector<double> cond(enc.k() * enc.x_count(), 0.0);
  for (std::size_t x = 0; x < enc.x_count(); ++x) {
    const auto r = enc.row(x);
    for (std::size_t c = 0; c < enc.k(); ++c) {
      cond[x * enc.k() + relabel[c]] = r[c];
    }
  }
  return Encoder(enc.k(), enc.x_count(), std::move(cond), relabel[enc.default_cell()]);
}

bool same_partition(const Encoder& a, const Encoder& b, const Pmf& px) {
  std::map<std::size_t, std::size_t> forward, backward;
  for (std::size_t x = 0; x < px.support_size(); ++x) {
    if (px.prob(x) <= 0.0) {
      continue;
    }
    const std::size_t ca = a.argmax_cell(x);
    const std::size_t cb = b.argmax_cell(x);
    auto [fit, fnew] = forward.emplace(ca, cb);
    auto [bit, bnew] = backward.emplace(cb, ca);
    if (fit->second != cb || bit->second != ca) {
      return false;
    }
  }
  return true;
}

EncoderStats encoder_stats(const Encoder& enc, const JointPmf& j) {
  const std::size_t k = enc.k();
  const Pmf px = j.marginal_x();
  std::vector<double> cell_mass(k, 0.0);
  std::vector<std::array<double, 2>> cell_y(k, {0.0, 0.0});
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    for (std::size_t c = 0; c < k; ++c) {
      const double w = enc.prob(x, c);
      if (w == 0.0) {
        continue;
      }
      cell_mass[c] += px.prob(x) * w;
      cell_y[c][0] += j.prob(x, 0) * w;
      cell_y[c][1] += j.prob(x, 1) * w;
    }
  }

  // Normalize by the accumulated mass so a cell holding everything has
  // probability exactly 1.
  const double total = stable_sum(cell_mass);
  std::array<double, 2> py_cells{0.0, 0.0};
  for (std::size_t c = 0; c < k; ++c) {
    cell_mass[c] /= total;
    cell_y[c][0] /= total;
    cell_y[c][1] /= total;
    py_cells[0] += cell_y[c][0];
    py_cells[1] += cell_y[c][1];
  }

  EncoderStats stats;
  std::vector<double> h_terms, ix_terms, iy_terms;
  for (std::size_t c = 0; c < k; ++c) {
    if (cell_mass[c] > 0.0) {
      h_terms.push_back(-cell_mass[c] * std::log2(cell_mass[c]));
      for (int y = 0; y < 2; ++y) {
        if (cell_y[c][y] > 0.0) {
          iy_terms.push_back(cell_y[c][y] * std::log2(cell_y[c][y] / (cell_mass[c] * py_cells[y])));
        }
      }
    }
  }
  for (std::size_t x = 0; x < j.x_support_size(); ++x) {
    if (px.prob(x) <= 0.0) {
      continue;
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double w = enc.prob(x, c);
      if (w > 0.0) {
        ix_terms.push_back(px.prob(x) * w * std::log2(w / cell_mass[c]));
      }
    }
  }
  stats.h_xhat = std::max(0.0, stable_sum(h_terms));
  stats.i_y_xhat = std::max(0.0, stable_sum(iy_terms));
  stats.i_x_xhat = std::max(0.0, stable_sum(ix_terms));
  return stats;
}

Hypothesis memorizer_fit(const Dataset& s, Label default_label) {
  if (s.empty()) {
    throw Error("empty sample");
  }
  auto majority = [default_label](std::size_t zeros, std::size_t ones) -> Label {
    if (zeros == ones) {
      return default_label;
    }
    return ones > zeros ? 1 : 0;
  };

  Symbol max_x = 0;
  for (const auto& p : s.pairs) {
    max_x = std::max(max_x, p.x);
  }
  std::map<Symbol, Label> entries;
  if (max_x < (Symbol{1} << 24) && max_x <= 8 * s.size() + 1024) {
    std::vector<std::array<std::size_t, 2>> counts(max_x + 1, {0, 0});
    for (const auto& [x, y] : s.pairs) {
      ++counts[x][y];
    }
    for (Symbol x = 0; x <= max_x; ++x) {
      if (counts[x][0] + counts[x][1] > 0) {
        entries.emplace_hint(entries.end(), x, majority(counts[x][0], counts[x][1]));
      }
    }
  } else {
    std::unordered_map<Symbol, std::array<std::size_t, 2>> counts;
    for (const auto& [x, y] : s.pairs) {
      ++counts[x][y];
    }
    for (const auto& [x, c] : counts) {
      entries.emplace(x, majority(c[0], c[1]));
    }
  }
  return Hypothesis::from_entries(entries, default_label);
}

Hypothesis center_learner(const Dataset& s, const ProjectionSpec& spec, Label default_label) {
  return project(memorizer_fit(s, default_label), spec);
}

Encoder overfit_encoder(const Dataset& s) {
  if (s.empty()) {
    throw Error("empty sample");
  }
  std::map<Symbol, Label> labels;
  for (const auto& [x, y] : s.pairs) {
    auto [it, inserted] = labels.emplace(x, y);
    if (!inserted && it->second != y) {
      throw Error("overfit premise violated: repeated x with conflicting labels");
    }
  }
  const std::size_t x_count = static_cast<std::size_t>(labels.rbegin()->first) + 1;
  std::vector<std::size_t> assignment(x_count, 0);
  for (const auto& [x, y] : labels) {
    assignment[x] = y;
  }
  return Encoder::deterministic(2, assignment, 0);
}

}  // namespace entlab
