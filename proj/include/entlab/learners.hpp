#pragma once

// Learning algorithms over finite supports and the stochastic encoder type
// shared with the IB solvers.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "entlab/dist_core.hpp"
#include "entlab/hypotheses.hpp"

namespace entlab {

// A conditional distribution p(xhat | x) over k cells. Rows are stored for
// x in [0, x_count); every other x maps to default_cell with probability 1.
class Encoder {
 public:
  // cond is row-major, x_count rows of k entries; each row must sum to 1.
  Encoder(std::size_t k, std::size_t x_count, std::vector<double> cond, std::size_t default_cell = 0);

  static Encoder deterministic(std::size_t k, std::span<const std::size_t> assignment,
                               std::size_t default_cell = 0);
  static Encoder identity(std::size_t x_count);
  static Encoder constant(std::size_t k, std::size_t x_count, std::size_t cell = 0);

  std::size_t k() const { return k_; }
  std::size_t x_count() const { return x_count_; }
  std::size_t default_cell() const { return default_cell_; }

  double prob(Symbol x, std::size_t cell) const {
    if (x >= x_count_) {
      return cell == default_cell_ ? 1.0 : 0.0;
    }
    return cond_[x * k_ + cell];
  }
  // Valid for x < x_count().
  std::span<const double> row(std::size_t x) const { return {cond_.data() + x * k_, k_}; }

  bool is_deterministic() const;
  // Most probable cell of x (lowest index on ties).
  std::size_t argmax_cell(Symbol x) const;
  // Argmax cells for x in [0, x_count).
  std::vector<std::size_t> assignment() const;

  bool operator==(const Encoder&) const = default;

 private:
  std::size_t k_;
  std::size_t x_count_;
  std::vector<double> cond_;
  std::size_t default_cell_;
};

// Rounds every row to its argmax cell.
Encoder harden(const Encoder& enc);

// Relabels cells in order of the first x (by index, among x with positive
// weight under `px`) assigned to them; deterministic encoders map to a
// canonical representative of their partition.
Encoder canonicalize(const Encoder& enc, const Pmf& px);

// Deterministic encoders inducing the same partition of the positive-mass
// symbols of px, up to relabeling of cells.
bool same_partition(const Encoder& a, const Encoder& b, const Pmf& px);

struct EncoderStats {
  double i_x_xhat = 0.0;
  double i_y_xhat = 0.0;
  double h_xhat = 0.0;
};

// Exact I(X;Xhat), I(Y;Xhat), H(Xhat) under the Markov chain Y - X - Xhat.
EncoderStats encoder_stats(const Encoder& enc, const JointPmf& j);

// Majority label per seen x (ties and unseen x take default_label).
Hypothesis memorizer_fit(const Dataset& s, Label default_label = 0);

// The projected memorizer, always inside F_alpha.
Hypothesis center_learner(const Dataset& s, const ProjectionSpec& spec, Label default_label = 0);

// Deterministic binary encoder x_i -> y_i; unseen x -> cell 0. Requires that
// no x appears with two different labels.
Encoder overfit_encoder(const Dataset& s);

}  // namespace entlab
