#include <doctest.h>

#include <cmath>
#include <numeric>

#include "entlab/dist_core.hpp"
#include "entlab/error.hpp"
#include "test_support.hpp"

using namespace entlab;
using doctest::Approx;

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(Pmf({}), Error);
  CHECK_THROWS_AS(Pmf({0.5, 0.6}), Error);
  CHECK_THROWS_AS(Pmf({1.5, -0.5}), Error);
  CHECK_NOTHROW(Pmf({0.25, 0.75}));
  CHECK(Pmf::from_weights(std::vector<double>{1, 3}).prob(1) == 0.75);
  CHECK(Pmf::point_mass(3, 1).min_positive() == 1.0);
}

TEST_CASE("log2 weights keep probabilities that underflow") {
  const std::vector<double> lw{0.0, -2000.0};
  const Pmf p = Pmf::from_log2_weights(lw);
  CHECK(p.prob(1) == 0.0);
  CHECK(p.log2_prob(1) == Approx(-2000.0));
  CHECK(p.log2_prob(0) == Approx(0.0));
}

TEST_CASE("entropy") {
  CHECK(entropy(Pmf::uniform(4)) == Approx(2.0).epsilon(1e-15));
  CHECK(entropy(Pmf::point_mass(5, 2)) == 0.0);
  CHECK(entropy(Pmf({0.99, 0.01})) == Approx(0.0807931358959112).epsilon(1e-13));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 15;
    const Pmf p = testing::random_pmf(n, seed);
    CHECK(entropy(p) <= std::log2(static_cast<double>(n)) + 1e-12);
    CHECK(entropy(p) >= 0.0);
  }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.01) == Approx(0.0807931358959112).epsilon(1e-13));
  CHECK(binary_entropy(0.1) == Approx(0.468995593589281).epsilon(1e-13));
  CHECK_THROWS_AS(binary_entropy(1.5), Error);
}

TEST_CASE("mutual information") {
  const Pmf px = Pmf::uniform(3);
  const std::vector<double> p1(3, 0.3);
  CHECK(mutual_information(JointPmf::from_marginal_and_conditional(px, p1)) == Approx(0.0).epsilon(1e-15));
  CHECK(mutual_information(JointPmf({{0.5, 0.0}, {0.0, 0.5}})) == Approx(1.0).epsilon(1e-15));
  CHECK(mutual_information(JointPmf({{0.4, 0.1}, {0.1, 0.4}})) == Approx(0.278071905112638).epsilon(1e-13));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const JointPmf j = testing::random_joint(2 + seed % 10, seed);
    const double mi = mutual_information(j);
    CHECK(mi >= 0.0);
    CHECK(mi <= entropy(j.marginal_x()) + 1e-12);
    CHECK(mi <= 1.0 + 1e-12);
    const auto py = j.marginal_y();
    CHECK(mi == Approx(binary_entropy(py[1]) - conditional_entropy_y_given_x(j)).epsilon(1e-9));
  }
}

TEST_CASE("sampling") {
  const JointPmf point({{0.0, 0.0}, {0.0, 1.0}});
  const Dataset s = sample(point, 5, 3);
  REQUIRE(s.size() == 5);
  for (const auto& pt : s.pairs) {
    CHECK(pt.x == 1);
    CHECK(pt.y == 1);
  }
  const JointPmf coin({{0.25, 0.25}, {0.25, 0.25}});
  CHECK(sample(coin, 100, 9) == sample(coin, 100, 9));
  CHECK(sample(coin, 100, 9).source_id == source_id_of(coin));
  CHECK(sample(coin, 100, 9).seed == 9);
  CHECK_FALSE(sample(coin, 100, 9).pairs == sample(coin, 100, 10).pairs);

  const Dataset big = sample(coin, 100000, 1);
  const double ones = static_cast<double>(std::count_if(big.pairs.begin(), big.pairs.end(),
                                                        [](const LabeledPoint& p) { return p.y == 1; }));
  CHECK(std::abs(ones / 100000.0 - 0.5) < 0.01);
  CHECK_THROWS_AS(sample(coin, 0, 1), Error);
}

TEST_CASE("empirical distribution") {
  Dataset s;
  s.pairs = {{0, 0}, {0, 0}};
  CHECK(empirical(s, 2) == JointPmf({{1.0, 0.0}, {0.0, 0.0}}));
  s.pairs = {{0, 0}, {1, 1}};
  CHECK(empirical(s, 2) == JointPmf({{0.5, 0.0}, {0.0, 0.5}}));
  CHECK_THROWS_WITH_AS(empirical(Dataset{}, 2), "empty sample", Error);
  s.pairs = {{5, 0}};
  CHECK_THROWS_AS(empirical(s, 2), Error);

  const JointPmf j = testing::random_joint(7, 11);
  const Dataset d = sample(j, 5000, 2);
  const JointPmf e = empirical(d, 7);
  const Pmf ex = e.marginal_x();
  const auto probs = ex.probs();
  CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == Approx(1.0).epsilon(1e-12));
  CHECK(total_variation(e, j) < 0.05);
}
