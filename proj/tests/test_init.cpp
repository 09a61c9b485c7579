#include <doctest.h>

#include <cmath>

#include "basex/errors.hpp"
#include "basex/init.hpp"
#include "test_util.hpp"

using namespace basex;
using basex::testutil::all_k_subsets;
using basex::testutil::random_psd;

TEST_CASE("greedy init on diagonal and identity ensembles") {
  const KDPP diag(linalg::SymmetricMatrix::diagonal({4, 3, 2, 1}), 2);
  const auto report = greedy_init_kdpp(diag);
  CHECK(report.s0 == Subset{0, 1});
  CHECK(std::exp(report.log_mass) == doctest::Approx(12.0));
  CHECK(report.method == InitMethod::greedy_det);

  const KDPP identity(linalg::SymmetricMatrix::diagonal({1, 1, 1, 1, 1}), 3);
  const auto tie = greedy_init_kdpp(identity);
  CHECK(tie.s0 == Subset{0, 1, 2});  // smallest-index tie-break
  CHECK(tie.log_mass == doctest::Approx(0.0));
}

TEST_CASE("greedy init satisfies the k! volume guarantee") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8;
    const std::size_t k = 3;
    const KDPP d(random_psd(rng, n, n), k);
    const auto report = greedy_init_kdpp(d);

    double best = 0.0;
    double total = 0.0;
    for (const auto& s : all_k_subsets(n, k)) {
      const double mass = d.mass(s);
      best = std::max(best, mass);
      total += mass;
    }
    const double factorial = 6.0;  // 3!
    const double greedy_mass = std::exp(report.log_mass);
    CHECK(greedy_mass == doctest::Approx(d.mass(report.s0)).epsilon(1e-9));
    CHECK(greedy_mass >= best / factorial * (1.0 - 1e-9));
    // normalized start mass dominates 1/(k! |supp|)
    std::size_t support = 0;
    for (const auto& s : all_k_subsets(n, k)) {
      if (d.mass(s) > 0.0) ++support;
    }
    CHECK(greedy_mass / total >= 1.0 / (factorial * support) * (1.0 - 1e-9));
  }
}

TEST_CASE("greedy init rejects k beyond the reachable rank") {
  // ensemble rank 1 but k = 1 works; build rank deficiency at the greedy level
  Rng rng(19);
  const auto m = random_psd(rng, 5, 2);  // rank 2
  CHECK_THROWS_AS(KDPP(m, 3), DomainError);  // caught at construction
}

TEST_CASE("max-weight spanning tree initializer") {
  const SpanningTreeDistribution triangle(
      3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  const auto tie = init_spanning_tree(triangle);
  CHECK(tie.s0 == Subset{0, 1});  // edge-index tie-break
  CHECK(tie.method == InitMethod::max_weight_tree);

  const SpanningTreeDistribution path(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  const auto forced = init_spanning_tree(path);
  CHECK(forced.s0 == Subset{0, 1});
  CHECK(forced.log_mass == doctest::Approx(std::log(1.0)));

  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t v = 4 + rng.next_below(4);  // up to 7 vertices
    const SpanningTreeDistribution g(
        v, basex::testutil::random_connected_graph(rng, v, v));
    const auto report = init_spanning_tree(g);
    double best = 0.0;
    for (const auto& s : all_k_subsets(g.ground_size(), g.degree())) {
      best = std::max(best, g.mass(s));
    }
    CHECK(std::exp(report.log_mass) == doctest::Approx(best).epsilon(1e-9));
    CHECK(g.mass(report.s0) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("table initializer picks the argmax with lexicographic ties") {
  const ExplicitTable t(3, 2, {{Subset{0, 1}, 2.0}, {Subset{1, 2}, 3.0}});
  CHECK(init_table(t).s0 == Subset{1, 2});
  CHECK(init_table(t).method == InitMethod::table_argmax);

  const ExplicitTable equal(
      3, 2, {{Subset{0, 2}, 1.0}, {Subset{0, 1}, 1.0}, {Subset{1, 2}, 1.0}});
  CHECK(init_table(equal).s0 == Subset{0, 1});

  const ExplicitTable single(4, 2, {{Subset{1, 3}, 0.5}});
  CHECK(init_table(single).s0 == Subset{1, 3});
}

TEST_CASE("initialize dispatches on the backend") {
  const KDPP diag(linalg::SymmetricMatrix::diagonal({4, 3, 2, 1}), 2);
  CHECK(initialize(diag).method == InitMethod::greedy_det);

  const ExplicitTable t(3, 2, {{Subset{0, 1}, 2.0}});
  CHECK(initialize(t).method == InitMethod::table_argmax);

  const SpanningTreeDistribution path(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  CHECK(initialize(path).method == InitMethod::max_weight_tree);
}

TEST_CASE("all initializers return a support member") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng.next_below(4);
    const std::size_t k = 1 + rng.next_below(n - 1);
    const std::size_t r = k + rng.next_below(n - k + 1);
    const KDPP d(random_psd(rng, n, r), k);
    const auto report = greedy_init_kdpp(d);
    CHECK(d.mass(report.s0) > 0.0);
    CHECK(report.log_mass == doctest::Approx(d.log_mass(report.s0)).epsilon(1e-9));
  }
}
