#include <doctest.h>

#include <cmath>
#include <map>

#include "basex/diagnostics.hpp"
#include "basex/errors.hpp"
#include "basex/init.hpp"
#include "test_util.hpp"

using namespace basex;
namespace diag = basex::diagnostics;
using basex::testutil::all_k_subsets;
using basex::testutil::random_psd;

namespace {

KDPP identity_kdpp(std::size_t n, std::size_t k) {
  return KDPP(linalg::SymmetricMatrix::diagonal(std::vector<double>(n, 1.0)), k);
}

}  // namespace

TEST_CASE("enumerate normalizes the support") {
  const auto uniform = diag::enumerate(identity_kdpp(4, 2));
  CHECK(uniform.states.size() == 6);
  for (double p : uniform.probs) CHECK(p == doctest::Approx(1.0 / 6.0));

  const KDPP two(linalg::SymmetricMatrix::diagonal({1.0, 3.0}), 1);
  const auto pi = diag::enumerate(two);
  CHECK(pi.probs[0] == doctest::Approx(0.25));
  CHECK(pi.probs[1] == doctest::Approx(0.75));

  Rng rng(3);
  const KDPP d(random_psd(rng, 6, 6), 3);
  const auto exact = diag::enumerate(d);
  double total = 0.0;
  for (const auto& s : all_k_subsets(6, 3)) total += d.mass(s);
  for (std::size_t i = 0; i < exact.states.size(); ++i) {
    CHECK(exact.probs[i] ==
          doctest::Approx(d.mass(exact.states[i]) / total).epsilon(1e-10));
  }
}

TEST_CASE("transition matrix entries for the uniform chain") {
  const auto t = diag::build_transition_matrix(identity_kdpp(4, 2));
  const auto pi = diag::enumerate(identity_kdpp(4, 2));
  for (std::size_t x = 0; x < t.size(); ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < t.size(); ++y) {
      row += t(x, y);
      if (x == y) {
        CHECK(t(x, y) == doctest::Approx(0.5).epsilon(1e-12));
      } else if (pi.states[x].difference_size(pi.states[y]) == 1) {
        CHECK(t(x, y) == doctest::Approx(0.125).epsilon(1e-12));
      } else {
        CHECK(t(x, y) == 0.0);
      }
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("single-state support gives the 1x1 kernel") {
  const ExplicitTable t(3, 2, {{Subset{0, 1}, 1.0}});
  const auto matrix = diag::build_transition_matrix(t);
  CHECK(matrix.size() == 1);
  CHECK(matrix(0, 0) == 1.0);
  CHECK(diag::poincare_constant(matrix, diag::enumerate(t)) == 1.0);
}

TEST_CASE("transition matrix invariants on random instances") {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 5 + rng.next_below(3);
    const std::size_t k = 1 + rng.next_below(n - 1);
    const std::size_t r = k + rng.next_below(n - k + 1);
    const KDPP d(random_psd(rng, n, r), k);
    const auto t = diag::build_transition_matrix(d);
    const auto pi = diag::enumerate(d);
    for (std::size_t x = 0; x < t.size(); ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < t.size(); ++y) {
        row += t(x, y);
        const double lhs = pi.probs[x] * t(x, y);
        const double rhs = pi.probs[y] * t(y, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(t(x, x) >= 0.5 - 1e-12);
    }
  }
}

TEST_CASE("two-state Poincare constant equals c") {
  for (double c : {0.1, 0.25, 0.5}) {
    for (double pi1 : {0.2, 0.5, 0.9}) {
      diag::TransitionMatrix t;
      t.states = {Subset{0}, Subset{1}};
      const double p01 = c * pi1;
      const double p10 = c * (1.0 - pi1);
      t.p = {1.0 - p01, p01, p10, 1.0 - p10};
      diag::ExactDistribution pi;
      pi.states = t.states;
      pi.probs = {1.0 - pi1, pi1};
      CHECK(diag::poincare_constant(t, pi) == doctest::Approx(c).epsilon(1e-10));
    }
  }
}

TEST_CASE("Poincare constant cross-check against a direct eigensolve") {
  // uniform chain: P itself is symmetric, so its eigenvalues need no
  // similarity transform
  const auto t = diag::build_transition_matrix(identity_kdpp(4, 2));
  const auto pi = diag::enumerate(identity_kdpp(4, 2));
  const double lambda = diag::poincare_constant(t, pi);

  linalg::SymmetricMatrix p(t.size(), t.p);
  const auto eig = linalg::symmetric_eigen(p, false);
  CHECK(lambda ==
        doctest::Approx(1.0 - eig.eigenvalues[t.size() - 2]).epsilon(1e-10));
}

TEST_CASE("c_mu closed forms") {
  CHECK(diag::compute_c_mu(identity_kdpp(4, 2)) ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  CHECK(diag::compute_c_mu(identity_kdpp(6, 2)) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-12));

  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 5 + rng.next_below(4);
    const std::size_t k = 1 + rng.next_below(n - 1);
    const std::size_t r = k + rng.next_below(n - k + 1);
    const KDPP d(random_psd(rng, n, r), k);
    const double c_mu = diag::compute_c_mu(d);
    CHECK(c_mu >= 1.0 / (2.0 * k * n) - 1e-15);
    if (diag::enumerate(d).states.size() > 1) {
      CHECK(c_mu == doctest::Approx(1.0 / (2.0 * k * (n - k))).epsilon(1e-12));
    }
  }
}

TEST_CASE("tv curve starts at 1 - pi(S0), decays, and is monotone") {
  Rng rng(61);
  const KDPP d(random_psd(rng, 6, 6), 2);
  const auto pi = diag::enumerate(d);
  const auto t = diag::build_transition_matrix(d);
  const double lambda = diag::poincare_constant(t, pi);
  const Subset s0 = pi.states.front();

  double pi_min = 1.0;
  for (double p : pi.probs) pi_min = std::min(pi_min, p);
  const long t_max = 10 * static_cast<long>(
                              std::ceil(std::log(1.0 / pi_min) / lambda));
  const auto curve = diag::tv_curve(t, pi, s0, t_max);

  CHECK(curve.front().second ==
        doctest::Approx(1.0 - pi.probs.front()).epsilon(1e-12));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].second <= curve[i - 1].second + 1e-12);
  }
  CHECK(curve.back().second <= 1e-10);
}

TEST_CASE("tv at the mixing budget is below epsilon") {
  Rng rng(67);
  const KDPP d(random_psd(rng, 7, 7), 3);
  const auto pi = diag::enumerate(d);
  const auto t = diag::build_transition_matrix(d);
  const double c_mu = diag::compute_c_mu(d);
  for (double eps : {0.1, 0.01}) {
    for (std::size_t x = 0; x < pi.states.size(); ++x) {
      const long tau = static_cast<long>(
          std::ceil(std::log(1.0 / (eps * pi.probs[x])) / c_mu));
      const auto curve = diag::tv_curve(t, pi, pi.states[x], tau);
      CHECK(curve.back().second <= eps);
    }
  }
}

TEST_CASE("power cache matches the iterated curve") {
  Rng rng(71);
  const KDPP d(random_psd(rng, 6, 6), 3);
  const auto pi = diag::enumerate(d);
  const auto t = diag::build_transition_matrix(d);
  const diag::TransitionPowerCache cache(t);
  const auto curve = diag::tv_curve(t, pi, pi.states[2], 75);
  for (long step : {0L, 1L, 2L, 7L, 33L, 75L}) {
    const auto row = cache.row(2, step);
    CHECK(diag::total_variation(row, pi.probs) ==
          doctest::Approx(curve[static_cast<std::size_t>(step)].second)
              .epsilon(1e-10));
  }
}

TEST_CASE("negative correlation holds for DPPs and uniform k-subsets") {
  Rng rng(73);
  const KDPP d(random_psd(rng, 7, 7), 3);
  CHECK(diag::check_negative_correlation(diag::enumerate(d), 7).ok);
  CHECK(diag::check_negative_correlation(diag::enumerate(identity_kdpp(6, 2)), 6).ok);
}

TEST_CASE("positively correlated table is detected") {
  // mass concentrated on {0,1} and {2,3}: P(0 in S, 1 in S) = 1/2 but the
  // marginals are 1/2 each, so the pair is positively correlated
  const ExplicitTable t(4, 2, {{Subset{0, 1}, 1.0}, {Subset{2, 3}, 1.0}});
  const auto check = diag::check_negative_correlation(diag::enumerate(t), 4);
  CHECK_FALSE(check.ok);
  CHECK(check.worst_slack == doctest::Approx(-0.25));
}

TEST_CASE("spectral sampler on diagonal ensembles") {
  const KDPP two(linalg::SymmetricMatrix::diagonal({1.0, 3.0}), 1);
  const diag::SpectralKdppSampler sampler(two);
  Rng rng(81);
  long ones = 0;
  const long draws = 40000;
  for (long i = 0; i < draws; ++i) {
    if (sampler.draw(rng) == Subset{1}) ++ones;
  }
  CHECK(static_cast<double>(ones) / draws == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("spectral sampler matches enumeration on a random ensemble") {
  Rng gen(91);
  const KDPP d(random_psd(gen, 6, 6), 3);
  const auto pi = diag::enumerate(d);
  const diag::SpectralKdppSampler sampler(d);
  Rng rng(92);
  std::map<Subset, long> counts;
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) counts[sampler.draw(rng)]++;

  double tv = 0.0;
  for (std::size_t x = 0; x < pi.states.size(); ++x) {
    const auto it = counts.find(pi.states[x]);
    const double freq =
        it == counts.end() ? 0.0 : static_cast<double>(it->second) / draws;
    tv += std::abs(freq - pi.probs[x]);
  }
  // everything outside the support counts fully against the sampler
  for (const auto& [s, c] : counts) {
    if (!pi.index_of(s)) tv += static_cast<double>(c) / draws;
  }
  tv *= 0.5;
  CHECK(tv <= 3.0 * std::sqrt(static_cast<double>(pi.states.size()) /
                              (2.0 * draws)));
}

TEST_CASE("uniform spectral draws from the identity ensemble") {
  const diag::SpectralKdppSampler sampler(identity_kdpp(5, 2));
  Rng rng(95);
  std::map<Subset, long> counts;
  const long draws = 50000;
  for (long i = 0; i < draws; ++i) counts[sampler.draw(rng)]++;
  CHECK(counts.size() == 10);
  for (const auto& [s, c] : counts) {
    CHECK(static_cast<double>(c) / draws == doctest::Approx(0.1).epsilon(0.06));
  }
}

TEST_CASE("diagnostics report on the uniform chain") {
  const KDPP d = identity_kdpp(4, 2);
  const auto report = diag::build_report(d, Subset{0, 1}, 0.1);
  CHECK(report.c_mu == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(report.lambda >= report.c_mu - 1e-9);
  CHECK(report.exchange_ok);
  CHECK(report.negative_correlation_ok);
  CHECK(report.tv_at_tau <= 0.1);
  CHECK(report.all_checks_pass());

  const auto json = diag::to_json(report);
  CHECK(json.find("\"lambda\":") != std::string::npos);
  CHECK(json.find("\"tv_curve\":[[0,") != std::string::npos);
  CHECK(json.find("\"exchange_ok\":true") != std::string::npos);
}

TEST_CASE("diagnostics report flags a broken support") {
  const ExplicitTable t(4, 2, {{Subset{0, 1}, 1.0}, {Subset{2, 3}, 1.0}});
  const auto report = diag::build_report(t, Subset{0, 1}, 0.1);
  CHECK_FALSE(report.exchange_ok);
  CHECK_FALSE(report.all_checks_pass());
}
