#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "basex/chain.hpp"
#include "basex/distribution.hpp"
#include "basex/rng.hpp"

namespace basex::diagnostics {

// Normalized stationary law over the enumerated support.
struct ExactDistribution {
  std::vector<Subset> states;  // lexicographic
  std::vector<double> probs;   // positive, sum to 1

  std::optional<std::size_t> index_of(const Subset& s) const;
};

ExactDistribution enumerate(const HomogeneousDistribution& d,
                            std::uint64_t cap = kDefaultEnumerationCap);

// Explicit kernel of the lazy base-exchange walk over the enumerated
// support. Row-stochastic, diagonal >= 1/2, reversible w.r.t. the exact
// distribution.
struct TransitionMatrix {
  std::vector<Subset> states;
  std::vector<double> p;  // row-major m x m

  std::size_t size() const { return states.size(); }
  double operator()(std::size_t x, std::size_t y) const {
    return p[x * states.size() + y];
  }
};

TransitionMatrix build_transition_matrix(const HomogeneousDistribution& d,
                                         std::uint64_t cap = kDefaultEnumerationCap);

// 1 minus the second-largest eigenvalue of P, via the similarity transform
// D^{1/2} P D^{-1/2}. The 1x1 chain returns 1 (mixed at t = 0).
double poincare_constant(const TransitionMatrix& t, const ExactDistribution& pi);

// Eq.-style definition of C_mu over exchange-adjacent support pairs.
inline double compute_c_mu(const HomogeneousDistribution& d,
                           std::uint64_t cap = kDefaultEnumerationCap) {
  return compute_c_mu_exact(d, cap);
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

// Exact TV(P^t(s0,.), pi) for t = 0..t_max via iterated vector-matrix
// products.
std::vector<std::pair<long, double>> tv_curve(const TransitionMatrix& t,
                                              const ExactDistribution& pi,
                                              const Subset& s0, long t_max);

// Rows of P^t for arbitrary t via cached binary powers of P; used when the
// needed t differs per start state.
class TransitionPowerCache {
 public:
  explicit TransitionPowerCache(const TransitionMatrix& t);

  // Distribution of the chain at time t started from state index x.
  std::vector<double> row(std::size_t x, long t) const;

 private:
  const std::vector<double>& power(std::size_t j) const;

  std::size_t m_;
  mutable std::vector<std::vector<double>> powers_;  // powers_[j] = P^(2^j)
};

struct NegativeCorrelationCheck {
  bool ok = true;
  int i = -1;
  int j = -1;
  double worst_slack = 0.0;  // min over pairs of P(i)P(j) - P(i,j)
};

// Pairwise negative correlation of the exact law, slack >= -1e-10.
NegativeCorrelationCheck check_negative_correlation(const ExactDistribution& pi,
                                                    std::size_t n);

// Exact k-DPP sampler through the spectral route (elementary symmetric
// recurrence over the spectrum, then a projection-DPP draw). Independent
// of the Metropolis path; output law equals enumerate().
class SpectralKdppSampler {
 public:
  explicit SpectralKdppSampler(const KDPP& d);

  Subset draw(Rng& rng) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> values_;   // eigenvalues, ascending
  std::vector<double> vectors_;  // row-major n x n, column j = eigenvector
  std::vector<double> esym_;     // esym_[j*(n+1)+i] = e_j(values_[0..i-1])
};

Subset spectral_kdpp_sample(const KDPP& d, Rng& rng);

struct DiagnosticsReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t support_size = 0;
  double lambda = 1.0;
  double c_mu = 0.5;
  double c_mu_lower_bound = 0.5;  // universal 1/(2kn)
  long tau_bound = 0;
  double epsilon = 0.0;
  Subset start;
  std::vector<std::pair<long, double>> tv;
  double tv_at_tau = 0.0;
  bool negative_correlation_ok = true;
  bool exchange_ok = true;

  // lambda >= c_mu - 1e-9, TV at tau <= epsilon, negative correlation and
  // exchange property all hold.
  bool all_checks_pass() const;
};

DiagnosticsReport build_report(const HomogeneousDistribution& d, const Subset& s0,
                               double epsilon,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Single JSON document, floats with 17 significant digits.
std::string to_json(const DiagnosticsReport& report);

}  // namespace basex::diagnostics
