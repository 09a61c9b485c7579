#pragma once

#include <cstdint>
#include <optional>

#include "basex/distribution.hpp"
#include "basex/rng.hpp"
#include "basex/subset.hpp"

namespace basex {

struct ChainConfig {
  double epsilon = 0.01;            // TV target, in (0,1)
  std::uint64_t seed = 0;
  std::optional<long> steps_override;
  // Laziness is fixed at 1/2 and not configurable.
};

struct MixingBudget {
  double c_mu = 0.5;
  double mu_start_normalized = 1.0;  // exact when enumerable, else a lower bound
  double epsilon = 0.0;
  long tau = 0;  // ceil((1/c_mu) * ln(1/(epsilon * mu_start_normalized)))
  bool c_mu_exact = false;  // false when the universal 1/(2kn) bound was used
};

struct Proposal {
  int remove = -1;
  int add = -1;
  Subset target;
};

// One lazy base-exchange walk. Mutable (state + RNG); run one per thread.
// Multiple runs over one shared immutable distribution may execute in
// parallel.
class ChainRun {
 public:
  // stream selects the RNG sub-stream ((seed, stream) -> generator), one
  // per independent chain.
  ChainRun(const HomogeneousDistribution& d, Subset start, std::uint64_t seed,
           std::uint64_t stream = 0);

  const Subset& current() const { return current_; }
  double current_log_mass() const { return current_log_mass_; }
  long step_count() const { return step_count_; }
  long accept_count() const { return accept_count_; }
  long reject_infeasible_count() const { return reject_infeasible_count_; }

  // k == 0 or k == n: the support is a single state and the chain is
  // already mixed; step() is a no-op beyond the counter.
  bool degenerate() const { return degenerate_; }

  // Draws i uniform over the current elements, then j uniform over the
  // absent ones (two RNG draws, i first). Does not advance the state.
  Proposal propose();

  // One transition: proposal (two draws) plus one acceptance draw. The
  // acceptance draw is consumed even when the proposal is infeasible, so
  // every step costs exactly three draws.
  void step();

  void run(long steps);

 private:
  const HomogeneousDistribution& d_;
  Subset current_;
  double current_log_mass_;
  Rng rng_;
  long step_count_ = 0;
  long accept_count_ = 0;
  long reject_infeasible_count_ = 0;
  bool degenerate_ = false;
};

// Off-diagonal stationary kernel entry: 1/2 * min(1, mass(T)/mass(S)) /
// (k*(n-k)) for exchange-adjacent S,T in the support, 0 otherwise.
double stationary_transition_prob(const HomogeneousDistribution& d,
                                  const Subset& s, const Subset& t);

// min over exchange-adjacent support pairs of max(P(S,T), P(T,S)).
// Singleton support returns the 1/2 convention. DomainError when the
// support has no adjacent pair (exchange property violated).
double compute_c_mu_exact(const HomogeneousDistribution& d,
                          std::uint64_t cap = kDefaultEnumerationCap);

// Theoretical step budget. Uses the exact enumerated C_mu and normalized
// mu(S0) when C(n,k) <= cap; otherwise falls back to the universal
// 1/(2kn) bound and mu_lower_bound (required in that case).
MixingBudget mixing_budget(const HomogeneousDistribution& d, const Subset& s0,
                           double epsilon,
                           std::optional<double> mu_lower_bound = std::nullopt,
                           std::uint64_t cap = kDefaultEnumerationCap);

struct SampleResult {
  Subset subset;
  long steps = 0;
  long accepts = 0;
  long infeasible_rejects = 0;
};

// Runs the chain for the budgeted number of steps (or steps_override) and
// returns the final state. Deterministic given (instance, seed, stream).
SampleResult sample(const HomogeneousDistribution& d, const Subset& s0,
                    const ChainConfig& config, std::uint64_t stream = 0,
                    std::optional<double> mu_lower_bound = std::nullopt,
                    std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace basex
