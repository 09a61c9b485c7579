#include "basex/chain.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include "basex/errors.hpp"

namespace basex {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (std::isinf(mx)) return kNegInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace

ChainRun::ChainRun(const HomogeneousDistribution& d, Subset start,
                   std::uint64_t seed, std::uint64_t stream)
    : d_(d),
      current_(std::move(start)),
      current_log_mass_(d.log_mass(current_)),
      rng_(seed, stream) {
  if (std::isinf(current_log_mass_)) {
    throw InputError("start state " + current_.to_string() + " is not in the support");
  }
  degenerate_ = d.degree() == 0 || d.degree() == d.ground_size();
}

Proposal ChainRun::propose() {
  if (degenerate_) {
    throw DomainError("single-state chain has no proposals");
  }
  const std::size_t k = d_.degree();
  const std::size_t n = d_.ground_size();
  const int i = current_[static_cast<std::size_t>(rng_.next_below(k))];
  const std::uint64_t pick = rng_.next_below(n - k);
  int j = -1;
  std::uint64_t seen = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (current_.contains(static_cast<int>(v))) continue;
    if (seen++ == pick) {
      j = static_cast<int>(v);
      break;
    }
  }
  return Proposal{i, j, current_.exchanged(i, j)};
}

void ChainRun::step() {
  if (degenerate_) {
    ++step_count_;
    return;
  }
  Proposal prop = propose();
  const double target_log_mass = d_.log_mass(prop.target);
  const double u = rng_.next_double();  // consumed on every branch
  ++step_count_;
  if (std::isinf(target_log_mass)) {
    ++reject_infeasible_count_;
    return;
  }
  const double log_ratio = target_log_mass - current_log_mass_;
  const double accept_prob = 0.5 * (log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio));
  if (u < accept_prob) {
    current_ = std::move(prop.target);
    current_log_mass_ = target_log_mass;
    ++accept_count_;
  }
}

void ChainRun::run(long steps) {
  for (long t = 0; t < steps; ++t) step();
}

double stationary_transition_prob(const HomogeneousDistribution& d,
                                  const Subset& s, const Subset& t) {
  const double ls = d.log_mass(s);
  const double lt = d.log_mass(t);
  if (std::isinf(ls) || std::isinf(lt)) {
    throw InputError("transition probability requested outside the support");
  }
  if (s == t) {
    throw InputError("off-diagonal transition probability requires distinct states");
  }
  if (s.difference_size(t) != 1) return 0.0;
  const double k = static_cast<double>(d.degree());
  const double m = static_cast<double>(d.ground_size() - d.degree());
  const double ratio = lt >= ls ? 1.0 : std::exp(lt - ls);
  return 0.5 * ratio / (k * m);
}

double compute_c_mu_exact(const HomogeneousDistribution& d, std::uint64_t cap) {
  const auto support = enumerate_support(d, cap);
  if (support.states.size() == 1) return 0.5;  // singleton convention
  std::unordered_set<Subset, SubsetHash> members(support.states.begin(),
                                                 support.states.end());
  const std::size_t n = d.ground_size();
  double c_mu = std::numeric_limits<double>::infinity();
  for (const Subset& s : support.states) {
    for (int i : s) {
      for (std::size_t v = 0; v < n; ++v) {
        const int j = static_cast<int>(v);
        if (s.contains(j)) continue;
        const Subset t = s.exchanged(i, j);
        if (!members.count(t)) continue;
        const double fwd = stationary_transition_prob(d, s, t);
        const double bwd = stationary_transition_prob(d, t, s);
        c_mu = std::min(c_mu, std::max(fwd, bwd));
      }
    }
  }
  if (std::isinf(c_mu)) {
    throw DomainError("support has no exchange-adjacent pair; basis-exchange "
                      "property violated");
  }
  return c_mu;
}

MixingBudget mixing_budget(const HomogeneousDistribution& d, const Subset& s0,
                           double epsilon, std::optional<double> mu_lower_bound,
                           std::uint64_t cap) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("epsilon must lie in (0,1)");
  }
  const double s0_log_mass = d.log_mass(s0);
  if (std::isinf(s0_log_mass)) {
    throw InputError("start state " + s0.to_string() + " is not in the support");
  }

  MixingBudget budget;
  budget.epsilon = epsilon;

  if (d.degree() == 0 || d.degree() == d.ground_size()) {
    budget.c_mu_exact = true;
    return budget;  // single state, already stationary
  }

  const bool enumerable =
      binomial_capped(d.ground_size(), d.degree(), cap) <= cap;
  if (enumerable) {
    const auto support = enumerate_support(d, cap);
    if (support.states.size() == 1) {
      budget.c_mu_exact = true;
      return budget;
    }
    budget.c_mu = compute_c_mu_exact(d, cap);
    budget.c_mu_exact = true;
    budget.mu_start_normalized =
        std::exp(s0_log_mass - log_sum_exp(support.log_masses));
  } else {
    budget.c_mu = 1.0 / (2.0 * static_cast<double>(d.degree()) *
                         static_cast<double>(d.ground_size()));
    budget.c_mu_exact = false;
    if (!mu_lower_bound) {
      throw InputError("non-enumerable instance requires a lower bound on the "
                       "normalized start mass");
    }
    budget.mu_start_normalized = *mu_lower_bound;
  }

  budget.tau = static_cast<long>(std::ceil(
      std::log(1.0 / (epsilon * budget.mu_start_normalized)) / budget.c_mu));
  if (budget.tau < 0) budget.tau = 0;
  return budget;
}

SampleResult sample(const HomogeneousDistribution& d, const Subset& s0,
                    const ChainConfig& config, std::uint64_t stream,
                    std::optional<double> mu_lower_bound, std::uint64_t cap) {
  long steps;
  if (config.steps_override) {
    steps = *config.steps_override;
    // start state still validated by the ChainRun constructor
  } else {
    steps = mixing_budget(d, s0, config.epsilon, mu_lower_bound, cap).tau;
  }
  ChainRun run(d, s0, config.seed, stream);
  run.run(steps);
  return SampleResult{run.current(), run.step_count(), run.accept_count(),
                      run.reject_infeasible_count()};
}

}  // namespace basex
