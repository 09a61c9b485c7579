#include "basex/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "basex/errors.hpp"
#include "basex/io.hpp"
#include "basex/simd.hpp"

namespace basex::diagnostics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// C = A * B, all m x m row-major.
std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                           std::size_t m) {
  std::vector<double> c(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.data() + i * m;
    double* crow = c.data() + i * m;
    for (std::size_t k = 0; k < m; ++k) {
      if (arow[k] != 0.0) simd::axpy(crow, arow[k], b.data() + k * m, m);
    }
  }
  return c;
}

// y = v * P (row vector times matrix).
std::vector<double> vecmat(const std::vector<double>& v, const std::vector<double>& p,
                           std::size_t m) {
  std::vector<double> y(m, 0.0);
  for (std::size_t x = 0; x < m; ++x) {
    if (v[x] != 0.0) simd::axpy(y.data(), v[x], p.data() + x * m, m);
  }
  return y;
}

}  // namespace

std::optional<std::size_t> ExactDistribution::index_of(const Subset& s) const {
  const auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

ExactDistribution enumerate(const HomogeneousDistribution& d, std::uint64_t cap) {
  const auto support = enumerate_support(d, cap);
  double mx = kNegInf;
  for (double lm : support.log_masses) mx = std::max(mx, lm);
  double total = 0.0;
  std::vector<double> probs(support.log_masses.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::exp(support.log_masses[i] - mx);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return ExactDistribution{support.states, std::move(probs)};
}

TransitionMatrix build_transition_matrix(const HomogeneousDistribution& d,
                                         std::uint64_t cap) {
  const auto support = enumerate_support(d, cap);
  const std::size_t m = support.states.size();
  const std::size_t n = d.ground_size();
  const std::size_t k = d.degree();

  std::unordered_map<Subset, std::size_t, SubsetHash> index;
  index.reserve(m);
  for (std::size_t i = 0; i < m; ++i) index.emplace(support.states[i], i);

  TransitionMatrix t;
  t.states = support.states;
  t.p.assign(m * m, 0.0);
  const double denom = static_cast<double>(k) * static_cast<double>(n - k);
  for (std::size_t x = 0; x < m; ++x) {
    const Subset& s = support.states[x];
    double off_sum = 0.0;
    for (int i : s) {
      for (std::size_t v = 0; v < n; ++v) {
        const int j = static_cast<int>(v);
        if (s.contains(j)) continue;
        const auto it = index.find(s.exchanged(i, j));
        if (it == index.end()) continue;
        const double log_ratio = support.log_masses[it->second] - support.log_masses[x];
        const double prob =
            0.5 * (log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio)) / denom;
        t.p[x * m + it->second] = prob;
        off_sum += prob;
      }
    }
    t.p[x * m + x] = 1.0 - off_sum;
  }
  return t;
}

double poincare_constant(const TransitionMatrix& t, const ExactDistribution& pi) {
  const std::size_t m = t.size();
  if (m == 0) throw InputError("empty transition matrix");
  if (m == 1) return 1.0;  // mixed at t = 0

  std::vector<double> sqrt_pi(m);
  for (std::size_t i = 0; i < m; ++i) sqrt_pi[i] = std::sqrt(pi.probs[i]);
  linalg::SymmetricMatrix a(m);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      a.at(x, y) = t(x, y) * sqrt_pi[x] / sqrt_pi[y];
    }
  }
  // symmetric by detailed balance; the constructor averages roundoff
  const auto eig = linalg::symmetric_eigen(a, /*compute_vectors=*/false);
  return 1.0 - eig.eigenvalues[m - 2];
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

std::vector<std::pair<long, double>> tv_curve(const TransitionMatrix& t,
                                              const ExactDistribution& pi,
                                              const Subset& s0, long t_max) {
  const auto idx = pi.index_of(s0);
  if (!idx) throw InputError("start state " + s0.to_string() + " not in the support");
  const std::size_t m = t.size();
  std::vector<double> v(m, 0.0);
  v[*idx] = 1.0;
  std::vector<std::pair<long, double>> curve;
  curve.reserve(static_cast<std::size_t>(t_max) + 1);
  for (long step = 0;; ++step) {
    curve.emplace_back(step, total_variation(v, pi.probs));
    if (step == t_max) break;
    v = vecmat(v, t.p, m);
  }
  return curve;
}

TransitionPowerCache::TransitionPowerCache(const TransitionMatrix& t) : m_(t.size()) {
  powers_.push_back(t.p);
}

const std::vector<double>& TransitionPowerCache::power(std::size_t j) const {
  while (powers_.size() <= j) {
    powers_.push_back(matmul(powers_.back(), powers_.back(), m_));
  }
  return powers_[j];
}

std::vector<double> TransitionPowerCache::row(std::size_t x, long t) const {
  std::vector<double> v(m_, 0.0);
  v[x] = 1.0;
  std::size_t bit = 0;
  for (unsigned long rest = static_cast<unsigned long>(t); rest != 0; rest >>= 1, ++bit) {
    if (rest & 1UL) v = vecmat(v, power(bit), m_);
  }
  return v;
}

NegativeCorrelationCheck check_negative_correlation(const ExactDistribution& pi,
                                                    std::size_t n) {
  std::vector<double> marginal(n, 0.0);
  std::vector<double> pair(n * n, 0.0);
  for (std::size_t x = 0; x < pi.states.size(); ++x) {
    const Subset& s = pi.states[x];
    const double p = pi.probs[x];
    for (std::size_t a = 0; a < s.size(); ++a) {
      marginal[static_cast<std::size_t>(s[a])] += p;
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        pair[static_cast<std::size_t>(s[a]) * n + static_cast<std::size_t>(s[b])] += p;
      }
    }
  }
  NegativeCorrelationCheck check;
  check.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double slack = marginal[i] * marginal[j] - pair[i * n + j];
      if (slack < check.worst_slack) {
        check.worst_slack = slack;
        check.i = static_cast<int>(i);
        check.j = static_cast<int>(j);
      }
    }
  }
  if (n < 2) check.worst_slack = 0.0;
  check.ok = check.worst_slack >= -1e-10;
  return check;
}

SpectralKdppSampler::SpectralKdppSampler(const KDPP& d)
    : n_(d.ground_size()),
      k_(d.degree()),
      values_(d.eigen().eigenvalues),
      vectors_(d.eigen().eigenvectors) {
  for (double& v : values_) v = std::max(v, 0.0);  // clip PSD roundoff
  // esym_[j][i] = e_j over the first i eigenvalues
  esym_.assign((k_ + 1) * (n_ + 1), 0.0);
  for (std::size_t i = 0; i <= n_; ++i) esym_[i] = 1.0;  // e_0 = 1
  for (std::size_t j = 1; j <= k_; ++j) {
    for (std::size_t i = j; i <= n_; ++i) {
      esym_[j * (n_ + 1) + i] = esym_[j * (n_ + 1) + i - 1] +
                                values_[i - 1] * esym_[(j - 1) * (n_ + 1) + i - 1];
    }
  }
  const double ek = esym_[k_ * (n_ + 1) + n_];
  if (!(ek > 0.0) || !std::isfinite(ek)) {
    throw DomainError("degenerate elementary symmetric normalizer e_k");
  }
}

Subset SpectralKdppSampler::draw(Rng& rng) const {
  // Phase 1: eigenvector index set of size k, P(set) ~ prod of eigenvalues.
  std::vector<std::size_t> picked;
  picked.reserve(k_);
  std::size_t remaining = k_;
  for (std::size_t i = n_; i >= 1 && remaining > 0; --i) {
    double p_include;
    if (i == remaining) {
      p_include = 1.0;  // must take all that are left
    } else {
      p_include = values_[i - 1] * esym_[(remaining - 1) * (n_ + 1) + i - 1] /
                  esym_[remaining * (n_ + 1) + i];
    }
    if (rng.next_double() < p_include) {
      picked.push_back(i - 1);
      --remaining;
    }
  }

  // Phase 2: projection DPP on the picked eigenvectors.
  std::size_t cols = picked.size();
  std::vector<double> w(n_ * cols);  // row-major n x cols
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      w[r * cols + c] = vectors_[r * n_ + picked[c]];
    }
  }
  const std::size_t stride = cols;

  std::vector<int> items;
  items.reserve(k_);
  std::vector<double> row_norms(n_);
  while (cols > 0) {
    double total = 0.0;
    for (std::size_t r = 0; r < n_; ++r) {
      const double* row = w.data() + r * stride;
      row_norms[r] = simd::dot(row, row, cols);
      total += row_norms[r];
    }
    const double u = rng.next_double() * total;
    double acc = 0.0;
    std::size_t pick = n_ - 1;
    for (std::size_t r = 0; r < n_; ++r) {
      acc += row_norms[r];
      if (u < acc) {
        pick = r;
        break;
      }
    }
    items.push_back(static_cast<int>(pick));

    // Eliminate row `pick`: pivot on its largest column, subtract, drop it.
    const double* prow = w.data() + pick * stride;
    std::size_t pivot = 0;
    for (std::size_t c = 1; c < cols; ++c) {
      if (std::abs(prow[c]) > std::abs(prow[pivot])) pivot = c;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == pivot) continue;
      const double factor = prow[c] / prow[pivot];
      for (std::size_t r = 0; r < n_; ++r) {
        w[r * stride + c] -= factor * w[r * stride + pivot];
      }
    }
    // drop the pivot column by swapping in the last one
    if (pivot != cols - 1) {
      for (std::size_t r = 0; r < n_; ++r) {
        w[r * stride + pivot] = w[r * stride + cols - 1];
      }
    }
    --cols;

    // Re-orthonormalize the remaining columns (modified Gram-Schmidt) so
    // row norms stay equal to inclusion probabilities.
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (std::size_t r = 0; r < n_; ++r) {
          proj += w[r * stride + c] * w[r * stride + prev];
        }
        for (std::size_t r = 0; r < n_; ++r) {
          w[r * stride + c] -= proj * w[r * stride + prev];
        }
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < n_; ++r) {
        norm += w[r * stride + c] * w[r * stride + c];
      }
      norm = std::sqrt(norm);
      for (std::size_t r = 0; r < n_; ++r) w[r * stride + c] /= norm;
    }
  }
  return Subset(std::move(items));
}

Subset spectral_kdpp_sample(const KDPP& d, Rng& rng) {
  return SpectralKdppSampler(d).draw(rng);
}

bool DiagnosticsReport::all_checks_pass() const {
  return exchange_ok && negative_correlation_ok && lambda >= c_mu - 1e-9 &&
         tv_at_tau <= epsilon;
}

DiagnosticsReport build_report(const HomogeneousDistribution& d, const Subset& s0,
                               double epsilon, std::uint64_t cap) {
  DiagnosticsReport report;
  report.n = d.ground_size();
  report.k = d.degree();
  report.epsilon = epsilon;
  report.start = s0;

  const auto pi = enumerate(d, cap);
  report.support_size = pi.states.size();

  const auto exchange = check_exchange_property(d, cap);
  report.exchange_ok = exchange.ok;
  report.negative_correlation_ok =
      check_negative_correlation(pi, d.ground_size()).ok;

  const auto t = build_transition_matrix(d, cap);
  report.lambda = poincare_constant(t, pi);

  const bool single_state =
      pi.states.size() == 1 || d.degree() == 0 || d.degree() == d.ground_size();
  report.c_mu_lower_bound =
      single_state ? 0.5
                   : 1.0 / (2.0 * static_cast<double>(d.degree()) *
                            static_cast<double>(d.ground_size()));
  if (single_state) {
    report.c_mu = 0.5;
    report.tau_bound = 0;
    report.tv = {{0, 0.0}};
    report.tv_at_tau = 0.0;
    return report;
  }
  if (!exchange.ok) {
    // No matroid support; C_mu may be undefined (no adjacent pair) and the
    // mixing bound does not apply. Report what is computable.
    try {
      report.c_mu = compute_c_mu(d, cap);
    } catch (const DomainError&) {
      report.c_mu = std::numeric_limits<double>::quiet_NaN();
    }
    report.tau_bound = -1;
    report.tv_at_tau = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  report.c_mu = compute_c_mu(d, cap);
  const auto budget = mixing_budget(d, s0, epsilon, std::nullopt, cap);
  report.tau_bound = budget.tau;
  report.tv = tv_curve(t, pi, s0, budget.tau);
  report.tv_at_tau = report.tv.back().second;
  return report;
}

std::string to_json(const DiagnosticsReport& report) {
  std::string out = "{";
  out += "\"n\":" + std::to_string(report.n);
  out += ",\"k\":" + std::to_string(report.k);
  out += ",\"support_size\":" + std::to_string(report.support_size);
  out += ",\"lambda\":" + io::format_double(report.lambda);
  out += ",\"c_mu\":" + io::format_double(report.c_mu);
  out += ",\"c_mu_lower_bound\":" + io::format_double(report.c_mu_lower_bound);
  out += ",\"tau_bound\":" + std::to_string(report.tau_bound);
  out += ",\"tv_curve\":[";
  for (std::size_t i = 0; i < report.tv.size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(report.tv[i].first) + "," +
           io::format_double(report.tv[i].second) + "]";
  }
  out += "]";
  out += std::string(",\"negative_correlation_ok\":") +
         (report.negative_correlation_ok ? "true" : "false");
  out += std::string(",\"exchange_ok\":") + (report.exchange_ok ? "true" : "false");
  out += "}";
  return out;
}

}  // namespace basex::diagnostics
