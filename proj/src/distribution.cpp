#include "basex/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "basex/errors.hpp"

namespace basex {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Union-find over a fixed vertex range.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // false if x and y were already connected.
  bool unite(std::size_t x, std::size_t y) {
    const std::size_t rx = find(x);
    const std::size_t ry = find(y);
    if (rx == ry) return false;
    parent_[rx] = ry;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Visits all k-subsets of [0, n) in lexicographic order.
template <typename Fn>
void for_each_k_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    // advance to the next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] < static_cast<int>(n - k + i)) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace

std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is always integral at this point
    const std::uint64_t num = n - k + i;
    if (result > (limit + 1) / num * i) return limit + 1;
    result = result * num / i;
    if (result > limit) return limit + 1;
  }
  return result;
}

HomogeneousDistribution::HomogeneousDistribution(std::size_t n, std::size_t k)
    : n_(n), k_(k) {
  if (k > n) throw InputError("degree k exceeds ground-set size n");
}

double HomogeneousDistribution::log_mass(const Subset& s) const {
  if (s.size() != k_) {
    throw InputError("subset has size " + std::to_string(s.size()) +
                     ", expected " + std::to_string(k_));
  }
  if (!s.empty() && (s[0] < 0 || static_cast<std::size_t>(s[s.size() - 1]) >= n_)) {
    throw InputError("subset index out of range for ground-set size " +
                     std::to_string(n_));
  }
  return do_log_mass(s);
}

double HomogeneousDistribution::mass(const Subset& s) const {
  const double lm = log_mass(s);
  return std::isinf(lm) ? 0.0 : std::exp(lm);
}

KDPP::KDPP(linalg::SymmetricMatrix ensemble, std::size_t k)
    : HomogeneousDistribution(ensemble.dim(), k),
      ensemble_(std::move(ensemble)),
      eigen_(linalg::symmetric_eigen(ensemble_)) {
  const double scale = std::max(ensemble_.max_diagonal(), 0.0);
  if (!eigen_.eigenvalues.empty() && eigen_.eigenvalues.front() < -1e-9 * scale) {
    throw DomainError("ensemble matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(eigen_.eigenvalues.front()) + ")");
  }
  std::size_t rank = 0;
  for (double ev : eigen_.eigenvalues) {
    if (ev > 1e-12 * scale) ++rank;
  }
  if (rank < k) {
    throw DomainError("ensemble rank " + std::to_string(rank) +
                      " below k = " + std::to_string(k) +
                      "; no k-subset has positive mass");
  }
}

double KDPP::do_log_mass(const Subset& s) const {
  const auto sub = linalg::principal_submatrix(ensemble_, s);
  const auto ld = linalg::logdet_psd(sub, linalg::default_psd_tolerance(ensemble_));
  return ld ? *ld : kNegInf;
}

ExplicitTable::ExplicitTable(std::size_t n, std::size_t k,
                             std::map<Subset, double> entries)
    : HomogeneousDistribution(n, k), entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("explicit table has no entries");
  for (const auto& [s, w] : entries_) {
    if (s.size() != k) {
      throw InputError("table entry " + s.to_string() + " has size " +
                       std::to_string(s.size()) + ", expected " + std::to_string(k));
    }
    if (!s.empty() && static_cast<std::size_t>(s[s.size() - 1]) >= n) {
      throw InputError("table entry " + s.to_string() + " out of range");
    }
    if (!(w > 0.0)) {
      throw InputError("table entry " + s.to_string() + " has nonpositive weight");
    }
  }
}

double ExplicitTable::do_log_mass(const Subset& s) const {
  const auto it = entries_.find(s);
  return it == entries_.end() ? kNegInf : std::log(it->second);
}

SpanningTreeDistribution::SpanningTreeDistribution(std::size_t vertex_count,
                                                   std::vector<Edge> edges)
    : HomogeneousDistribution(edges.size(),
                              vertex_count == 0 ? 0 : vertex_count - 1),
      v_(vertex_count),
      edges_(std::move(edges)) {
  if (v_ == 0) throw InputError("graph has no vertices");
  DisjointSets ds(v_);
  std::size_t components = v_;
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= v_ ||
        static_cast<std::size_t>(e.v) >= v_) {
      throw InputError("edge endpoint out of range");
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0)) throw InputError("edge weight must be positive");
    if (ds.unite(e.u, e.v)) --components;
  }
  if (components != 1) throw InputError("graph is not connected");
}

bool SpanningTreeDistribution::is_spanning_tree(const Subset& s) const {
  if (s.size() != degree()) return false;
  DisjointSets ds(v_);
  for (int e : s) {
    if (!ds.unite(edges_[e].u, edges_[e].v)) return false;  // cycle
  }
  // v-1 acyclic edges span all v vertices
  return true;
}

double SpanningTreeDistribution::do_log_mass(const Subset& s) const {
  if (!is_spanning_tree(s)) return kNegInf;
  double acc = 0.0;
  for (int e : s) acc += std::log(edges_[e].weight);
  return acc;
}

ConditionedDistribution::ConditionedDistribution(
    std::shared_ptr<const HomogeneousDistribution> base, int element, bool contains)
    : HomogeneousDistribution(base->ground_size() - 1,
                              base->degree() - (contains ? 1 : 0)),
      base_(std::move(base)),
      element_(element),
      contains_(contains) {
  if (element_ < 0 || static_cast<std::size_t>(element_) >= base_->ground_size()) {
    throw InputError("conditioning element out of range");
  }
  if (contains && base_->degree() == 0) {
    throw DomainError("cannot condition a 0-homogeneous distribution on containment");
  }
  // Verify the conditioned support is nonempty when cheap to enumerate.
  if (binomial_capped(ground_size(), degree(), 100'000) <= 100'000) {
    bool found = false;
    try {
      const auto e = enumerate_support(*this, 100'000);
      found = !e.states.empty();
    } catch (const DomainError&) {
      found = false;
    }
    if (!found) throw DomainError("conditioned support is empty");
  }
}

int ConditionedDistribution::original_label(int new_index) const {
  return new_index < element_ ? new_index : new_index + 1;
}

Subset ConditionedDistribution::to_original(const Subset& s) const {
  std::vector<int> orig;
  orig.reserve(s.size() + (contains_ ? 1 : 0));
  for (int v : s) orig.push_back(original_label(v));
  if (contains_) orig.push_back(element_);
  return Subset(std::move(orig));
}

double ConditionedDistribution::do_log_mass(const Subset& s) const {
  return base_->log_mass(to_original(s));
}

std::shared_ptr<const HomogeneousDistribution> condition(
    std::shared_ptr<const HomogeneousDistribution> d, int element, bool contains) {
  return std::make_shared<ConditionedDistribution>(std::move(d), element, contains);
}

ExplicitTable truncate(std::size_t n, const std::map<Subset, double>& weights,
                       std::size_t k) {
  std::map<Subset, double> kept;
  for (const auto& [s, w] : weights) {
    if (s.size() == k && w > 0.0) kept.emplace(s, w);
  }
  if (kept.empty()) {
    throw DomainError("no size-" + std::to_string(k) + " subset with positive weight");
  }
  return ExplicitTable(n, k, std::move(kept));
}

SupportEnumeration enumerate_support(const HomogeneousDistribution& d,
                                     std::uint64_t cap) {
  const std::uint64_t count = binomial_capped(d.ground_size(), d.degree(), cap);
  if (count > cap) {
    throw CapacityError("C(" + std::to_string(d.ground_size()) + "," +
                        std::to_string(d.degree()) + ") exceeds enumeration cap " +
                        std::to_string(cap));
  }
  SupportEnumeration out;
  for_each_k_subset(d.ground_size(), d.degree(), [&](const std::vector<int>& idx) {
    Subset s(idx);
    const double lm = d.log_mass(s);
    if (!std::isinf(lm)) {
      out.states.push_back(std::move(s));
      out.log_masses.push_back(lm);
    }
  });
  if (out.states.empty()) throw DomainError("distribution has empty support");
  return out;
}

ExchangeCheck check_exchange_property(const HomogeneousDistribution& d,
                                      std::uint64_t cap) {
  const auto support = enumerate_support(d, cap);
  std::unordered_set<Subset, SubsetHash> members(support.states.begin(),
                                                 support.states.end());
  ExchangeCheck result;
  for (const Subset& s : support.states) {
    for (const Subset& t : support.states) {
      if (s == t) continue;
      for (int i : s) {
        if (t.contains(i)) continue;
        bool found = false;
        for (int j : t) {
          if (s.contains(j)) continue;
          if (members.count(s.exchanged(i, j))) {
            found = true;
            break;
          }
        }
        if (!found) {
          result.ok = false;
          result.s = s;
          result.t = t;
          result.element = i;
          return result;
        }
      }
    }
  }
  return result;
}

}  // namespace basex
