#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "basex/linalg.hpp"
#include "basex/subset.hpp"

namespace basex {

// Default cap on C(n, k) for exact enumeration.
inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

// C(n, k), saturating at limit (returns limit + 1 once exceeded).
std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t limit);

// Unnormalized mass oracle over k-subsets of [0, n). Implementations are
// immutable after construction and safe to share across threads.
class HomogeneousDistribution {
 public:
  virtual ~HomogeneousDistribution() = default;

  std::size_t ground_size() const { return n_; }
  std::size_t degree() const { return k_; }

  // log of the unnormalized mass; -inf outside the support.
  double log_mass(const Subset& s) const;
  double mass(const Subset& s) const;

 protected:
  HomogeneousDistribution(std::size_t n, std::size_t k);
  virtual double do_log_mass(const Subset& s) const = 0;

 private:
  std::size_t n_;
  std::size_t k_;
};

// k-DPP: mass(S) = det(L_S) for a PSD ensemble matrix L.
class KDPP : public HomogeneousDistribution {
 public:
  KDPP(linalg::SymmetricMatrix ensemble, std::size_t k);

  const linalg::SymmetricMatrix& ensemble() const { return ensemble_; }
  // Eigendecomposition of L, computed once at construction (PSD check);
  // reused by the spectral exact sampler.
  const linalg::EigenDecomposition& eigen() const { return eigen_; }

 protected:
  double do_log_mass(const Subset& s) const override;

 private:
  linalg::SymmetricMatrix ensemble_;
  linalg::EigenDecomposition eigen_;
};

// Arbitrary positive weights on an explicit list of k-subsets.
class ExplicitTable : public HomogeneousDistribution {
 public:
  ExplicitTable(std::size_t n, std::size_t k, std::map<Subset, double> entries);

  const std::map<Subset, double>& entries() const { return entries_; }

 protected:
  double do_log_mass(const Subset& s) const override;

 private:
  std::map<Subset, double> entries_;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

// Weighted spanning-tree distribution: ground set = edges of a connected
// graph, k = v - 1, mass(S) = product of edge weights when S is a spanning
// tree and 0 otherwise.
class SpanningTreeDistribution : public HomogeneousDistribution {
 public:
  SpanningTreeDistribution(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return v_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool is_spanning_tree(const Subset& s) const;

 protected:
  double do_log_mass(const Subset& s) const override;

 private:
  std::size_t v_;
  std::vector<Edge> edges_;
};

// Conditional measure on sets containing (or avoiding) one element. The
// ground set is re-indexed densely; original_label maps back.
class ConditionedDistribution : public HomogeneousDistribution {
 public:
  ConditionedDistribution(std::shared_ptr<const HomogeneousDistribution> base,
                          int element, bool contains);

  int original_label(int new_index) const;
  Subset to_original(const Subset& s) const;

 protected:
  double do_log_mass(const Subset& s) const override;

 private:
  std::shared_ptr<const HomogeneousDistribution> base_;
  int element_;
  bool contains_;
};

std::shared_ptr<const HomogeneousDistribution> condition(
    std::shared_ptr<const HomogeneousDistribution> d, int element, bool contains);

// Keep only the size-k entries of a mixed-size weight table.
ExplicitTable truncate(std::size_t n, const std::map<Subset, double>& weights,
                       std::size_t k);

struct SupportEnumeration {
  std::vector<Subset> states;      // lexicographic order
  std::vector<double> log_masses;  // unnormalized
};

// All support members, lexicographic. CapacityError when C(n,k) > cap.
SupportEnumeration enumerate_support(const HomogeneousDistribution& d,
                                     std::uint64_t cap = kDefaultEnumerationCap);

struct ExchangeCheck {
  bool ok = true;
  // Witness of a violation: i in s \ t with no j in t \ s keeping s-i+j in
  // the support.
  Subset s, t;
  int element = -1;
};

// Matroid basis-exchange property over the full (enumerable) support.
ExchangeCheck check_exchange_property(const HomogeneousDistribution& d,
                                      std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace basex
