#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "basex/errors.hpp"

namespace basex {

// A sorted set of distinct ground-set indices. Chain states are Subsets of
// size k; the empty Subset is valid (determinant convention det = 1).
class Subset {
 public:
  Subset() = default;

  explicit Subset(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    for (std::size_t i = 0; i + 1 < idx_.size(); ++i) {
      if (idx_[i] == idx_[i + 1]) {
        throw InputError("subset has duplicate index " + std::to_string(idx_[i]));
      }
    }
  }

  Subset(std::initializer_list<int> indices)
      : Subset(std::vector<int>(indices)) {}

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  int operator[](std::size_t i) const { return idx_[i]; }

  const std::vector<int>& indices() const { return idx_; }

  bool contains(int i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }

  Subset with(int j) const {
    std::vector<int> out = idx_;
    out.push_back(j);
    return Subset(std::move(out));
  }

  Subset without(int i) const {
    std::vector<int> out;
    out.reserve(idx_.size());
    for (int v : idx_)
      if (v != i) out.push_back(v);
    if (out.size() == idx_.size()) {
      throw InputError("subset does not contain index " + std::to_string(i));
    }
    Subset s;
    s.idx_ = std::move(out);  // already sorted and distinct
    return s;
  }

  // S - i + j in one step.
  Subset exchanged(int i, int j) const { return without(i).with(j); }

  // Number of elements of *this not in other.
  std::size_t difference_size(const Subset& other) const {
    std::size_t count = 0;
    for (int v : idx_)
      if (!other.contains(v)) ++count;
    return count;
  }

  auto operator<=>(const Subset&) const = default;

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(idx_[i]);
    }
    return out + "}";
  }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

 private:
  std::vector<int> idx_;
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const {
    std::size_t h = 0x9E3779B97F4A7C15ULL;
    for (int v : s) {
      h ^= static_cast<std::size_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace basex
