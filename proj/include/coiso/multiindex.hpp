#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "coiso/error.hpp"

namespace coiso {

inline std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// All weakly increasing index tuples of length k over {0, ..., d-1},
// lexicographic.  Count is binom(d+k-1, k).
inline std::vector<std::vector<int>> weakly_increasing_tuples(int k, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  if (k == 0) {
    out.push_back({});
    return out;
  }
  if (d == 0) return out;
  while (true) {
    out.push_back(cur);
    int j = k - 1;
    while (j >= 0 && cur[j] == d - 1) --j;
    if (j < 0) break;
    const int v = cur[j] + 1;
    for (int t = j; t < k; ++t) cur[t] = v;
  }
  return out;
}

// Iterate all tuples in {0, ..., d-1}^m in row-major order.
inline void for_each_tuple(int m, int d, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur(m, 0);
  if (m == 0) {
    fn(cur);
    return;
  }
  if (d == 0) return;
  while (true) {
    fn(cur);
    int j = m - 1;
    while (j >= 0 && cur[j] == d - 1) --j;
    if (j < 0) break;
    ++cur[j];
    for (int t = j + 1; t < m; ++t) cur[t] = 0;
  }
}

// Position lookup for sorted tuples; indices must fit in 4 bits (d <= 16).
class SymIndex {
 public:
  SymIndex() = default;
  SymIndex(int k, int d) : k_(k), d_(d), tuples_(weakly_increasing_tuples(k, d)) {
    require(d <= 16, "SymIndex: source dimension too large");
    for (int s = 0; s < int(tuples_.size()); ++s) pos_[encode(tuples_[s])] = s;
  }

  int count() const { return int(tuples_.size()); }
  const std::vector<int>& tuple(int slot) const { return tuples_[slot]; }

  int slot_sorted(const std::vector<int>& sorted) const {
    auto it = pos_.find(encode(sorted));
    require(it != pos_.end(), "SymIndex: tuple out of range");
    return it->second;
  }

  int slot(std::vector<int> idx) const {
    std::sort(idx.begin(), idx.end());
    return slot_sorted(idx);
  }

 private:
  static std::uint64_t encode(const std::vector<int>& t) {
    std::uint64_t key = 1;
    for (int v : t) key = (key << 4) | std::uint64_t(v);
    return key;
  }

  int k_ = 0, d_ = 0;
  std::vector<std::vector<int>> tuples_;
  std::unordered_map<std::uint64_t, int> pos_;
};

}  // namespace coiso
