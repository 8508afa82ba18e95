#pragma once

#include <vector>

#include "coiso/error.hpp"
#include "coiso/symgroup.hpp"

namespace coiso {

// Dimension slack on the right-hand side of the order-selection inequality:
// d minus the codimension of the order-one stratum for kernels of size
// c = 2n - d.  Negative slack means order one already suffices.
inline long min_r_slack(int d, int n) {
  const long c = 2L * n - d;
  return d - (c + 1) * c / 2;
}

// Least r >= 1 whose cumulative constraint count sum_{s=2}^{r} t_dim(s, c, w)
// exceeds the slack, with c = 2n - d and an explicit target dimension w.
// The r = 1 sum is empty and counts as 0.
inline int min_r_with_target(int d, int n, int w) {
  require(d >= 1, "min_r: d < 1");
  require(d <= 2 * n - 2, "min_r: d must be at most 2n - 2");
  require(w >= 1, "min_r: target dimension < 1");
  const int c = 2 * n - d;
  const long slack = min_r_slack(d, n);
  long sum = 0;
  int r = 1;
  while (sum <= slack) {
    ++r;
    require(r <= 64, "min_r: no admissible order below 64");
    sum += t_dim(r, c, w);
  }
  return r;
}

// Selection with the ambient target R^{2n}.  A variant reading takes the
// target to be R^d instead; both are monotone in w, so callers comparing the
// two can use min_r_with_target(d, n, d) directly.
inline int min_r(int d, int n) { return min_r_with_target(d, n, 2 * n); }

// Closed-form sufficient order: least r with r(r+1)/2 - 1 above the slack.
// Valid because each summand t_dim(s, c, w) is at least s once c >= 2, so
// this never undershoots min_r.
inline int min_r_simplified(int d, int n) {
  require(d >= 1, "min_r_simplified: d < 1");
  require(2 * n - d >= 2, "min_r_simplified: 2n - d < 2");
  const long slack = min_r_slack(d, n);
  int r = 1;
  while (long(r) * (r + 1) / 2 - 1 <= slack) {
    ++r;
    require(r <= 1 << 20, "min_r_simplified: no admissible order");
  }
  return r;
}

// Dense table of t_dim(s, c, w) for 2 <= s <= s_max, 1 <= c <= c_max,
// 1 <= w <= w_max.
struct TdimTable {
  int s_max = 0;
  int c_max = 0;
  int w_max = 0;
  std::vector<int> dims;

  int at(int s, int c, int w) const {
    require(s >= 2 && s <= s_max && c >= 1 && c <= c_max && w >= 1 && w <= w_max,
            "TdimTable: index outside the table");
    return dims[((s - 2) * c_max + (c - 1)) * w_max + (w - 1)];
  }
};

inline TdimTable tdim_table(int c_max, int w_max, int s_max) {
  require(s_max >= 2, "tdim_table: s_max < 2");
  require(c_max >= 1 && w_max >= 1, "tdim_table: empty table");
  TdimTable t;
  t.s_max = s_max;
  t.c_max = c_max;
  t.w_max = w_max;
  t.dims.reserve(size_t(s_max - 1) * c_max * w_max);
  for (int s = 2; s <= s_max; ++s)
    for (int c = 1; c <= c_max; ++c)
      for (int w = 1; w <= w_max; ++w) t.dims.push_back(t_dim(s, c, w));
  return t;
}

}  // namespace coiso
