#pragma once

// Test-only oracles. These deliberately use different algorithms from the
// library paths they check and must stay independent of them.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "magtorus/skewform.hpp"

namespace magtorus::oracle {

// Elementary divisors via plain Smith reduction (independent row/column
// operations, no congruence constraint, no witness). Returns the nonzero
// divisors d_1 | d_2 | ...
inline std::vector<Int> smith_divisors(IntMat a) {
  const int n = int(a.size());
  const int m = n ? int(a[0].size()) : 0;
  std::vector<Int> out;
  int t = 0;
  while (t < n && t < m) {
    // find the smallest-magnitude nonzero entry in the remaining block
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < n; ++i)
      for (int j = t; j < m; ++j) {
        if (a[i][j] == 0) continue;
        Int mag = abs(a[i][j]);
        if (pi < 0 || mag < best) { best = mag; pi = i; pj = j; }
      }
    if (pi < 0) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);

    bool clean = true;
    for (int i = t + 1; i < n; ++i) {
      if (a[i][t] == 0) continue;
      Int q = a[i][t] / a[t][t];
      for (int j = t; j < m; ++j) a[i][j] -= q * a[t][j];
      if (a[i][t] != 0) clean = false;
    }
    for (int j = t + 1; j < m; ++j) {
      if (a[t][j] == 0) continue;
      Int q = a[t][j] / a[t][t];
      for (int i = t; i < n; ++i) a[i][j] -= q * a[i][t];
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;

    bool divides_all = true;
    for (int i = t + 1; i < n && divides_all; ++i)
      for (int j = t + 1; j < m; ++j)
        if (a[i][j] % a[t][t] != 0) {
          for (int k = t; k < m; ++k) a[t][k] += a[i][k];
          divides_all = false;
          break;
        }
    if (!divides_all) continue;

    out.push_back(abs(a[t][t]));
    ++t;
  }
  return out;
}

// Pfaffian by explicit sum over perfect matchings with permutation parity.
inline Int pfaffian_matchings(const SkewIntMatrix& m, const std::vector<int>& axes) {
  const int k = int(axes.size());
  if (k == 0) return 1;
  std::vector<int> pos(k);
  std::iota(pos.begin(), pos.end(), 0);
  Int total = 0;
  // enumerate matchings as permutations p with p[0]<p[1], p[2]<p[3], ..., p[0]<p[2]<p[4]...
  std::vector<int> perm;
  std::vector<bool> used(k, false);
  auto parity = [](const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
  };
  struct Walk {
    const SkewIntMatrix& m;
    const std::vector<int>& axes;
    std::vector<int>& perm;
    std::vector<bool>& used;
    Int& total;
    int k;
    int (*par)(const std::vector<int>&);
    void go() {
      if (int(perm.size()) == k) {
        Int prod = 1;
        for (int i = 0; i < k; i += 2) prod *= m.a[axes[perm[i]]][axes[perm[i + 1]]];
        // parity of perm as a rearrangement of 0..k-1
        int inv = 0;
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j)
            if (perm[i] > perm[j]) ++inv;
        if (inv % 2 == 0) total += prod;
        else total -= prod;
        return;
      }
      int first = 0;
      while (used[first]) ++first;
      used[first] = true;
      perm.push_back(first);
      for (int second = first + 1; second < k; ++second) {
        if (used[second]) continue;
        used[second] = true;
        perm.push_back(second);
        go();
        perm.pop_back();
        used[second] = false;
      }
      perm.pop_back();
      used[first] = false;
    }
  };
  (void)parity;
  Walk w{m, axes, perm, used, total, k, nullptr};
  w.go();
  return total;
}

// random antisymmetric integer matrix, entries in [-bound, bound]
inline SkewIntMatrix random_skew(int n, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMat a(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int v = dist(rng);
      a[i][j] = v;
      a[j][i] = -v;
    }
  return SkewIntMatrix(std::move(a));
}

}  // namespace magtorus::oracle
