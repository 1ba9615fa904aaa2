#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library routines they check.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Largest k such that some nonempty block repeats k times consecutively, by
// trying every (start, period) pair and counting copies directly.
template <class T>
std::size_t naive_max_power(const std::vector<T>& s) {
  if (s.empty()) return 0;
  std::size_t best = 1;
  const std::size_t n = s.size();
  for (std::size_t start = 0; start < n; ++start) {
    for (std::size_t p = 1; start + 2 * p <= n; ++p) {
      std::size_t copies = 1;
      while (start + (copies + 1) * p <= n) {
        bool same = true;
        for (std::size_t t = 0; t < p && same; ++t) {
          same = s[start + copies * p + t] == s[start + t];
        }
        if (!same) break;
        ++copies;
      }
      best = std::max(best, copies);
    }
  }
  return best;
}

// Free reduction on integer letters (negation = inverse).
inline std::vector<int> reduce(const std::vector<int>& in) {
  std::vector<int> out;
  for (int l : in) {
    if (!out.empty() && out.back() == -l) out.pop_back(); else out.push_back(l);
  }
  return out;
}

inline std::vector<int> invert(const std::vector<int>& w) {
  std::vector<int> out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

// All pieces of a symmetrized set, materialized as explicit words: every
// ordered pair of distinct occurrences contributes its common prefix (capped one
// short of the whole word when both occurrences spell the same word).
inline std::set<std::vector<int>> naive_pieces(const std::vector<std::vector<int>>& words, bool cyclic) {
  std::set<std::vector<int>> uniq(words.begin(), words.end());
  std::vector<std::vector<int>> bases;
  for (const auto& w : uniq) {
    bases.push_back(w);
    bases.push_back(invert(w));
  }
  if (!cyclic) {
    std::set<std::vector<int>> b(bases.begin(), bases.end());
    bases.assign(b.begin(), b.end());
  }
  std::vector<std::vector<int>> elements;
  for (const auto& b : bases) {
    std::size_t shifts = cyclic ? b.size() : 1;
    for (std::size_t s = 0; s < shifts; ++s) {
      std::vector<int> r;
      for (std::size_t k = 0; k < b.size(); ++k) r.push_back(b[(s + k) % b.size()]);
      elements.push_back(r);
    }
  }
  std::set<std::vector<int>> out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (i == j) continue;
      const auto& u = elements[i];
      const auto& v = elements[j];
      std::size_t l = 0;
      while (l < u.size() && l < v.size() && u[l] == v[l]) ++l;
      if (u == v) l = u.size() - 1;
      if (l > 0) out.insert(std::vector<int>(u.begin(), u.begin() + static_cast<long>(l)));
    }
  }
  return out;
}

}  // namespace oracle

namespace oracle {

// Lengths of every element of F2 x Z within distance R of the identity for the
// generating set {a, b, a^n z}, by plain breadth-first search. Letters: 1 = a, 2 = b.
inline std::map<std::pair<std::vector<int>, long>, int> f2xz_ball(int n, int radius) {
  std::vector<std::pair<std::vector<int>, long>> gens{{{1}, 0}, {{-1}, 0}, {{2}, 0}, {{-2}, 0}};
  gens.push_back({std::vector<int>(n, 1), 1});
  gens.push_back({std::vector<int>(n, -1), -1});
  std::map<std::pair<std::vector<int>, long>, int> dist;
  std::vector<std::pair<std::vector<int>, long>> layer{{{}, 0}};
  dist[layer[0]] = 0;
  for (int d = 1; d <= radius; ++d) {
    std::vector<std::pair<std::vector<int>, long>> next;
    for (const auto& [w, z] : layer) {
      for (const auto& [s, dz] : gens) {
        std::vector<int> cat = w;
        cat.insert(cat.end(), s.begin(), s.end());
        std::pair<std::vector<int>, long> h{reduce(cat), z + dz};
        if (dist.emplace(h, d).second) next.push_back(h);
      }
    }
    layer = std::move(next);
  }
  return dist;
}

}  // namespace oracle

namespace oracle {

// Optimal closed tour length by trying every visit order with point 0 first.
// Also returns the lexicographically least optimal order.
inline std::pair<long, std::vector<std::size_t>> brute_tour(const std::vector<std::vector<long>>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  if (n <= 1) return {0, perm};
  long best = -1;
  std::vector<std::size_t> arg;
  do {
    long len = 0;
    for (std::size_t i = 0; i < n; ++i) len += d[perm[i]][perm[(i + 1) % n]];
    if (best < 0 || len < best) {
      best = len;
      arg = perm;
    }
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return {best, arg};
}

}  // namespace oracle
