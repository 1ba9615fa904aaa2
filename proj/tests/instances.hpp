#pragma once

// Revised sets shaped like (S, xi)-trees, for exercising the forest builders.

#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "tsg/groups.hpp"

namespace instances {

// A cluster of `width` elements near a random base, each paired with its
// xi-translate. Then, while room remains, a translate q from the queue grows a
// cluster q, q y_1, ..., q y_{width-1} whose new members are paired in the same
// way. Output lists pairs as (x, x xi).
inline std::vector<tsg::Element> clustered_revised_set(const tsg::Group& g, const tsg::Element& xi, std::size_t max_size,
                                                       std::size_t width, std::mt19937_64& rng, std::size_t step = 2) {
  std::vector<tsg::Element> out;
  std::unordered_set<tsg::Element, tsg::ElementHash> used;
  std::vector<tsg::Element> queue;
  auto fresh_near = [&](const tsg::Element& q) -> std::optional<tsg::Element> {
    for (int attempt = 0; attempt < 50; ++attempt) {
      auto y = g.random_walk(rng, 1 + rng() % step);
      if (g.is_identity(y)) continue;
      auto x = g.multiply(q, y);
      auto xx = g.multiply(x, xi);
      if (!used.contains(x) && !used.contains(xx) && x != xx) return x;
    }
    return std::nullopt;
  };
  auto add_pair = [&](const tsg::Element& x) {
    auto xx = g.multiply(x, xi);
    used.insert(x);
    used.insert(xx);
    out.push_back(x);
    out.push_back(xx);
    queue.push_back(xx);
  };
  auto base = g.random_walk(rng, 3);
  add_pair(base);
  for (std::size_t k = 1; k < width && out.size() + 2 <= max_size; ++k) {
    if (auto x = fresh_near(base)) add_pair(*x);
  }
  for (std::size_t head = 0; head < queue.size() && out.size() + 2 * (width - 1) <= max_size; ++head) {
    auto q = queue[head];
    for (std::size_t k = 1; k < width; ++k) {
      if (auto x = fresh_near(q)) add_pair(*x);
    }
  }
  return out;
}

}  // namespace instances
