#include "tsg/tsp.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "tsg/errors.hpp"

namespace tsg {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Held-Karp over masks of points 1..n-1. Returns the optimal closed order.
std::vector<std::size_t> held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n <= 1) return std::vector<std::size_t>(n, 0);
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  // rest[mask * n + v]: cheapest way to finish from v after visiting {0} + mask
  std::vector<std::int64_t> rest((full + 1) * n, kInf);
  for (std::size_t v = 1; v < n; ++v) rest[full * n + v] = d[v][0];
  for (std::size_t mask = full; mask-- > 0;) {
    for (std::size_t v = 0; v < n; ++v) {
      bool here = v == 0 ? mask == 0 : (mask >> (v - 1)) & 1;
      if (!here) continue;
      std::int64_t best = kInf;
      for (std::size_t u = 1; u < n; ++u) {
        std::size_t bit = std::size_t{1} << (u - 1);
        if (mask & bit) continue;
        best = std::min(best, d[v][u] + rest[(mask | bit) * n + u]);
      }
      rest[mask * n + v] = best;
    }
  }
  std::vector<std::size_t> order{0};
  std::size_t mask = 0, v = 0;
  while (mask != full) {
    for (std::size_t u = 1; u < n; ++u) {
      std::size_t bit = std::size_t{1} << (u - 1);
      if (mask & bit) continue;
      if (d[v][u] + rest[(mask | bit) * n + u] == rest[mask * n + v]) {
        order.push_back(u);
        mask |= bit;
        v = u;
        break;
      }
    }
  }
  return order;
}

void check_square(const DistanceMatrix& d) {
  for (const auto& row : d) {
    if (row.size() != d.size()) throw MalformedInput("distance matrix must be square");
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceLimit("exact tour over " + std::to_string(n) + " points exceeds the cap of " + std::to_string(cap) +
                        "; use the heuristic tour instead");
  }
}

void rotate_to_zero(std::vector<std::size_t>& order) {
  auto it = std::find(order.begin(), order.end(), std::size_t{0});
  std::rotate(order.begin(), it, order.end());
}

}  // namespace

DistanceMatrix distance_matrix(const Group& group, std::span<const Element> points, std::size_t jobs) {
  const std::size_t n = points.size();
  DistanceMatrix d(n, std::vector<std::int64_t>(n, 0));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        for (std::size_t j = i + 1; j < n; ++j) {
          d[i][j] = d[j][i] = static_cast<std::int64_t>(group.distance(points[i], points[j]));
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return d;
}

std::int64_t tour_length(const DistanceMatrix& d, std::span<const std::size_t> order) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) total += d[order[i]][order[i + 1]];
  if (order.size() > 1) total += d[order.back()][order.front()];
  return total;
}

Tour tsp_exact(const DistanceMatrix& d, std::size_t cap) {
  check_square(d);
  check_cap(d.size(), cap);
  Tour t;
  t.order = held_karp(d);
  t.length = tour_length(d, t.order);
  t.kind = TourKind::Exact;
  return t;
}

Tour tsp_heuristic(const DistanceMatrix& d, std::uint64_t seed) {
  check_square(d);
  const std::size_t n = d.size();
  Tour best;
  best.kind = TourKind::HeuristicUpper;
  best.length = kInf;
  if (n <= 3) {
    best.order.resize(n);
    std::iota(best.order.begin(), best.order.end(), 0);
    best.length = tour_length(d, best.order);
    return best;
  }
  std::mt19937_64 rng(seed);
  const std::size_t restarts = std::min<std::size_t>(n, 4);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::size_t start = r == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::vector<bool> used(n, false);
    std::vector<std::size_t> order{start};
    used[start] = true;
    while (order.size() < n) {
      std::size_t cur = order.back(), pick = n;
      for (std::size_t u = 0; u < n; ++u) {
        if (!used[u] && (pick == n || d[cur][u] < d[cur][pick])) pick = u;
      }
      used[pick] = true;
      order.push_back(pick);
    }
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
          std::size_t a = order[i], b = order[i + 1], c = order[j], e = order[(j + 1) % n];
          if (a == e) continue;
          if (d[a][c] + d[b][e] < d[a][b] + d[c][e]) {
            std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i + 1), order.begin() + static_cast<std::ptrdiff_t>(j + 1));
            improved = true;
          }
        }
      }
    }
    rotate_to_zero(order);
    std::int64_t len = tour_length(d, order);
    if (len < best.length || (len == best.length && order < best.order)) {
      best.length = len;
      best.order = order;
    }
  }
  return best;
}

SpanningTree minimum_spanning_tree(const DistanceMatrix& d) {
  check_square(d);
  const std::size_t n = d.size();
  SpanningTree t;
  if (n == 0) return t;
  std::vector<bool> in(n, false);
  std::vector<std::int64_t> key(n, kInf);
  std::vector<std::size_t> from(n, 0);
  key[0] = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t v = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!in[u] && (v == n || key[u] < key[v])) v = u;
    }
    in[v] = true;
    if (v != 0) {
      t.edges.emplace_back(from[v], v);
      t.weight += key[v];
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (!in[u] && d[v][u] < key[u]) {
        key[u] = d[v][u];
        from[u] = v;
      }
    }
  }
  return t;
}

std::vector<std::size_t> doubled_tree_walk(const SpanningTree& tree, std::size_t points) {
  if (points == 0) return {};
  std::vector<std::vector<std::size_t>> adj(points);
  for (auto [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<std::size_t> walk;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, points}};  // (vertex, parent)
  std::vector<std::size_t> next_child(points, 0);
  walk.push_back(0);
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    if (next_child[v] < adj[v].size()) {
      std::size_t u = adj[v][next_child[v]++];
      if (u == parent) continue;
      stack.emplace_back(u, v);
      walk.push_back(u);
    } else {
      stack.pop_back();
      if (!stack.empty()) walk.push_back(stack.back().first);
    }
  }
  return walk;
}

ClosedPath realize_walk(const Group& group, std::span<const Element> points, std::span<const std::size_t> walk) {
  ClosedPath path;
  if (walk.empty()) return path;
  path.points.push_back(points[walk[0]]);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const Element& from = points[walk[i]];
    Element step_target = group.multiply(group.inverse(from), points[walk[i + 1]]);
    Element cur = from;
    for (std::size_t s : group.geodesic(step_target)) {
      cur = group.multiply(cur, group.generators()[s]);
      path.points.push_back(cur);
    }
  }
  return path;
}

bool is_closed_path(const Group& group, const ClosedPath& path) {
  if (path.points.empty()) return false;
  if (path.points.front() != path.points.back()) return false;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    Element step = group.multiply(group.inverse(path.points[i]), path.points[i + 1]);
    const auto& gens = group.generators();
    if (std::find(gens.begin(), gens.end(), step) == gens.end()) return false;
  }
  return true;
}

std::size_t visit_count(const ClosedPath& path, std::span<const Element> set) {
  std::size_t count = 0;
  for (const auto& p : path.points) {
    if (std::find(set.begin(), set.end(), p) != set.end()) ++count;
  }
  return count;
}

bool visits_all(const ClosedPath& path, std::span<const Element> set) {
  for (const auto& s : set) {
    if (std::find(path.points.begin(), path.points.end(), s) == path.points.end()) return false;
  }
  return true;
}

namespace {

struct Closure {
  DistanceMatrix cost;
  std::vector<std::vector<std::size_t>> next;  // first hop of a cheapest route
};

Closure reduced_closure(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  Closure c{d, std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        if (d[i][j] < 1) throw PreconditionError("L' needs distinct points");
        c.cost[i][j] = d[i][j] - 1;
      }
      c.next[i][j] = j;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (c.cost[i][k] + c.cost[k][j] < c.cost[i][j]) {
          c.cost[i][j] = c.cost[i][k] + c.cost[k][j];
          c.next[i][j] = c.next[i][k];
        }
      }
    }
  }
  return c;
}

}  // namespace

std::int64_t l_prime(const DistanceMatrix& d, std::size_t cap) {
  check_square(d);
  check_cap(d.size(), cap);
  if (d.empty()) return 0;
  Closure c = reduced_closure(d);
  auto order = held_karp(c.cost);
  return tour_length(c.cost, order) - 1;
}

ClosedPath l_prime_path(const Group& group, std::span<const Element> points, const DistanceMatrix& d, std::size_t cap) {
  check_square(d);
  check_cap(d.size(), cap);
  if (points.empty()) return ClosedPath{{group.identity()}};
  Closure c = reduced_closure(d);
  auto order = held_karp(c.cost);
  order.push_back(order.front());
  std::vector<std::size_t> walk{order.front()};
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    for (std::size_t v = order[i]; v != order[i + 1];) {
      v = c.next[v][order[i + 1]];
      walk.push_back(v);
    }
  }
  return realize_walk(group, points, walk);
}

}  // namespace tsg
