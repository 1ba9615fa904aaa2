#include <doctest.h>

#include <deque>
#include <random>
#include <unordered_map>

#include "oracles.hpp"
#include "tsg/errors.hpp"
#include "tsg/tsp.hpp"

using namespace tsg;

namespace {

std::vector<std::vector<long>> as_long(const DistanceMatrix& d) {
  std::vector<std::vector<long>> out;
  for (const auto& row : d) out.emplace_back(row.begin(), row.end());
  return out;
}

std::vector<Element> parse_all(const Group& g, std::initializer_list<const char*> texts) {
  std::vector<Element> out;
  for (auto t : texts) out.push_back(g.parse_element(t));
  return out;
}

// inf of l(beta) - N(beta; S) by 0-1 breadth-first search over (vertex, visited
// subset) states inside a ball hull around S. Stepping onto a point of S is free,
// any other step costs one.
long l_prime_search(const Group& g, const std::vector<Element>& s, std::size_t hull_radius) {
  std::vector<Element> hull;
  std::unordered_map<Element, std::size_t, ElementHash> id;
  for (const auto& p : s) {
    for (const auto& x : g.ball(p, hull_radius).elements) {
      if (id.emplace(x, hull.size()).second) hull.push_back(x);
    }
  }
  std::vector<int> in_s(hull.size(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) in_s[id.at(s[i])] = static_cast<int>(i);
  const std::size_t full = (std::size_t{1} << s.size()) - 1;
  std::vector<long> best(hull.size() * (full + 1), -1);
  std::deque<std::pair<std::size_t, long>> queue;
  std::size_t start = id.at(s[0]) * (full + 1) + 1;
  std::vector<long> dist(hull.size() * (full + 1), 1L << 40);
  dist[start] = 0;
  queue.push_back({start, 0});
  while (!queue.empty()) {
    auto [state, c] = queue.front();
    queue.pop_front();
    if (c != dist[state]) continue;
    std::size_t v = state / (full + 1), mask = state % (full + 1);
    if (v == id.at(s[0]) && mask == full) return c - 1;
    for (const auto& gen : g.generators()) {
      auto it = id.find(g.multiply(hull[v], gen));
      if (it == id.end()) continue;
      std::size_t u = it->second;
      std::size_t m2 = mask;
      long w = 1;
      if (in_s[u] >= 0) {
        m2 |= std::size_t{1} << in_s[u];
        w = 0;
      }
      std::size_t next = u * (full + 1) + m2;
      if (c + w < dist[next]) {
        dist[next] = c + w;
        if (w == 0) queue.push_front({next, c}); else queue.push_back({next, c + 1});
      }
    }
  }
  return 1L << 40;
}

}  // namespace

TEST_CASE("exact tours on small examples") {
  auto f2 = Group::parse("free:2");
  auto s = parse_all(f2, {"", "a", "b"});
  CHECK(tsp_exact(distance_matrix(f2, s)).length == 4);

  auto z2 = Group::parse("abelian:2");
  auto box = parse_all(z2, {"0,0", "1,0", "0,1", "1,1"});
  CHECK(tsp_exact(distance_matrix(z2, box)).length == 4);

  Word xi = parse_word("a b a B a b");
  auto g = f2.parse_element("b b A");
  std::vector<Element> pair{g, f2.multiply(g, f2.from_word(xi))};
  CHECK(tsp_exact(distance_matrix(f2, pair)).length == 2 * static_cast<std::int64_t>(xi.length()));

  std::vector<Element> one{g};
  CHECK(tsp_exact(distance_matrix(f2, one)).length == 0);
  CHECK(tsp_exact(DistanceMatrix{}).length == 0);
}

TEST_CASE("3x3 box bounds") {
  auto z2 = Group::parse("abelian:2");
  std::vector<Element> box;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) box.push_back(z2.parse_element(std::to_string(x) + "," + std::to_string(y)));
  auto d = distance_matrix(z2, box);
  CHECK(minimum_spanning_tree(d).weight == 8);
  CHECK(tsp_exact(d).length == 10);
  CHECK(tsp_heuristic(d, 1).length <= 16);
  CHECK(tsp_heuristic(d, 1).length >= 10);
}

TEST_CASE("Held-Karp agrees with permutation search, including tie-breaking") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng() % 8;
    DistanceMatrix d(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = static_cast<std::int64_t>(rng() % 4);
    auto exact = tsp_exact(d);
    auto [len, order] = oracle::brute_tour(as_long(d));
    REQUIRE(exact.length == len);
    REQUIRE(exact.order == order);
    REQUIRE(tsp_heuristic(d, t).length >= len);
  }
}

TEST_CASE("cap is enforced") {
  DistanceMatrix d(16, std::vector<std::int64_t>(16, 1));
  CHECK_THROWS_AS(tsp_exact(d), ResourceLimit);
  CHECK_THROWS_AS(l_prime(d), ResourceLimit);
  CHECK(tsp_exact(d, 16).length == 16);
}

TEST_CASE("spanning tree sandwich and doubled-tree witness") {
  std::mt19937_64 rng(4);
  for (const char* desc : {"free:2", "abelian:2", "prod(free:2,abelian:1)", "f2xz:n=2"}) {
    auto g = Group::parse(desc);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = 2 + rng() % 7;
      std::vector<Element> pts;
      while (pts.size() < n) {
        auto x = g.random_walk(rng, rng() % 6);
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
      }
      auto d = distance_matrix(g, pts, 2);
      auto mst = minimum_spanning_tree(d);
      auto exact = tsp_exact(d);
      REQUIRE(mst.weight <= exact.length);
      REQUIRE(exact.length <= 2 * mst.weight);
      REQUIRE(tsp_heuristic(d, t).length >= exact.length);
      auto walk = doubled_tree_walk(mst, n);
      auto path = realize_walk(g, pts, walk);
      REQUIRE(is_closed_path(g, path));
      REQUIRE(visits_all(path, pts));
      REQUIRE(static_cast<std::int64_t>(path.length()) == 2 * mst.weight);
    }
  }
}

TEST_CASE("L' small cases") {
  auto f2 = Group::parse("free:2");
  auto g = f2.parse_element("a b");
  std::vector<Element> one{g};
  CHECK(l_prime(distance_matrix(f2, one)) == -1);
  for (const char* xs : {"a", "a b", "a b A", "a b A b"}) {
    Word xi = parse_word(xs);
    std::vector<Element> pair{g, f2.multiply(g, f2.from_word(xi))};
    auto lp = l_prime(distance_matrix(f2, pair));
    CHECK(lp == 2 * static_cast<std::int64_t>(xi.length()) - 3);
    CHECK(lp == l_prime_search(f2, pair, xi.length()));
  }
}

TEST_CASE("L' agrees with state-space search and its witness path") {
  std::mt19937_64 rng(6);
  for (const char* desc : {"free:2", "abelian:2"}) {
    auto g = Group::parse(desc);
    for (int t = 0; t < 60; ++t) {
      std::size_t n = 1 + rng() % 4;
      std::vector<Element> pts;
      while (pts.size() < n) {
        auto x = g.random_walk(rng, rng() % 4);
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
      }
      auto d = distance_matrix(g, pts);
      auto lp = l_prime(d);
      std::int64_t diameter = 0;
      for (const auto& row : d) for (auto x : row) diameter = std::max(diameter, x);
      REQUIRE(lp == l_prime_search(g, pts, static_cast<std::size_t>(diameter)));
      REQUIRE(lp < tsp_exact(d).length);
      auto path = l_prime_path(g, pts, d);
      REQUIRE(is_closed_path(g, path));
      REQUIRE(visits_all(path, pts));
      REQUIRE(static_cast<std::int64_t>(path.length()) - static_cast<std::int64_t>(visit_count(path, pts)) == lp);
    }
  }
}
