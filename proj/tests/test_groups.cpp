#include <doctest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "tsg/errors.hpp"
#include "tsg/groups.hpp"

using namespace tsg;

TEST_CASE("descriptors") {
  CHECK(Group::parse("free:2").descriptor() == "free:2");
  CHECK(Group::parse("f2xz:4").descriptor() == "f2xz:n=4");
  CHECK(Group::parse("prod(free:2,abelian:1)").descriptor() == "prod(free:2,abelian:1)");
  CHECK(Group::parse("prod(free:2,prod(abelian:1,f2xz:n=3))").factors().size() == 3);
  CHECK_THROWS_AS(Group::parse("heisenberg:3"), ConfigError);
  CHECK_THROWS_AS(Group::parse("free:0"), ConfigError);
  CHECK_THROWS_AS(Group::parse("f2xz:n=x"), ConfigError);
}

TEST_CASE("lengths in the basic oracles") {
  auto f2 = Group::parse("free:2");
  CHECK(f2.length(f2.parse_element("a b a")) == 3);
  CHECK(f2.length(f2.parse_element("a B b b a b a b a")) == 9 - 2);
  auto z2 = Group::parse("abelian:2");
  CHECK(z2.length(z2.parse_element("3,-4")) == 7);
  auto p = Group::parse("prod(free:2,abelian:1)");
  auto g = p.parse_element("a b | 5");
  CHECK(p.length(g) == 7);
  CHECK(p.format_element(g) == "a b | 5");
  CHECK_THROWS_AS(p.parse_element("a b"), MalformedInput);
  CHECK_THROWS_AS(z2.parse_element("1,x"), MalformedInput);
}

TEST_CASE("balls") {
  auto f2 = Group::parse("free:2");
  CHECK(f2.ball(f2.identity(), 1).elements.size() == 5);
  CHECK(f2.ball(f2.identity(), 2).elements.size() == 17);
  for (std::size_t r = 0; r <= 5; ++r) {
    std::size_t closed = 1 + 2 * (static_cast<std::size_t>(std::pow(3, r)) - 1);  // 1 + 4 (3^r - 1) / 2
    CHECK(f2.ball(f2.identity(), r).elements.size() == closed);
  }
  auto z2 = Group::parse("abelian:2");
  CHECK(z2.ball(z2.identity(), 2).elements.size() == 13);
  auto c = f2.parse_element("a b");
  auto b = f2.ball(c, 1);
  for (std::size_t i = 0; i < b.elements.size(); ++i) CHECK(f2.distance(c, b.elements[i]) == b.distance[i]);

  GroupLimits tiny;
  tiny.ball_elements = 100;
  auto limited = Group::parse("free:2", tiny);
  CHECK_THROWS_AS(limited.ball(limited.identity(), 5), ResourceLimit);
}

TEST_CASE("F2 x Z lengths match breadth-first search") {
  for (int n : {1, 2, 3}) {
    auto g = Group::f2xz(n);
    auto ball = oracle::f2xz_ball(n, n == 1 ? 7 : 6);
    for (const auto& [key, d] : ball) {
      Element e = g.identity();
      e.parts[0].word = Word::reduce(std::vector<Letter>(key.first.begin(), key.first.end()), Alphabet(2));
      e.parts[0].coords[0] = key.second;
      REQUIRE(g.length(e) == static_cast<std::size_t>(d));
    }
  }
}

TEST_CASE("F2 x Z examples") {
  auto g3 = Group::parse("f2xz:n=3");
  CHECK(g3.length(g3.parse_element("; 1")) == 4);
  for (int n = 1; n <= 6; ++n) {
    auto g = Group::f2xz(n);
    for (int i = 1; i <= 3; ++i) {
      auto len = g.length(g.parse_element("; " + std::to_string(i)));
      CHECK(len >= static_cast<std::size_t>(n));
      // the abelianization bound (n + 1)|i| is attained by a^{-n i} t^i
      CHECK(len == static_cast<std::size_t>((n + 1) * i));
    }
  }
  auto z = Group::parse("f2xz:n=2");
  CHECK(z.format_element(z.parse_element("a b ; -3")) == "a b ; -3");
}

TEST_CASE("F2 x Z search budget reports an upper bound") {
  GroupLimits tiny;
  tiny.search_nodes = 10;
  auto g = Group::parse("f2xz:n=5", tiny);
  try {
    g.length(g.parse_element("a b A B a b A B ; 3"));
    FAIL("expected resource limit");
  } catch (const ResourceLimit& e) {
    REQUIRE(e.upper_bound().has_value());
    CHECK(*e.upper_bound() == 8 + 6 * 3);
  }
}

TEST_CASE("metric invariants on random triples") {
  std::mt19937_64 rng(3);
  for (const char* d : {"free:2", "free:3", "abelian:2", "prod(free:2,abelian:1)", "f2xz:n=2", "f2xz:n=4"}) {
    auto g = Group::parse(d);
    for (int t = 0; t < 1000; ++t) {
      auto x = g.random_walk(rng, rng() % 8);
      auto y = g.random_walk(rng, rng() % 8);
      auto s = g.random_walk(rng, rng() % 8);
      REQUIRE(g.length(g.inverse(x)) == g.length(x));
      REQUIRE((g.length(x) == 0) == g.is_identity(x));
      REQUIRE(g.distance(x, y) == g.distance(g.multiply(s, x), g.multiply(s, y)));
      REQUIRE(g.distance(x, y) <= g.distance(x, s) + g.distance(s, y));
    }
  }
}

TEST_CASE("F2 x Z free projection is n-Lipschitz") {
  for (int n : {2, 3}) {
    auto g = Group::f2xz(n);
    auto ball = g.ball(g.identity(), 4);
    for (std::size_t i = 0; i < ball.elements.size(); ++i) {
      REQUIRE(ball.elements[i].parts[0].word.length() <= ball.distance[i] * static_cast<std::size_t>(n));
      REQUIRE(g.length(ball.elements[i]) == ball.distance[i]);
    }
  }
}

TEST_CASE("length cache is safe under concurrent use") {
  auto g = Group::f2xz(3);
  std::vector<Element> xs;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 64; ++i) xs.push_back(g.random_walk(rng, 7));
  std::vector<std::size_t> serial;
  for (const auto& x : xs) serial.push_back(Group::f2xz(3).length(x));
  std::vector<std::vector<std::size_t>> got(4, std::vector<std::size_t>(xs.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = 0; i < xs.size(); ++i) got[t][(i + t * 16) % xs.size()] = g.length(xs[(i + t * 16) % xs.size()]);
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& v : got) CHECK(v == serial);
}

TEST_CASE("geodesics multiply back to the element") {
  std::mt19937_64 rng(17);
  for (const char* d : {"free:3", "abelian:2", "f2xz:n=3", "prod(free:2,abelian:1,f2xz:n=2)"}) {
    auto g = Group::parse(d);
    for (int t = 0; t < 200; ++t) {
      auto x = g.random_walk(rng, rng() % 10);
      auto path = g.geodesic(x);
      REQUIRE(path.size() == g.length(x));
      Element y = g.identity();
      for (auto s : path) y = g.multiply(y, g.generators()[s]);
      REQUIRE(y == x);
    }
  }
}
