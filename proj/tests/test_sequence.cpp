#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tsg/errors.hpp"
#include "tsg/repetition.hpp"
#include "tsg/sequence.hpp"

using namespace tsg;

namespace {

std::vector<char> chars(const std::string& s) { return {s.begin(), s.end()}; }

std::size_t naive_order(const std::vector<Token>& s) { return oracle::naive_max_power(s); }

Token random_pick(std::mt19937_64& rng, std::span<const Token> admissible) {
  return admissible[std::uniform_int_distribution<std::size_t>(0, admissible.size() - 1)(rng)];
}

// Picks the admissible token that completes the longest repetition.
Token spiteful_pick(std::span<const Token> admissible, std::span<const Token> history) {
  RepetitionTracker t;
  for (Token h : history) t.push(h);
  Token best = admissible[0];
  for (Token c : admissible) if (t.threat(best) < t.threat(c)) best = c;
  return best;
}

// Exhaustive adversary: does some sequence of choices force a (k+1)-th power
// within `depth` steps? Candidate sets are fixed per step.
bool adversary_wins(RepetitionTracker& t, const std::vector<std::vector<Token>>& sets, std::size_t step, std::size_t k) {
  if (step == sets.size()) return false;
  Token z = choose_inadmissible(t, sets[step]);
  for (Token x : sets[step]) {
    if (x == z) continue;
    auto e = t.threat(x);
    if (e.length >= (k + 1) * e.period) return true;
    RepetitionTracker next = t;
    next.push(x);
    if (adversary_wins(next, sets, step + 1, k)) return true;
  }
  return false;
}

// Same game, but the adversary also picks each two-element candidate set from
// the pairs of a ground set before the strategy answers.
bool adversary_wins_pairs(RepetitionTracker& t, std::size_t ground, std::size_t steps, std::size_t k) {
  if (steps == 0) return false;
  for (Token a = 0; a < static_cast<Token>(ground); ++a) {
    for (Token b = a + 1; b < static_cast<Token>(ground); ++b) {
      std::vector<Token> set{a, b};
      Token x = choose_inadmissible(t, set) == a ? b : a;
      auto e = t.threat(x);
      if (e.length >= (k + 1) * e.period) return true;
      RepetitionTracker next = t;
      next.push(x);
      if (adversary_wins_pairs(next, ground, steps - 1, k)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("square-free ternary word") {
  CHECK(squarefree_ternary(1) == "A");
  CHECK(squarefree_ternary(12) == "ABCACBABCBAC");
  CHECK(max_power_order(chars(squarefree_ternary(50))).order == 1);
  auto s1000 = chars(squarefree_ternary(1000));
  CHECK(oracle::naive_max_power(s1000) == 1);
  CHECK(max_power_order(chars(squarefree_ternary(100000))).order == 1);
}

TEST_CASE("binary recoding has no fifth power") {
  auto w = binary_four_aperiodic(5000);
  CHECK(w.size() == 5000);
  CHECK(max_power_order(w).order <= 4);
  CHECK(naive_order(binary_four_aperiodic(300)) <= 4);
}

TEST_CASE("tree construction and text format") {
  auto t = PlaneTernaryTree::complete(3);
  CHECK(t.size() == 1 + 3 + 6 + 12);
  CHECK(t.is_ternary());
  std::size_t ends = 0, internal = 0;
  for (VertexId v = 0; v < t.size(); ++v) (t.degree(v) == 1 ? ends : internal)++;
  CHECK(ends == internal + 2);
  CHECK(t.level_order(1) == std::vector<VertexId>{1, 2, 3});
  CHECK(t.level_order(2).front() == 4);

  auto r = PlaneTernaryTree::random(200, 9);
  CHECK(r.size() >= 200);
  CHECK(r.is_ternary());
  CHECK_FALSE(PlaneTernaryTree::ray(3).is_ternary());

  std::stringstream io;
  r.write(io);
  auto back = PlaneTernaryTree::read(io);
  REQUIRE(back.size() == r.size());
  for (VertexId v = 0; v < r.size(); ++v) CHECK(back.parent(v) == r.parent(v));

  std::istringstream bad("0 - 0\n1 5 1\n");
  CHECK_THROWS_AS(PlaneTernaryTree::read(bad), MalformedInput);
}

TEST_CASE("simple path enumeration") {
  auto count = [](const PlaneTernaryTree& t) {
    std::size_t n = 0;
    std::set<std::pair<VertexId, VertexId>> ends;
    for_each_simple_path(t, [&](std::span<const VertexId> p) {
      ++n;
      ends.insert({p.front(), p.back()});
    });
    CHECK(ends.size() == n);
    return n;
  };
  PlaneTernaryTree two;
  two.add_child(0);
  CHECK(count(two) == 1);
  CHECK(count(PlaneTernaryTree::ray(3)) == 6);
  auto c3 = PlaneTernaryTree::complete(3);
  CHECK(count(c3) == c3.size() * (c3.size() - 1) / 2);
  CHECK(count(PlaneTernaryTree()) == 0);
}

TEST_CASE("three-letter labeling keeps every simple path 3-aperiodic") {
  auto single = label_tree_3letters(PlaneTernaryTree());
  CHECK_FALSE(find_periodic_path(single, 3).has_value());

  auto full = label_tree_3letters(PlaneTernaryTree::complete(6));
  CHECK_FALSE(find_periodic_path(full, 3).has_value());
  // all paths, not only leaf-to-leaf ones, on the smaller tree
  auto small = label_tree_3letters(PlaneTernaryTree::complete(4));
  for_each_simple_path(small.tree, [&](std::span<const VertexId> p) {
    REQUIRE(naive_order(small.labels_along(p)) <= 3);
  });
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto labeled = label_tree_3letters(PlaneTernaryTree::random(300, seed));
    CHECK_FALSE(find_periodic_path(labeled, 3).has_value());
  }
}

TEST_CASE("leaf-pair scan finds planted repetitions") {
  auto labeled = label_tree_3letters(PlaneTernaryTree::complete(4));
  for (VertexId v = 1; v < labeled.tree.size(); ++v) labeled.edge_label[v] = 0;
  auto bad = find_periodic_path(labeled, 3);
  REQUIRE(bad.has_value());
  CHECK(bad->order >= 4);
}

TEST_CASE("ray labeling, two-letter base case") {
  std::vector<std::vector<Token>> sets(100, {0, 1});
  auto forced = [](std::size_t, std::span<const Token> adm, std::span<const Token>) { return adm[0]; };
  auto out = label_ray_adversarial(sets, forced);
  CHECK(out.labels.size() == 100);
  CHECK(naive_order(out.labels) <= 4);
  for (std::size_t i = 0; i < 100; ++i) CHECK(out.labels[i] != out.inadmissible[i]);
}

TEST_CASE("ray labeling against adversaries") {
  auto lexicographic = [](std::size_t, std::span<const Token> adm, std::span<const Token>) { return adm[0]; };
  auto spiteful = [](std::size_t, std::span<const Token> adm, std::span<const Token> h) { return spiteful_pick(adm, h); };

  std::vector<std::vector<Token>> abc(200, {0, 1, 2});
  CHECK(naive_order(label_ray_adversarial(abc, lexicographic).labels) <= 4);
  CHECK(naive_order(label_ray_adversarial(abc, spiteful).labels) <= 4);

  std::vector<std::vector<Token>> abcd(500, {0, 1, 2, 3});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    auto random = [&](std::size_t, std::span<const Token> adm, std::span<const Token>) { return random_pick(rng, adm); };
    REQUIRE(max_power_order(label_ray_adversarial(abcd, random).labels).order <= 4);
  }
  CHECK(max_power_order(label_ray_adversarial(abcd, spiteful).labels).order <= 4);

  // varying two-element sets drawn from a larger ground set
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed + 1000);
    std::vector<std::vector<Token>> sets;
    for (int i = 0; i < 400; ++i) {
      std::vector<Token> all{0, 1, 2, 3, 4};
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(2 + rng() % 3);
      sets.push_back(all);
    }
    auto random = [&](std::size_t, std::span<const Token> adm, std::span<const Token>) { return random_pick(rng, adm); };
    REQUIRE(max_power_order(label_ray_adversarial(sets, random).labels).order <= 4);
    REQUIRE(max_power_order(label_ray_adversarial(sets, spiteful).labels).order <= 4);
  }
}

TEST_CASE("blocking strategy survives every adversary on short horizons") {
  RepetitionTracker t;
  CHECK_FALSE(adversary_wins(t, std::vector<std::vector<Token>>(20, {0, 1, 2}), 0, 4));
  RepetitionTracker t2;
  CHECK_FALSE(adversary_wins_pairs(t2, 3, 13, 4));
}

TEST_CASE("ray labeling rejects bad input and bad choosers") {
  auto first = [](std::size_t, std::span<const Token> adm, std::span<const Token>) { return adm[0]; };
  CHECK_THROWS_AS(label_ray_adversarial({{0, 1}, {2, 2}}, first), MalformedInput);
  auto cheat = [](std::size_t, std::span<const Token>, std::span<const Token>) { return Token{99}; };
  CHECK_THROWS_AS(label_ray_adversarial({{0, 1, 2}}, cheat), PreconditionError);
}

TEST_CASE("tree labeling against adversaries") {
  auto tree = PlaneTernaryTree::complete(5);
  std::vector<std::vector<Token>> four(tree.size(), {0, 1, 2, 3});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    auto random = [&](VertexId, std::span<const Token> adm, std::size_t count, std::span<const Token>) {
      std::vector<Token> pool(adm.begin(), adm.end());
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(count);
      return pool;
    };
    auto labeled = label_tree_adversarial(tree, four, random);
    REQUIRE_FALSE(find_periodic_path(labeled, 10).has_value());
    for (VertexId v = 0; v < tree.size(); ++v) {
      if (tree.children(v).empty()) continue;
      for (VertexId c : tree.children(v)) REQUIRE(labeled.edge_label[c] != labeled.inadmissible[v]);
    }
  }

  // a degenerate tree (a ray) is even 4-aperiodic along the ray
  auto ray = PlaneTernaryTree::ray(300);
  std::vector<std::vector<Token>> cands(ray.size(), {0, 1, 2, 3});
  auto lowest = [](VertexId, std::span<const Token> adm, std::size_t count, std::span<const Token>) {
    return std::vector<Token>(adm.begin(), adm.begin() + static_cast<std::ptrdiff_t>(count));
  };
  auto labeled = label_tree_adversarial(ray, cands, lowest);
  CHECK_FALSE(find_periodic_path(labeled, 5).has_value());
  CHECK_FALSE(find_periodic_path(labeled, 4).has_value());

  std::vector<std::vector<Token>> three(tree.size(), {0, 1, 2});
  CHECK_THROWS_AS(label_tree_adversarial(tree, three, lowest), MalformedInput);
  auto dup = [](VertexId, std::span<const Token> adm, std::size_t count, std::span<const Token>) {
    return std::vector<Token>(count, adm[0]);
  };
  CHECK_THROWS_AS(label_tree_adversarial(tree, four, dup), PreconditionError);
}
