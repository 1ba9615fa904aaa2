#include <doctest.h>

#include <random>
#include <set>

#include "instances.hpp"
#include "tsg/errors.hpp"
#include "tsg/tree_partition.hpp"

using namespace tsg;

namespace {

std::vector<Element> revised_sample(const Group& g, const Element& xi, std::uint64_t seed, std::size_t max_size) {
  std::mt19937_64 rng(seed);
  SamplerConfig cfg;
  cfg.max_size = max_size;
  return sample_related_set(g, xi, cfg, rng);
}

// Cut edges as unordered element pairs, rescanned straight from the tour.
std::set<std::pair<std::size_t, std::size_t>> brute_cuts(const DistanceMatrix& d, const std::vector<std::size_t>& order,
                                                         Rational t) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  const std::size_t m = order.size();
  for (std::size_t j = 0; j < m && m > 1; ++j) {
    std::size_t a = order[j], b = order[(j + 1) % m];
    if (static_cast<double>(d[a][b]) > t.value()) out.insert({std::min(a, b), std::max(a, b)});
  }
  return out;
}

}  // namespace

TEST_CASE("piece decomposition examples") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.parse_element("a b a B");
  std::vector<Element> two{f2.identity(), xi};
  auto d2 = distance_matrix(f2, two);
  std::vector<std::size_t> tour2{0, 1};
  auto pd = decompose_pieces(d2, tour2, Rational{3, 1});
  CHECK(pd.pieces.size() == 2);
  CHECK(pd.cuts.size() == 2);
  CHECK(pd.cut_length == 8);

  std::vector<Element> chain;
  for (int k = 0; k < 6; ++k) chain.push_back(f2.from_word(parse_word("a").power(k)));
  std::vector<std::size_t> tour6{0, 1, 2, 3, 4, 5};
  auto one = decompose_pieces(distance_matrix(f2, chain), tour6, Rational{100, 1});
  REQUIRE(one.pieces.size() == 1);
  CHECK(one.pieces[0] == std::pair<std::size_t, std::size_t>{0, 6});
  CHECK(one.cuts.empty());
  CHECK(one.total_length == 10);

  std::vector<std::size_t> repeats{0, 1, 0, 2, 1, 3, 4, 5};
  auto dd = decompose_pieces(distance_matrix(f2, chain), repeats, Rational{1, 2});
  CHECK(dd.removed == std::vector<std::size_t>{2, 4});
  CHECK(dd.order.size() == 6);
  CHECK_THROWS_AS(decompose_pieces(distance_matrix(f2, chain), std::vector<std::size_t>{0, 1, 2}, Rational{1, 1}),
                  PreconditionError);
}

TEST_CASE("cuts match a rescan of consecutive distances") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.from_word(aperiodic_word(7));
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto s = revised_sample(f2, xi, seed, 12);
    auto d = distance_matrix(f2, s);
    auto tour = tsp_exact(d);
    Rational t{15, 1};
    auto pd = decompose_pieces(d, tour.order, t);
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (auto j : pd.cuts) {
      std::size_t a = pd.order[j], b = pd.order[(j + 1) % pd.order.size()];
      got.insert({std::min(a, b), std::max(a, b)});
    }
    REQUIRE(got == brute_cuts(d, tour.order, t));
    REQUIRE(pd.total_length == tour.length);
    std::size_t covered = 0;
    for (auto [b, e] : pd.pieces) covered += e - b;
    REQUIRE(covered == s.size());
  }
}

TEST_CASE("forest P on a single pair") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.parse_element("a");
  std::vector<Element> s{f2.identity(), xi};
  auto tour = tsp_exact(distance_matrix(f2, s));
  auto f = build_forest_P(f2, s, xi, 30, tour);
  REQUIRE(f.trees.size() == 1);
  CHECK(f.trees[0].vertices.size() == 1);
  CHECK(f.trees[0].vertices[0].members.size() == 2);
  CHECK(f.census.end_vertices == 1);
  CHECK(verify_forest(f2, f, s, xi).pass());

  auto g = build_forest_P10(f2, s, xi, 100, tour);
  REQUIRE(g.trees.size() == 1);
  CHECK(g.trees[0].vertices.size() == 1);
}

TEST_CASE("forest P invariants and bound soundness") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.from_word(aperiodic_word(40));
  const std::int64_t r = 30;
  std::size_t branching = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    auto s = seed % 2 ? revised_sample(f2, xi, 100 + seed, 12) : instances::clustered_revised_set(f2, xi, 12, 3, rng);
    auto d = distance_matrix(f2, s);
    auto tour = tsp_exact(d);
    auto f = build_forest_P(f2, s, xi, r, tour);
    auto rep = verify_forest(f2, f, s, xi, 2);
    for (const auto& c : rep.checks) INFO(c.name << ": " << c.detail);
    REQUIRE(rep.pass());
    CHECK(f.census.end_vertices >= 1);
    for (const auto& t : f.trees) branching += t.vertices.size() > 1;
    CHECK(f.census.ends_ok);
    CHECK(f.bound.premises_hold);
    CHECK(f.bound.tour_exact);
    // claimed <= L
    CHECK(f.bound.claimed.num <= tour.length * f.bound.claimed.den);
    CHECK(f.bound.intermediate.num <= tour.length * f.bound.intermediate.den);

    auto again = build_forest_P(f2, s, xi, r, tour);
    REQUIRE(again.trees.size() == f.trees.size());
    for (std::size_t t = 0; t < f.trees.size(); ++t) {
      for (std::size_t v = 0; v < f.trees[t].vertices.size(); ++v) {
        CHECK(again.trees[t].vertices[v].members == f.trees[t].vertices[v].members);
      }
    }
  }
  CHECK(branching > 0);
}

TEST_CASE("injected faults are caught") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.from_word(aperiodic_word(40));
  std::vector<Element> s;
  TreeForest f;
  std::size_t big = 0;
  for (std::uint64_t seed = 0; f.trees.empty() || f.trees[big].vertices.size() < 2; ++seed) {
    REQUIRE(seed < 50);
    std::mt19937_64 rng(seed);
    s = instances::clustered_revised_set(f2, xi, 12, 3, rng);
    f = build_forest_P(f2, s, xi, 30, tsp_exact(distance_matrix(f2, s)));
    big = 0;
    for (std::size_t t = 0; t < f.trees.size(); ++t) if (f.trees[t].vertices.size() > f.trees[big].vertices.size()) big = t;
  }
  REQUIRE(verify_forest(f2, f, s, xi).pass());
  auto dup = f;
  dup.trees[big].vertices[1].members.push_back(dup.trees[big].vertices[0].members[0]);
  auto rep = verify_forest(f2, dup, s, xi);
  CHECK_FALSE(rep.find("disjoint_within_tree")->pass);

  auto wit = f;
  wit.trees[big].vertices[1].witness->first = wit.trees[big].vertices[1].witness->second;
  CHECK_FALSE(verify_forest(f2, wit, s, xi).find("witnesses")->pass);

  auto order = f;
  std::reverse(order.build_log.begin(), order.build_log.end());
  CHECK_FALSE(verify_forest(f2, order, s, xi).find("build_order")->pass);

  auto lost = f;
  lost.trees.pop_back();
  CHECK_FALSE(verify_forest(f2, lost, s, xi).find("coverage")->pass);
}

TEST_CASE("forest preconditions") {
  auto z = Group::parse("abelian:1");
  auto xi = z.parse_element("10");
  std::vector<Element> s;
  for (int k = 0; k < 3; ++k) {
    s.push_back(z.parse_element(std::to_string(k)));
    s.push_back(z.parse_element(std::to_string(k + 10)));
  }
  auto tour = tsp_exact(distance_matrix(z, s));
  CHECK_THROWS_AS(build_forest_P(z, s, xi, 4, tour), PreconditionError);

  std::vector<Element> unpaired{s[0], s[2]};
  CHECK_THROWS_AS(build_forest_P(z, unpaired, xi, 4, tour), PreconditionError);
  CHECK_THROWS_AS(build_forest_P10(z, unpaired, xi, 4, tour), PreconditionError);
  CHECK_THROWS_AS(build_forest_P(z, s, xi, 0, tour), PreconditionError);
}

TEST_CASE("forest P10 census and bound") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.from_word(aperiodic_word(60));
  const std::int64_t r = 100;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::mt19937_64 rng(seed);
    auto s = seed % 2 ? revised_sample(f2, xi, 500 + seed, 14) : instances::clustered_revised_set(f2, xi, 14, 5, rng);
    auto d = distance_matrix(f2, s);
    auto tour = tsp_exact(d);
    auto f = build_forest_P10(f2, s, xi, r, tour);
    auto rep = verify_forest(f2, f, s, xi);
    for (const auto& c : rep.checks) INFO(c.name << ": " << c.detail);
    CHECK(rep.find("coverage")->pass);
    CHECK(rep.find("sharing")->pass);
    CHECK(rep.find("witnesses")->pass);
    CHECK(rep.find("build_order")->pass);
    CHECK(rep.find("disjoint_within_tree")->pass);
    CHECK(f.bound.claimed.num <= tour.length * f.bound.claimed.den);
    if (f.advisory) continue;
    ++checked;
    CHECK(8 * f.census.v_far <= s.size());
    CHECK(24 * f.census.v_near > s.size());
  }
  CHECK(checked > 0);
}

TEST_CASE("forest P10 with a short xi builds nontrivial trees") {
  auto f2 = Group::parse("free:2");
  auto xi = f2.from_word(aperiodic_word(3));
  std::size_t deep = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    auto s = instances::clustered_revised_set(f2, xi, 14, 5, rng);
    auto tour = tsp_exact(distance_matrix(f2, s));
    auto f = build_forest_P10(f2, s, xi, 100, tour);
    auto rep = verify_forest(f2, f, s, xi);
    CHECK(rep.find("coverage")->pass);
    CHECK(rep.find("sharing")->pass);
    CHECK(rep.find("witnesses")->pass);
    CHECK(rep.find("build_order")->pass);
    CHECK(rep.find("labels_10_aperiodic")->pass);
    // a single piece has no cut, so the chain of bounds does not apply
    CHECK_FALSE(f.bound.premises_hold);
    for (const auto& t : f.trees) deep += t.vertices.size() > 2;
    for (std::size_t t = 0; t < f.trees.size(); ++t) {
      for (VertexId v = 0; v < f.trees[t].vertices.size(); ++v) {
        const auto& bad = f.labels[t].inadmissible[v];
        if (!bad || v == 0) continue;
        for (auto c : f.trees[t].shape.children(v)) CHECK(*f.labels[t].edge_label[c] != *bad);
      }
    }
  }
  CHECK(deep > 0);
}
