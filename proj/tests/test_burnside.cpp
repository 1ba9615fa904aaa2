#include <doctest.h>

#include <random>
#include <set>

#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"
#include "tsg/sequence.hpp"

using namespace tsg;

namespace {

// Largest k such that some block repeats k times, by run lengths per period.
std::size_t naive_order(const std::vector<Letter>& s) {
  std::size_t best = s.empty() ? 0 : 1;
  for (std::size_t q = 1; 2 * q <= s.size(); ++q) {
    std::size_t run = 0;
    for (std::size_t i = 0; i + q < s.size(); ++i) {
      run = s[i] == s[i + q] ? run + 1 : 0;
      best = std::max(best, (run + q) / q);
    }
  }
  return best;
}

struct Scan {
  bool distinct_gaps = true, ends = true, global = true, density = true;
};

// Conditions on D read straight off the letters, 1-based windows.
Scan scan_conditions(const Word& xi, const Lemma4Params& p) {
  const std::size_t n = xi.length();
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i < n; ++i) if (xi[i] == -2) d.push_back(i + 1);
  Scan out;
  std::set<std::size_t> gaps;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::size_t g = i + 1 < d.size() ? d[i + 1] - d[i] : n - d.back() + d.front();
    out.distinct_gaps = out.distinct_gaps && gaps.insert(g).second;
  }
  auto hits = [&](std::size_t u, std::size_t w) {
    std::size_t c = 0;
    for (auto x : d) c += x >= u && x <= u + w;
    return c;
  };
  for (std::size_t u = 1; u < n; ++u) {
    bool head = u < p.head_zone, tail = u > n - p.tail_from && u < n - p.tail_to;
    if ((head || tail) && hits(u, p.zone_window) == 0) out.ends = false;
    if (u + p.global_window < n && hits(u, p.global_window) == 0) out.global = false;
    if (u + p.density_window < n) {
      std::size_t b = 0;
      for (std::size_t i = u; i <= u + p.density_window; ++i) b += xi[i - 1] == 2 || xi[i - 1] == -2;
      if (3 * hits(u, p.density_window) >= b) out.density = false;
    }
  }
  return out;
}

std::vector<Letter> substituted(std::size_t min_length) {
  std::vector<Letter> out;
  for (char c : squarefree_ternary(min_length)) {
    if (out.size() >= min_length) break;
    if (c == 'A') out.push_back(2);
    if (c == 'B') out.insert(out.end(), {1, 2, 1});
    if (c == 'C') out.insert(out.end(), {1, 1, 2, 1, 1});
  }
  return out;
}

}  // namespace

TEST_CASE("desk-scale xi passes every condition") {
  auto p = Lemma4Params::desk();
  auto base = substituted(p.min_length);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    CAPTURE(seed);
    auto r = construct_xi_lemma4(seed, p);
    for (const auto& c : r.report.checks) INFO(c.name << ": " << c.detail);
    CHECK(r.report.pass());
    const auto& w = r.xi.letters();
    CHECK(w.size() > 1000);
    CHECK(w.size() < 1006);
    REQUIRE(w.size() == base.size());
    std::vector<Letter> unflipped;
    for (auto l : w) unflipped.push_back(l == -2 ? 2 : l);
    CHECK(unflipped == base);
    CHECK(naive_order(w) <= 3);
    auto s = scan_conditions(r.xi, p);
    CHECK(s.distinct_gaps);
    CHECK(s.ends);
    CHECK(s.global);
    CHECK(s.density);
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < w.size(); ++i) if (w[i] == -2) d.push_back(i + 1);
    CHECK(d == r.d_positions);
    CHECK_FALSE(r.notes.empty());
  }
}

TEST_CASE("full-scale xi") {
  auto r = construct_xi_lemma4(3);
  CHECK(r.xi.length() >= 10001);
  CHECK(r.xi.length() <= 10005);
  CHECK(r.report.pass());
  auto s = scan_conditions(r.xi, Lemma4Params::full());
  CHECK(s.distinct_gaps);
  CHECK(s.ends);
  CHECK(s.global);
  CHECK(s.density);
}

TEST_CASE("tampered xi fails the right conditions") {
  auto p = Lemma4Params::desk();
  auto r = construct_xi_lemma4(2, p);
  auto letters = r.xi.letters();
  for (std::size_t i = 400; i < 520; ++i) if (letters[i] == 2) letters[i] = -2;
  auto dense = verify_lemma4(Word::reduce(letters, Alphabet(2)), p);
  CHECK_FALSE(dense.find("d4_density")->pass);
  CHECK_FALSE(dense.find("d1_distinct_gaps")->pass);
  CHECK(dense.find("i_3_aperiodic")->pass);

  letters = r.xi.letters();
  for (auto& l : letters) if (l == -2) l = 2;
  auto none = verify_lemma4(Word::reduce(letters, Alphabet(2)), p);
  CHECK_FALSE(none.find("d2_end_windows")->pass);
  CHECK_FALSE(none.find("d3_global_windows")->pass);

  auto shortw = verify_lemma4(r.xi.subword(0, 900), p);
  CHECK_FALSE(shortw.find("ii_length")->pass);
}

TEST_CASE("lemma 5 on single blocks and samples") {
  auto p = Lemma5Params::desk();
  auto xi = construct_xi_lemma4(1, p.xi_params).xi;
  auto one = verify_lemma5(xi, {parse_word("a b b A")}, {1}, p);
  CHECK(one.holds);
  REQUIRE(one.xi_report);
  CHECK(one.xi_report->pass());
  CHECK(one.structure_ok);

  p.check_xi = false;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Word> xs;
    std::vector<int> eps;
    std::size_t k = 1 + rng() % 12;
    while (xs.size() < k) {
      xs.push_back(random_reduced_word(rng, p.max_x_length));
      if (!is_k_aperiodic(xs, 10).aperiodic) xs.pop_back();
    }
    for (std::size_t i = 0; i < k; ++i) eps.push_back(rng() & 1 ? 1 : -1);
    auto a = verify_lemma5(xi, xs, eps, p);
    Word product(2);
    for (std::size_t i = 0; i < k; ++i) product *= (eps[i] > 0 ? xi : xi.inverse()) * xs[i];
    CHECK(a.reduced_length == product.length());
    CHECK(a.order == naive_order(product.letters()));
    CHECK(a.holds);
    CHECK(a.structure_ok);
    std::size_t total = 0;
    for (const auto& b : a.blocks) total += b.xi_length + b.u_length;
    CHECK(total == product.length());
  }
}

TEST_CASE("lemma 5 preconditions") {
  auto p = Lemma5Params::desk();
  p.check_xi = false;
  auto xi = construct_xi_lemma4(1, p.xi_params).xi;
  std::vector<Word> eleven(11, parse_word("a b"));
  try {
    verify_lemma5(xi, eleven, std::vector<int>(11, 1), p);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("repeats 11 times") != std::string::npos);
  }
  CHECK_THROWS_AS(verify_lemma5(xi, {Word(2)}, {1}, p), PreconditionError);
  CHECK_THROWS_AS(verify_lemma5(xi, {parse_word("a").power(97)}, {1}, p), PreconditionError);
  CHECK_THROWS_AS(verify_lemma5(xi, {parse_word("a")}, {0}, p), PreconditionError);
  CHECK_THROWS_AS(verify_lemma5(xi, {parse_word("a")}, {1, 1}, p), PreconditionError);
}

TEST_CASE("lemma 5 violation cases") {
  auto p = Lemma5Params::desk();
  p.check_xi = false;
  auto xi = construct_xi_lemma4(1, p.xi_params).xi;
  // short period spliced into xi
  Word stretch = parse_word("a b").power(60);
  Word bad = xi.subword(0, 400) * stretch * xi.subword(520, xi.length() - 520);
  auto s = verify_lemma5(bad, {parse_word("a"), parse_word("b")}, {1, -1}, p);
  CHECK_FALSE(s.holds);
  CHECK(s.violation_case == Lemma5Case::Short);
  REQUIRE(s.witness_blocks);
  CHECK(s.witness_blocks->first == s.witness_blocks->second);

  // a whole block repeated: the period is longer than |xi| / 5
  p.power_bound = 4;
  auto l = verify_lemma5(xi, std::vector<Word>(4, parse_word("b")), {1, 1, 1, 1}, p);
  CHECK_FALSE(l.holds);
  CHECK(l.order == 4);
  CHECK(l.violation_case == Lemma5Case::Long);
  REQUIRE(l.witness_blocks);
  CHECK(l.witness_blocks->first == 0);
  CHECK(l.witness_blocks->second == 3);
}

TEST_CASE("desk-scale pipeline and fault localization") {
  BurnsideConfig c;
  c.desk = true;
  c.samples = 20;
  c.jobs = 2;
  auto ok = burnside_pipeline(c);
  CHECK(ok.pass());
  REQUIRE(ok.stages.size() == 4);
  CHECK(ok.stages[0].name == "lemma4");
  CHECK(ok.stages[3].name == "arithmetic");
  CHECK(ok.samples.size() == 20);
  REQUIRE(ok.external_assumptions.size() == 1);
  CHECK(ok.external_assumptions[0].find("EXTERNAL") == 0);
  CHECK(ok.chain.size() == 5);

  c.fault = BurnsideFault::Affix;
  auto affix = burnside_pipeline(c);
  CHECK(affix.failed_stage == "lemma4");
  CHECK(affix.stages[0].detail.find("iv_affixes") != std::string::npos);

  c.fault = BurnsideFault::Power;
  auto power = burnside_pipeline(c);
  CHECK(power.failed_stage == "lemma4");
  CHECK_FALSE(power.stages[2].pass);
  for (const auto& s : power.samples) CHECK(s.violation_case == Lemma5Case::Short);
}

TEST_CASE("random reduced words") {
  std::mt19937_64 rng(9);
  std::set<std::size_t> lengths;
  for (int i = 0; i < 500; ++i) {
    auto w = random_reduced_word(rng, 12);
    lengths.insert(w.length());
    for (std::size_t j = 1; j < w.length(); ++j) REQUIRE(w[j] != -w[j - 1]);
  }
  CHECK(*lengths.begin() == 1);
  CHECK(*lengths.rbegin() == 12);
}
