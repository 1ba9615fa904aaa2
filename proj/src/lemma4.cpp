#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"
#include "tsg/sequence.hpp"
#include "tsg/small_cancellation.hpp"

namespace tsg {

Lemma4Params Lemma4Params::desk() {
  Lemma4Params p;
  p.min_length = 1001;
  p.affix = 200;
  p.head_zone = 170;
  p.tail_from = 200;
  p.tail_to = 30;
  p.zone_window = 30;
  p.global_window = 100;
  p.density_window = 100;
  return p;
}

namespace {

constexpr Letter kA = 1, kB = 2;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<Letter> delta(std::size_t min_length) {
  std::vector<Letter> out;
  for (char c : squarefree_ternary(min_length)) {
    if (out.size() >= min_length) break;
    switch (c) {
      case 'A': out.insert(out.end(), {kB}); break;
      case 'B': out.insert(out.end(), {kA, kB, kA}); break;
      default: out.insert(out.end(), {kA, kA, kB, kA, kA}); break;
    }
  }
  return out;
}

// need[u] = u + width for the narrowest window starting at u, 1-based.
std::vector<std::size_t> window_ends(std::size_t n, const Lemma4Params& p) {
  std::vector<std::size_t> need(n + 2, kNone);
  auto add = [&](std::size_t u, std::size_t w) {
    if (u >= 1 && u <= n) need[u] = std::min(need[u], u + w);
  };
  for (std::size_t u = 1; u < p.head_zone; ++u) add(u, p.zone_window);
  for (std::size_t u = n - p.tail_from + 1; u + p.tail_to < n; ++u) add(u, p.zone_window);
  for (std::size_t u = 1; u + p.global_window < n; ++u) add(u, p.global_window);
  return need;
}

std::optional<std::vector<std::size_t>> select_d(std::size_t n, const std::vector<bool>& is_b,
                                                 const Lemma4Params& p, std::mt19937_64& rng, std::string& why) {
  auto need = window_ends(n, p);
  // reach[d] = min over u > d of need[u]
  std::vector<std::size_t> reach(n + 2, kNone);
  for (std::size_t d = n; d-- > 0;) reach[d] = std::min(reach[d + 1], need[d + 1]);
  std::vector<std::size_t> b_prefix(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) b_prefix[i] = b_prefix[i - 1] + is_b[i];

  std::vector<std::size_t> d_set;
  std::set<std::size_t> gaps;
  auto density_ok = [&](std::size_t c) {
    const std::size_t w = p.density_window;
    std::size_t lo = c > w ? c - w : 1;
    for (std::size_t u = lo; u <= c && u + w < n; ++u) {
      std::size_t in_d = 1;
      for (auto it = d_set.rbegin(); it != d_set.rend() && *it >= u; ++it) ++in_d;
      if (3 * in_d >= b_prefix[u + w] - b_prefix[u - 1]) return false;
    }
    return true;
  };
  std::size_t last = 0;
  while (reach[last] != kNone) {
    std::vector<std::size_t> ok;
    for (std::size_t c = std::min(reach[last], n - 1); c > last && c >= 2; --c) {
      if (!is_b[c]) continue;
      if (!d_set.empty() && gaps.contains(c - last)) continue;
      if (!density_ok(c)) continue;
      ok.push_back(c);
      if (ok.size() == 4) break;
    }
    if (ok.empty()) {
      why = "no admissible b in (" + std::to_string(last) + ", " + std::to_string(reach[last]) + "]";
      return std::nullopt;
    }
    std::size_t c = ok[rng() % ok.size()];
    if (!d_set.empty()) gaps.insert(c - last);
    d_set.push_back(c);
    last = c;
  }
  if (d_set.size() >= 2 && gaps.contains(n - d_set.back() + d_set.front())) {
    why = "wrap-around gap repeats an inner gap";
    return std::nullopt;
  }
  return d_set;
}

Check make_check(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

}  // namespace

Lemma4Result construct_xi_lemma4(std::uint64_t seed, const Lemma4Params& params) {
  if (params.affix == 0 || params.min_length < 4 * params.affix) throw ConfigError("affix must be positive and at most N/4");
  auto base = delta(params.min_length);
  const std::size_t n = base.size();
  std::vector<bool> is_b(n + 1, false);
  Lemma4Result out;
  for (std::size_t i = 1; i <= n; ++i) {
    is_b[i] = base[i - 1] == kB;
    if (is_b[i]) out.b_positions.push_back(i);
  }
  std::string why;
  for (std::size_t attempt = 0; attempt < params.attempts; ++attempt) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + attempt);
    auto d = select_d(n, is_b, params, rng, why);
    if (!d) continue;
    std::vector<Letter> letters = base;
    for (auto pos : *d) letters[pos - 1] = -kB;
    Word xi = Word::reduce(letters, Alphabet(2));
    auto report = verify_lemma4(xi, params);
    if (!report.pass()) {
      for (const auto& c : report.checks) {
        if (!c.pass) {
          why = c.name + ": " + c.detail;
          break;
        }
      }
      continue;
    }
    out.xi = std::move(xi);
    out.d_positions = std::move(*d);
    out.attempts = attempt + 1;
    out.report = std::move(report);
    out.notes.push_back("end zones (0, " + std::to_string(params.head_zone) + ") and (N-" +
                        std::to_string(params.tail_from) + ", N-" + std::to_string(params.tail_to) +
                        ") are not mirror images; checked as given");
    out.notes.push_back("D gaps are pairwise distinct, wrap-around gap included");
    return out;
  }
  throw PreconditionError("no valid D after " + std::to_string(params.attempts) + " attempts; last: " + why);
}

VerificationReport verify_lemma4(const Word& xi, const Lemma4Params& params) {
  VerificationReport rep;
  const std::size_t n = xi.length();
  auto order = max_power_order(xi).order;
  rep.checks.push_back(make_check("i_3_aperiodic", order <= 3, "max power order " + std::to_string(order)));
  rep.checks.push_back(make_check("ii_length", n >= params.min_length && n <= params.min_length + 4,
                                  "N = " + std::to_string(n)));
  if (n < 2 * params.affix || n == 0) {
    rep.checks.push_back(make_check("iii_c_prime_1_5", false, "word too short"));
    rep.checks.push_back(make_check("iv_affixes_c_prime_1_3", false, "word too short"));
    return rep;
  }
  try {
    auto sc = satisfies_small_cancellation(SymmetrizedSet({xi}, true), 1, 5);
    rep.checks.push_back(make_check("iii_c_prime_1_5", sc.holds, "longest piece " + std::to_string(sc.max_piece)));
  } catch (const MalformedInput& e) {
    rep.checks.push_back(make_check("iii_c_prime_1_5", false, e.what()));
  }
  Word alpha = xi.subword(0, params.affix);
  Word beta = xi.subword(n - params.affix, params.affix);
  if (alpha == beta) {
    rep.checks.push_back(make_check("iv_affixes_c_prime_1_3", false, "alpha equals beta"));
  } else {
    auto sc = satisfies_small_cancellation(SymmetrizedSet({alpha, beta}, false), 1, 3);
    rep.checks.push_back(
        make_check("iv_affixes_c_prime_1_3", sc.holds, "longest piece " + std::to_string(sc.max_piece)));
  }

  std::vector<bool> in_b(n + 1, false), in_d(n + 1, false);
  std::vector<std::size_t> d;
  for (std::size_t i = 1; i <= n; ++i) {
    in_b[i] = xi[i - 1] == kB || xi[i - 1] == -kB;
    in_d[i] = xi[i - 1] == -kB;
    if (in_d[i]) d.push_back(i);
  }
  auto count = [&](const std::vector<bool>& v, std::size_t u, std::size_t w) {
    std::size_t c = 0;
    for (std::size_t i = u; i <= std::min(n, u + w); ++i) c += v[i];
    return c;
  };
  std::multiset<std::size_t> gaps;
  for (std::size_t i = 1; i < d.size(); ++i) gaps.insert(d[i] - d[i - 1]);
  bool distinct = true;
  for (auto g : gaps) distinct = distinct && gaps.count(g) == 1;
  rep.checks.push_back(make_check("d1_distinct_gaps", distinct && d.size() >= 2,
                                  std::to_string(d.size()) + " points, " + std::to_string(gaps.size()) + " gaps"));
  bool wrap_ok = d.size() >= 2 && !gaps.contains(n - d.back() + d.front());
  rep.checks.push_back(make_check("d1_wrap_gap", wrap_ok,
                                  d.empty() ? "no points" : "wrap gap " + std::to_string(n - d.back() + d.front())));

  std::string miss;
  auto zone = [&](std::size_t from, std::size_t to) {
    for (std::size_t u = from; u < to && miss.empty(); ++u) {
      if (count(in_d, u, params.zone_window) == 0) miss = "window at u = " + std::to_string(u) + " misses D";
    }
  };
  zone(1, params.head_zone);
  zone(n - params.tail_from + 1, n - params.tail_to);
  rep.checks.push_back(make_check("d2_end_windows", miss.empty(),
                                  miss.empty() ? "zones as given, not mirror images (tail zone ends " +
                                                     std::to_string(params.tail_to) + " before N)"
                                               : miss));
  miss.clear();
  for (std::size_t u = 1; u + params.global_window < n && miss.empty(); ++u) {
    if (count(in_d, u, params.global_window) == 0) miss = "window at u = " + std::to_string(u) + " misses D";
  }
  rep.checks.push_back(make_check("d3_global_windows", miss.empty(), miss));
  miss.clear();
  for (std::size_t u = 1; u + params.density_window < n && miss.empty(); ++u) {
    auto cd = count(in_d, u, params.density_window), cb = count(in_b, u, params.density_window);
    if (3 * cd >= cb) {
      miss = "window at u = " + std::to_string(u) + " has " + std::to_string(cd) + " of " + std::to_string(cb);
    }
  }
  rep.checks.push_back(make_check("d4_density", miss.empty(), miss));
  return rep;
}

}  // namespace tsg
