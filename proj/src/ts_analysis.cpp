#include "tsg/ts_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "tsg/errors.hpp"

namespace tsg {

Rational Rational::parse(const std::string& text) {
  auto bad = [&] { return ConfigError("lambda must be a positive rational like 2, 3/2 or 1.5, got `" + text + "`"); };
  auto to_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  Rational r;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    r.num = to_int(std::string_view(text).substr(0, slash));
    r.den = to_int(std::string_view(text).substr(slash + 1));
  } else if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t decimals = text.size() - dot - 1;
    if (decimals > 9) throw bad();
    r.num = to_int(digits);
    r.den = 1;
    for (std::size_t i = 0; i < decimals; ++i) r.den *= 10;
  } else {
    r.num = to_int(text);
  }
  if (r.num <= 0 || r.den <= 0) throw bad();
  std::int64_t g = std::gcd(r.num, r.den);
  r.num /= g;
  r.den /= g;
  return r;
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

namespace {

using Index = std::unordered_map<Element, std::size_t, ElementHash>;

Index index_of(std::span<const Element> elements) {
  Index idx;
  for (std::size_t i = 0; i < elements.size(); ++i) idx.emplace(elements[i], i);
  return idx;
}

void require_nontrivial(const Group& group, const Element& xi) {
  if (group.is_identity(xi)) throw DegenerateXi();
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard g(lock);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

RelatedCheck is_xi_related(const Group& group, std::span<const Element> elements, const Element& xi) {
  require_nontrivial(group, xi);
  Index idx = index_of(elements);
  Element xi_inv = group.inverse(xi);
  RelatedCheck out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (idx.contains(group.multiply(elements[i], xi)) || idx.contains(group.multiply(elements[i], xi_inv))) continue;
    out.related = false;
    out.orphans.push_back(i);
  }
  return out;
}

Revision revise(const Group& group, std::span<const Element> elements, const Element& xi) {
  auto check = is_xi_related(group, elements, xi);
  if (!check.related) {
    throw PreconditionError("set is not xi-related: " + std::to_string(check.orphans.size()) + " orphan(s)");
  }
  const std::size_t n = elements.size();
  Index idx = index_of(elements);
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> succ(n, none);
  std::vector<bool> has_pred(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto it = idx.find(group.multiply(elements[i], xi)); it != idx.end()) {
      succ[i] = it->second;
      has_pred[it->second] = true;
    }
  }
  Revision rev;
  std::vector<bool> seen(n, false);
  auto walk = [&](std::size_t start) {
    std::size_t v = start;
    while (v != none && !seen[v]) {
      seen[v] = true;
      std::size_t w = succ[v];
      if (w == none || seen[w]) break;
      seen[w] = true;
      rev.pairs.emplace_back(v, w);
      v = succ[w];
    }
  };
  // orbit paths from their first element, then any cycles
  for (std::size_t i = 0; i < n; ++i) if (!has_pred[i]) walk(i);
  for (std::size_t i = 0; i < n; ++i) if (!seen[i]) walk(i);
  if (3 * rev.covered() < 2 * n) {
    throw InternalError("revision covers " + std::to_string(rev.covered()) + " of " + std::to_string(n));
  }
  return rev;
}

std::vector<Element> revised_elements(std::span<const Element> elements, const Revision& revision) {
  std::vector<Element> out;
  for (auto [i, j] : revision.pairs) {
    out.push_back(elements[i]);
    out.push_back(elements[j]);
  }
  return out;
}

Word aperiodic_word(std::size_t length, int rank) {
  std::vector<Letter> order;
  for (Letter l = 1; l <= rank; ++l) order.push_back(l);
  for (Letter l = 1; l <= rank; ++l) order.push_back(-l);
  std::vector<Letter> w;
  std::vector<std::size_t> choice;
  auto square_suffix = [&] {
    const std::size_t n = w.size();
    for (std::size_t p = 1; 2 * p <= n; ++p) {
      if (std::equal(w.end() - static_cast<std::ptrdiff_t>(p), w.end(), w.end() - static_cast<std::ptrdiff_t>(2 * p))) return true;
    }
    return false;
  };
  choice.push_back(0);
  while (w.size() < length) {
    if (choice.back() == order.size()) {
      choice.pop_back();
      if (w.empty()) throw InternalError("no square-free word of that length");
      w.pop_back();
      ++choice.back();
      continue;
    }
    Letter l = order[choice.back()];
    if (!w.empty() && w.back() == -l) {
      ++choice.back();
      continue;
    }
    w.push_back(l);
    if (square_suffix()) {
      w.pop_back();
      ++choice.back();
      continue;
    }
    choice.push_back(0);
  }
  return Word::reduce(w, Alphabet(rank));
}

std::vector<Element> sample_related_set(const Group& group, const Element& xi, const SamplerConfig& config,
                                        std::mt19937_64& rng) {
  require_nontrivial(group, xi);
  if (config.max_size < 2 || config.max_chain_length < 2 || config.max_chains < 1) {
    throw ConfigError("sampler needs max_size >= 2, max_chain_length >= 2, max_chains >= 1");
  }
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  while (true) {
    std::vector<Element> set;
    Index seen;
    std::size_t chains = uniform(1, config.max_chains);
    for (std::size_t c = 0; c < chains; ++c) {
      Element x = group.random_walk(rng, uniform(0, config.spread));
      std::size_t len = uniform(2, config.max_chain_length);
      std::vector<Element> fresh;
      for (std::size_t j = 0; j < len; ++j, x = group.multiply(x, xi)) {
        if (!seen.contains(x) && std::find(fresh.begin(), fresh.end(), x) == fresh.end()) fresh.push_back(x);
      }
      if (set.size() + fresh.size() > config.max_size) break;
      for (auto& e : fresh) {
        seen.emplace(e, set.size());
        set.push_back(std::move(e));
      }
    }
    if (set.size() < 2) continue;
    if (config.revised) set = revised_elements(set, revise(group, set, xi));
    if (set.size() >= 2) return set;
  }
}

ExperimentReport ts_lambda_experiment(const Group& group, const Element& xi, Rational lambda,
                                      const ExperimentConfig& config) {
  require_nontrivial(group, xi);
  ExperimentReport report{group.descriptor(), group.format_element(xi), lambda, config, {}, 0.0, {}, {}};
  report.samples.resize(config.samples);
  parallel_for(config.samples, config.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(config.seed + i);
    SampleResult r;
    r.set = sample_related_set(group, xi, config.sampler, rng);
    auto d = distance_matrix(group, r.set);
    const auto size = static_cast<std::int64_t>(r.set.size());
    if (r.set.size() <= config.exact_cap) {
      r.L = tsp_exact(d, config.exact_cap).length;
    } else {
      r.L = tsp_heuristic(d, config.seed + i).length;
      r.L_exact = false;
    }
    r.violation = r.L * lambda.den < lambda.num * size;
    if (config.with_lprime && r.set.size() <= config.exact_cap) {
      r.Lprime = l_prime(d, config.exact_cap);
      r.lprime_violation = *r.Lprime * lambda.den <= lambda.num * size;
    }
    report.samples[i] = std::move(r);
  });
  report.min_ratio = report.samples.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    report.min_ratio = std::min(report.min_ratio, report.samples[i].ratio());
    if (report.samples[i].violation) report.violations.push_back(i);
    if (report.samples[i].lprime_violation) report.lprime_violations.push_back(i);
  }
  return report;
}

std::vector<Element> box(const Group& group, const std::vector<std::int64_t>& sides) {
  if (group.factors().size() != 1 || group.factors()[0].kind != FactorKind::Abelian ||
      static_cast<std::size_t>(group.factors()[0].param) != sides.size()) {
    throw PreconditionError("box needs an abelian group whose rank matches the number of sides");
  }
  for (auto s : sides) if (s < 1) throw PreconditionError("box sides must be positive");
  std::vector<Element> out;
  std::vector<std::int64_t> p(sides.size(), 0);
  while (true) {
    Element e = group.identity();
    e.parts[0].coords = p;
    out.push_back(e);
    std::size_t k = 0;
    while (k < p.size() && ++p[k] == sides[k]) p[k++] = 0;
    if (k == p.size()) break;
  }
  return out;
}

std::vector<Element> box_related_set(const Group& group, const std::vector<std::int64_t>& sides, const Element& xi) {
  require_nontrivial(group, xi);
  auto b = box(group, sides);
  Index idx = index_of(b);
  std::vector<Element> out = b;
  for (const auto& x : b) {
    Element y = group.multiply(x, xi);
    if (!idx.contains(y)) {
      idx.emplace(y, out.size());
      out.push_back(y);
    }
  }
  return out;
}

ExperimentReport box_experiment(const Group& group, const Element& xi, Rational lambda,
                                const std::vector<std::int64_t>& side_lengths, std::size_t exact_cap, std::uint64_t seed) {
  ExperimentReport report{group.descriptor(), group.format_element(xi), lambda, {}, {}, 0.0, {}, {}};
  report.config.samples = side_lengths.size();
  report.config.seed = seed;
  report.config.exact_cap = exact_cap;
  report.min_ratio = side_lengths.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  const auto rank = static_cast<std::size_t>(group.factors()[0].param);
  for (std::size_t i = 0; i < side_lengths.size(); ++i) {
    SampleResult r;
    r.set = box_related_set(group, std::vector<std::int64_t>(rank, side_lengths[i]), xi);
    auto d = distance_matrix(group, r.set);
    if (r.set.size() <= exact_cap) {
      r.L = tsp_exact(d, exact_cap).length;
    } else {
      r.L = tsp_heuristic(d, seed + i).length;
      r.L_exact = false;
    }
    r.violation = r.L * lambda.den < lambda.num * static_cast<std::int64_t>(r.set.size());
    report.min_ratio = std::min(report.min_ratio, r.ratio());
    if (r.violation) report.violations.push_back(i);
    report.samples.push_back(std::move(r));
  }
  return report;
}

std::vector<std::size_t> xi_boundary(const Group& group, std::span<const Element> f, const Element& xi) {
  Index idx = index_of(f);
  Element xi_inv = group.inverse(xi);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!idx.contains(group.multiply(f[i], xi)) && !idx.contains(group.multiply(f[i], xi_inv))) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> k_boundary(const Group& group, std::span<const Element> f, std::span<const Element> k) {
  Index idx = index_of(f);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (const auto& g : k) {
      if (!idx.contains(group.multiply(f[i], g))) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

FolnerReport folner_traversal_demo(const Group& group, std::span<const Element> f, const Element& xi) {
  if (f.empty()) throw PreconditionError("F is empty");
  require_nontrivial(group, xi);
  Index idx = index_of(f);
  SpanningTree tree;
  std::vector<bool> reached(f.size(), false);
  std::vector<std::size_t> queue{0};
  reached[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t v = queue[head];
    for (const auto& s : group.generators()) {
      auto it = idx.find(group.multiply(f[v], s));
      if (it == idx.end() || reached[it->second]) continue;
      reached[it->second] = true;
      tree.edges.emplace_back(v, it->second);
      tree.weight += 1;
      queue.push_back(it->second);
    }
  }
  if (queue.size() != f.size()) throw PreconditionError("F is not connected in the Cayley graph");

  FolnerReport r;
  r.f_size = f.size();
  r.boundary = xi_boundary(group, f, xi);
  r.degenerate = r.boundary.size() == f.size();
  auto walk = doubled_tree_walk(tree, f.size());
  r.traversal = realize_walk(group, f, walk);
  r.traversal_valid = is_closed_path(group, r.traversal);
  std::vector<Element> interior;
  std::vector<bool> on_boundary(f.size(), false);
  for (auto i : r.boundary) on_boundary[i] = true;
  for (std::size_t i = 0; i < f.size(); ++i) if (!on_boundary[i]) interior.push_back(f[i]);
  r.visits_interior = visits_all(r.traversal, interior);
  r.interior_tour_bound = static_cast<std::int64_t>(r.traversal.length());
  const auto fs = static_cast<std::int64_t>(f.size());
  r.bound_by_2f = r.interior_tour_bound <= 2 * fs;
  r.bound_by_interior = 4 * fs <= 5 * static_cast<std::int64_t>(interior.size());
  return r;
}

}  // namespace tsg
