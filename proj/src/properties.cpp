#include "tsg/properties.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "tsg/errors.hpp"
#include "tsg/repetition.hpp"

namespace tsg {

namespace {

bool aperiodic_prefix(const PropertySpec& spec, const std::vector<std::size_t>& seq) {
  if (spec.family == PropertyFamily::P) return true;
  return is_k_aperiodic(seq, spec.n).aperiodic;
}

struct SearchContext {
  const Group& group;
  const PropertySpec& spec;
  std::vector<Element> ball;
  Element xi_inv;
};

// Lexicographically least x-index tuple for one sign pattern, or nothing.
std::optional<std::vector<std::size_t>> search_pattern(const SearchContext& ctx, const std::vector<int>& signs,
                                                       std::atomic<std::uint64_t>& evaluated) {
  const std::size_t k = signs.size();
  std::vector<std::size_t> idx;
  std::vector<Element> prefix{ctx.group.identity()};
  std::vector<std::size_t> next{0};
  std::uint64_t local = 0;
  while (!next.empty()) {
    std::size_t depth = idx.size();
    if (next.back() == ctx.ball.size()) {
      next.pop_back();
      if (!idx.empty()) {
        idx.pop_back();
        prefix.pop_back();
      }
      continue;
    }
    std::size_t choice = next.back()++;
    idx.push_back(choice);
    if (!aperiodic_prefix(ctx.spec, idx)) {
      idx.pop_back();
      continue;
    }
    const Element& step = signs[depth] > 0 ? ctx.spec.xi : ctx.xi_inv;
    Element p = ctx.group.multiply(ctx.group.multiply(prefix.back(), step), ctx.ball[choice]);
    if (depth + 1 == k) {
      ++local;
      if (static_cast<std::int64_t>(ctx.group.length(p)) <= ctx.spec.r) {
        evaluated += local;
        return idx;
      }
      idx.pop_back();
      continue;
    }
    prefix.push_back(std::move(p));
    next.push_back(0);
  }
  evaluated += local;
  return std::nullopt;
}

PropertyWitness make_witness(const SearchContext& ctx, const std::vector<int>& signs, const std::vector<std::size_t>& idx) {
  PropertyWitness w;
  w.signs = signs;
  Element p = ctx.group.identity();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    w.xs.push_back(ctx.ball[idx[i]]);
    p = ctx.group.multiply(ctx.group.multiply(p, signs[i] > 0 ? ctx.spec.xi : ctx.xi_inv), ctx.ball[idx[i]]);
  }
  w.length = static_cast<std::int64_t>(ctx.group.length(p));
  return w;
}

template <class Fn>
void run_workers(std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, jobs);
  std::exception_ptr failure;
  std::mutex lock;
  auto guarded = [&] {
    try {
      fn();
    } catch (...) {
      std::lock_guard g(lock);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(guarded);
  guarded();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

PropertyVerdict test_property(const Group& group, const PropertySpec& spec, const SearchBudget& budget) {
  if (spec.r < 1) throw ConfigError("r must be positive");
  if (spec.family == PropertyFamily::PnPrime && spec.n < 1) throw ConfigError("n must be at least 1");
  if (budget.k_max < 1) throw ConfigError("k_max must be at least 1");
  SearchContext ctx{group, spec, {}, group.inverse(spec.xi)};
  try {
    for (auto& e : group.ball(group.identity(), static_cast<std::size_t>(spec.r)).elements) {
      if (!group.is_identity(e)) ctx.ball.push_back(e);
    }
  } catch (const ResourceLimit& e) {
    throw ResourceLimit(std::string(e.what()) + "; lower r");
  }
  PropertyVerdict verdict;
  std::atomic<std::uint64_t> evaluated{0};
  const double b = static_cast<double>(ctx.ball.size());
  for (std::size_t k = 1; k <= budget.k_max; ++k) {
    const double space = std::pow(2.0 * b, static_cast<double>(k));
    const std::size_t patterns = std::size_t{1} << k;
    auto signs_of = [&](std::size_t pattern) {
      std::vector<int> s(k);
      for (std::size_t i = 0; i < k; ++i) s[i] = (pattern >> (k - 1 - i)) & 1 ? -1 : 1;
      return s;
    };
    if (space <= static_cast<double>(budget.evaluations)) {
      verdict.regimes.push_back("exhaustive");
      std::vector<std::optional<std::vector<std::size_t>>> found(patterns);
      std::atomic<std::size_t> next{0};
      std::atomic<std::size_t> best{patterns};
      run_workers(budget.jobs, [&] {
        for (std::size_t pat; (pat = next.fetch_add(1)) < patterns;) {
          if (pat > best.load()) break;
          found[pat] = search_pattern(ctx, signs_of(pat), evaluated);
          if (found[pat]) {
            for (auto cur = best.load(); pat < cur && !best.compare_exchange_weak(cur, pat);) {
            }
          }
        }
      });
      if (best.load() < patterns) {
        verdict.counterexample = true;
        verdict.witness = make_witness(ctx, signs_of(best.load()), *found[best.load()]);
        break;
      }
    } else {
      verdict.regimes.push_back("sampled");
      const std::uint64_t samples = budget.evaluations;
      std::atomic<std::uint64_t> next{0};
      std::atomic<std::uint64_t> best{samples};
      std::mutex lock;
      std::map<std::uint64_t, std::pair<std::vector<int>, std::vector<std::size_t>>> hits;
      run_workers(budget.jobs, [&] {
        std::uniform_int_distribution<std::size_t> pick(0, ctx.ball.size() - 1);
        for (std::uint64_t i; (i = next.fetch_add(1)) < samples;) {
          if (i > best.load()) break;
          std::mt19937_64 rng(budget.seed * 0x9E3779B97F4A7C15ULL + (static_cast<std::uint64_t>(k) << 40) + i);
          std::vector<int> signs(k);
          std::vector<std::size_t> idx(k);
          for (std::size_t j = 0; j < k; ++j) {
            signs[j] = rng() & 1 ? -1 : 1;
            idx[j] = pick(rng);
          }
          if (!aperiodic_prefix(spec, idx)) continue;
          ++evaluated;
          Element p = group.identity();
          for (std::size_t j = 0; j < k; ++j) {
            p = group.multiply(group.multiply(p, signs[j] > 0 ? spec.xi : ctx.xi_inv), ctx.ball[idx[j]]);
          }
          if (static_cast<std::int64_t>(group.length(p)) > spec.r) continue;
          std::lock_guard g(lock);
          hits.emplace(i, std::pair{signs, idx});
          for (auto cur = best.load(); i < cur && !best.compare_exchange_weak(cur, i);) {
          }
        }
      });
      if (!hits.empty()) {
        auto& [signs, idx] = hits.begin()->second;
        verdict.counterexample = true;
        verdict.witness = make_witness(ctx, signs, idx);
        break;
      }
    }
  }
  verdict.evaluated = evaluated.load();
  return verdict;
}

bool replay_witness(const Group& group, const PropertySpec& spec, const PropertyWitness& witness) {
  if (witness.signs.size() != witness.xs.size() || witness.xs.empty()) return false;
  Element p = group.identity();
  Element xi_inv = group.inverse(spec.xi);
  std::vector<std::size_t> tokens;
  std::vector<Element> distinct;
  for (std::size_t i = 0; i < witness.xs.size(); ++i) {
    const Element& x = witness.xs[i];
    if (group.is_identity(x) || static_cast<std::int64_t>(group.length(x)) > spec.r) return false;
    if (witness.signs[i] != 1 && witness.signs[i] != -1) return false;
    auto it = std::find(distinct.begin(), distinct.end(), x);
    tokens.push_back(static_cast<std::size_t>(it - distinct.begin()));
    if (it == distinct.end()) distinct.push_back(x);
    p = group.multiply(group.multiply(p, witness.signs[i] > 0 ? spec.xi : xi_inv), x);
  }
  if (spec.family == PropertyFamily::PnPrime && !is_k_aperiodic(tokens, spec.n).aperiodic) return false;
  auto len = static_cast<std::int64_t>(group.length(p));
  return len == witness.length && len <= spec.r;
}

namespace {

Word power(const Word& w, std::size_t p) { return w.power(static_cast<std::int64_t>(p)); }

bool verify_rewrite(const std::vector<Word>& bases, std::size_t p, const std::vector<RewriteStep>& log, const Word& start,
                    std::size_t rank) {
  auto product = [&](const std::vector<Word>& f, std::size_t from, std::size_t to) {
    Word out(static_cast<int>(rank));
    for (std::size_t i = from; i < to; ++i) out *= power(f[i], p);
    return out;
  };
  std::vector<Word> cur = bases;
  if (product(cur, 0, cur.size()) != start) return false;
  for (const auto& step : log) {
    if (step.index + 1 >= cur.size() || cur[step.index] != step.x || cur[step.index + 1] != step.y) return false;
    Word before = product(cur, 0, cur.size());
    Word prefix = product(cur, 0, step.index);
    if (step.kind == RewriteStep::Cancel) {
      if (step.y != step.x.inverse()) return false;
      cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(step.index), cur.begin() + static_cast<std::ptrdiff_t>(step.index + 2));
      if (product(cur, 0, cur.size()) != before) return false;
    } else {
      std::swap(cur[step.index], cur[step.index + 1]);
      Word xp = power(step.x, p), yp = power(step.y, p);
      Word commutator = xp * yp * xp.inverse() * yp.inverse();
      if (before != prefix * commutator * prefix.inverse() * product(cur, 0, cur.size())) return false;
    }
  }
  return cur.empty();
}

}  // namespace

GnpCertificate gnp_counterexample(std::size_t n, std::size_t p, std::size_t m, std::size_t k, const Word& xi,
                                  std::uint64_t node_budget) {
  if (n < 2 || p < 1 || m < 1 || k < 1) throw ConfigError("gnp needs n >= 2, p >= 1, m >= 1, k >= 1");
  if (xi.rank() != static_cast<int>(n)) throw ConfigError("xi must be a word over the n generators");
  GnpCertificate cert;
  cert.n = n;
  cert.p = p;
  cert.m = m;
  cert.k = k;
  cert.xi = xi;
  const std::size_t len = 2 * k;
  std::vector<Letter> tokens;
  for (Letter g = 1; g <= static_cast<Letter>(n); ++g) {
    tokens.push_back(g);
    tokens.push_back(-g);
  }
  // balance[parity][generator]: occurrences of u minus occurrences of u^-1
  std::vector<std::vector<long>> balance(2, std::vector<long>(n + 1, 0));
  std::vector<Letter> seq;
  std::vector<std::size_t> next{0};
  auto feasible = [&](std::size_t pos) {
    for (std::size_t par = 0; par < 2; ++par) {
      std::size_t remaining = 0;
      for (std::size_t i = pos; i < len; ++i) remaining += i % 2 == par;
      long need = 0;
      for (auto c : balance[par]) need += std::labs(c);
      if (need > static_cast<long>(remaining) || (static_cast<long>(remaining) - need) % 2 != 0) return false;
    }
    return true;
  };
  bool done = false;
  while (!next.empty() && !done) {
    if (cert.nodes >= node_budget) break;
    if (next.back() == tokens.size()) {
      next.pop_back();
      if (!seq.empty()) {
        Letter t = seq.back();
        balance[(seq.size() - 1) % 2][static_cast<std::size_t>(std::abs(t))] -= t > 0 ? 1 : -1;
        seq.pop_back();
      }
      continue;
    }
    Letter t = tokens[next.back()++];
    ++cert.nodes;
    const std::size_t pos = seq.size();
    seq.push_back(t);
    balance[pos % 2][static_cast<std::size_t>(std::abs(t))] += t > 0 ? 1 : -1;
    bool ok = feasible(pos + 1) && is_k_aperiodic(seq, m).aperiodic;
    if (ok && seq.size() == len) {
      done = true;
      break;
    }
    if (ok) {
      next.push_back(0);
    } else {
      balance[pos % 2][static_cast<std::size_t>(std::abs(t))] -= t > 0 ? 1 : -1;
      seq.pop_back();
    }
  }
  if (!done) return cert;
  cert.found = true;

  Alphabet alpha(static_cast<int>(n));
  Word xi_inv = xi.inverse();
  std::vector<Word> bases;
  cert.product = Word(static_cast<int>(n));
  cert.rewritten = Word(static_cast<int>(n));
  for (std::size_t i = 0; i < len; ++i) {
    Word u = Word::letter(seq[i], alpha);
    cert.us.push_back(u);
    cert.xs.push_back(power(u, p));
    cert.product *= (i % 2 == 0 ? xi : xi_inv) * cert.xs.back();
    Word base = i % 2 == 0 ? xi * u * xi_inv : u;
    bases.push_back(base);
    cert.rewritten *= power(base, p);
  }
  cert.identity_holds = cert.product == cert.rewritten;
  cert.aperiodic = is_k_aperiodic(seq, m).aperiodic;
  cert.balanced = true;
  for (std::size_t par = 0; par < 2; ++par) {
    std::map<Letter, long> count;
    for (std::size_t i = par; i < len; i += 2) count[std::abs(seq[i])] += seq[i] > 0 ? 1 : -1;
    for (auto [g, c] : count) cert.balanced = cert.balanced && c == 0;
  }

  std::vector<Word> cur = bases;
  while (!cur.empty()) {
    bool cancelled = false;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i + 1] == cur[i].inverse()) {
        cert.log.push_back({RewriteStep::Cancel, i, cur[i], cur[i + 1]});
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i), cur.begin() + static_cast<std::ptrdiff_t>(i + 2));
        cancelled = true;
        break;
      }
    }
    if (cancelled) continue;
    std::size_t j = cur.size();
    for (std::size_t i = 1; i < cur.size() && j == cur.size(); ++i) {
      if (cur[i] == cur[0].inverse()) j = i;
    }
    if (j == cur.size()) break;  // unbalanced: leave the log incomplete
    for (; j > 1; --j) {
      cert.log.push_back({RewriteStep::Swap, j - 1, cur[j - 1], cur[j]});
      std::swap(cur[j - 1], cur[j]);
    }
  }
  cert.log_valid = cur.empty() && verify_rewrite(bases, p, cert.log, cert.rewritten, n);
  return cert;
}

}  // namespace tsg
