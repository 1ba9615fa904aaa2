#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"

namespace tsg {

Lemma5Params Lemma5Params::desk() {
  Lemma5Params p;
  p.power_bound = 50;
  p.max_x_length = 96;
  p.affix = 200;
  p.xi_params = Lemma4Params::desk();
  return p;
}

Word random_reduced_word(std::mt19937_64& rng, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(1, std::max<std::size_t>(1, max_length));
  const std::size_t n = len(rng);
  static constexpr Letter kLetters[] = {1, -1, 2, -2};
  std::vector<Letter> out;
  while (out.size() < n) {
    Letter l = kLetters[rng() % 4];
    if (!out.empty() && l == -out.back()) continue;
    out.push_back(l);
  }
  return Word::reduce(out, Alphabet(2));
}

namespace {

struct Tracked {
  Letter letter;
  std::uint32_t block;
  bool from_xi;
  std::uint32_t offset;
};

void check_inputs(const Word& xi, const std::vector<Word>& xs, const std::vector<int>& eps, const Lemma5Params& p) {
  if (xi.empty()) throw PreconditionError("xi is trivial");
  if (xs.empty() || xs.size() != eps.size()) throw PreconditionError("need one sign per x and at least one x");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (eps[i] != 1 && eps[i] != -1) throw PreconditionError("sign " + std::to_string(i) + " is not +1 or -1");
    if (xs[i].rank() != xi.rank()) throw PreconditionError("x_" + std::to_string(i + 1) + " has the wrong rank");
    if (xs[i].empty()) throw PreconditionError("x_" + std::to_string(i + 1) + " is trivial");
    if (xs[i].length() > p.max_x_length) {
      throw PreconditionError("x_" + std::to_string(i + 1) + " has length " + std::to_string(xs[i].length()) +
                              " > " + std::to_string(p.max_x_length));
    }
  }
  auto ap = is_k_aperiodic(xs, p.x_aperiodicity);
  if (!ap.aperiodic) {
    const auto& w = *ap.witness;
    throw PreconditionError("x sequence is not " + std::to_string(p.x_aperiodicity) + "-aperiodic: block of " +
                            std::to_string(w.base.length) + " x's at position " + std::to_string(w.base.start + 1) +
                            " repeats " + std::to_string(w.exponent) + " times");
  }
}

}  // namespace

Lemma5Analysis verify_lemma5(const Word& xi, const std::vector<Word>& xs, const std::vector<int>& eps,
                             const Lemma5Params& params) {
  check_inputs(xi, xs, eps, params);
  std::optional<VerificationReport> xi_report;
  if (params.check_xi) {
    xi_report = verify_lemma4(xi, params.xi_params);
    std::string failed;
    for (const auto& c : xi_report->checks) {
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    if (!failed.empty()) throw PreconditionError("xi fails its conditions (" + failed + "); waive to run anyway");
  }
  const Word xi_inv = xi.inverse();
  std::vector<Tracked> stack;
  auto push = [&](Letter l, std::uint32_t block, bool from_xi, std::uint32_t offset) {
    if (!stack.empty() && stack.back().letter == -l) {
      stack.pop_back();
    } else {
      stack.push_back({l, block, from_xi, offset});
    }
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Word& x = eps[i] > 0 ? xi : xi_inv;
    for (std::size_t j = 0; j < x.length(); ++j) push(x[j], static_cast<std::uint32_t>(i), true, static_cast<std::uint32_t>(j));
    for (std::size_t j = 0; j < xs[i].length(); ++j) push(xs[i][j], static_cast<std::uint32_t>(i), false, 0);
  }

  Lemma5Analysis out;
  out.reduced_length = stack.size();
  out.blocks.resize(xs.size());
  std::vector<std::size_t> last_pos(xs.size(), 0), last_off(xs.size(), 0);
  std::vector<bool> seen(xs.size(), false);
  std::vector<Letter> letters;
  letters.reserve(stack.size());
  for (std::size_t pos = 0; pos < stack.size(); ++pos) {
    const auto& t = stack[pos];
    letters.push_back(t.letter);
    auto& b = out.blocks[t.block];
    if (!t.from_xi) {
      ++b.u_length;
      continue;
    }
    if (!seen[t.block]) {
      seen[t.block] = true;
      b.xi_begin = pos;
    } else if (pos != last_pos[t.block] + 1 || t.offset != last_off[t.block] + 1) {
      b.contiguous = false;
    }
    last_pos[t.block] = pos;
    last_off[t.block] = t.offset;
    ++b.xi_length;
  }
  out.structure_ok = std::all_of(out.blocks.begin(), out.blocks.end(), [&](const BlockSpan& b) {
    return b.contiguous && b.xi_length + params.affix >= xi.length() && b.u_length <= params.affix;
  });

  auto scan = max_power_order(letters);
  out.order = scan.order;
  out.witness = scan.witness;
  out.holds = scan.order < params.power_bound;
  if (!out.holds && scan.witness) {
    const auto& w = *scan.witness;
    const std::size_t run_begin = w.base.start, run_end = w.base.start + w.exponent * w.base.length;
    out.witness_blocks = std::pair{static_cast<std::size_t>(stack[run_begin].block),
                                   static_cast<std::size_t>(stack[run_end - 1].block)};
    out.violation_case = Lemma5Case::Long;
    if (5 * w.base.length <= xi.length()) {
      for (const auto& b : out.blocks) {
        std::size_t lo = std::max(run_begin, b.xi_begin), hi = std::min(run_end, b.xi_begin + b.xi_length);
        if (b.xi_length == 0 || hi <= lo || hi - lo < 4 * w.base.length) continue;
        std::vector<Letter> inside(letters.begin() + static_cast<std::ptrdiff_t>(lo),
                                   letters.begin() + static_cast<std::ptrdiff_t>(hi));
        if (max_power_order(inside).order < 4) throw InternalError("fourth power expected inside a xi block");
        out.violation_case = Lemma5Case::Short;
        break;
      }
    }
  }
  out.xi_report = std::move(xi_report);
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Word inject_fault(const Word& xi, BurnsideFault fault, const Lemma4Params& p4, const Lemma5Params& p5) {
  const std::size_t n = xi.length();
  switch (fault) {
    case BurnsideFault::None:
      return xi;
    case BurnsideFault::Affix:
      return xi.subword(0, n - p4.affix) * xi.subword(0, p4.affix);
    case BurnsideFault::Power: {
      Word stretch = parse_word("a b").power(static_cast<std::int64_t>(p5.power_bound));
      std::size_t mid = (n - stretch.length()) / 2;
      return xi.subword(0, mid) * stretch * xi.subword(mid + stretch.length(), n - mid - stretch.length());
    }
  }
  return xi;
}

std::string failing_checks(const VerificationReport& rep) {
  std::string out;
  for (const auto& c : rep.checks) {
    if (c.pass) continue;
    if (!out.empty()) out += "; ";
    out += c.name + " (" + c.detail + ")";
  }
  return out;
}

}  // namespace

BurnsideReport burnside_pipeline(const BurnsideConfig& config) {
  if (config.samples == 0 || config.k_max == 0) throw ConfigError("samples and k_max must be positive");
  const Lemma4Params p4 = config.desk ? Lemma4Params::desk() : Lemma4Params::full();
  Lemma5Params p5 = config.desk ? Lemma5Params::desk() : Lemma5Params::full();
  p5.check_xi = false;
  BurnsideReport rep;
  auto finish = [&](BurnsideStage stage) {
    if (!stage.pass && !rep.failed_stage) rep.failed_stage = stage.name;
    rep.stages.push_back(std::move(stage));
  };

  auto t0 = std::chrono::steady_clock::now();
  BurnsideStage s4{"lemma4", false, "", 0};
  Word xi;
  try {
    rep.lemma4 = construct_xi_lemma4(config.seed, p4);
    xi = inject_fault(rep.lemma4->xi, config.fault, p4, p5);
    if (config.fault != BurnsideFault::None) rep.lemma4->report = verify_lemma4(xi, p4);
    s4.pass = rep.lemma4->report.pass();
    s4.detail = s4.pass ? "|xi| = " + std::to_string(xi.length()) + ", |D| = " +
                              std::to_string(rep.lemma4->d_positions.size()) + ", all conditions hold"
                        : "failed: " + failing_checks(rep.lemma4->report);
  } catch (const PreconditionError& e) {
    s4.detail = e.what();
  }
  s4.seconds = seconds_since(t0);
  finish(s4);
  if (xi.empty()) return rep;
  rep.xi_used = xi;

  t0 = std::chrono::steady_clock::now();
  BurnsideStage ss{"sampling", true, "", 0};
  std::vector<std::vector<Word>> xs(config.samples);
  std::vector<std::vector<int>> eps(config.samples);
  std::size_t max_len = 0, max_k = 0;
  for (std::size_t s = 0; s < config.samples && ss.pass; ++s) {
    std::mt19937_64 rng(config.seed * 0xD1B54A32D192ED03ULL + s + 1);
    const std::size_t k = 1 + rng() % config.k_max;
    for (std::size_t tries = 0; xs[s].size() < k; ++tries) {
      if (tries > 1000 * k) {
        ss.pass = false;
        ss.detail = "sample " + std::to_string(s) + ": could not extend an aperiodic sequence";
        break;
      }
      xs[s].push_back(random_reduced_word(rng, p5.max_x_length));
      if (!is_k_aperiodic(xs[s], p5.x_aperiodicity).aperiodic) xs[s].pop_back();
    }
    for (std::size_t i = 0; i < xs[s].size(); ++i) {
      eps[s].push_back(rng() & 1 ? 1 : -1);
      max_len = std::max(max_len, xs[s][i].length());
    }
    max_k = std::max(max_k, k);
  }
  if (ss.pass) {
    ss.detail = std::to_string(config.samples) + " sequences, " + std::to_string(p5.x_aperiodicity) +
                "-aperiodic, k <= " + std::to_string(max_k) + ", |x_i| <= " + std::to_string(max_len) +
                " (reduced free words stand in for shortest words)";
  }
  ss.seconds = seconds_since(t0);
  finish(ss);
  if (!ss.pass) return rep;

  t0 = std::chrono::steady_clock::now();
  rep.samples.resize(config.samples);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  auto work = [&] {
    for (std::size_t s; (s = next.fetch_add(1)) < config.samples;) {
      try {
        auto a = verify_lemma5(xi, xs[s], eps[s], p5);
        rep.samples[s] = {xs[s].size(), a.order, a.reduced_length, a.holds, a.violation_case, xs[s], eps[s]};
      } catch (...) {
        std::lock_guard g(lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(1, config.jobs); ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  BurnsideStage s5{"lemma5", true, "", 0};
  std::size_t worst = 0, bad = 0;
  std::optional<std::size_t> first_bad;
  for (std::size_t s = 0; s < config.samples; ++s) {
    worst = std::max(worst, rep.samples[s].order);
    if (!rep.samples[s].holds) {
      ++bad;
      if (!first_bad) first_bad = s;
    }
  }
  s5.pass = bad == 0;
  std::ostringstream d5;
  d5 << bad << " of " << config.samples << " products have a power of order >= " << p5.power_bound
     << "; largest order " << worst;
  if (first_bad) {
    d5 << "; first at sample " << *first_bad << " ("
       << (rep.samples[*first_bad].violation_case == Lemma5Case::Short ? "short period inside one xi block"
                                                                       : "long period across blocks")
       << ")";
  }
  s5.detail = d5.str();
  s5.seconds = seconds_since(t0);
  finish(s5);

  const std::int64_t r = 192, divisor = 96, threshold = 2;
  BurnsideStage sa{"arithmetic", r == divisor * threshold, "", 0};
  sa.detail = "P10'(r) gives TS(r/96); r = 192 gives TS(" + std::to_string(r / divisor) + "), and TS(2) is the threshold";
  if (config.desk) sa.detail += "; desk-scale samples use |x_i| <= 96 and exercise the word combinatorics only";
  finish(sa);

  rep.chain = {
      "xi: 3-aperiodic, |xi| >= " + std::to_string(p4.min_length - 1) + ", C'(1/5), affixes of length " +
          std::to_string(p4.affix) + " C'(1/3)",
      "10-aperiodic x_1..x_k in B_192 \\ {1} => reduced xi^e1 x1 ... xi^ek xk is 500-aperiodic (checked on samples)",
      "500-aperiodic words are pairwise distinct in B(m,n) => |xi^e1 x1 ... xi^ek xk| > 192, i.e. P10'(192)",
      "P(r) => TS(r/12) and P10'(r) => TS(r/96); r = 192 => TS(2)",
      "TS(2) => non-amenable",
  };
  rep.external_assumptions = {
      "EXTERNAL (not verified): 500-aperiodic words are pairwise distinct in B(m,n) for m >= 2 and odd n large "
      "enough ([Ol3] Thm 19.1)",
  };
  return rep;
}

}  // namespace tsg
