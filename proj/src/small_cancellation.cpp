#include "tsg/small_cancellation.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tsg/errors.hpp"

namespace tsg {

SymmetrizedSet::SymmetrizedSet(std::vector<Word> words, bool cyclic_closure) : cyclic_(cyclic_closure) {
  if (words.empty()) throw MalformedInput("symmetrized set needs at least one word");
  rank_ = words.front().rank();
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  std::vector<Word> closed;
  for (const auto& w : words) {
    if (w.empty()) throw MalformedInput("symmetrized set contains the empty word");
    if (cyclic_ && !w.cyclically_reduced()) {
      throw MalformedInput("cyclic closure needs cyclically reduced words: " + format_word(w));
    }
    closed.push_back(w);
    closed.push_back(w.inverse());
  }
  if (!cyclic_) {
    // Without rotations the inverse of one word may coincide with another input word.
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
  }
  sources_ = std::move(words);
  for (const auto& w : closed) {
    bases_.push_back(w.letters());
    std::size_t shifts = cyclic_ ? w.length() : 1;
    for (std::size_t s = 0; s < shifts; ++s) elements_.push_back({bases_.size() - 1, s});
  }
}

Word SymmetrizedSet::element(std::size_t e) const { return prefix(e, element_length(e)); }

Word SymmetrizedSet::prefix(std::size_t e, std::size_t length) const {
  std::vector<Letter> out;
  out.reserve(length);
  for (std::size_t k = 0; k < length; ++k) out.push_back(letter(e, k));
  return Word::reduce(out, Alphabet(rank_));
}

std::size_t SymmetrizedSet::raw_lcp(std::size_t e1, std::size_t e2) const {
  std::size_t cap = std::min(element_length(e1), element_length(e2));
  std::size_t l = 0;
  while (l < cap && letter(e1, l) == letter(e2, l)) ++l;
  return l;
}

bool SymmetrizedSet::same_word(std::size_t e1, std::size_t e2) const {
  return element_length(e1) == element_length(e2) && raw_lcp(e1, e2) == element_length(e1);
}

namespace {

struct SortedView {
  std::vector<std::size_t> order;
  std::vector<std::size_t> adjacent_lcp;  // adjacent_lcp[i] = raw lcp(order[i], order[i+1])
};

SortedView sort_elements(const SymmetrizedSet& set) {
  SortedView v;
  v.order.resize(set.size());
  std::iota(v.order.begin(), v.order.end(), 0);
  std::sort(v.order.begin(), v.order.end(), [&](std::size_t a, std::size_t b) {
    std::size_t l = set.raw_lcp(a, b);
    std::size_t la = set.element_length(a), lb = set.element_length(b);
    if (l == la || l == lb) {
      if (la != lb) return la < lb;
      return a < b;
    }
    return set.letter(a, l) < set.letter(b, l);
  });
  for (std::size_t i = 0; i + 1 < v.order.size(); ++i) {
    v.adjacent_lcp.push_back(set.raw_lcp(v.order[i], v.order[i + 1]));
  }
  return v;
}

// The pair value of (a, b) given their raw common prefix length.
std::size_t capped(const SymmetrizedSet& set, std::size_t a, std::size_t b, std::size_t raw) {
  std::size_t la = set.element_length(a);
  if (raw == la && la == set.element_length(b)) return la - 1;
  return raw;
}

}  // namespace

std::vector<Piece> pieces(const SymmetrizedSet& set) {
  SortedView v = sort_elements(set);
  std::map<Word, std::vector<std::pair<std::size_t, std::size_t>>> found;
  const std::size_t n = v.order.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t running = static_cast<std::size_t>(-1);
    for (std::size_t j = i + 1; j < n; ++j) {
      running = std::min(running, v.adjacent_lcp[j - 1]);
      if (running == 0) break;
      std::size_t a = v.order[i], b = v.order[j];
      std::size_t len = capped(set, a, b, running);
      if (len == 0) continue;
      found[set.prefix(a, len)].emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::vector<Piece> out;
  for (auto& [word, locs] : found) {
    std::sort(locs.begin(), locs.end());
    out.push_back({word, std::move(locs)});
  }
  return out;
}

std::vector<std::size_t> longest_pieces(const SymmetrizedSet& set) {
  SortedView v = sort_elements(set);
  const std::size_t n = v.order.size();
  std::vector<std::size_t> best(set.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = v.order[i];
    std::size_t& b_a = best[a];
    // Walk left then right; the running minimum bounds every further pair.
    std::size_t running = static_cast<std::size_t>(-1);
    for (std::size_t j = i; j-- > 0;) {
      running = std::min(running, v.adjacent_lcp[j]);
      if (running <= b_a) break;
      b_a = std::max(b_a, capped(set, a, v.order[j], running));
    }
    running = static_cast<std::size_t>(-1);
    for (std::size_t j = i + 1; j < n; ++j) {
      running = std::min(running, v.adjacent_lcp[j - 1]);
      if (running <= b_a) break;
      b_a = std::max(b_a, capped(set, a, v.order[j], running));
    }
  }
  return best;
}

SmallCancellationCheck satisfies_small_cancellation(const SymmetrizedSet& set, long num, long den) {
  if (num <= 0 || den <= 0 || num >= den) throw PreconditionError("lambda must lie in (0, 1)");
  SmallCancellationCheck out;
  auto best = longest_pieces(set);
  for (std::size_t e = 0; e < set.size(); ++e) {
    out.max_piece = std::max(out.max_piece, best[e]);
    std::size_t len = set.element_length(e);
    if (out.holds && static_cast<long>(best[e]) * den >= num * static_cast<long>(len)) {
      out.holds = false;
      out.violation = SmallCancellationCheck::Violation{set.prefix(e, best[e]), e, len};
    }
  }
  return out;
}

}  // namespace tsg
