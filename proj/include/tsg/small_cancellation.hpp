#pragma once

// Pieces and the metric small cancellation condition C'(lambda).
//
// Elements of a symmetrized set are *occurrences*: each input word and its
// inverse, and with cyclic closure every cyclic shift of those, indexed by
// (source, shift) even when two shifts spell the same word. A piece is a
// maximal common prefix of two distinct elements. When two distinct occurrences
// spell the same word (proper powers), their common prefix is capped one letter
// short of the whole element.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tsg/word.hpp"

namespace tsg {

class SymmetrizedSet {
 public:
  /// Throws MalformedInput for an empty set, an empty word, or (with cyclic
  /// closure) a word that is not cyclically reduced.
  SymmetrizedSet(std::vector<Word> words, bool cyclic_closure);

  std::size_t size() const { return elements_.size(); }
  bool cyclic_closure() const { return cyclic_; }
  std::size_t element_length(std::size_t e) const { return bases_[elements_[e].base].size(); }
  Letter letter(std::size_t e, std::size_t k) const {
    const auto& el = elements_[e];
    const auto& b = bases_[el.base];
    return b[(el.shift + k) % b.size()];
  }
  /// Materializes element `e`.
  Word element(std::size_t e) const;
  /// Prefix of element `e` with `length` letters.
  Word prefix(std::size_t e, std::size_t length) const;

  /// Longest common prefix of two elements, without the equal-word cap.
  std::size_t raw_lcp(std::size_t e1, std::size_t e2) const;
  /// Whether two elements spell the same word.
  bool same_word(std::size_t e1, std::size_t e2) const;

  const std::vector<Word>& sources() const { return sources_; }

 private:
  struct Element {
    std::size_t base;
    std::size_t shift;
  };
  std::vector<Word> sources_;
  std::vector<std::vector<Letter>> bases_;
  std::vector<Element> elements_;
  int rank_;
  bool cyclic_;
};

struct Piece {
  Word word;
  /// Unordered pairs (e1 < e2) of element indices sharing `word` as maximal common prefix.
  std::vector<std::pair<std::size_t, std::size_t>> locations;
};

/// All distinct nonempty pieces, sorted by word.
std::vector<Piece> pieces(const SymmetrizedSet& set);

/// Longest piece that is a prefix of each element.
std::vector<std::size_t> longest_pieces(const SymmetrizedSet& set);

struct SmallCancellationCheck {
  bool holds = true;
  /// First violation: a piece of `element` that is too long.
  struct Violation {
    Word piece;
    std::size_t element = 0;
    std::size_t element_length = 0;
  };
  std::optional<Violation> violation;
  /// Longest piece over the whole set.
  std::size_t max_piece = 0;

  explicit operator bool() const { return holds; }
};

/// Every piece p of every element w satisfies |p| * den < num * |w| (exact).
/// Requires 0 < num < den.
SmallCancellationCheck satisfies_small_cancellation(const SymmetrizedSet& set, long num, long den);

}  // namespace tsg
