#pragma once

// Free group words over a finite symmetric alphabet.
//
// A letter is a nonzero integer: +i stands for the generator a_i and -i for
// its inverse. Words are kept freely reduced at all times.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsg {

using Letter = std::int32_t;

constexpr Letter inverse(Letter l) { return -l; }

class Alphabet {
 public:
  explicit Alphabet(int rank);

  int rank() const { return rank_; }
  bool contains(Letter l) const { return l != 0 && l >= -rank_ && l <= rank_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  int rank_;
};

class Word {
 public:
  /// The identity of the free group of the given rank.
  explicit Word(int rank = 2) : alphabet_(rank) {}

  /// Freely reduces `letters`. Throws MalformedInput when a letter is outside the alphabet.
  static Word reduce(std::span<const Letter> letters, Alphabet alphabet);
  static Word reduce(std::initializer_list<Letter> letters, Alphabet alphabet) {
    return reduce(std::span<const Letter>(letters.begin(), letters.size()), alphabet);
  }

  /// Single generator a_i (i > 0) or its inverse (i < 0).
  static Word letter(Letter l, Alphabet alphabet);

  const std::vector<Letter>& letters() const { return letters_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int rank() const { return alphabet_.rank(); }

  /// Cayley length with respect to the standard generating set.
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const;
  Word power(std::int64_t exponent) const;

  /// Letters [start, start + count) as a word; the slice of a reduced word is reduced.
  Word subword(std::size_t start, std::size_t count) const;

  /// True when the first and last letters are not mutually inverse.
  bool cyclically_reduced() const;

  friend Word operator*(const Word& u, const Word& v);
  Word& operator*=(const Word& v);

  friend bool operator==(const Word& u, const Word& v) {
    return u.alphabet_ == v.alphabet_ && u.letters_ == v.letters_;
  }
  friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
    if (auto c = u.rank() <=> v.rank(); c != 0) return c;
    return u.letters_ <=> v.letters_;
  }

 private:
  Word(std::vector<Letter> reduced, Alphabet alphabet)
      : alphabet_(alphabet), letters_(std::move(reduced)) {}

  Alphabet alphabet_;
  std::vector<Letter> letters_;
};

// Text format: whitespace separated tokens. `a`..`z` are generators 1..26,
// `A`..`Z` their inverses, `gN` / `GN` generator N and its inverse. A token
// made of several letters (`abaB`) is read letter by letter.

/// Parses letters without reducing them.
std::vector<Letter> parse_letters(std::string_view text);

/// Parses and reduces. Letters beyond `rank` are rejected.
Word parse_word(std::string_view text, int rank = 2);

std::string format_letter(Letter l);
std::string format_letters(std::span<const Letter> letters);
std::string format_word(const Word& w);

/// Smallest rank that contains every letter (at least 1).
int required_rank(std::span<const Letter> letters);

}  // namespace tsg

template <>
struct std::hash<tsg::Word> {
  std::size_t operator()(const tsg::Word& w) const noexcept;
};
