#include "tsg/word.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "tsg/errors.hpp"

namespace tsg {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 1) throw MalformedInput("alphabet rank must be at least 1");
}

Word Word::reduce(std::span<const Letter> letters, Alphabet alphabet) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (!alphabet.contains(l)) {
      throw MalformedInput("letter " + std::to_string(l) + " outside alphabet of rank " +
                           std::to_string(alphabet.rank()));
    }
    if (!out.empty() && out.back() == tsg::inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out), alphabet);
}

Word Word::letter(Letter l, Alphabet alphabet) {
  Letter one[] = {l};
  return reduce(one, alphabet);
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = tsg::inverse(l);
  return Word(std::move(out), alphabet_);
}

Word Word::power(std::int64_t exponent) const {
  Word base = exponent < 0 ? inverse() : *this;
  Word result(rank());
  for (std::int64_t i = 0; i < std::abs(exponent); ++i) result *= base;
  return result;
}

Word Word::subword(std::size_t start, std::size_t count) const {
  if (start + count > letters_.size()) throw OutOfRange("subword outside word");
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(start),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(start + count)),
              alphabet_);
}

bool Word::cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != tsg::inverse(letters_.back());
}

Word& Word::operator*=(const Word& v) {
  if (v.alphabet_ != alphabet_) throw MalformedInput("multiplying words of different rank");
  std::size_t cancel = 0;
  while (cancel < v.letters_.size() && cancel < letters_.size() &&
         letters_[letters_.size() - 1 - cancel] == tsg::inverse(v.letters_[cancel])) {
    ++cancel;
  }
  letters_.resize(letters_.size() - cancel);
  letters_.insert(letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(cancel),
                  v.letters_.end());
  return *this;
}

Word operator*(const Word& u, const Word& v) {
  Word out = u;
  out *= v;
  return out;
}

std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "1" || token == "e") continue;  // explicit identity
    if ((token[0] == 'g' || token[0] == 'G') && token.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(token[1]))) {
      for (std::size_t i = 1; i < token.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
          throw MalformedInput("bad generator token '" + token + "'");
        }
      }
      int index = std::stoi(token.substr(1));
      if (index < 1) throw MalformedInput("generator index must be positive in '" + token + "'");
      out.push_back(token[0] == 'g' ? index : -index);
      continue;
    }
    for (char c : token) {
      if (c >= 'a' && c <= 'z') {
        out.push_back(c - 'a' + 1);
      } else if (c >= 'A' && c <= 'Z') {
        out.push_back(-(c - 'A' + 1));
      } else {
        throw MalformedInput(std::string("bad letter '") + c + "' in token '" + token + "'");
      }
    }
  }
  return out;
}

Word parse_word(std::string_view text, int rank) {
  auto letters = parse_letters(text);
  return Word::reduce(letters, Alphabet(rank));
}

std::string format_letter(Letter l) {
  int index = std::abs(l);
  if (index <= 26) return std::string(1, static_cast<char>((l > 0 ? 'a' : 'A') + index - 1));
  return (l > 0 ? "g" : "G") + std::to_string(index);
}

std::string format_letters(std::span<const Letter> letters) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += format_letter(letters[i]);
  }
  return out;
}

std::string format_word(const Word& w) { return format_letters(w.letters()); }

int required_rank(std::span<const Letter> letters) {
  int rank = 1;
  for (Letter l : letters) rank = std::max(rank, std::abs(l));
  return rank;
}

}  // namespace tsg

std::size_t std::hash<tsg::Word>::operator()(const tsg::Word& w) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(w.rank());
  for (tsg::Letter l : w.letters()) {
    h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(l)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}
