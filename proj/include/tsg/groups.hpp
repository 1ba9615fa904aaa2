#pragma once

// Cayley length oracles for free groups, free abelian groups, F2 x Z with the
// generating set {a, b, a^n z}, and direct products of these.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tsg/word.hpp"

namespace tsg {

/// Normal form of one factor: a reduced word (free, F2 x Z) and integer
/// coordinates (abelian, or the Z part of F2 x Z).
struct Component {
  Word word;
  std::vector<std::int64_t> coords;

  friend bool operator==(const Component&, const Component&) = default;
  friend auto operator<=>(const Component&, const Component&) = default;
};

/// One component per factor of the (flattened) product.
struct Element {
  std::vector<Component> parts;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& g) const noexcept;
};

enum class FactorKind { Free, Abelian, F2xZ };

struct Factor {
  FactorKind kind;
  /// Rank for free and abelian factors, n for F2 x Z.
  int param;
};

struct GroupLimits {
  /// Nodes an F2 x Z length search may settle before giving up.
  std::size_t search_nodes = 2'000'000;
  /// Largest ball that may be enumerated.
  std::size_t ball_elements = 1'000'000;
};

struct Ball {
  Element center;
  std::size_t radius = 0;
  /// Elements in BFS order from the center, so distances are nondecreasing.
  std::vector<Element> elements;
  std::vector<std::size_t> distance;
};

class Group {
 public:
  /// `free:2`, `abelian:3`, `f2xz:n=4` (or `f2xz:4`), `prod(G,H,...)`.
  /// Throws ConfigError on anything else.
  static Group parse(std::string_view descriptor, GroupLimits limits = {});
  static Group free(int rank);
  static Group abelian(int rank);
  static Group f2xz(int n);
  static Group product(const std::vector<Group>& factors);

  std::string descriptor() const;
  const std::vector<Factor>& factors() const { return factors_; }
  const GroupLimits& limits() const { return limits_; }
  void set_limits(GroupLimits limits) { limits_ = limits; }

  Element identity() const;
  Element multiply(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  bool is_identity(const Element& g) const { return g == identity(); }

  /// Symmetric generating set: every generator followed by its inverse.
  const std::vector<Element>& generators() const { return generators_; }

  /// Exact Cayley length. For F2 x Z factors throws ResourceLimit (with an
  /// upper bound) when the search budget runs out.
  std::size_t length(const Element& g) const;
  /// Left-invariant distance |g^-1 h|.
  std::size_t distance(const Element& g, const Element& h) const { return length(multiply(inverse(g), h)); }

  /// Indices into generators() whose product is g, of length exactly length(g).
  std::vector<std::size_t> geodesic(const Element& g) const;

  /// Elements within distance r of center. Throws ResourceLimit beyond limits().ball_elements.
  Ball ball(const Element& center, std::size_t r) const;

  /// Product of `steps` uniformly random generators.
  Element random_walk(std::mt19937_64& rng, std::size_t steps) const;

  /// Components separated by `|`; free parts in word text format, abelian parts
  /// as `3,-4`, F2 x Z parts as `word ; z`. Throws MalformedInput.
  Element parse_element(std::string_view text) const;
  std::string format_element(const Element& g) const;

  /// Embeds a free word into the first factor, which must be free or F2 x Z.
  Element from_word(const Word& w) const;

 private:
  Group() = default;
  void build_generators();
  std::size_t f2xz_length(int n, const Component& c, std::vector<std::size_t>* path = nullptr) const;

  struct Memo;
  std::vector<Factor> factors_;
  std::vector<Element> generators_;
  std::vector<std::size_t> generator_offset_;
  GroupLimits limits_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace tsg
