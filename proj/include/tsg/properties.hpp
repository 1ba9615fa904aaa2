#pragma once

// Counterexample search for properties (P) and (P'_n), and the balanced
// sequences that defeat them in free objects of the variety [X^p, Y^p] = 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsg/groups.hpp"
#include "tsg/word.hpp"

namespace tsg {

enum class PropertyFamily {
  /// x_i != 1 only
  P,
  /// additionally x_1..x_k is an n-aperiodic sequence; n = 1 gives (P')
  PnPrime,
};

struct PropertySpec {
  PropertyFamily family = PropertyFamily::P;
  std::int64_t r = 1;
  std::size_t n = 1;
  Element xi;
};

struct SearchBudget {
  std::size_t k_max = 3;
  /// Products evaluated per k; a k whose space is larger is sampled instead.
  std::uint64_t evaluations = 2'000'000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct PropertyWitness {
  std::vector<int> signs;
  std::vector<Element> xs;
  std::int64_t length = 0;
};

struct PropertyVerdict {
  bool counterexample = false;
  std::optional<PropertyWitness> witness;
  std::uint64_t evaluated = 0;
  /// "exhaustive" or "sampled" for each k searched, in order.
  std::vector<std::string> regimes;
};

/// Searches for xi^{e_1} x_1 ... xi^{e_k} x_k of length <= r over x_i in B_r \ {1}
/// with the family's aperiodicity class, for k = 1..k_max. Exhaustive when the
/// space for k fits the budget (the lexicographically least witness by k, signs
/// then ball order is returned), seeded sampling otherwise. Throws ResourceLimit
/// if B_r exceeds the group's ball limit.
PropertyVerdict test_property(const Group& group, const PropertySpec& spec, const SearchBudget& budget);

/// Re-multiplies the witness and re-checks x_i != 1, |x_i| <= r, the
/// aperiodicity class and the final length.
bool replay_witness(const Group& group, const PropertySpec& spec, const PropertyWitness& witness);

struct RewriteStep {
  enum Kind { Swap, Cancel } kind = Swap;
  /// Position of the left factor of the adjacent pair.
  std::size_t index = 0;
  /// Bases X, Y of the pair X^p Y^p (Swap) or X^p X^-p (Cancel).
  Word x;
  Word y;
};

struct GnpCertificate {
  bool found = false;
  std::size_t n = 2, p = 1, m = 1, k = 1;
  Word xi;
  /// u_1..u_2k and x_i = u_i^p
  std::vector<Word> us;
  std::vector<Word> xs;
  /// xi x_1 xi^-1 x_2 ... reduced, and prod (xi u_{2j-1} xi^-1)^p u_{2j}^p reduced
  Word product;
  Word rewritten;
  bool identity_holds = false;
  bool balanced = false;
  bool aperiodic = false;
  /// Commutations [X^p, Y^p] and free cancellations taking the p-th power
  /// factors to the empty product; each step is re-verified in the free group.
  std::vector<RewriteStep> log;
  bool log_valid = false;
  std::uint64_t nodes = 0;
};

/// Finds u_1..u_2k among the generators and their inverses with odd and even
/// positions each balanced (u^p as often as u^-p) and x_1..x_2k m-aperiodic,
/// then certifies the product is trivial modulo [X^p, Y^p]. `found` is false
/// when the search exhausts `node_budget`.
GnpCertificate gnp_counterexample(std::size_t n, std::size_t p, std::size_t m, std::size_t k, const Word& xi,
                                  std::uint64_t node_budget = 10'000'000);

}  // namespace tsg
