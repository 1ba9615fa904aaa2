#pragma once

// xi-related sets, revisions, TS(lambda) experiments and the Folner box
// traversal for free abelian groups.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tsg/groups.hpp"
#include "tsg/tsp.hpp"

namespace tsg {

/// Exact positive rational, used for lambda.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// `2`, `3/2` or `1.5`. Throws ConfigError.
  static Rational parse(const std::string& text);
  std::string str() const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// ceil(num / den)
  std::int64_t ceil() const { return (num + den - 1) / den; }
};

struct RelatedCheck {
  bool related = true;
  /// Indices of elements with no xi-neighbour.
  std::vector<std::size_t> orphans;
};

/// Every element x has some y in the set with y = x xi or y = x xi^-1.
/// Throws DegenerateXi when xi is the identity.
RelatedCheck is_xi_related(const Group& group, std::span<const Element> elements, const Element& xi);

struct Revision {
  /// (i, j) with elements[j] = elements[i] xi; pairs are disjoint.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t covered() const { return 2 * pairs.size(); }
};

/// Pairs consecutive elements along each xi-orbit path. Covers at least
/// ceil(2|S|/3) elements. Throws PreconditionError if the set is not xi-related.
Revision revise(const Group& group, std::span<const Element> elements, const Element& xi);

/// Elements covered by the revision, pair by pair.
std::vector<Element> revised_elements(std::span<const Element> elements, const Revision& revision);

/// Lexicographically least reduced square-free word of the given length, letters
/// tried in the order a, b, A, B (then further generators).
Word aperiodic_word(std::size_t length, int rank = 2);

struct SamplerConfig {
  std::size_t max_size = 14;
  std::size_t max_chains = 4;
  std::size_t max_chain_length = 4;
  /// Chain bases are random walks of at most this many steps.
  std::size_t spread = 3;
  /// Replace each sample by its revision.
  bool revised = true;
};

/// Union of random xi-chains x, x xi, ..., x xi^k with nearby bases; at least
/// two elements, at most max_size, always xi-related.
std::vector<Element> sample_related_set(const Group& group, const Element& xi, const SamplerConfig& config,
                                        std::mt19937_64& rng);

struct ExperimentConfig {
  std::size_t samples = 200;
  std::uint64_t seed = 7;
  SamplerConfig sampler;
  bool with_lprime = false;
  std::size_t exact_cap = kDefaultExactCap;
  std::size_t jobs = 1;
};

struct SampleResult {
  std::vector<Element> set;
  /// Optimal tour length, or a heuristic upper bound when the set exceeds the cap.
  std::int64_t L = 0;
  bool L_exact = true;
  std::optional<std::int64_t> Lprime;
  /// L < lambda |S|
  bool violation = false;
  /// L' <= lambda |S|
  bool lprime_violation = false;
  std::size_t size() const { return set.size(); }
  double ratio() const { return set.empty() ? 0.0 : static_cast<double>(L) / static_cast<double>(set.size()); }
};

struct ExperimentReport {
  std::string group;
  std::string xi;
  Rational lambda;
  ExperimentConfig config;
  std::vector<SampleResult> samples;
  double min_ratio = 0.0;
  std::vector<std::size_t> violations;
  std::vector<std::size_t> lprime_violations;
};

/// Samples xi-related sets and measures L(S) (and optionally L'(S)) against lambda |S|.
/// Sample i uses seed config.seed + i, so results do not depend on jobs.
ExperimentReport ts_lambda_experiment(const Group& group, const Element& xi, Rational lambda,
                                      const ExperimentConfig& config);

/// Integer box [0, sides[0]) x ... in an abelian group of matching rank.
std::vector<Element> box(const Group& group, const std::vector<std::int64_t>& sides);

/// B union (B + xi) for the box B: xi-related by construction.
std::vector<Element> box_related_set(const Group& group, const std::vector<std::int64_t>& sides, const Element& xi);

/// One sample per box side length (a square box in every coordinate).
ExperimentReport box_experiment(const Group& group, const Element& xi, Rational lambda,
                                const std::vector<std::int64_t>& side_lengths, std::size_t exact_cap, std::uint64_t seed);

/// {x in F : x xi and x xi^-1 both outside F}
std::vector<std::size_t> xi_boundary(const Group& group, std::span<const Element> f, const Element& xi);

/// {x in F : x k outside F for some k in K}
std::vector<std::size_t> k_boundary(const Group& group, std::span<const Element> f, std::span<const Element> k);

struct FolnerReport {
  std::size_t f_size = 0;
  std::vector<std::size_t> boundary;
  ClosedPath traversal;
  bool traversal_valid = false;
  bool visits_interior = false;
  /// Every element lies on the xi-boundary.
  bool degenerate = false;
  /// Upper bound on L(F \ dF): the traversal length.
  std::int64_t interior_tour_bound = 0;
  /// interior_tour_bound <= 2|F|
  bool bound_by_2f = false;
  /// 2|F| <= 2.5 |F \ dF|
  bool bound_by_interior = false;
};

/// Spanning tree of the Cayley graph on F, walked around: a closed path of
/// length 2(|F| - 1) through all of F. Throws PreconditionError if F is empty
/// or disconnected.
FolnerReport folner_traversal_demo(const Group& group, std::span<const Element> f, const Element& xi);

}  // namespace tsg
