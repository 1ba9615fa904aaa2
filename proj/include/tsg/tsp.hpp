#pragma once

// Closed tours through finite subsets of a group: exact subset dynamic
// programming, a 2-opt heuristic, spanning tree bounds, and L'.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tsg/groups.hpp"

namespace tsg {

using DistanceMatrix = std::vector<std::vector<std::int64_t>>;

/// Pairwise Cayley distances, computed on up to `jobs` threads.
DistanceMatrix distance_matrix(const Group& group, std::span<const Element> points, std::size_t jobs = 1);

enum class TourKind { Exact, HeuristicUpper };

struct Tour {
  /// Visit order, starting at point 0; the return leg is implicit.
  std::vector<std::size_t> order;
  std::int64_t length = 0;
  TourKind kind = TourKind::Exact;
};

std::int64_t tour_length(const DistanceMatrix& d, std::span<const std::size_t> order);

inline constexpr std::size_t kDefaultExactCap = 15;

/// Optimal tour by Held-Karp. Among optimal tours the lexicographically least
/// visit order is returned. Throws ResourceLimit above `cap` points.
Tour tsp_exact(const DistanceMatrix& d, std::size_t cap = kDefaultExactCap);

/// Nearest neighbour plus 2-opt, best of a few seeded restarts. An upper bound.
Tour tsp_heuristic(const DistanceMatrix& d, std::uint64_t seed);

struct SpanningTree {
  std::int64_t weight = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Prim's algorithm from point 0, smallest index on ties.
SpanningTree minimum_spanning_tree(const DistanceMatrix& d);

/// Depth-first walk around the tree from point 0 and back, each edge twice.
std::vector<std::size_t> doubled_tree_walk(const SpanningTree& tree, std::size_t points);

struct ClosedPath {
  std::vector<Element> points;
  std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Joins consecutive walk points by geodesics.
ClosedPath realize_walk(const Group& group, std::span<const Element> points, std::span<const std::size_t> walk);

/// Endpoints agree and consecutive points differ by one generator.
bool is_closed_path(const Group& group, const ClosedPath& path);

/// N(beta; A): indices i in 0..n with beta(i) in A.
std::size_t visit_count(const ClosedPath& path, std::span<const Element> set);

bool visits_all(const ClosedPath& path, std::span<const Element> set);

/// Exact inf over closed paths through every point of l(beta) - N(beta; S).
///
/// Cut a closed path at its visits to S: each stretch between consecutive
/// visits costs its length minus one, and at least d - 1. So L' + 1 is the
/// optimal tour under the metric closure of d - 1, and geodesics realize it.
/// Points must be distinct. Throws ResourceLimit above `cap` points.
std::int64_t l_prime(const DistanceMatrix& d, std::size_t cap = kDefaultExactCap);

/// A closed path attaining l_prime, starting and ending at point 0.
ClosedPath l_prime_path(const Group& group, std::span<const Element> points, const DistanceMatrix& d,
                        std::size_t cap = kDefaultExactCap);

}  // namespace tsg
