#pragma once

// Pieces, short segments and (S, xi)-trees over a tour of a revised set, with
// the end-vertex census and the lower bounds on L(S) it yields.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tsg/groups.hpp"
#include "tsg/sequence.hpp"
#include "tsg/ts_analysis.hpp"
#include "tsg/tsp.hpp"

namespace tsg {

struct PieceDecomposition {
  /// z_1..z_m as indices into S, rotated to start right after a cut.
  std::vector<std::size_t> order;
  /// Positions j (0-based) with d(z_j, z_{j+1}) > threshold; z_{m} wraps to z_0.
  std::vector<std::size_t> cuts;
  /// Half-open position ranges [begin, end) into `order`.
  std::vector<std::pair<std::size_t, std::size_t>> pieces;
  /// Positions of the input sequence dropped as repeats.
  std::vector<std::size_t> removed;
  Rational threshold;
  /// Sum of d(z_j, z_{j+1}) around the cycle.
  std::int64_t total_length = 0;
  /// Sum of the distances across cuts. At most L(S) when the tour is optimal.
  std::int64_t cut_length = 0;
  /// Position of every element of S in `order`.
  std::vector<std::size_t> position;
  /// Piece index of every position.
  std::vector<std::size_t> piece_of;
};

/// Removes repeats from the visiting sequence and cuts it wherever consecutive
/// distance exceeds the threshold. Throws PreconditionError when the sequence
/// misses an element or indexes outside S.
PieceDecomposition decompose_pieces(const DistanceMatrix& d, std::span<const std::size_t> sequence, Rational threshold);

enum class ForestMode { P, P10 };

struct STreeVertex {
  /// Indices into S.
  std::vector<std::size_t> members;
  /// (x in the parent, y here) with y = N_xi(x); absent at the origin.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

struct STree {
  PlaneTernaryTree shape;
  /// Aligned with shape ids; ids are assigned in build order.
  std::vector<STreeVertex> vertices;
  bool is_end(VertexId v) const { return shape.children(v).empty(); }
};

struct ForestCensus {
  std::size_t trees = 0;
  std::size_t vertices = 0;
  /// Sum over trees of their end vertices (a shared end vertex counts twice).
  std::size_t end_vertices = 0;
  /// Distinct end vertices.
  std::size_t distinct_end_vertices = 0;
  /// Elements of end vertices at least 4 positions from both ends of their piece.
  std::size_t v_far = 0;
  /// Remaining end-vertex elements.
  std::size_t v_near = 0;
  /// distinct_end_vertices >= |S| / 6
  bool ends_ok = false;
  /// v_far <= |S| / 8 and v_near > |S| / 24 (only meaningful in mode P10)
  bool v_far_ok = false;
  bool v_near_ok = false;
};

struct CertifiedBound {
  /// r/12 |S| in mode P, r/96 |S| in mode P10, as num/den.
  Rational claimed;
  /// (r/2) * distinct end vertices in mode P, (r/4) |V'| in mode P10.
  Rational intermediate;
  bool tour_exact = false;
  /// The tour has a cut and the census inequalities of the mode hold (mode
  /// P10 also needs a non-advisory forest). In mode P this makes
  /// claimed <= intermediate <= pieces.cut_length.
  bool premises_hold = false;
};

struct TreeForest {
  ForestMode mode = ForestMode::P;
  std::int64_t r = 0;
  PieceDecomposition pieces;
  /// Short segments (mode P) as position ranges into pieces.order.
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::vector<STree> trees;
  ForestCensus census;
  CertifiedBound bound;
  /// Some vertex had |F_v| < 4 so the labeling guarantee did not apply.
  bool advisory = false;
  /// (tree, vertex, level) in build order.
  std::vector<std::tuple<std::size_t, VertexId, std::size_t>> build_log;
  /// Labeled copy of each tree's shape with the tokens of the within-vertex moves (mode P10).
  std::vector<LabeledTree> labels;
};

/// Names the inadmissible candidate given the labels on the root path.
using InadmissibleRule = std::function<Token(std::span<const Token> history, std::span<const Token> candidates)>;

/// The blocking strategy used by the tree labeler.
Token default_inadmissible(std::span<const Token> history, std::span<const Token> candidates);

/// A revised set is listed pair by pair: s[2i + 1] = s[2i] xi. Throws
/// PreconditionError otherwise.
void require_revised(const Group& group, std::span<const Element> s, const Element& xi);

/// Segments of three along each piece, then trees grown through xi-neighbours
/// of segment members. Throws PreconditionError if a tree closes a cycle, which
/// cannot happen when xi has property (P) at r.
TreeForest build_forest_P(const Group& group, std::span<const Element> s, const Element& xi, std::int64_t r,
                          const Tour& tour);

/// Vertices completed from the four nearest neighbours on either side in the
/// piece, avoiding one inadmissible element per vertex.
TreeForest build_forest_P10(const Group& group, std::span<const Element> s, const Element& xi, std::int64_t r,
                            const Tour& tour, const InadmissibleRule& rule = default_inadmissible);

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool pass() const;
  const Check* find(const std::string& name) const;
};

/// Re-checks coverage, vertex sizes, disjointness, witnesses, build order and
/// (mode P) that elements of distinct vertices of a tree are at least r apart.
VerificationReport verify_forest(const Group& group, const TreeForest& forest, std::span<const Element> s,
                                 const Element& xi, std::size_t jobs = 1);

}  // namespace tsg
