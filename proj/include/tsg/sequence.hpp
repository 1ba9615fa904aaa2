#pragma once

// Square-free sequences and aperiodic labelings of rays and plane ternary trees.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsg {

using Token = std::int64_t;

/// First n letters of the fixed point of A -> ABC, B -> AC, C -> B.
std::string squarefree_ternary(std::size_t n);

/// First n letters of the square-free ternary word recoded A -> ab, B -> ba,
/// C -> aa, as tokens 0 (a) and 1 (b). Contains no fifth power.
std::vector<Token> binary_four_aperiodic(std::size_t n);

using VertexId = std::size_t;

/// Rooted ordered tree. Children lists carry the planar left-to-right order.
class PlaneTernaryTree {
 public:
  /// A tree consisting of the origin alone.
  PlaneTernaryTree();

  VertexId add_child(VertexId parent);

  std::size_t size() const { return parent_.size(); }
  VertexId origin() const { return 0; }
  std::optional<VertexId> parent(VertexId v) const { return parent_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  std::size_t level(VertexId v) const { return level_[v]; }
  std::size_t degree(VertexId v) const { return children_[v].size() + (v == 0 ? 0 : 1); }
  std::size_t depth() const;

  /// Vertices of one level, left to right.
  std::vector<VertexId> level_order(std::size_t level) const;
  /// Vertices from the origin down to v.
  std::vector<VertexId> root_path(VertexId v) const;

  /// Every vertex has valence 1 or 3 (origin alone is allowed).
  bool is_ternary() const;

  /// Origin with three children, every other internal vertex with two, all
  /// leaves at the given depth.
  static PlaneTernaryTree complete(std::size_t depth);
  /// Grows a ternary tree by expanding uniformly random leaves until it has at
  /// least `min_vertices` vertices.
  static PlaneTernaryTree random(std::size_t min_vertices, std::uint64_t seed);
  /// A path origin - 1 - 2 - ... - length.
  static PlaneTernaryTree ray(std::size_t length);

  /// Lines `id parent level`, origin parent `-`, in id order.
  void write(std::ostream& out) const;
  /// Inverse of write. Ids must be 0..n-1 with parents listed before children.
  static PlaneTernaryTree read(std::istream& in);

 private:
  std::vector<std::optional<VertexId>> parent_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::size_t> level_;
};

struct LabeledTree {
  PlaneTernaryTree tree;
  /// Label of the edge from parent(v) to v; empty for the origin.
  std::vector<std::optional<Token>> edge_label;
  /// Candidate sets F_v (empty in the three-letter mode).
  std::vector<std::vector<Token>> candidates;
  /// Inadmissible element z_v, for vertices that have children.
  std::vector<std::optional<Token>> inadmissible;

  /// Labels read along a vertex path.
  std::vector<Token> labels_along(std::span<const VertexId> path) const;
  /// TSV rows `edge_from edge_to token`.
  void write_labels(std::ostream& out, const std::function<std::string(Token)>& name) const;
};

/// Labels the edge into every vertex of level d with the d-th letter of the
/// square-free ternary word (tokens 0, 1, 2 for A, B, C).
LabeledTree label_tree_3letters(const PlaneTernaryTree& tree);

/// Periods of the runs ending at the end of a growing sequence.
///
/// Appending is O(length). The tracker answers how long a repetition each
/// candidate next token would complete, which is all the blocking strategy
/// needs.
class RepetitionTracker {
 public:
  void push(Token t);
  std::span<const Token> history() const { return history_; }

  /// Largest exponent (as numerator / period) of a suffix repetition created by
  /// appending t. A token never seen yields 1/1.
  struct Exponent {
    std::size_t length = 1;
    std::size_t period = 1;
    friend bool operator<(const Exponent& x, const Exponent& y) { return x.length * y.period < y.length * x.period; }
  };
  Exponent threat(Token t) const;

 private:
  std::vector<Token> history_;
  // run_[p] = number of trailing positions i with history[i] == history[i - p]
  std::vector<std::size_t> run_{0};
};

/// The inadmissible choice for one step: the candidate whose appending would
/// complete the highest-exponent repetition, smallest token on ties.
Token choose_inadmissible(const RepetitionTracker& tracker, std::span<const Token> candidates);

/// Picks a label from the admissible tokens. Receives the step, the admissible
/// set (candidates minus the inadmissible) and the labels emitted so far.
using RayChooser = std::function<Token(std::size_t step, std::span<const Token> admissible, std::span<const Token> history)>;

struct RayLabeling {
  std::vector<Token> labels;
  std::vector<Token> inadmissible;
};

/// Online ray labeling: z_v is fixed before the chooser sees step v. When all
/// candidate sets are the same pair the inadmissibles follow the binary
/// 4-aperiodic word; otherwise the blocking strategy is used.
/// Throws MalformedInput if a candidate set has fewer than two distinct tokens
/// and PreconditionError if the chooser returns an inadmissible token.
RayLabeling label_ray_adversarial(const std::vector<std::vector<Token>>& candidates, const RayChooser& chooser);

/// Picks `count` distinct labels for the lower edges of `v` from `admissible`.
using TreeChooser = std::function<std::vector<Token>(VertexId v, std::span<const Token> admissible, std::size_t count,
                                                     std::span<const Token> history)>;

/// Root-down labeling. Every vertex with children gets z_v from the blocking
/// strategy applied to the labels on its root path, then the chooser labels its
/// lower edges from F_v minus z_v. Throws MalformedInput when a vertex with
/// children has |F_v| < 4 (or fewer admissible tokens than children), and
/// PreconditionError when the chooser breaks the contract.
LabeledTree label_tree_adversarial(const PlaneTernaryTree& tree, std::vector<std::vector<Token>> candidates,
                                   const TreeChooser& chooser);

/// Calls visit once per unordered pair of distinct vertices with the path
/// between them, from the smaller id to the larger.
void for_each_simple_path(const PlaneTernaryTree& tree, const std::function<void(std::span<const VertexId>)>& visit);

struct PathViolation {
  std::vector<VertexId> path;
  std::vector<Token> labels;
  std::size_t order = 0;
};

/// Checks that every simple path of a labeled tree is k-aperiodic. Only paths
/// between vertices of degree at most one are scanned; all other paths are
/// subpaths of those.
std::optional<PathViolation> find_periodic_path(const LabeledTree& labeled, std::size_t k);

}  // namespace tsg
