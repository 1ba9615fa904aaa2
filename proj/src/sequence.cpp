#include "tsg/sequence.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "tsg/errors.hpp"
#include "tsg/repetition.hpp"

namespace tsg {

std::string squarefree_ternary(std::size_t n) {
  std::string s = "A";
  while (s.size() < n) {
    std::string next;
    next.reserve(s.size() * 3);
    for (char c : s) {
      if (c == 'A') next += "ABC";
      else if (c == 'B') next += "AC";
      else next += "B";
    }
    s = std::move(next);
  }
  s.resize(n);
  return s;
}

std::vector<Token> binary_four_aperiodic(std::size_t n) {
  std::string ternary = squarefree_ternary(n / 2 + 1);
  std::vector<Token> out;
  out.reserve(n + 1);
  for (char c : ternary) {
    if (c == 'A') out.insert(out.end(), {0, 1});
    else if (c == 'B') out.insert(out.end(), {1, 0});
    else out.insert(out.end(), {0, 0});
  }
  out.resize(n);
  return out;
}

// ---- PlaneTernaryTree ----

PlaneTernaryTree::PlaneTernaryTree() : parent_{std::nullopt}, children_(1), level_{0} {}

VertexId PlaneTernaryTree::add_child(VertexId parent) {
  if (parent >= size()) throw OutOfRange("no vertex " + std::to_string(parent));
  VertexId v = size();
  parent_.push_back(parent);
  children_.emplace_back();
  level_.push_back(level_[parent] + 1);
  children_[parent].push_back(v);
  return v;
}

std::size_t PlaneTernaryTree::depth() const { return *std::max_element(level_.begin(), level_.end()); }

std::vector<VertexId> PlaneTernaryTree::level_order(std::size_t level) const {
  // breadth-first with children in planar order yields each level left to right
  std::vector<VertexId> frontier{0};
  for (std::size_t d = 0; d < level; ++d) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) next.insert(next.end(), children_[v].begin(), children_[v].end());
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<VertexId> PlaneTernaryTree::root_path(VertexId v) const {
  std::vector<VertexId> path{v};
  while (parent_[path.back()]) path.push_back(*parent_[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool PlaneTernaryTree::is_ternary() const {
  if (size() == 1) return true;
  for (VertexId v = 0; v < size(); ++v) {
    std::size_t d = degree(v);
    if (d != 1 && d != 3) return false;
  }
  return true;
}

PlaneTernaryTree PlaneTernaryTree::complete(std::size_t depth) {
  PlaneTernaryTree t;
  std::vector<VertexId> frontier{0};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      std::size_t kids = v == 0 ? 3 : 2;
      for (std::size_t k = 0; k < kids; ++k) next.push_back(t.add_child(v));
    }
    frontier = std::move(next);
  }
  return t;
}

PlaneTernaryTree PlaneTernaryTree::random(std::size_t min_vertices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PlaneTernaryTree t;
  std::vector<VertexId> leaves{0};
  while (t.size() < min_vertices) {
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng);
    VertexId v = leaves[pick];
    leaves[pick] = leaves.back();
    leaves.pop_back();
    std::size_t kids = v == 0 ? 3 : 2;
    for (std::size_t k = 0; k < kids; ++k) leaves.push_back(t.add_child(v));
  }
  return t;
}

PlaneTernaryTree PlaneTernaryTree::ray(std::size_t length) {
  PlaneTernaryTree t;
  for (std::size_t i = 0; i < length; ++i) t.add_child(i);
  return t;
}

void PlaneTernaryTree::write(std::ostream& out) const {
  for (VertexId v = 0; v < size(); ++v) {
    out << v << ' ';
    if (parent_[v]) out << *parent_[v]; else out << '-';
    out << ' ' << level_[v] << '\n';
  }
}

PlaneTernaryTree PlaneTernaryTree::read(std::istream& in) {
  PlaneTernaryTree t;
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string id, parent, level;
    if (!(row >> id >> parent >> level)) throw MalformedInput("tree line needs `id parent level`: " + line);
    try {
      if (std::stoull(id) != expected) throw MalformedInput("tree ids must be consecutive from 0: " + line);
      if (expected == 0) {
        if (parent != "-" || std::stoull(level) != 0) throw MalformedInput("first line must be the origin: " + line);
      } else {
        VertexId p = std::stoull(parent);
        if (p >= expected) throw MalformedInput("parent must precede child: " + line);
        VertexId v = t.add_child(p);
        if (t.level(v) != std::stoull(level)) throw MalformedInput("level disagrees with parent: " + line);
      }
    } catch (const std::logic_error&) {
      throw MalformedInput("bad number in tree line: " + line);
    }
    ++expected;
  }
  if (expected == 0) throw MalformedInput("empty tree");
  return t;
}

// ---- labelings ----

std::vector<Token> LabeledTree::labels_along(std::span<const VertexId> path) const {
  std::vector<Token> out;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    VertexId a = path[i], b = path[i + 1];
    VertexId child = tree.parent(b) == a ? b : a;
    out.push_back(*edge_label[child]);
  }
  return out;
}

void LabeledTree::write_labels(std::ostream& out, const std::function<std::string(Token)>& name) const {
  for (VertexId v = 1; v < tree.size(); ++v) {
    out << *tree.parent(v) << '\t' << v << '\t' << name(*edge_label[v]) << '\n';
  }
}

LabeledTree label_tree_3letters(const PlaneTernaryTree& tree) {
  LabeledTree out{tree, std::vector<std::optional<Token>>(tree.size()), std::vector<std::vector<Token>>(tree.size()),
                  std::vector<std::optional<Token>>(tree.size())};
  std::string omega = squarefree_ternary(tree.depth() + 1);
  for (VertexId v = 1; v < tree.size(); ++v) out.edge_label[v] = omega[tree.level(v) - 1] - 'A';
  return out;
}

void RepetitionTracker::push(Token t) {
  const std::size_t n = history_.size();
  for (std::size_t p = 1; p <= n; ++p) run_[p] = history_[n - p] == t ? run_[p] + 1 : 0;
  history_.push_back(t);
  run_.push_back(0);
}

RepetitionTracker::Exponent RepetitionTracker::threat(Token t) const {
  Exponent best;
  const std::size_t n = history_.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (history_[n - p] != t) continue;
    Exponent e{run_[p] + 1 + p, p};
    if (best < e) best = e;
  }
  return best;
}

Token choose_inadmissible(const RepetitionTracker& tracker, std::span<const Token> candidates) {
  if (candidates.empty()) throw PreconditionError("no candidates to block");
  Token pick = candidates[0];
  auto worst = tracker.threat(pick);
  for (Token c : candidates.subspan(1)) {
    auto e = tracker.threat(c);
    if (worst < e || (!(e < worst) && c < pick)) {
      worst = e;
      pick = c;
    }
  }
  return pick;
}

namespace {

std::vector<Token> distinct(std::vector<Token> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Token> without(const std::vector<Token>& set, Token z) {
  std::vector<Token> out;
  for (Token t : set) if (t != z) out.push_back(t);
  return out;
}

}  // namespace

RayLabeling label_ray_adversarial(const std::vector<std::vector<Token>>& candidates, const RayChooser& chooser) {
  std::vector<std::vector<Token>> sets;
  std::vector<Token> ground;
  for (std::size_t v = 0; v < candidates.size(); ++v) {
    sets.push_back(distinct(candidates[v]));
    if (sets.back().size() < 2) throw MalformedInput("candidate set at step " + std::to_string(v) + " has fewer than 2 tokens");
    ground.insert(ground.end(), sets.back().begin(), sets.back().end());
  }
  ground = distinct(ground);
  const bool binary = ground.size() == 2;
  std::vector<Token> omega = binary ? binary_four_aperiodic(sets.size()) : std::vector<Token>{};

  RayLabeling out;
  RepetitionTracker tracker;
  for (std::size_t v = 0; v < sets.size(); ++v) {
    Token z = binary ? ground[omega[v]] : choose_inadmissible(tracker, sets[v]);
    out.inadmissible.push_back(z);
    auto admissible = without(sets[v], z);
    Token x = chooser(v, admissible, tracker.history());
    if (std::find(admissible.begin(), admissible.end(), x) == admissible.end()) {
      throw PreconditionError("chooser returned a token outside the admissible set at step " + std::to_string(v));
    }
    tracker.push(x);
    out.labels.push_back(x);
  }
  return out;
}

LabeledTree label_tree_adversarial(const PlaneTernaryTree& tree, std::vector<std::vector<Token>> candidates,
                                   const TreeChooser& chooser) {
  if (candidates.size() != tree.size()) throw MalformedInput("need one candidate set per vertex");
  LabeledTree out{tree, std::vector<std::optional<Token>>(tree.size()), {}, std::vector<std::optional<Token>>(tree.size())};
  for (auto& c : candidates) c = distinct(std::move(c));
  for (VertexId v = 0; v < tree.size(); ++v) {
    const auto& kids = tree.children(v);
    if (kids.empty()) continue;
    if (candidates[v].size() < 4 || candidates[v].size() - 1 < kids.size()) {
      throw MalformedInput("vertex " + std::to_string(v) + " has only " + std::to_string(candidates[v].size()) + " candidates");
    }
  }
  // ids are assigned parent-first, so increasing id order is root-down
  for (VertexId v = 0; v < tree.size(); ++v) {
    const auto& kids = tree.children(v);
    if (kids.empty()) continue;
    RepetitionTracker tracker;
    auto path = tree.root_path(v);
    for (std::size_t i = 1; i < path.size(); ++i) tracker.push(*out.edge_label[path[i]]);
    Token z = choose_inadmissible(tracker, candidates[v]);
    out.inadmissible[v] = z;
    auto admissible = without(candidates[v], z);
    auto picks = chooser(v, admissible, kids.size(), tracker.history());
    if (picks.size() != kids.size() || distinct(picks).size() != picks.size()) {
      throw PreconditionError("chooser must return distinct labels, one per lower edge, at vertex " + std::to_string(v));
    }
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (std::find(admissible.begin(), admissible.end(), picks[k]) == admissible.end()) {
        throw PreconditionError("chooser returned an inadmissible label at vertex " + std::to_string(v));
      }
      out.edge_label[kids[k]] = picks[k];
    }
  }
  out.candidates = std::move(candidates);
  return out;
}

void for_each_simple_path(const PlaneTernaryTree& tree, const std::function<void(std::span<const VertexId>)>& visit) {
  const std::size_t n = tree.size();
  std::vector<std::vector<VertexId>> adj(n);
  for (VertexId v = 1; v < n; ++v) {
    adj[v].push_back(*tree.parent(v));
    adj[*tree.parent(v)].push_back(v);
  }
  std::vector<VertexId> path;
  std::function<void(VertexId, VertexId)> walk = [&](VertexId v, VertexId from) {
    path.push_back(v);
    if (path.size() > 1 && v > path.front()) visit(path);
    for (VertexId w : adj[v]) if (w != from) walk(w, v);
    path.pop_back();
  };
  for (VertexId u = 0; u < n; ++u) walk(u, u);
}

std::optional<PathViolation> find_periodic_path(const LabeledTree& labeled, std::size_t k) {
  const auto& tree = labeled.tree;
  std::vector<VertexId> ends;
  for (VertexId v = 0; v < tree.size(); ++v) if (tree.degree(v) <= 1) ends.push_back(v);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    auto pu = tree.root_path(ends[i]);
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      auto pv = tree.root_path(ends[j]);
      std::size_t common = 0;
      while (common < pu.size() && common < pv.size() && pu[common] == pv[common]) ++common;
      std::vector<VertexId> path(pu.rbegin(), pu.rend() - static_cast<std::ptrdiff_t>(common - 1));
      path.insert(path.end(), pv.begin() + static_cast<std::ptrdiff_t>(common), pv.end());
      auto labels = labeled.labels_along(path);
      auto check = is_k_aperiodic(labels, k);
      if (!check.aperiodic) return PathViolation{path, labels, max_power_order(labels).order};
    }
  }
  return std::nullopt;
}

}  // namespace tsg
