#include "tsg/tree_partition.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "tsg/errors.hpp"

namespace tsg {

namespace {

Rational ratio(std::int64_t num, std::int64_t den) {
  std::int64_t g = std::gcd(num, den);
  if (g == 0) return Rational{0, 1};
  return Rational{num / g, den / g};
}

bool exceeds(std::int64_t dist, Rational t) { return dist * t.den > t.num; }

}  // namespace

PieceDecomposition decompose_pieces(const DistanceMatrix& d, std::span<const std::size_t> sequence, Rational threshold) {
  if (threshold.num <= 0 || threshold.den <= 0) throw PreconditionError("piece threshold must be positive");
  const std::size_t n = d.size();
  PieceDecomposition pd;
  pd.threshold = threshold;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> z;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] >= n) throw PreconditionError("tour refers to element " + std::to_string(sequence[i]) + " outside the set");
    if (seen[sequence[i]]) {
      pd.removed.push_back(i);
      continue;
    }
    seen[sequence[i]] = true;
    z.push_back(sequence[i]);
  }
  if (z.size() != n) throw PreconditionError("tour misses " + std::to_string(n - z.size()) + " element(s) of the set");
  const std::size_t m = n;
  if (m == 0) return pd;
  auto gap = [&](std::size_t j) { return d[z[j]][z[(j + 1) % m]]; };
  for (std::size_t j = 0; j < m; ++j) {
    if (m > 1 && exceeds(gap(j), threshold)) {
      std::rotate(z.begin(), z.begin() + static_cast<std::ptrdiff_t>((j + 1) % m), z.end());
      break;
    }
  }
  pd.order = z;
  pd.position.assign(n, 0);
  for (std::size_t p = 0; p < m; ++p) pd.position[z[p]] = p;
  std::size_t begin = 0;
  for (std::size_t j = 0; j < m; ++j) {
    std::int64_t g = m > 1 ? gap(j) : 0;
    pd.total_length += g;
    if (m > 1 && exceeds(g, threshold)) {
      pd.cuts.push_back(j);
      pd.cut_length += g;
      pd.pieces.emplace_back(begin, j + 1);
      begin = j + 1;
    }
  }
  if (begin < m) pd.pieces.emplace_back(begin, m);
  pd.piece_of.assign(m, 0);
  for (std::size_t k = 0; k < pd.pieces.size(); ++k) {
    for (std::size_t p = pd.pieces[k].first; p < pd.pieces[k].second; ++p) pd.piece_of[p] = k;
  }
  return pd;
}

Token default_inadmissible(std::span<const Token> history, std::span<const Token> candidates) {
  RepetitionTracker tracker;
  for (Token t : history) tracker.push(t);
  return choose_inadmissible(tracker, candidates);
}

void require_revised(const Group& group, std::span<const Element> s, const Element& xi) {
  if (group.is_identity(xi)) throw DegenerateXi();
  if (s.size() % 2 != 0) throw PreconditionError("a revised set has an even number of elements");
  for (std::size_t i = 0; i < s.size(); i += 2) {
    if (group.multiply(s[i], xi) != s[i + 1]) {
      throw PreconditionError("set is not revised: element " + std::to_string(i + 1) + " is not element " +
                              std::to_string(i) + " times xi");
    }
  }
  std::unordered_map<Element, std::size_t, ElementHash> seen;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!seen.emplace(s[i], i).second) throw PreconditionError("set is not revised: repeated element");
  }
}

namespace {

std::size_t partner(std::size_t i) { return i ^ 1U; }

void finish_census(TreeForest& f, std::size_t set_size) {
  auto& c = f.census;
  c.trees = f.trees.size();
  std::map<std::vector<std::size_t>, bool> distinct;
  std::vector<bool> counted(set_size, false);
  for (const auto& t : f.trees) {
    c.vertices += t.vertices.size();
    for (VertexId v = 0; v < t.vertices.size(); ++v) {
      if (!t.is_end(v)) continue;
      ++c.end_vertices;
      auto key = t.vertices[v].members;
      std::sort(key.begin(), key.end());
      distinct[key] = true;
      for (auto e : key) {
        if (counted[e]) continue;
        counted[e] = true;
        std::size_t p = f.pieces.position[e];
        auto [b, en] = f.pieces.pieces[f.pieces.piece_of[p]];
        if (p - b >= 4 && en - 1 - p >= 4) ++c.v_far; else ++c.v_near;
      }
    }
  }
  c.distinct_end_vertices = distinct.size();
  const auto n = static_cast<std::int64_t>(set_size);
  c.ends_ok = 6 * static_cast<std::int64_t>(c.distinct_end_vertices) >= n;
  c.v_far_ok = 8 * static_cast<std::int64_t>(c.v_far) <= n;
  c.v_near_ok = 24 * static_cast<std::int64_t>(c.v_near) > n;

  const auto r = f.r;
  if (f.mode == ForestMode::P) {
    f.bound.claimed = ratio(r * n, 12);
    f.bound.intermediate = ratio(r * static_cast<std::int64_t>(c.distinct_end_vertices), 2);
    f.bound.premises_hold = c.ends_ok && !f.pieces.cuts.empty();
  } else {
    f.bound.claimed = ratio(r * n, 96);
    f.bound.intermediate = ratio(r * static_cast<std::int64_t>(c.v_near), 4);
    f.bound.premises_hold = c.v_far_ok && c.v_near_ok && !f.advisory && !f.pieces.cuts.empty();
  }
}

void check_inputs(std::int64_t r, const Tour& tour, std::size_t n) {
  if (r <= 0) throw PreconditionError("r must be positive");
  if (tour.order.empty() && n > 0) throw PreconditionError("tour is empty");
}

}  // namespace

TreeForest build_forest_P(const Group& group, std::span<const Element> s, const Element& xi, std::int64_t r,
                          const Tour& tour) {
  require_revised(group, s, xi);
  check_inputs(r, tour, s.size());
  TreeForest f;
  f.mode = ForestMode::P;
  f.r = r;
  f.bound.tour_exact = tour.kind == TourKind::Exact;
  auto d = distance_matrix(group, s);
  f.pieces = decompose_pieces(d, tour.order, ratio(r, 2));
  const auto& pd = f.pieces;

  std::vector<std::size_t> seg_of(pd.order.size());
  for (auto [b, e] : pd.pieces) {
    for (std::size_t p = b; p < e; p += 3) {
      for (std::size_t q = p; q < std::min(p + 3, e); ++q) seg_of[q] = f.segments.size();
      f.segments.emplace_back(p, std::min(p + 3, e));
    }
  }
  auto members_of = [&](std::size_t seg) {
    std::vector<std::size_t> m;
    for (std::size_t p = f.segments[seg].first; p < f.segments[seg].second; ++p) m.push_back(pd.order[p]);
    return m;
  };
  auto normal = [&](std::size_t seg) { return f.segments[seg].second - f.segments[seg].first == 3; };
  // trees already holding each segment
  std::vector<std::vector<std::size_t>> owners(f.segments.size());

  for (std::size_t pos = 0; pos < pd.order.size(); ++pos) {
    const std::size_t seg0 = seg_of[pos];
    if (!owners[seg0].empty()) continue;
    const std::size_t t = f.trees.size();
    STree tree;
    const std::size_t zstar = pd.order[pos];
    auto m0 = members_of(seg0);
    std::stable_partition(m0.begin(), m0.end(), [&](std::size_t e) { return e == zstar; });
    tree.vertices.push_back({m0, std::nullopt});
    owners[seg0].push_back(t);
    f.build_log.emplace_back(t, 0, 0);

    std::vector<std::size_t> in_tree{seg0};
    std::deque<std::pair<VertexId, std::vector<std::size_t>>> queue;
    if (normal(seg0)) queue.push_back({0, {m0[1], m0[2], m0[0]}});
    while (!queue.empty()) {
      auto [v, exits] = queue.front();
      queue.pop_front();
      for (std::size_t x : exits) {
        std::size_t y = partner(x);
        std::size_t sy = seg_of[pd.position[y]];
        if (std::find(in_tree.begin(), in_tree.end(), sy) != in_tree.end()) {
          throw PreconditionError("tree " + std::to_string(t) + " returns to one of its own segments; xi does not have property (P) at r = " +
                                  std::to_string(r));
        }
        if (!owners[sy].empty() && normal(sy)) {
          throw InternalError("normal segment reached from two trees");
        }
        VertexId c = tree.shape.add_child(v);
        tree.vertices.push_back({members_of(sy), std::pair{x, y}});
        in_tree.push_back(sy);
        owners[sy].push_back(t);
        f.build_log.emplace_back(t, c, tree.shape.level(c));
        if (normal(sy)) {
          std::vector<std::size_t> next;
          for (auto e : tree.vertices[c].members) if (e != y) next.push_back(e);
          queue.push_back({c, next});
        }
      }
    }
    f.trees.push_back(std::move(tree));
  }
  finish_census(f, s.size());
  return f;
}

TreeForest build_forest_P10(const Group& group, std::span<const Element> s, const Element& xi, std::int64_t r,
                            const Tour& tour, const InadmissibleRule& rule) {
  require_revised(group, s, xi);
  check_inputs(r, tour, s.size());
  TreeForest f;
  f.mode = ForestMode::P10;
  f.r = r;
  f.bound.tour_exact = tour.kind == TourKind::Exact;
  auto d = distance_matrix(group, s);
  f.pieces = decompose_pieces(d, tour.order, ratio(r, 4));
  const auto& pd = f.pieces;
  const std::size_t n = s.size();

  std::unordered_map<Element, Token, ElementHash> token_ids;
  auto move_token = [&](std::size_t from, std::size_t to) {
    Element m = group.multiply(group.inverse(s[from]), s[to]);
    return token_ids.emplace(m, static_cast<Token>(token_ids.size())).first->second;
  };
  std::vector<bool> covered(n, false);
  auto available = [&](std::size_t piece, std::ptrdiff_t p) {
    auto [b, e] = pd.pieces[piece];
    return p >= static_cast<std::ptrdiff_t>(b) && p < static_cast<std::ptrdiff_t>(e) &&
           !covered[pd.order[static_cast<std::size_t>(p)]];
  };

  struct Pending {
    VertexId parent;
    std::size_t exit;
    Token label;
  };

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t zstar = pd.order[pos];
    if (covered[zstar]) continue;
    const std::size_t t = f.trees.size();
    const std::size_t piece = pd.piece_of[pos];
    const auto ipos = static_cast<std::ptrdiff_t>(pos);
    std::vector<std::size_t> m0{zstar};
    covered[zstar] = true;
    for (std::ptrdiff_t p = ipos - 1; m0.size() < 3 && available(piece, p); --p) m0.push_back(pd.order[static_cast<std::size_t>(p)]);
    for (std::ptrdiff_t p = ipos + 1; m0.size() < 3 && available(piece, p); ++p) m0.push_back(pd.order[static_cast<std::size_t>(p)]);
    for (auto e : m0) covered[e] = true;

    STree tree;
    LabeledTree labeled;
    tree.vertices.push_back({m0, std::nullopt});
    labeled.edge_label.push_back(std::nullopt);
    labeled.candidates.emplace_back();
    labeled.inadmissible.push_back(std::nullopt);
    f.build_log.emplace_back(t, 0, 0);
    std::vector<std::vector<Token>> history{{}};

    std::deque<Pending> queue;
    if (m0.size() == 3) {
      for (auto e : m0) queue.push_back({0, e, move_token(zstar, e)});
    }
    while (!queue.empty()) {
      Pending item = queue.front();
      queue.pop_front();
      const std::size_t y = partner(item.exit);
      if (covered[y]) continue;
      covered[y] = true;
      VertexId c = tree.shape.add_child(item.parent);
      history.push_back(history[item.parent]);
      history.back().push_back(item.label);
      labeled.edge_label.push_back(item.label);
      f.build_log.emplace_back(t, c, tree.shape.level(c));

      const auto py = static_cast<std::ptrdiff_t>(pd.position[y]);
      const std::size_t piece_y = pd.piece_of[pd.position[y]];
      auto [b, e] = pd.pieces[piece_y];
      std::vector<std::size_t> right, left;
      for (std::ptrdiff_t k = 1; k <= 4; ++k) {
        if (py + k < static_cast<std::ptrdiff_t>(e)) right.push_back(pd.order[static_cast<std::size_t>(py + k)]);
        if (py - k >= static_cast<std::ptrdiff_t>(b)) left.push_back(pd.order[static_cast<std::size_t>(py - k)]);
      }
      std::vector<Token> fv;
      for (auto v : right) fv.push_back(move_token(y, v));
      for (auto u : left) fv.push_back(move_token(y, u));
      if (fv.size() < 4) f.advisory = true;
      std::optional<Token> bad;
      if (!fv.empty()) bad = rule(history.back(), fv);
      labeled.candidates.push_back(fv);
      labeled.inadmissible.push_back(bad);

      std::vector<std::size_t> members{y};
      auto take = [&](const std::vector<std::size_t>& side) {
        for (auto u : side) {
          if (members.size() == 3) return;
          if (covered[u] || (bad && move_token(y, u) == *bad)) continue;
          members.push_back(u);
          covered[u] = true;
        }
      };
      take(right);
      take(left);
      tree.vertices.push_back({members, std::pair{item.exit, y}});
      if (members.size() == 3) {
        for (std::size_t k = 1; k < 3; ++k) queue.push_back({c, members[k], move_token(y, members[k])});
      }
    }
    labeled.tree = tree.shape;
    f.labels.push_back(std::move(labeled));
    f.trees.push_back(std::move(tree));
  }
  finish_census(f, n);
  return f;
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) if (c.name == name) return &c;
  return nullptr;
}

VerificationReport verify_forest(const Group& group, const TreeForest& forest, std::span<const Element> s,
                                 const Element& xi, std::size_t jobs) {
  VerificationReport rep;
  const std::size_t n = s.size();
  auto add = [&](std::string name, bool pass, std::string detail) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  bool in_range = true;
  for (const auto& t : forest.trees)
    for (const auto& v : t.vertices)
      for (auto e : v.members) in_range = in_range && e < n;
  add("indices", in_range, in_range ? "" : "vertex member outside the set");
  if (!in_range) return rep;

  // trees holding each element, and whether it sits in an end vertex there
  std::vector<std::vector<std::pair<std::size_t, bool>>> where(n);
  std::string size_detail, dup_detail;
  for (std::size_t ti = 0; ti < forest.trees.size(); ++ti) {
    const auto& t = forest.trees[ti];
    std::vector<int> seen(n, 0);
    for (VertexId v = 0; v < t.vertices.size(); ++v) {
      const auto& m = t.vertices[v].members;
      bool end = t.is_end(v);
      bool ok = end ? (m.size() == 1 || m.size() == 2) : m.size() == 3;
      if (!ok && size_detail.empty()) {
        size_detail = "tree " + std::to_string(ti) + " vertex " + std::to_string(v) + " has " + std::to_string(m.size()) +
                      (end ? " elements and no children" : " elements and children");
      }
      for (auto e : m) {
        if (seen[e]++ && dup_detail.empty()) dup_detail = "element " + std::to_string(e) + " twice in tree " + std::to_string(ti);
        where[e].emplace_back(ti, end);
      }
    }
  }
  std::size_t missing = 0;
  for (const auto& w : where) missing += w.empty();
  add("coverage", missing == 0, missing ? std::to_string(missing) + " element(s) in no tree" : "");
  add("vertex_sizes", size_detail.empty(), size_detail);
  add("disjoint_within_tree", dup_detail.empty(), dup_detail);

  std::string share_detail;
  for (std::size_t e = 0; e < n && share_detail.empty(); ++e) {
    std::vector<std::size_t> trees;
    bool all_end = true;
    for (auto [ti, end] : where[e]) {
      if (std::find(trees.begin(), trees.end(), ti) == trees.end()) trees.push_back(ti);
      all_end = all_end && end;
    }
    if (trees.size() <= 1) continue;
    if (forest.mode == ForestMode::P10) {
      share_detail = "element " + std::to_string(e) + " lies in " + std::to_string(trees.size()) + " trees";
    } else if (!all_end || trees.size() > 2) {
      share_detail = "element " + std::to_string(e) + " shared by " + std::to_string(trees.size()) + " trees" +
                     (all_end ? "" : " outside end vertices");
    }
  }
  add("sharing", share_detail.empty(), share_detail);

  std::string wit_detail;
  for (std::size_t ti = 0; ti < forest.trees.size() && wit_detail.empty(); ++ti) {
    const auto& t = forest.trees[ti];
    for (VertexId v = 1; v < t.vertices.size() && wit_detail.empty(); ++v) {
      const auto& w = t.vertices[v].witness;
      auto par = t.shape.parent(v);
      bool ok = w && par;
      if (ok) {
        const auto& pm = t.vertices[*par].members;
        const auto& vm = t.vertices[v].members;
        auto [x, y] = *w;
        ok = std::find(pm.begin(), pm.end(), x) != pm.end() && std::find(vm.begin(), vm.end(), y) != vm.end() &&
             (group.multiply(s[x], xi) == s[y] || group.multiply(s[y], xi) == s[x]);
      }
      if (!ok) wit_detail = "tree " + std::to_string(ti) + " vertex " + std::to_string(v) + " lacks a valid xi-neighbour pair";
    }
  }
  add("witnesses", wit_detail.empty(), wit_detail);

  bool order_ok = true;
  std::size_t last_tree = 0, last_level = 0;
  std::vector<std::vector<bool>> built(forest.trees.size());
  for (std::size_t ti = 0; ti < forest.trees.size(); ++ti) built[ti].assign(forest.trees[ti].vertices.size(), false);
  for (auto [ti, v, level] : forest.build_log) {
    if (ti >= forest.trees.size() || v >= built[ti].size() || ti < last_tree) {
      order_ok = false;
      break;
    }
    if (ti != last_tree) last_level = 0;
    auto par = forest.trees[ti].shape.parent(v);
    if (level < last_level || (par && !built[ti][*par]) || level != forest.trees[ti].shape.level(v)) order_ok = false;
    built[ti][v] = true;
    last_tree = ti;
    last_level = level;
  }
  for (const auto& b : built) order_ok = order_ok && std::all_of(b.begin(), b.end(), [](bool x) { return x; });
  add("build_order", order_ok, order_ok ? "" : "build log is not breadth-first tree by tree");

  if (forest.mode == ForestMode::P) {
    struct Pair {
      std::size_t a, b;
    };
    std::vector<Pair> pairs;
    for (const auto& t : forest.trees) {
      for (VertexId v = 0; v < t.vertices.size(); ++v)
        for (VertexId w = v + 1; w < t.vertices.size(); ++w)
          for (auto a : t.vertices[v].members)
            for (auto b : t.vertices[w].members) pairs.push_back({a, b});
    }
    std::atomic<std::int64_t> min_dist{std::numeric_limits<std::int64_t>::max()};
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();) {
        auto dist = static_cast<std::int64_t>(group.distance(s[pairs[i].a], s[pairs[i].b]));
        for (auto cur = min_dist.load(); dist < cur && !min_dist.compare_exchange_weak(cur, dist);) {
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < std::max<std::size_t>(1, jobs); ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    bool ok = pairs.empty() || min_dist.load() >= forest.r;
    add("cross_vertex_distance", ok,
        pairs.empty() ? "no cross-vertex pairs" : "minimum " + std::to_string(min_dist.load()) + " over " + std::to_string(pairs.size()) + " pairs");
  } else {
    std::string ap_detail;
    for (std::size_t ti = 0; ti < forest.labels.size() && ap_detail.empty(); ++ti) {
      if (auto bad = find_periodic_path(forest.labels[ti], 10)) {
        ap_detail = "tree " + std::to_string(ti) + " path of order " + std::to_string(bad->order);
      }
    }
    add("labels_10_aperiodic", ap_detail.empty(), ap_detail);
  }
  return rep;
}

}  // namespace tsg
