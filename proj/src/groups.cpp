#include "tsg/groups.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <charconv>
#include <mutex>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "tsg/errors.hpp"

namespace tsg {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) { return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)); }

std::size_t hash_component(const Component& c) {
  std::size_t h = std::hash<Word>{}(c.word);
  for (auto x : c.coords) h = mix(h, std::hash<std::int64_t>{}(x));
  return h;
}

struct ComponentHash {
  std::size_t operator()(const Component& c) const noexcept { return hash_component(c); }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_positive(std::string_view text, std::string_view context) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < 1) {
    throw ConfigError("expected a positive integer in group descriptor `" + std::string(context) + "`");
  }
  return v;
}

std::int64_t parse_int(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw MalformedInput("bad integer `" + std::string(text) + "`");
  return v;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

// Exponent sums of a and b in a rank-2 word.
std::pair<std::int64_t, std::int64_t> exponent_sums(const Word& w) {
  std::int64_t a = 0, b = 0;
  for (Letter l : w.letters()) {
    if (l == 1) ++a; else if (l == -1) --a; else if (l == 2) ++b; else --b;
  }
  return {a, b};
}

std::size_t free_distance(const Word& u, const Word& v) {
  const auto& x = u.letters();
  const auto& y = v.letters();
  std::size_t l = 0;
  while (l < x.size() && l < y.size() && x[l] == y[l]) ++l;
  return x.size() + y.size() - 2 * l;
}

}  // namespace

std::size_t ElementHash::operator()(const Element& g) const noexcept {
  std::size_t h = 0;
  for (const auto& c : g.parts) h = mix(h, hash_component(c));
  return h;
}

struct Group::Memo {
  std::mutex mutex;
  std::unordered_map<Component, std::size_t, ComponentHash> lengths;
};

Group Group::free(int rank) {
  if (rank < 1) throw ConfigError("free group rank must be positive");
  Group g;
  g.factors_ = {{FactorKind::Free, rank}};
  g.build_generators();
  return g;
}

Group Group::abelian(int rank) {
  if (rank < 1) throw ConfigError("abelian rank must be positive");
  Group g;
  g.factors_ = {{FactorKind::Abelian, rank}};
  g.build_generators();
  return g;
}

Group Group::f2xz(int n) {
  if (n < 1) throw ConfigError("f2xz needs n >= 1");
  Group g;
  g.factors_ = {{FactorKind::F2xZ, n}};
  g.build_generators();
  return g;
}

Group Group::product(const std::vector<Group>& factors) {
  if (factors.empty()) throw ConfigError("empty product");
  Group g;
  for (const auto& f : factors) g.factors_.insert(g.factors_.end(), f.factors_.begin(), f.factors_.end());
  g.limits_ = factors.front().limits_;
  g.build_generators();
  return g;
}

Group Group::parse(std::string_view descriptor, GroupLimits limits) {
  std::string_view d = trim(descriptor);
  Group g = [&] {
    if (d.starts_with("prod(") && d.ends_with(")")) {
      std::vector<Group> parts;
      for (auto piece : split_top_level(d.substr(5, d.size() - 6), ',')) parts.push_back(parse(piece, limits));
      return product(parts);
    }
    auto colon = d.find(':');
    if (colon == std::string_view::npos) throw ConfigError("unknown group descriptor `" + std::string(d) + "`");
    std::string_view kind = d.substr(0, colon), arg = d.substr(colon + 1);
    if (kind == "free") return free(parse_positive(arg, d));
    if (kind == "abelian") return abelian(parse_positive(arg, d));
    if (kind == "f2xz") {
      if (arg.starts_with("n=")) arg.remove_prefix(2);
      return f2xz(parse_positive(arg, d));
    }
    throw ConfigError("unknown group descriptor `" + std::string(d) + "`");
  }();
  g.limits_ = limits;
  return g;
}

std::string Group::descriptor() const {
  auto one = [](const Factor& f) {
    switch (f.kind) {
      case FactorKind::Free: return "free:" + std::to_string(f.param);
      case FactorKind::Abelian: return "abelian:" + std::to_string(f.param);
      case FactorKind::F2xZ: return "f2xz:n=" + std::to_string(f.param);
    }
    return std::string();
  };
  if (factors_.size() == 1) return one(factors_[0]);
  std::string out = "prod(";
  for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "," : "") + one(factors_[i]);
  return out + ")";
}

Element Group::identity() const {
  Element e;
  for (const auto& f : factors_) {
    switch (f.kind) {
      case FactorKind::Free: e.parts.push_back({Word(f.param), {}}); break;
      case FactorKind::Abelian: e.parts.push_back({Word(1), std::vector<std::int64_t>(f.param, 0)}); break;
      case FactorKind::F2xZ: e.parts.push_back({Word(2), {0}}); break;
    }
  }
  return e;
}

void Group::build_generators() {
  memo_ = std::make_shared<Memo>();
  generators_.clear();
  generator_offset_.clear();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    generator_offset_.push_back(generators_.size());
    auto add = [&](Component c) {
      Element g = identity();
      g.parts[i] = std::move(c);
      generators_.push_back(g);
    };
    switch (f.kind) {
      case FactorKind::Free:
        for (Letter l = 1; l <= f.param; ++l) {
          add({Word::letter(l, Alphabet(f.param)), {}});
          add({Word::letter(-l, Alphabet(f.param)), {}});
        }
        break;
      case FactorKind::Abelian:
        for (int k = 0; k < f.param; ++k) {
          for (int s : {1, -1}) {
            std::vector<std::int64_t> v(f.param, 0);
            v[k] = s;
            add({Word(1), v});
          }
        }
        break;
      case FactorKind::F2xZ: {
        Alphabet two(2);
        add({Word::letter(1, two), {0}});
        add({Word::letter(-1, two), {0}});
        add({Word::letter(2, two), {0}});
        add({Word::letter(-2, two), {0}});
        Word an = Word::letter(1, two).power(f.param);
        add({an, {1}});
        add({an.inverse(), {-1}});
        break;
      }
    }
  }
}

Element Group::multiply(const Element& g, const Element& h) const {
  Element out = g;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto& c = out.parts[i];
    const auto& d = h.parts[i];
    if (factors_[i].kind != FactorKind::Abelian) c.word *= d.word;
    for (std::size_t k = 0; k < c.coords.size(); ++k) c.coords[k] += d.coords[k];
  }
  return out;
}

Element Group::inverse(const Element& g) const {
  Element out = g;
  for (auto& c : out.parts) {
    c.word = c.word.inverse();
    for (auto& x : c.coords) x = -x;
  }
  return out;
}

std::size_t Group::length(const Element& g) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& c = g.parts[i];
    switch (factors_[i].kind) {
      case FactorKind::Free: total += c.word.length(); break;
      case FactorKind::Abelian:
        for (auto x : c.coords) total += static_cast<std::size_t>(x < 0 ? -x : x);
        break;
      case FactorKind::F2xZ: total += f2xz_length(factors_[i].param, c); break;
    }
  }
  return total;
}

std::size_t Group::f2xz_length(int n, const Component& target, std::vector<std::size_t>* path) const {
  if (!path) {
    std::lock_guard lock(memo_->mutex);
    Component key{target.word, {target.coords[0], n}};
    if (auto it = memo_->lengths.find(key); it != memo_->lengths.end()) return it->second;
  }
  const std::int64_t nn = n;
  const auto [ta, tb] = exponent_sums(target.word);
  const std::int64_t tz = target.coords[0];

  // Lower bound on the steps from s to target. The abelianization forces
  // |b-steps| >= |db|, |t-steps| >= |dz| and |a-steps| >= |da - n dz|; each
  // step changes the free length by at most n (t) or 1 (a, b), and the step
  // counts have fixed parities, so missing free length costs pairs of t-steps.
  auto estimate = [&](const Word& w, std::int64_t z, std::int64_t a, std::int64_t b) {
    std::int64_t da = ta - a, db = tb - b, dz = tz - z;
    std::int64_t steps_b = std::abs(db), steps_t = std::abs(dz), steps_a = std::abs(da - nn * dz);
    std::int64_t h = steps_a + steps_b + steps_t;
    std::int64_t missing = static_cast<std::int64_t>(free_distance(w, target.word)) - (steps_a + steps_b + nn * steps_t);
    if (missing > 0) h += 2 * (((missing + 1) / 2 + nn - 1) / nn);
    return h;
  };

  struct Node {
    Component state;
    std::int64_t a, b;
    std::size_t parent;
    std::size_t step;
  };
  struct Entry {
    std::int64_t f, g;
    std::size_t id;
    bool operator<(const Entry& o) const { return f != o.f ? f > o.f : g < o.g; }
  };
  Alphabet two(2);
  const Word an = Word::letter(1, two).power(n);
  const std::array<std::pair<Word, std::int64_t>, 6> steps{{{Word::letter(1, two), 0},
                                                           {Word::letter(-1, two), 0},
                                                           {Word::letter(2, two), 0},
                                                           {Word::letter(-2, two), 0},
                                                           {an, 1},
                                                           {an.inverse(), -1}}};
  const std::array<std::pair<std::int64_t, std::int64_t>, 6> sums{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {nn, 0}, {-nn, 0}}};

  std::vector<Node> nodes;
  std::vector<std::int64_t> best;
  std::unordered_map<Component, std::size_t, ComponentHash> index;
  std::priority_queue<Entry> open;
  nodes.push_back({Component{Word(2), {0}}, 0, 0, 0, 0});
  best.push_back(0);
  index.emplace(nodes[0].state, 0);
  open.push({estimate(nodes[0].state.word, 0, 0, 0), 0, 0});
  std::size_t settled = 0;
  while (!open.empty()) {
    Entry e = open.top();
    open.pop();
    if (e.g != best[e.id]) continue;
    const Node cur = nodes[e.id];
    if (cur.state.word == target.word && cur.state.coords[0] == tz) {
      if (path) {
        path->clear();
        for (std::size_t id = e.id; id != 0; id = nodes[id].parent) path->push_back(nodes[id].step);
        std::reverse(path->begin(), path->end());
      }
      std::lock_guard lock(memo_->mutex);
      memo_->lengths.emplace(Component{target.word, {tz, n}}, static_cast<std::size_t>(e.g));
      return static_cast<std::size_t>(e.g);
    }
    if (++settled > limits_.search_nodes) {
      auto upper = static_cast<std::int64_t>(target.word.length()) + (nn + 1) * std::abs(tz);
      throw ResourceLimit("F2 x Z length search exceeded " + std::to_string(limits_.search_nodes) + " nodes", upper);
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
      Node next{{cur.state.word * steps[k].first, {cur.state.coords[0] + steps[k].second}},
                cur.a + sums[k].first,
                cur.b + sums[k].second,
                e.id,
                k};
      std::int64_t g = e.g + 1;
      auto [it, inserted] = index.try_emplace(next.state, nodes.size());
      if (!inserted && best[it->second] <= g) continue;
      std::int64_t h = estimate(next.state.word, next.state.coords[0], next.a, next.b);
      if (inserted) {
        nodes.push_back(std::move(next));
        best.push_back(g);
      } else {
        best[it->second] = g;
        nodes[it->second].parent = e.id;
        nodes[it->second].step = k;
      }
      open.push({g + h, g, it->second});
    }
  }
  throw InternalError("F2 x Z search exhausted without reaching the target");
}

std::vector<std::size_t> Group::geodesic(const Element& g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& c = g.parts[i];
    const std::size_t base = generator_offset_[i];
    switch (factors_[i].kind) {
      case FactorKind::Free:
        // generators are listed a_1, a_1^-1, a_2, ...
        for (Letter l : c.word.letters()) out.push_back(base + 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0));
        break;
      case FactorKind::Abelian:
        for (std::size_t k = 0; k < c.coords.size(); ++k) {
          for (std::int64_t s = 0; s < std::abs(c.coords[k]); ++s) out.push_back(base + 2 * k + (c.coords[k] < 0 ? 1 : 0));
        }
        break;
      case FactorKind::F2xZ: {
        std::vector<std::size_t> steps;
        f2xz_length(factors_[i].param, c, &steps);
        for (auto s : steps) out.push_back(base + s);
        break;
      }
    }
  }
  return out;
}

Ball Group::ball(const Element& center, std::size_t r) const {
  Ball out{center, r, {}, {}};
  std::unordered_set<Element, ElementHash> seen{identity()};
  std::vector<Element> layer{identity()};
  std::vector<Element> found{identity()};
  std::vector<std::size_t> dist{0};
  for (std::size_t d = 1; d <= r; ++d) {
    std::vector<Element> next;
    for (const auto& g : layer) {
      for (const auto& s : generators_) {
        Element h = multiply(g, s);
        if (!seen.insert(h).second) continue;
        if (seen.size() > limits_.ball_elements) {
          throw ResourceLimit("ball of radius " + std::to_string(r) + " exceeds " + std::to_string(limits_.ball_elements) +
                              " elements");
        }
        next.push_back(h);
        found.push_back(h);
        dist.push_back(d);
      }
    }
    layer = std::move(next);
  }
  for (auto& g : found) out.elements.push_back(multiply(center, g));
  out.distance = std::move(dist);
  return out;
}

Element Group::random_walk(std::mt19937_64& rng, std::size_t steps) const {
  Element g = identity();
  std::uniform_int_distribution<std::size_t> pick(0, generators_.size() - 1);
  for (std::size_t i = 0; i < steps; ++i) g = multiply(g, generators_[pick(rng)]);
  return g;
}

Element Group::parse_element(std::string_view text) const {
  auto pieces = split_top_level(text, '|');
  if (pieces.size() != factors_.size()) {
    throw MalformedInput("element needs " + std::to_string(factors_.size()) + " components separated by `|`");
  }
  Element g = identity();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    std::string_view p = trim(pieces[i]);
    auto& c = g.parts[i];
    switch (f.kind) {
      case FactorKind::Free: c.word = parse_word(p, f.param); break;
      case FactorKind::Abelian: {
        if (p.empty()) break;
        auto xs = split_top_level(p, ',');
        if (xs.size() != static_cast<std::size_t>(f.param)) {
          throw MalformedInput("abelian component needs " + std::to_string(f.param) + " coordinates");
        }
        for (std::size_t k = 0; k < xs.size(); ++k) c.coords[k] = parse_int(xs[k]);
        break;
      }
      case FactorKind::F2xZ: {
        auto semi = p.find(';');
        c.word = parse_word(p.substr(0, semi), 2);
        if (semi != std::string_view::npos) c.coords[0] = parse_int(p.substr(semi + 1));
        break;
      }
    }
  }
  return g;
}

std::string Group::format_element(const Element& g) const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += " | ";
    const auto& c = g.parts[i];
    switch (factors_[i].kind) {
      case FactorKind::Free: out += format_word(c.word); break;
      case FactorKind::Abelian:
        for (std::size_t k = 0; k < c.coords.size(); ++k) out += (k ? "," : "") + std::to_string(c.coords[k]);
        break;
      case FactorKind::F2xZ: out += format_word(c.word) + " ; " + std::to_string(c.coords[0]); break;
    }
  }
  return out;
}

Element Group::from_word(const Word& w) const {
  if (factors_[0].kind == FactorKind::Abelian) throw PreconditionError("first factor has no word part");
  Element g = identity();
  g.parts[0].word = Word::reduce(w.letters(), g.parts[0].word.alphabet());
  return g;
}

}  // namespace tsg
