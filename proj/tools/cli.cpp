#include "cli.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tsg/errors.hpp"

namespace cli {

using namespace tsg;

GroupLimits limits_from_env() {
  GroupLimits limits;
  const char* raw = std::getenv("TS_GROUPS_BUDGET_MB");
  if (!raw || !*raw) return limits;
  std::size_t mb = 0;
  try {
    std::size_t used = 0;
    mb = std::stoul(raw, &used);
    if (used != std::string(raw).size() || mb == 0) throw std::invalid_argument(raw);
  } catch (const std::exception&) {
    throw ConfigError(std::string("TS_GROUPS_BUDGET_MB must be a positive integer, got ") + raw);
  }
  // rough per-entry footprints: a ball element with its hash slot, an A* node
  limits.ball_elements = mb * 1024 * 1024 / 256;
  limits.search_nodes = mb * 1024 * 1024 / 128;
  return limits;
}

void Timer::stage(const std::string& name) {
  auto now = std::chrono::steady_clock::now();
  if (!current_.empty()) done_.emplace_back(current_, std::chrono::duration<double>(now - start_).count());
  current_ = name;
  start_ = now;
}

json Timer::finish() {
  stage("");
  json out = json::object();
  for (auto& [name, s] : done_) out[name] = s;
  return out;
}

json envelope(const std::string& command, json config, json result, json timings) {
  std::time_t now = std::time(nullptr);
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  if (!config.contains("seed")) config["seed"] = nullptr;
  return json{{"schema", 1},
              {"tool", "ts-groups"},
              {"version", TSG_VERSION},
              {"command", command},
              {"config", std::move(config)},
              {"result", std::move(result)},
              {"run", {{"timestamp", stamp.str()}, {"timings_s", std::move(timings)}}}};
}

void emit(const Context& ctx, const json& report, const std::string& text) {
  if (!ctx.report.empty()) {
    write_file(ctx.report, report.dump(2) + "\n");
    if (ctx.format == "text" && !text.empty()) std::cout << text;
    return;
  }
  if (ctx.format == "text" && !text.empty()) {
    std::cout << text;
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw ConfigError("cannot write " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

std::vector<Element> read_elements(const Group& g, const std::string& path) {
  std::vector<Element> out;
  for (const auto& line : read_lines(path)) out.push_back(g.parse_element(line == "1" || line == "e" ? "" : line));
  return out;
}

Word word_arg(const std::string& text, int rank) {
  if (!text.empty() && text[0] == '@') {
    auto lines = read_lines(text.substr(1));
    if (lines.empty()) throw MalformedInput(text.substr(1) + " holds no word");
    return parse_word(lines[0], rank);
  }
  return parse_word(text, rank);
}

json elements_json(const Group& g, const std::vector<Element>& s) {
  json out = json::array();
  for (const auto& e : s) out.push_back(g.format_element(e));
  return out;
}

std::vector<Element> elements_from(const Group& g, const json& j) {
  std::vector<Element> out;
  for (const auto& e : j) out.push_back(g.parse_element(e.get<std::string>()));
  return out;
}

namespace {

json tokens_json(const std::optional<Token>& t) { return t ? json(*t) : json(nullptr); }
std::optional<Token> token_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<Token>();
}

}  // namespace

json forest_json(const Group& g, const TreeForest& f) {
  (void)g;
  json pieces = {{"order", f.pieces.order},
                 {"cuts", f.pieces.cuts},
                 {"pieces", f.pieces.pieces},
                 {"removed", f.pieces.removed},
                 {"threshold", f.pieces.threshold.str()},
                 {"total_length", f.pieces.total_length},
                 {"cut_length", f.pieces.cut_length}};
  json trees = json::array();
  for (std::size_t t = 0; t < f.trees.size(); ++t) {
    const auto& tree = f.trees[t];
    json vs = json::array();
    for (VertexId v = 0; v < tree.vertices.size(); ++v) {
      const auto& vx = tree.vertices[v];
      auto par = tree.shape.parent(v);
      json jv = {{"id", v},
                 {"parent", par ? json(*par) : json(nullptr)},
                 {"level", tree.shape.level(v)},
                 {"members", vx.members},
                 {"witness", vx.witness ? json::array({vx.witness->first, vx.witness->second}) : json(nullptr)},
                 {"end", tree.is_end(v)}};
      if (t < f.labels.size()) {
        const auto& lab = f.labels[t];
        jv["edge_label"] = tokens_json(lab.edge_label[v]);
        jv["candidates"] = lab.candidates[v];
        jv["inadmissible"] = tokens_json(lab.inadmissible[v]);
      }
      vs.push_back(std::move(jv));
    }
    trees.push_back({{"vertices", std::move(vs)}});
  }
  json log = json::array();
  for (auto [t, v, level] : f.build_log) log.push_back({t, v, level});
  const auto& c = f.census;
  return {{"mode", f.mode == ForestMode::P ? "P" : "P10"},
          {"r", f.r},
          {"pieces", std::move(pieces)},
          {"segments", f.segments},
          {"trees", std::move(trees)},
          {"census",
           {{"trees", c.trees},
            {"vertices", c.vertices},
            {"end_vertices", c.end_vertices},
            {"distinct_end_vertices", c.distinct_end_vertices},
            {"v_far", c.v_far},
            {"v_near", c.v_near},
            {"ends_ok", c.ends_ok},
            {"v_far_ok", c.v_far_ok},
            {"v_near_ok", c.v_near_ok}}},
          {"bound",
           {{"claimed", f.bound.claimed.str()},
            {"intermediate", f.bound.intermediate.str()},
            {"tour_exact", f.bound.tour_exact},
            {"premises_hold", f.bound.premises_hold}}},
          {"advisory", f.advisory},
          {"build_log", std::move(log)},
          {"labeled", !f.labels.empty()}};
}

TreeForest forest_from(const json& j) {
  TreeForest f;
  f.mode = j.at("mode").get<std::string>() == "P" ? ForestMode::P : ForestMode::P10;
  f.r = j.at("r").get<std::int64_t>();
  const auto& p = j.at("pieces");
  f.pieces.order = p.at("order").get<std::vector<std::size_t>>();
  f.pieces.cuts = p.at("cuts").get<std::vector<std::size_t>>();
  f.pieces.pieces = p.at("pieces").get<std::vector<std::pair<std::size_t, std::size_t>>>();
  f.pieces.removed = p.at("removed").get<std::vector<std::size_t>>();
  f.pieces.threshold = Rational::parse(p.at("threshold").get<std::string>());
  f.pieces.total_length = p.at("total_length").get<std::int64_t>();
  f.pieces.cut_length = p.at("cut_length").get<std::int64_t>();
  f.pieces.position.assign(f.pieces.order.size(), 0);
  f.pieces.piece_of.assign(f.pieces.order.size(), 0);
  for (std::size_t i = 0; i < f.pieces.order.size(); ++i) {
    if (f.pieces.order[i] >= f.pieces.order.size()) throw MalformedInput("piece order indexes outside the set");
    f.pieces.position[f.pieces.order[i]] = i;
  }
  for (std::size_t k = 0; k < f.pieces.pieces.size(); ++k) {
    auto [b, e] = f.pieces.pieces[k];
    for (std::size_t i = b; i < e && i < f.pieces.piece_of.size(); ++i) f.pieces.piece_of[i] = k;
  }
  f.segments = j.at("segments").get<std::vector<std::pair<std::size_t, std::size_t>>>();
  const bool labeled = j.value("labeled", false);
  for (const auto& jt : j.at("trees")) {
    STree tree;
    LabeledTree lab;
    for (const auto& jv : jt.at("vertices")) {
      const auto id = jv.at("id").get<VertexId>();
      if (jv.at("parent").is_null()) {
        if (id != 0) throw MalformedInput("only vertex 0 may be an origin");
      } else {
        auto par = jv.at("parent").get<VertexId>();
        if (par >= tree.vertices.size() || tree.shape.add_child(par) != id) {
          throw MalformedInput("vertex ids must follow their parents in order");
        }
      }
      STreeVertex vx;
      vx.members = jv.at("members").get<std::vector<std::size_t>>();
      if (!jv.at("witness").is_null()) {
        auto w = jv.at("witness").get<std::vector<std::size_t>>();
        if (w.size() != 2) throw MalformedInput("a witness is a pair");
        vx.witness = std::pair{w[0], w[1]};
      }
      tree.vertices.push_back(std::move(vx));
      if (labeled) {
        lab.edge_label.push_back(token_from(jv.at("edge_label")));
        lab.candidates.push_back(jv.at("candidates").get<std::vector<Token>>());
        lab.inadmissible.push_back(token_from(jv.at("inadmissible")));
      }
    }
    if (labeled) {
      lab.tree = tree.shape;
      f.labels.push_back(std::move(lab));
    }
    f.trees.push_back(std::move(tree));
  }
  for (const auto& e : j.at("build_log")) {
    f.build_log.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<VertexId>(), e.at(2).get<std::size_t>());
  }
  f.advisory = j.value("advisory", false);
  return f;
}

json verification_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"pass", r.pass()}, {"checks", std::move(checks)}};
}

json witness_json(const Group& g, const PropertyWitness& w) {
  return {{"k", w.xs.size()}, {"signs", w.signs}, {"xs", elements_json(g, w.xs)}, {"length", w.length}};
}

PropertyWitness witness_from(const Group& g, const json& j) {
  PropertyWitness w;
  w.signs = j.at("signs").get<std::vector<int>>();
  w.xs = elements_from(g, j.at("xs"));
  w.length = j.at("length").get<std::int64_t>();
  return w;
}

json gnp_json(const GnpCertificate& c) {
  auto words = [](const std::vector<Word>& ws) {
    json out = json::array();
    for (const auto& w : ws) out.push_back(format_word(w));
    return out;
  };
  json log = json::array();
  for (const auto& s : c.log) {
    log.push_back({{"kind", s.kind == RewriteStep::Swap ? "swap" : "cancel"},
                   {"index", s.index},
                   {"x", format_word(s.x)},
                   {"y", format_word(s.y)}});
  }
  return {{"found", c.found},
          {"n", c.n},
          {"p", c.p},
          {"m", c.m},
          {"k", c.k},
          {"xi", format_word(c.xi)},
          {"us", words(c.us)},
          {"xs", words(c.xs)},
          {"product", format_word(c.product)},
          {"rewritten", format_word(c.rewritten)},
          {"identity_holds", c.identity_holds},
          {"balanced", c.balanced},
          {"aperiodic", c.aperiodic},
          {"log", std::move(log)},
          {"log_valid", c.log_valid},
          {"nodes", c.nodes}};
}

}  // namespace cli
