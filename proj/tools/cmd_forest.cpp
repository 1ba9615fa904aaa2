#include <memory>
#include <sstream>

#include "cli.hpp"
#include "tsg/errors.hpp"
#include "tsg/tree_partition.hpp"

namespace cli {

using namespace tsg;

namespace {

Element element_arg(const Group& g, const std::string& text) {
  if (!text.empty() && text[0] == '@') {
    auto lines = read_lines(text.substr(1));
    if (lines.empty()) throw MalformedInput(text.substr(1) + " holds no element");
    return g.parse_element(lines[0]);
  }
  return g.parse_element(text);
}

std::string census_text(const TreeForest& f, const VerificationReport& v) {
  std::ostringstream out;
  const auto& c = f.census;
  out << "trees " << c.trees << ", vertices " << c.vertices << ", end vertices " << c.distinct_end_vertices
      << " distinct; claimed bound " << f.bound.claimed.str() << ", cut length " << f.pieces.cut_length
      << (f.bound.premises_hold ? "" : " (premises fail)") << (f.advisory ? ", advisory" : "") << "\n";
  for (const auto& ch : v.checks) out << (ch.pass ? "pass " : "FAIL ") << ch.name << (ch.detail.empty() ? "" : ": " + ch.detail) << "\n";
  return out.str();
}

void build(CLI::App& forest, Action& action) {
  struct Opts {
    std::string group = "free:2";
    std::string mode = "P";
    std::int64_t r = 0;
    std::string set;
    std::string xi;
    bool revise = false;
    std::size_t cap = kDefaultExactCap;
    std::uint64_t seed = 1;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = forest.add_subcommand("build", "Partition a revised set into (S, xi)-trees");
  sub->add_option("--group", o->group, "Group descriptor");
  sub->add_option("--mode", o->mode, "P or P10")->check(CLI::IsMember({"P", "P10"}));
  sub->add_option("--r", o->r, "Radius r")->required();
  sub->add_option("--set", o->set, "Element file listing pairs x, x xi")->required();
  sub->add_option("--xi", o->xi, "xi, or @file")->required();
  sub->add_flag("--revise", o->revise, "Revise an arbitrary xi-related set first");
  sub->add_option("--cap", o->cap, "Largest set toured exactly");
  sub->add_option("--seed", o->seed, "Heuristic tour seed");
  sub->add_option("--out", o->out, "Report path (forest.json)");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("input");
      auto g = Group::parse(o->group, ctx.limits);
      auto xi = element_arg(g, o->xi);
      auto s = read_elements(g, o->set);
      if (o->revise) s = revised_elements(s, revise(g, s, xi));
      timer.stage("tour");
      auto d = distance_matrix(g, s, ctx.jobs);
      Tour tour = s.size() <= o->cap ? tsp_exact(d, o->cap) : tsp_heuristic(d, o->seed);
      timer.stage("forest");
      auto f = o->mode == "P" ? build_forest_P(g, s, xi, o->r, tour) : build_forest_P10(g, s, xi, o->r, tour);
      timer.stage("verify");
      auto v = verify_forest(g, f, s, xi, ctx.jobs);
      json result = {{"group", g.descriptor()},
                     {"xi", g.format_element(xi)},
                     {"set", elements_json(g, s)},
                     {"tour", {{"order", tour.order}, {"L", tour.length}, {"exact", tour.kind == TourKind::Exact}}},
                     {"forest", forest_json(g, f)},
                     {"verification", verification_json(v)}};
      json config = {{"group", o->group}, {"mode", o->mode}, {"r", o->r},       {"set", o->set},
                     {"xi", o->xi},       {"revise", o->revise}, {"cap", o->cap}, {"seed", o->seed}};
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      emit(c, envelope("forest build", config, result, timer.finish()), census_text(f, v));
      return v.pass() ? kOk : kCheckFailed;
    };
  });
}

void verify(CLI::App& forest, Action& action) {
  auto path = std::make_shared<std::string>();
  auto* sub = forest.add_subcommand("verify", "Re-check a forest report");
  sub->add_option("file", *path, "forest.json from forest build")->required();
  sub->callback([&action, path] {
    action = [path](const Context& ctx) {
      Timer timer;
      timer.stage("verify");
      auto report = read_json(*path);
      if (report.value("command", "") != "forest build") throw MalformedInput(*path + " is not a forest report");
      const auto& r = report.at("result");
      auto g = Group::parse(r.at("group").get<std::string>(), ctx.limits);
      auto xi = g.parse_element(r.at("xi").get<std::string>());
      auto s = elements_from(g, r.at("set"));
      auto f = forest_from(r.at("forest"));
      auto v = verify_forest(g, f, s, xi, ctx.jobs);
      json result = {{"file", *path}, {"verification", verification_json(v)}};
      emit(ctx, envelope("forest verify", {{"file", *path}}, result, timer.finish()), census_text(f, v));
      return v.pass() ? kOk : kCheckFailed;
    };
  });
}

}  // namespace

void add_forest_commands(CLI::App& app, Action& action) {
  auto* forest = app.add_subcommand("forest", "Tree partitions of revised sets");
  forest->require_subcommand(1);
  build(*forest, action);
  verify(*forest, action);
}

}  // namespace cli
