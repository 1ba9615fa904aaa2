#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "cli.hpp"
#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"
#include "tsg/repetition.hpp"
#include "tsg/sequence.hpp"
#include "tsg/ts_analysis.hpp"
#include "tsg/tsp.hpp"

namespace cli {

using namespace tsg;

namespace {

struct Log {
  bool ok = true;
  std::vector<std::string> lines;
  void check(bool pass, const std::string& what) {
    ok = ok && pass;
    lines.push_back((pass ? "ok   " : "FAIL ") + what);
  }
};

std::vector<Word> words_from(const json& j, int rank) {
  std::vector<Word> out;
  for (const auto& w : j) out.push_back(parse_word(w.get<std::string>(), rank));
  return out;
}

void replay_property(const json& r, const Context& ctx, Log& log) {
  if (r.at("witness").is_null()) {
    log.check(true, "no witness to replay");
    return;
  }
  auto g = Group::parse(r.at("group").get<std::string>(), ctx.limits);
  PropertySpec spec;
  spec.family = r.at("family").get<std::string>() == "P" ? PropertyFamily::P : PropertyFamily::PnPrime;
  spec.n = r.at("n").get<std::size_t>();
  spec.r = r.at("r").get<std::int64_t>();
  spec.xi = g.parse_element(r.at("xi").get<std::string>());
  auto w = witness_from(g, r.at("witness"));
  log.check(replay_witness(g, spec, w), "witness of length " + std::to_string(w.length) + " with k = " +
                                            std::to_string(w.xs.size()) + " replays");
}

void replay_gnp(const json& r, Log& log) {
  if (!r.at("found").get<bool>()) {
    log.check(true, "no sequence to replay");
    return;
  }
  const int n = r.at("n").get<int>();
  const auto p = r.at("p").get<std::int64_t>();
  const auto m = r.at("m").get<std::size_t>();
  auto xi = parse_word(r.at("xi").get<std::string>(), n);
  auto us = words_from(r.at("us"), n);
  auto xs = words_from(r.at("xs"), n);
  bool powers = us.size() == xs.size() && us.size() % 2 == 0;
  for (std::size_t i = 0; powers && i < us.size(); ++i) powers = us[i].length() == 1 && xs[i] == us[i].power(p);
  log.check(powers, "x_i = u_i^p for single letters u_i");
  if (!powers) return;
  Word product(n), rewritten(n);
  std::vector<Word> bases;
  for (std::size_t i = 0; i < us.size(); ++i) {
    product *= (i % 2 == 0 ? xi : xi.inverse()) * xs[i];
    bases.push_back(i % 2 == 0 ? xi * us[i] * xi.inverse() : us[i]);
    rewritten *= bases.back().power(p);
  }
  log.check(product == rewritten && format_word(product) == r.at("product").get<std::string>(),
            "product equals the rewritten form");
  bool balanced = true;
  for (std::size_t par = 0; par < 2; ++par) {
    for (Letter g = 1; g <= n; ++g) {
      long c = 0;
      for (std::size_t i = par; i < us.size(); i += 2) c += us[i][0] == g ? 1 : us[i][0] == -g ? -1 : 0;
      balanced = balanced && c == 0;
    }
  }
  log.check(balanced, "odd and even positions balanced");
  std::vector<Letter> seq;
  for (const auto& u : us) seq.push_back(u[0]);
  log.check(is_k_aperiodic(seq, m).aperiodic, std::to_string(m) + "-aperiodic");
  auto prod = [&](const std::vector<Word>& f, std::size_t from, std::size_t to) {
    Word out(n);
    for (std::size_t i = from; i < to; ++i) out *= f[i].power(p);
    return out;
  };
  std::vector<Word> cur = bases;
  bool steps = true;
  for (const auto& s : r.at("log")) {
    auto i = s.at("index").get<std::size_t>();
    auto x = parse_word(s.at("x").get<std::string>(), n), y = parse_word(s.at("y").get<std::string>(), n);
    if (i + 1 >= cur.size() || cur[i] != x || cur[i + 1] != y) {
      steps = false;
      break;
    }
    Word before = prod(cur, 0, cur.size()), prefix = prod(cur, 0, i);
    if (s.at("kind").get<std::string>() == "cancel") {
      steps = steps && y == x.inverse();
      cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i), cur.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else {
      std::swap(cur[i], cur[i + 1]);
      Word xp = x.power(p), yp = y.power(p);
      steps = steps && before == prefix * (xp * yp * xp.inverse() * yp.inverse()) * prefix.inverse() * prod(cur, 0, cur.size());
    }
  }
  log.check(steps && cur.empty(), "rewrite log reduces the product to the identity through [X^p, Y^p] steps");
}

void replay_tsp(const json& r, const json& config, const Context& ctx, Log& log) {
  auto g = Group::parse(config.at("group").get<std::string>(), ctx.limits);
  auto s = elements_from(g, r.at("elements"));
  auto order = r.at("order").get<std::vector<std::size_t>>();
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> all(s.size());
  std::iota(all.begin(), all.end(), 0);
  log.check(sorted == all, "order visits every element once");
  if (sorted != all) return;
  auto d = distance_matrix(g, s, ctx.jobs);
  auto L = r.at("L").get<std::int64_t>();
  log.check(tour_length(d, order) == L, "tour length " + std::to_string(L));
  if (r.at("exact").get<bool>()) log.check(tsp_exact(d, s.size()).length == L, "optimal");
}

void replay_experiment(const json& r, const json& config, const Context& ctx, Log& log) {
  auto g = Group::parse(r.at("group").get<std::string>(), ctx.limits);
  auto lambda = Rational::parse(r.at("lambda").get<std::string>());
  auto xi = g.parse_element(r.at("xi").get<std::string>());
  const auto cap = config.value("cap", kDefaultExactCap);
  std::size_t exact = 0, bad = 0, flags = 0;
  const auto& samples = r.at("per_sample");
  for (const auto& row : samples) {
    auto s = elements_from(g, row.at("set"));
    auto L = row.at("L").get<std::int64_t>();
    if (!is_xi_related(g, s, xi).related) ++bad;
    bool violation = L * lambda.den < lambda.num * static_cast<std::int64_t>(s.size());
    if (violation != row.at("violation").get<bool>()) ++flags;
    if (!row.at("L_exact").get<bool>() || s.size() > cap) continue;
    ++exact;
    if (tsp_exact(distance_matrix(g, s, ctx.jobs), cap).length != L) ++bad;
  }
  log.check(bad == 0, std::to_string(samples.size()) + " sets xi-related, " + std::to_string(exact) +
                          " exact tour lengths recomputed");
  log.check(flags == 0, "violation flags match L < lambda |S|");
}

void replay_forest(const json& r, const Context& ctx, Log& log) {
  auto g = Group::parse(r.at("group").get<std::string>(), ctx.limits);
  auto xi = g.parse_element(r.at("xi").get<std::string>());
  auto s = elements_from(g, r.at("set"));
  auto v = verify_forest(g, forest_from(r.at("forest")), s, xi, ctx.jobs);
  for (const auto& c : v.checks) log.check(c.pass, c.name + (c.detail.empty() ? "" : ": " + c.detail));
}

void replay_lemma4(const json& r, bool desk, Log& log) {
  auto xi = parse_word(r.at("xi").get<std::string>(), 2);
  auto v = verify_lemma4(xi, desk ? Lemma4Params::desk() : Lemma4Params::full());
  for (const auto& c : v.checks) log.check(c.pass, c.name + (c.detail.empty() ? "" : ": " + c.detail));
}

void replay_lemma5(const Word& xi, const json& xs_j, const json& eps_j, bool desk, const json& claim, Log& log,
                   const std::string& label) {
  auto p = desk ? Lemma5Params::desk() : Lemma5Params::full();
  p.check_xi = false;
  auto a = verify_lemma5(xi, words_from(xs_j, 2), eps_j.get<std::vector<int>>(), p);
  log.check(a.holds == claim.at("holds").get<bool>() && a.order == claim.at("order").get<std::size_t>(),
            label + ": order " + std::to_string(a.order) + (a.holds ? " below bound" : " at or above bound"));
}

// Re-reads the tree and label dump; token names are interned, so only equality matters.
void replay_tree(const json& r, const json& config, Log& log) {
  std::istringstream tree_in(r.at("tree").get<std::string>());
  auto tree = PlaneTernaryTree::read(tree_in);
  std::vector<std::optional<Token>> label(tree.size());
  std::map<std::string, Token> ids;
  std::istringstream labels_in(r.at("labels").get<std::string>());
  for (std::string line; std::getline(labels_in, line);) {
    std::istringstream row(line);
    std::size_t from = 0, to = 0;
    std::string token;
    if (!(row >> from >> to >> token)) continue;
    if (to >= tree.size() || tree.parent(to) != from) throw MalformedInput("label on a non-edge " + line);
    label[to] = ids.emplace(token, static_cast<Token>(ids.size())).first->second;
  }
  bool complete = true;
  for (VertexId v = 1; v < tree.size(); ++v) complete = complete && label[v].has_value();
  log.check(complete, std::to_string(tree.size()) + " vertices, every edge labeled");
  if (!complete) return;
  const bool three = config.value("mode", "3letter") == "3letter";
  const std::size_t k = three ? 1 : config.value("k", std::size_t{10});
  std::size_t worst = 0;
  auto visit = [&](std::span<const VertexId> path) {
    std::vector<Token> seq;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      seq.push_back(*label[tree.parent(path[i]) == path[i + 1] ? path[i] : path[i + 1]]);
    }
    worst = std::max(worst, max_power_order(seq).order);
  };
  if (three) {
    for (VertexId v = 0; v < tree.size(); ++v) {
      if (tree.children(v).empty()) visit(tree.root_path(v));
    }
  } else {
    for_each_simple_path(tree, visit);
  }
  log.check(worst <= k, std::string(three ? "root paths" : "simple paths") + " have no power above " +
                            std::to_string(k) + " (largest " + std::to_string(worst) + ")");
}

}  // namespace

std::pair<bool, std::vector<std::string>> replay_report(const json& report, const Context& ctx) {
  if (report.value("schema", 0) != 1) throw MalformedInput("not a schema 1 report");
  const auto command = report.at("command").get<std::string>();
  const auto& r = report.at("result");
  const auto& config = report.at("config");
  Log log;
  if (command == "property test") {
    replay_property(r, ctx, log);
  } else if (command == "property gnp") {
    replay_gnp(r, log);
  } else if (command == "tsp") {
    replay_tsp(r, config, ctx, log);
  } else if (command == "experiment ts-lambda") {
    replay_experiment(r, config, ctx, log);
  } else if (command == "forest build") {
    replay_forest(r, ctx, log);
  } else if (command == "xi construct") {
    replay_lemma4(r, config.value("desk_scale", false), log);
  } else if (command == "lemma5 verify") {
    const auto& in = r.at("inputs");
    replay_lemma5(parse_word(in.at("xi").get<std::string>(), 2), in.at("xs"), in.at("eps"),
                  config.value("desk_scale", false), r, log, "product");
  } else if (command == "burnside pipeline") {
    if (r.at("xi").is_null()) {
      log.check(true, "no xi to replay");
    } else {
      const bool desk = r.value("desk_scale", false);
      auto xi = parse_word(r.at("xi").get<std::string>(), 2);
      auto v = verify_lemma4(xi, desk ? Lemma4Params::desk() : Lemma4Params::full());
      log.check(v.pass() == r.at("lemma4").at("verification").at("pass").get<bool>(),
                "xi conditions " + std::string(v.pass() ? "hold" : "fail") + " as reported");
      std::size_t i = 0;
      for (const auto& s : r.at("samples")) {
        replay_lemma5(xi, s.at("xs"), s.at("eps"), desk, s, log, "sample " + std::to_string(i++));
      }
    }
  } else if (command == "seq thue") {
    auto w = r.at("word").get<std::string>();
    log.check(w == squarefree_ternary(w.size()), "prefix of the fixed point");
    log.check(max_power_order(std::vector<char>(w.begin(), w.end())).order <= 1, "square-free");
  } else if (command == "tree label") {
    replay_tree(r, config, log);
  } else {
    throw MalformedInput("nothing to replay for '" + command + "'");
  }
  return {log.ok, log.lines};
}

void add_replay_command(CLI::App& app, Action& action) {
  auto path = std::make_shared<std::string>();
  auto* sub = app.add_subcommand("replay", "Re-verify the witnesses recorded in a report");
  sub->add_option("file", *path, "Report JSON")->required();
  sub->callback([&action, path] {
    action = [path](const Context& ctx) {
      Timer timer;
      timer.stage("replay");
      auto report = read_json(*path);
      auto [ok, lines] = replay_report(report, ctx);
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      json result = {{"file", *path}, {"command", report.value("command", "")}, {"pass", ok}, {"checks", lines}};
      emit(ctx, envelope("replay", {{"file", *path}}, result, timer.finish()), text);
      return ok ? kOk : kCheckFailed;
    };
  });
}

}  // namespace cli
