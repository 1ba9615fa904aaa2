#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "tsg/errors.hpp"
#include "tsg/repetition.hpp"
#include "tsg/sequence.hpp"
#include "tsg/ts_analysis.hpp"
#include "tsg/tsp.hpp"

namespace cli {

using namespace tsg;

namespace {

void seq_thue(CLI::App& seq, Action& action) {
  auto* sub = seq.add_subcommand("thue", "Square-free word over A, B, C");
  auto n = std::make_shared<std::size_t>(0);
  auto out = std::make_shared<std::string>();
  sub->add_option("--n", *n, "Length")->required();
  sub->add_option("--out", *out, "Write the word here instead of stdout");
  sub->callback([&action, n, out] {
    action = [n, out](const Context& ctx) {
      Timer timer;
      timer.stage("generate");
      auto w = squarefree_ternary(*n);
      auto order = max_power_order(std::vector<char>(w.begin(), w.end())).order;
      if (!out->empty()) write_file(*out, w + "\n");
      if (ctx.format == "json") {
        json result = {{"n", *n}, {"word", w}, {"max_power_order", order}};
        emit(ctx, envelope("seq thue", {{"n", *n}, {"out", *out}}, result, timer.finish()), "");
      } else if (out->empty()) {
        std::cout << w << "\n";
      }
      return kOk;
    };
  });
}

void tree_label(CLI::App& tree, Action& action) {
  struct Opts {
    std::string mode = "3letter";
    std::uint64_t seed = 1;
    std::size_t vertices = 40;
    std::size_t k = 10;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = tree.add_subcommand("label", "Label a random plane ternary tree");
  sub->add_option("--mode", o->mode, "3letter or adversarial")->check(CLI::IsMember({"3letter", "adversarial"}));
  sub->add_option("--seed", o->seed, "Tree and adversary seed");
  sub->add_option("--vertices", o->vertices, "Minimum number of vertices");
  sub->add_option("--k", o->k, "Aperiodicity checked on simple paths (adversarial mode)");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("label");
      auto shape = PlaneTernaryTree::random(o->vertices, o->seed);
      LabeledTree labeled;
      json check;
      std::function<std::string(Token)> name;
      if (o->mode == "3letter") {
        labeled = label_tree_3letters(shape);
        name = [](Token t) { return std::string(1, static_cast<char>('A' + t)); };
        // the labels read down any root path form the square-free word
        bool ok = true;
        for (VertexId v = 0; v < shape.size(); ++v) {
          if (!shape.children(v).empty()) continue;
          auto path = shape.root_path(v);
          ok = ok && max_power_order(labeled.labels_along(path)).order <= 1;
        }
        check = {{"root_paths_square_free", ok}};
      } else {
        std::mt19937_64 rng(o->seed);
        std::vector<std::vector<Token>> cands(shape.size());
        for (auto& c : cands) {
          std::vector<Token> all{0, 1, 2, 3, 4, 5};
          std::shuffle(all.begin(), all.end(), rng);
          c.assign(all.begin(), all.begin() + 4);
        }
        auto chooser = [&rng](VertexId, std::span<const Token> adm, std::size_t count, std::span<const Token>) {
          std::vector<Token> pool(adm.begin(), adm.end());
          std::shuffle(pool.begin(), pool.end(), rng);
          pool.resize(count);
          return pool;
        };
        labeled = label_tree_adversarial(shape, cands, chooser);
        name = [](Token t) { return std::to_string(t); };
        auto bad = find_periodic_path(labeled, o->k);
        check = {{"k", o->k}, {"paths_aperiodic", !bad}};
        if (bad) check["violation"] = {{"path", bad->path}, {"labels", bad->labels}, {"order", bad->order}};
      }
      std::ostringstream tree_text, labels_text;
      shape.write(tree_text);
      labeled.write_labels(labels_text, name);
      json result = {{"vertices", shape.size()}, {"tree", tree_text.str()}, {"labels", labels_text.str()}, {"check", check}};
      json config = {{"mode", o->mode}, {"seed", o->seed}, {"vertices", o->vertices}, {"k", o->k}};
      Context c = ctx;
      if (c.format.empty()) c.format = "text";
      emit(c, envelope("tree label", config, result, timer.finish()), tree_text.str() + "\n" + labels_text.str());
      return kOk;
    };
  });
}

void tsp(CLI::App& app, Action& action) {
  struct Opts {
    std::string group = "free:2";
    std::string set;
    bool exact = false;
    bool heuristic = false;
    std::size_t cap = kDefaultExactCap;
    std::uint64_t seed = 1;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tsp", "Shortest closed tour through a set of group elements");
  sub->add_option("--group", o->group, "Group descriptor");
  sub->add_option("--set", o->set, "Element file, one per line")->required();
  auto* ex = sub->add_flag("--exact", o->exact, "Held-Karp; fails above --cap");
  sub->add_flag("--heuristic", o->heuristic, "Nearest neighbour plus 2-opt")->excludes(ex);
  sub->add_option("--cap", o->cap, "Largest set solved exactly");
  sub->add_option("--seed", o->seed, "Heuristic seed");
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("distances");
      auto g = Group::parse(o->group, ctx.limits);
      auto s = read_elements(g, o->set);
      if (s.empty()) throw MalformedInput(o->set + " holds no elements");
      auto d = distance_matrix(g, s, ctx.jobs);
      timer.stage("tour");
      bool use_exact = o->exact || (!o->heuristic && s.size() <= o->cap);
      Tour t = use_exact ? tsp_exact(d, o->cap) : tsp_heuristic(d, o->seed);
      json result = {{"size", s.size()},
                     {"L", t.length},
                     {"exact", t.kind == TourKind::Exact},
                     {"order", t.order},
                     {"elements", elements_json(g, s)}};
      json config = {{"group", o->group}, {"set", o->set}, {"exact", o->exact}, {"heuristic", o->heuristic},
                     {"cap", o->cap},     {"seed", o->seed}};
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      std::string text = "L = " + std::to_string(t.length) + (use_exact ? " (exact)" : " (upper bound)") + "\n";
      emit(c, envelope("tsp", config, result, timer.finish()), text);
      return kOk;
    };
  });
}

std::vector<std::int64_t> parse_sides(const std::string& text) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw ConfigError("bad box side '" + part + "'");
    }
  }
  return out;
}

void experiment(CLI::App& app, Action& action) {
  struct Opts {
    std::string group = "free:2";
    std::string xi;
    std::string lambda;
    std::size_t samples = 200;
    std::uint64_t seed = 7;
    bool lprime = false;
    std::size_t max_size = 14;
    std::size_t cap = kDefaultExactCap;
    std::string box_sides;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* exp = app.add_subcommand("experiment", "Experiments");
  exp->require_subcommand(1);
  auto* sub = exp->add_subcommand("ts-lambda", "Sample xi-related sets and compare L(S) with lambda |S|");
  sub->add_option("--group", o->group, "Group descriptor");
  sub->add_option("--xi", o->xi, "xi in the group's element format")->required();
  sub->add_option("--lambda", o->lambda, "lambda as 2, 3/2 or 1.5")->required();
  sub->add_option("--samples", o->samples, "Number of sampled sets");
  sub->add_option("--seed", o->seed, "Sample i uses seed + i");
  sub->add_flag("--lprime", o->lprime, "Also compute L'(S)");
  sub->add_option("--max-size", o->max_size, "Largest sampled set");
  sub->add_option("--cap", o->cap, "Largest set solved exactly");
  sub->add_option("--box-sides", o->box_sides, "Comma-separated box sides (abelian groups) instead of sampling");
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("experiment");
      auto g = Group::parse(o->group, ctx.limits);
      auto xi = g.parse_element(o->xi);
      auto lambda = Rational::parse(o->lambda);
      ExperimentReport rep;
      if (!o->box_sides.empty()) {
        rep = box_experiment(g, xi, lambda, parse_sides(o->box_sides), o->cap, o->seed);
      } else {
        ExperimentConfig cfg;
        cfg.samples = o->samples;
        cfg.seed = o->seed;
        cfg.with_lprime = o->lprime;
        cfg.exact_cap = o->cap;
        cfg.jobs = ctx.jobs;
        cfg.sampler.max_size = o->max_size;
        rep = ts_lambda_experiment(g, xi, lambda, cfg);
      }
      json per = json::array();
      std::ostringstream csv;
      csv << "index,size,L,L_exact,Lprime,ratio,violation,lprime_violation\n";
      for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const auto& s = rep.samples[i];
        json row = {{"size", s.size()}, {"L", s.L}, {"L_exact", s.L_exact}, {"ratio", s.ratio()},
                    {"violation", s.violation}, {"set", elements_json(g, s.set)}};
        if (s.Lprime) {
          row["Lprime"] = *s.Lprime;
          row["lprime_violation"] = s.lprime_violation;
        }
        per.push_back(std::move(row));
        csv << i << ',' << s.size() << ',' << s.L << ',' << s.L_exact << ','
            << (s.Lprime ? std::to_string(*s.Lprime) : "") << ',' << s.ratio() << ',' << s.violation << ','
            << s.lprime_violation << "\n";
      }
      json result = {{"group", rep.group},
                     {"xi", rep.xi},
                     {"lambda", lambda.str()},
                     {"per_sample", std::move(per)},
                     {"min_ratio", rep.min_ratio},
                     {"violations", rep.violations},
                     {"lprime_violations", rep.lprime_violations}};
      json config = {{"group", o->group}, {"xi", o->xi},         {"lambda", o->lambda},
                     {"samples", o->samples}, {"seed", o->seed}, {"lprime", o->lprime},
                     {"max_size", o->max_size}, {"cap", o->cap}, {"box_sides", o->box_sides}};
      auto report = envelope("experiment ts-lambda", config, result, timer.finish());
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      if (c.format == "csv") {
        if (!c.report.empty()) {
          write_file(c.report, report.dump(2) + "\n");
        }
        std::cout << csv.str();
      } else {
        std::ostringstream text;
        text << rep.samples.size() << " samples, min L/|S| = " << rep.min_ratio << ", violations of L >= "
             << lambda.str() << "|S|: " << rep.violations.size() << "\n";
        emit(c, report, text.str());
      }
      return kOk;
    };
  });
}

}  // namespace

void add_basic_commands(CLI::App& app, Action& action) {
  auto* seq = app.add_subcommand("seq", "Sequences");
  seq->require_subcommand(1);
  seq_thue(*seq, action);
  auto* tree = app.add_subcommand("tree", "Tree labelings");
  tree->require_subcommand(1);
  tree_label(*tree, action);
  tsp(app, action);
  experiment(app, action);
}

}  // namespace cli
