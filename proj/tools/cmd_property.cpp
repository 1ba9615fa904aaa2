#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>

#include "cli.hpp"
#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"
#include "tsg/properties.hpp"

namespace cli {

using namespace tsg;

namespace {

// P, P1 (= P'), P10, or Pn with --n.
PropertySpec family_spec(const std::string& family, std::size_t n) {
  PropertySpec spec;
  if (family == "P") return spec;
  spec.family = PropertyFamily::PnPrime;
  if (family == "Pn") {
    spec.n = n;
    return spec;
  }
  std::string digits = family.substr(1);
  if (family.size() < 2 || family[0] != 'P' ||
      !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("family must be P, Pn or P<n>, got " + family);
  }
  spec.n = std::stoul(digits);
  return spec;
}

void test(CLI::App& prop, Action& action) {
  struct Opts {
    std::string family = "P";
    std::size_t n = 1;
    std::int64_t r = 1;
    std::string group = "free:2";
    std::string xi;
    bool from_lemma4 = false;
    bool desk = false;
    std::uint64_t lemma4_seed = 1;
    std::size_t xi_prefix = 0;
    std::size_t k_max = 3;
    std::uint64_t budget = 2'000'000;
    std::uint64_t seed = 1;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = prop.add_subcommand("test", "Search for a short product xi^e1 x1 ... xi^ek xk");
  sub->add_option("--family", o->family, "P, P1, P10 or Pn (with --n)");
  sub->add_option("--n", o->n, "Aperiodicity parameter for Pn");
  sub->add_option("--r", o->r, "Radius r")->required();
  sub->add_option("--group", o->group, "Group descriptor");
  auto* xi = sub->add_option("--xi", o->xi, "xi in the group's element format");
  auto* l4 = sub->add_flag("--xi-from-lemma4", o->from_lemma4, "Use the constructed long word (free:2)");
  xi->excludes(l4);
  sub->add_flag("--desk-scale", o->desk, "Desk-scale construction for --xi-from-lemma4");
  sub->add_option("--lemma4-seed", o->lemma4_seed, "Construction seed");
  sub->add_option("--xi-prefix", o->xi_prefix, "Keep only this many letters of the constructed word");
  sub->add_option("--k-max", o->k_max, "Longest product searched");
  sub->add_option("--budget", o->budget, "Products evaluated per k before switching to sampling");
  sub->add_option("--seed", o->seed, "Sampling seed");
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("xi");
      auto g = Group::parse(o->group, ctx.limits);
      PropertySpec spec = family_spec(o->family, o->n);
      spec.r = o->r;
      if (o->from_lemma4) {
        auto w = construct_xi_lemma4(o->lemma4_seed, o->desk ? Lemma4Params::desk() : Lemma4Params::full()).xi;
        if (o->xi_prefix > 0 && o->xi_prefix < w.length()) w = w.subword(0, o->xi_prefix);
        spec.xi = g.from_word(w);
      } else {
        if (o->xi.empty()) throw ConfigError("give --xi or --xi-from-lemma4");
        spec.xi = g.parse_element(o->xi);
      }
      timer.stage("search");
      SearchBudget b{o->k_max, o->budget, o->seed, ctx.jobs};
      auto v = test_property(g, spec, b);
      json result = {{"group", g.descriptor()},
                     {"family", spec.family == PropertyFamily::P ? "P" : "Pn"},
                     {"n", spec.n},
                     {"r", spec.r},
                     {"xi", g.format_element(spec.xi)},
                     {"outcome", v.counterexample ? "counterexample-found" : "no-counterexample-within-budget"},
                     {"evaluated", v.evaluated},
                     {"regimes", v.regimes},
                     {"witness", v.witness ? witness_json(g, *v.witness) : json(nullptr)}};
      json config = {{"family", o->family}, {"n", o->n},       {"r", o->r},
                     {"group", o->group},   {"xi", o->xi},     {"xi_from_lemma4", o->from_lemma4},
                     {"desk_scale", o->desk}, {"lemma4_seed", o->lemma4_seed}, {"xi_prefix", o->xi_prefix},
                     {"k_max", o->k_max},   {"budget", o->budget}, {"seed", o->seed}};
      std::ostringstream text;
      text << result["outcome"].get<std::string>() << " after " << v.evaluated << " products";
      if (v.witness) text << ", k = " << v.witness->xs.size() << ", length " << v.witness->length;
      text << "\n";
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      emit(c, envelope("property test", config, result, timer.finish()), text.str());
      return kOk;
    };
  });
}

void gnp(CLI::App& prop, Action& action) {
  struct Opts {
    std::size_t n = 2, p = 2, m = 1, k = 2;
    std::string xi = "a b a B";
    std::uint64_t nodes = 10'000'000;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = prop.add_subcommand("gnp", "Balanced aperiodic sequence trivial in the variety [X^p, Y^p] = 1");
  sub->add_option("--n", o->n, "Generators");
  sub->add_option("--p", o->p, "Exponent");
  sub->add_option("--m", o->m, "Aperiodicity target");
  sub->add_option("--k", o->k, "Pairs (sequence length 2k)");
  sub->add_option("--xi", o->xi, "xi as a word, or @file");
  sub->add_option("--node-budget", o->nodes, "Search nodes");
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("search");
      auto cert = gnp_counterexample(o->n, o->p, o->m, o->k, word_arg(o->xi, static_cast<int>(o->n)), o->nodes);
      json config = {{"n", o->n}, {"p", o->p}, {"m", o->m}, {"k", o->k}, {"xi", o->xi}, {"node_budget", o->nodes}};
      std::string text = cert.found ? "found; identity " + std::string(cert.identity_holds ? "holds" : "FAILS") +
                                          ", rewrite log " + (cert.log_valid ? "valid" : "INVALID") + "\n"
                                    : "no sequence within " + std::to_string(o->nodes) + " nodes\n";
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      emit(c, envelope("property gnp", config, gnp_json(cert), timer.finish()), text);
      if (!cert.found) return kOk;
      return cert.identity_holds && cert.log_valid && cert.balanced && cert.aperiodic ? kOk : kInternal;
    };
  });
}

}  // namespace

void add_property_commands(CLI::App& app, Action& action) {
  auto* prop = app.add_subcommand("property", "Property testers");
  prop->require_subcommand(1);
  test(*prop, action);
  gnp(*prop, action);
}

}  // namespace cli
