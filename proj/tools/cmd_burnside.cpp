#include <memory>
#include <sstream>

#include "cli.hpp"
#include "tsg/burnside.hpp"
#include "tsg/errors.hpp"

namespace cli {

using namespace tsg;

namespace {

json lemma4_json(const Lemma4Result& r) {
  return {{"xi", format_word(r.xi)},
          {"length", r.xi.length()},
          {"d_positions", r.d_positions},
          {"b_count", r.b_positions.size()},
          {"attempts", r.attempts},
          {"verification", verification_json(r.report)},
          {"notes", r.notes}};
}

const char* case_name(Lemma5Case c) {
  switch (c) {
    case Lemma5Case::None: return "none";
    case Lemma5Case::Short: return "case1-short-period";
    case Lemma5Case::Long: return "case2-long-period";
  }
  return "none";
}

json lemma5_json(const Lemma5Analysis& a) {
  json blocks = json::array();
  for (const auto& b : a.blocks) {
    blocks.push_back({{"xi_begin", b.xi_begin}, {"xi_length", b.xi_length}, {"u_length", b.u_length},
                      {"contiguous", b.contiguous}});
  }
  json out = {{"holds", a.holds},
              {"order", a.order},
              {"reduced_length", a.reduced_length},
              {"structure_ok", a.structure_ok},
              {"case", case_name(a.violation_case)},
              {"blocks", std::move(blocks)}};
  if (a.witness) {
    out["witness"] = {{"start", a.witness->base.start}, {"period", a.witness->base.length},
                      {"exponent", a.witness->exponent}};
  }
  if (a.witness_blocks) out["witness_blocks"] = {a.witness_blocks->first, a.witness_blocks->second};
  if (a.xi_report) out["xi_conditions"] = verification_json(*a.xi_report);
  return out;
}

std::vector<int> parse_eps(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '+') out.push_back(1);
    else if (c == '-') out.push_back(-1);
    else if (c != ' ' && c != ',') throw ConfigError(std::string("eps takes + and - only, got '") + c + "'");
  }
  return out;
}

void xi_construct(CLI::App& app, Action& action) {
  struct Opts {
    std::uint64_t seed = 1;
    bool desk = false;
    std::string out = "xi.word";
  };
  auto o = std::make_shared<Opts>();
  auto* xi = app.add_subcommand("xi", "The long word xi");
  xi->require_subcommand(1);
  auto* sub = xi->add_subcommand("construct", "Build xi and verify its conditions");
  sub->add_option("--seed", o->seed, "Selection seed");
  sub->add_flag("--desk-scale", o->desk, "N around 1000 instead of 10000");
  sub->add_option("--out", o->out, "Word file");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("construct");
      auto r = construct_xi_lemma4(o->seed, o->desk ? Lemma4Params::desk() : Lemma4Params::full());
      write_file(o->out, format_word(r.xi) + "\n");
      json config = {{"seed", o->seed}, {"desk_scale", o->desk}, {"out", o->out}};
      std::string text = "wrote " + o->out + " (|xi| = " + std::to_string(r.xi.length()) + ", |D| = " +
                         std::to_string(r.d_positions.size()) + ")\n";
      emit(ctx, envelope("xi construct", config, lemma4_json(r), timer.finish()), text);
      return r.report.pass() ? kOk : kInternal;
    };
  });
}

void lemma5(CLI::App& app, Action& action) {
  struct Opts {
    std::string xi;
    std::string xs;
    std::string eps;
    bool desk = false;
    bool waive = false;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* l5 = app.add_subcommand("lemma5", "Aperiodicity of products with xi");
  l5->require_subcommand(1);
  auto* sub = l5->add_subcommand("verify", "Check that xi^e1 x1 ... xi^ek xk reduces to a word without high powers");
  sub->add_option("--xi", o->xi, "Word file for xi")->required();
  sub->add_option("--xs", o->xs, "Word file, one x_i per line")->required();
  sub->add_option("--eps", o->eps, "Signs, e.g. +-+; default all +");
  sub->add_flag("--desk-scale", o->desk, "Power bound 50, |x_i| <= 96, desk-scale xi conditions");
  sub->add_flag("--waive-xi", o->waive, "Skip re-checking the conditions on xi");
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("input");
      auto xi = word_arg("@" + o->xi, 2);
      std::vector<Word> xs;
      for (const auto& line : read_lines(o->xs)) xs.push_back(parse_word(line, 2));
      auto eps = o->eps.empty() ? std::vector<int>(xs.size(), 1) : parse_eps(o->eps);
      auto p = o->desk ? Lemma5Params::desk() : Lemma5Params::full();
      p.check_xi = !o->waive;
      timer.stage("verify");
      auto a = verify_lemma5(xi, xs, eps, p);
      json result = lemma5_json(a);
      result["power_bound"] = p.power_bound;
      result["inputs"] = {{"xi", format_word(xi)}, {"xs", json::array()}, {"eps", eps}};
      for (const auto& x : xs) result["inputs"]["xs"].push_back(format_word(x));
      json config = {{"xi", o->xi}, {"xs", o->xs}, {"eps", o->eps}, {"desk_scale", o->desk}, {"waive_xi", o->waive}};
      std::ostringstream text;
      text << (a.holds ? "holds" : "VIOLATED") << ": max power order " << a.order << " (bound " << p.power_bound
           << "), reduced length " << a.reduced_length << ", case " << case_name(a.violation_case) << "\n";
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      emit(c, envelope("lemma5 verify", config, result, timer.finish()), text.str());
      return a.holds ? kOk : kCheckFailed;
    };
  });
}

void pipeline(CLI::App& app, Action& action) {
  struct Opts {
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    std::size_t k_max = 20;
    bool desk = false;
    std::string fault = "none";
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* b = app.add_subcommand("burnside", "Free Burnside group chain");
  b->require_subcommand(1);
  auto* sub = b->add_subcommand("pipeline", "xi construction, sampling, product checks, constants");
  sub->add_option("--samples", o->samples, "Sampled x sequences");
  sub->add_option("--seed", o->seed, "Seed for xi and the samples");
  sub->add_option("--k-max", o->k_max, "Longest sequence");
  sub->add_flag("--desk-scale", o->desk, "Desk-scale parameters");
  sub->add_option("--fault", o->fault, "none, affix or power")->check(CLI::IsMember({"none", "affix", "power"}));
  sub->add_option("--out", o->out, "Report path");
  sub->callback([&action, o] {
    action = [o](const Context& ctx) {
      Timer timer;
      timer.stage("pipeline");
      BurnsideConfig cfg;
      cfg.samples = o->samples;
      cfg.seed = o->seed;
      cfg.k_max = o->k_max;
      cfg.desk = o->desk;
      cfg.jobs = ctx.jobs;
      cfg.fault = o->fault == "affix" ? BurnsideFault::Affix
                  : o->fault == "power" ? BurnsideFault::Power
                                        : BurnsideFault::None;
      auto rep = burnside_pipeline(cfg);
      json stages = json::array();
      json timings = timer.finish();
      std::ostringstream text;
      for (const auto& s : rep.stages) {
        stages.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
        timings[s.name] = s.seconds;
        text << (s.pass ? "pass " : "FAIL ") << s.name << ": " << s.detail << "\n";
      }
      for (const auto& e : rep.external_assumptions) text << e << "\n";
      json samples = json::array();
      for (const auto& s : rep.samples) {
        json xs = json::array();
        for (const auto& x : s.xs) xs.push_back(format_word(x));
        samples.push_back({{"k", s.k}, {"order", s.order}, {"reduced_length", s.reduced_length}, {"holds", s.holds},
                           {"case", case_name(s.violation_case)}, {"xs", std::move(xs)}, {"eps", s.eps}});
      }
      json result = {{"pass", rep.pass()},
                     {"failed_stage", rep.failed_stage ? json(*rep.failed_stage) : json(nullptr)},
                     {"stages", std::move(stages)},
                     {"xi", rep.xi_used.empty() ? json(nullptr) : json(format_word(rep.xi_used))},
                     {"lemma4", rep.lemma4 ? lemma4_json(*rep.lemma4) : json(nullptr)},
                     {"samples", std::move(samples)},
                     {"chain", rep.chain},
                     {"external_assumptions", rep.external_assumptions},
                     {"desk_scale", o->desk}};
      json config = {{"samples", o->samples}, {"seed", o->seed}, {"k_max", o->k_max}, {"desk_scale", o->desk},
                     {"fault", o->fault}};
      Context c = ctx;
      if (!o->out.empty()) c.report = o->out;
      emit(c, envelope("burnside pipeline", config, result, timings), text.str());
      return rep.pass() ? kOk : kCheckFailed;
    };
  });
}

}  // namespace

void add_burnside_commands(CLI::App& app, Action& action) {
  xi_construct(app, action);
  lemma5(app, action);
  pipeline(app, action);
}

}  // namespace cli
