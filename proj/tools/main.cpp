#include <iostream>

#include "cli.hpp"
#include "tsg/errors.hpp"

int main(int argc, char** argv) {
  using namespace cli;
  CLI::App app{"ts-groups: traveling-salesman criteria for finitely generated groups"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Context ctx;
  std::string replay_file;
  app.set_version_flag("--version", std::string("ts-groups ") + TSG_VERSION);
  app.add_option("--jobs", ctx.jobs, "Worker threads")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_option("--format", ctx.format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--report", ctx.report, "Write the JSON report here");
  app.add_option("--replay", replay_file, "Re-verify the witnesses of a report");

  Action action;
  add_basic_commands(app, action);
  add_forest_commands(app, action);
  add_property_commands(app, action);
  add_burnside_commands(app, action);
  add_replay_command(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ctx.limits = limits_from_env();
    if (!replay_file.empty()) {
      auto [ok, lines] = replay_report(read_json(replay_file), ctx);
      for (const auto& l : lines) std::cout << l << "\n";
      return ok ? kOk : kCheckFailed;
    }
    if (!action) {
      std::cerr << app.help();
      return kUsage;
    }
    return action(ctx);
  } catch (const tsg::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const tsg::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const tsg::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const tsg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad report: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
