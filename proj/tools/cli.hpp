#pragma once

// Shared plumbing for the ts-groups subcommands: run context, report
// envelope, file input and JSON encodings of library values.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tsg/groups.hpp"
#include "tsg/properties.hpp"
#include "tsg/tree_partition.hpp"

namespace cli {

using nlohmann::json;

#ifndef TSG_VERSION
#define TSG_VERSION "0.0.0"
#endif

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kResource = 3, kPrecondition = 4, kInternal = 5 };

struct Context {
  std::size_t jobs = 1;
  /// json, text or csv; empty means the command default
  std::string format;
  /// Report destination; stdout when empty.
  std::string report;
  tsg::GroupLimits limits;
};

/// Reads TS_GROUPS_BUDGET_MB into group limits. Throws ConfigError on a bad value.
tsg::GroupLimits limits_from_env();

class Timer {
 public:
  void stage(const std::string& name);
  json finish();

 private:
  std::vector<std::pair<std::string, double>> done_;
  std::string current_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Everything but the `run` block is a function of the command line.
json envelope(const std::string& command, json config, json result, json timings);

/// Writes the report to ctx.report or stdout. `text` replaces it on stdout in text format.
void emit(const Context& ctx, const json& report, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
/// Non-empty lines that do not start with '#'.
std::vector<std::string> read_lines(const std::string& path);
json read_json(const std::string& path);

std::vector<tsg::Element> read_elements(const tsg::Group& g, const std::string& path);
/// A word given inline, or `@path` for the first line of a file.
tsg::Word word_arg(const std::string& text, int rank);

json elements_json(const tsg::Group& g, const std::vector<tsg::Element>& s);
std::vector<tsg::Element> elements_from(const tsg::Group& g, const json& j);

json forest_json(const tsg::Group& g, const tsg::TreeForest& f);
tsg::TreeForest forest_from(const json& j);
json verification_json(const tsg::VerificationReport& r);

json witness_json(const tsg::Group& g, const tsg::PropertyWitness& w);
tsg::PropertyWitness witness_from(const tsg::Group& g, const json& j);
json gnp_json(const tsg::GnpCertificate& c);

/// Sets `action` when the subcommand is selected.
using Action = std::function<int(const Context&)>;

void add_basic_commands(CLI::App& app, Action& action);
void add_forest_commands(CLI::App& app, Action& action);
void add_property_commands(CLI::App& app, Action& action);
void add_burnside_commands(CLI::App& app, Action& action);
void add_replay_command(CLI::App& app, Action& action);

/// Re-verifies the witnesses of a report. Returns one line per item checked
/// and whether all passed.
std::pair<bool, std::vector<std::string>> replay_report(const json& report, const Context& ctx);

}  // namespace cli
