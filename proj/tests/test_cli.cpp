#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("tsg_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  static const struct Cleanup {
    ~Cleanup() { fs::remove_all(dir); }
  } cleanup;
  return dir;
}

// Runs the binary inside the scratch directory; stderr is discarded.
Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" TSG_CLI "' " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void put(const std::string& name, const std::string& content) {
  std::ofstream(workdir() / name) << content;
}

std::string slurp(const std::string& name) {
  std::ifstream in(workdir() / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json report(const std::string& name) { return json::parse(slurp(name)); }

json without_run(json j) {
  j.erase("run");
  return j;
}

bool has_square(const std::string& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t l = 1; i + 2 * l <= w.size(); ++l) {
      if (w.compare(i, l, w, i + l, l) == 0) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("seq thue prints a square-free word") {
  auto r = run("seq thue --n 100");
  CHECK(r.code == 0);
  auto w = r.out.substr(0, r.out.find('\n'));
  CHECK(w.size() == 100);
  CHECK(w.find_first_not_of("ABC") == std::string::npos);
  CHECK_FALSE(has_square(w));
}

TEST_CASE("xi construct writes a word of length 10001 to 10005") {
  auto r = run("xi construct --seed 1 --report xi.json");
  REQUIRE(r.code == 0);
  std::istringstream words(slurp("xi.word"));
  std::size_t n = 0;
  for (std::string t; words >> t;) ++n;
  CHECK(n > 10000);
  CHECK(n < 10006);
  CHECK(report("xi.json").at("result").at("length").get<std::size_t>() == n);
}

TEST_CASE("tsp on the unit square") {
  put("box2x2.words", "0,0\n1,0\n0,1\n1,1\n");
  auto r = run("tsp --group abelian:2 --set box2x2.words --exact");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("result").at("L").get<long>() == 4);
  CHECK(j.at("schema").get<int>() == 1);
  CHECK(j.at("version").get<std::string>() == "0.1.0");
  CHECK(j.at("run").contains("timings_s"));
}

TEST_CASE("exit codes") {
  CHECK(run("--version").code == 0);
  CHECK(run("tsp --bogus").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("property test --r 1 --group free:2 --xi a --family X").code == 2);
  CHECK(run("property test --r 200 --group free:3 --xi a").code == 3);
  CHECK(run("property test --r 12 --group free:2 --xi a", "TS_GROUPS_BUDGET_MB=1").code == 3);
  CHECK(run("seq thue --n 3", "TS_GROUPS_BUDGET_MB=lots").code == 2);
  put("odd.words", "a\nb\nab\n");
  CHECK(run("forest build --group free:2 --r 1 --set odd.words --xi B").code == 4);
  put("short.word", "a b\n");
  put("xs.words", "a\nb\n");
  CHECK(run("lemma5 verify --xi short.word --xs xs.words").code == 4);
  CHECK(run("burnside pipeline --desk-scale --samples 4 --fault power").code == 1);
  CHECK(run("replay missing.json").code == 2);
}

TEST_CASE("identical configurations give identical reports apart from the run block") {
  for (const std::string args : {"property test --r 2 --group free:2 --xi 'a b' --family P10 --k-max 2",
                                 "burnside pipeline --desk-scale --samples 6 --seed 4",
                                 "experiment ts-lambda --group abelian:2 --xi 1,0 --lambda 2 --samples 4"}) {
    CAPTURE(args);
    REQUIRE(run(args + " --jobs 1 --report d1.json").code == 0);
    REQUIRE(run(args + " --jobs 3 --report d2.json").code == 0);
    auto a = report("d1.json"), b = report("d2.json");
    CHECK(without_run(a).dump() == without_run(b).dump());
    CHECK(a.at("config").contains("seed"));
  }
}

TEST_CASE("reports replay") {
  put("box2x2.words", "0,0\n1,0\n0,1\n1,1\n");
  put("pairs.words", "a\naB\nbb\nbbB\n");
  put("xs.words", "a\nb b\nA B\n");
  const std::pair<std::string, std::string> cases[] = {
      {"seq thue --n 50 --format json", "r_seq.json"},
      {"tree label --mode 3letter --seed 3 --vertices 60", "r_tree3.json"},
      {"tree label --mode adversarial --seed 3 --vertices 60", "r_tree.json"},
      {"tsp --group abelian:2 --set box2x2.words --exact", "r_tsp.json"},
      {"property test --r 1 --group free:2 --xi 'a b' --family P10 --k-max 2", "r_prop.json"},
      {"property gnp --n 2 --p 3 --m 10 --k 4", "r_gnp.json"},
      {"forest build --group free:2 --r 1 --set pairs.words --xi B", "r_forest.json"},
      {"xi construct --seed 2 --desk-scale --out d.word", "r_xi.json"},
      {"burnside pipeline --desk-scale --samples 5", "r_bp.json"},
      {"experiment ts-lambda --group free:2 --xi 'a b a a B' --lambda 3/2 --samples 5", "r_exp.json"},
  };
  for (const auto& [args, file] : cases) {
    CAPTURE(args);
    REQUIRE(run(args + " --report " + file).code == 0);
    CHECK(run("replay " + file).code == 0);
    CHECK(run("--replay " + file).code == 0);
  }
  REQUIRE(run("lemma5 verify --xi d.word --xs xs.words --eps '+-+' --desk-scale --report r_l5.json").code == 0);
  CHECK(run("replay r_l5.json").code == 0);

  auto tsp = report("r_tsp.json");
  tsp["result"]["L"] = 3;
  put("bad_tsp.json", tsp.dump());
  CHECK(run("replay bad_tsp.json").code == 1);

  auto tree = report("r_tree3.json");
  std::string labels = tree["result"]["labels"];
  auto first = labels.find_last_of("ABC");
  labels[first] = labels[first] == 'A' ? 'B' : 'A';
  tree["result"]["labels"] = labels;
  put("bad_tree.json", tree.dump());
  CHECK(run("replay bad_tree.json").code == 1);

  auto bp = report("r_bp.json");
  bp["result"]["samples"][0]["order"] = 99;
  put("bad_bp.json", bp.dump());
  CHECK(run("replay bad_bp.json").code == 1);
}
