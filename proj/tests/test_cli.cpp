#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"

using beeps::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "beeps_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("static jitterjump run passes its validators") {
  const auto r = run({"static", "--protocol", "jitterjump", "--graph", "gnp:{n}:0.08", "--n", "64", "--trials", "3",
                      "--seed", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("status pass") != std::string::npos);
}

TEST_CASE("static beepfirst run stabilises within three periods") {
  const auto r = run({"static", "--protocol", "beepfirst", "--graph", "clique:8", "--trials", "5", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "pass");
  CHECK(j["max_convergence"].get<double>() <= 3.0);
  CHECK(j["per_trial"][0]["n"] == 8);
}

TEST_CASE("kappa below 4/eta is a configuration error") {
  const auto r = run({"static", "--kappa", "32", "--eta", "0.0625"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("unknown flags and protocols are configuration errors") {
  CHECK(run({"static", "--bogus"}).code == 2);
  CHECK(run({"static", "--protocol", "nope"}).code == 2);
  CHECK(run({"static", "--graph", "torus:4"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("a malformed event line is a configuration error") {
  const auto ev = scratch("bad_events.txt");
  write(ev, "10 remove_node\n");
  CHECK(run({"dynamic", "--graph", "star:9", "--events", ev.string()}).code == 2);
  write(ev, "10 teleport 3\n");
  CHECK(run({"dynamic", "--graph", "star:9", "--events", ev.string()}).code == 2);
}

TEST_CASE("the same flags and seed give byte-identical CSV") {
  const auto a = scratch("det_a.csv");
  const auto b = scratch("det_b.csv");
  const std::vector<std::string> base{"static", "--graph", "regular:32:4", "--trials", "4", "--seed", "9",
                                      "--wakeup", "random"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "3"});
  run(args_a);
  run(args_b);
  const auto text = slurp(a);
  CHECK(text.rfind("trial,period,node,phase,jitter,interval,colored,label,beeps_heard\n", 0) == 0);
  CHECK(text.size() > 1000);
  CHECK(text == slurp(b));
}

TEST_CASE("an empty events file behaves like a dynamic run without events") {
  const auto ev = scratch("empty_events.txt");
  write(ev, "\n# nothing\n");
  const auto a = scratch("dyn_a.csv");
  const auto b = scratch("dyn_b.csv");
  const auto ra = run({"dynamic", "--graph", "regular:24:3", "--seed", "4", "--out", a.string()});
  const auto rb = run({"dynamic", "--graph", "regular:24:3", "--seed", "4", "--out", b.string(), "--events", ev.string()});
  CHECK(ra.code == rb.code);
  CHECK(ra.out == rb.out);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("sweeps report a fitted log constant") {
  const auto r = run({"static", "--graph", "regular:{n}:4", "--sweep", "16,32,64", "--trials", "4", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("fitted_log_constant"));
  CHECK(j["sizes"].size() == 3);
}

TEST_CASE("oracle ballsbins gate") {
  const auto r = run({"oracle", "ballsbins", "--m", "12", "--n", "12"});
  CHECK(r.code == 0);
  CHECK(r.out.find("E[Z]") != std::string::npos);
  CHECK(r.out.find("status pass") != std::string::npos);
  CHECK(run({"oracle", "ballsbins", "--m", "12", "--n", "12", "--trials", "20000"}).code == 0);
  CHECK(run({"oracle", "ballsbins", "--m", "0", "--n", "0"}).code == 2);
}

TEST_CASE("oracle amplify prints the period bound") {
  const auto r = run({"oracle", "amplify", "--c", "2", "--p", "0.5", "--q", "1", "--n", "16"});
  CHECK(r.code == 0);
  CHECK(r.out.find("periods 22.18") != std::string::npos);
  CHECK(run({"oracle", "amplify", "--c", "2", "--p", "0", "--q", "1", "--n", "16"}).code == 2);
}

TEST_CASE("oracle lowerbound reports the coupling") {
  const auto r = run({"oracle", "lowerbound", "--k", "8", "--trials", "300", "--protocol", "coinflip"});
  CHECK(r.code == 0);
  CHECK(r.out.find("status pass") != std::string::npos);
}
