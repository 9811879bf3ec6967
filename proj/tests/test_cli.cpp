#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "mtlab/error.hpp"

using namespace mtlab;
using namespace mtlab::cli;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(parse_args(args), out, err);
  return {code, out.str(), err.str()};
}

std::string help_for(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const InfoRequest& info) {
    return info.what();
  }
  FAIL("expected help text");
  return {};
}

}  // namespace

TEST_CASE("parse examples") {
  const RunConfig c = parse_args({"constants", "--N", "2", "--t", "0"});
  CHECK(c.subcommand == "constants");
  CHECK(c.N == 2);
  CHECK(c.t == 0.0);
  CHECK(c.explicit_keys.count("N") == 1);

  const RunConfig m = parse_args({"maximize", "--kind", "G", "--alpha", "6.0", "--N", "2"});
  CHECK(m.subcommand == "maximize");
  CHECK(m.kind == "G");
  CHECK(m.alpha.value() == 6.0);

  const RunConfig o = parse_args({"estimate-at", "--opt.node_count", "96", "--quad.gauss_order", "20", "--format", "json"});
  CHECK(o.opt.node_count == 96);
  CHECK(o.quad.gauss_order == 20);
  CHECK(o.format == OutputFormat::json);
}

TEST_CASE("parse errors") {
  CHECK(kind_of([] { parse_args({"sharpness", "--bogus", "1"}); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_args({"constants", "--N", "two"}); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_args({"constants", "sharpness"}); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_args({}); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_args({"constants", "--format", "xml"}); }) == ErrorKind::Parse);
  RunConfig c;
  CHECK(kind_of([&] { set_key(c, "nodes", "3"); }) == ErrorKind::Parse);
}

TEST_CASE("config file precedence") {
  const std::string path = "test_cli_config.txt";
  {
    std::ofstream f(path);
    f << "# flat key=value\nN = 3\nt=0.5\nopt.seed=9\n";
  }
  const RunConfig c = parse_args({"constants", "--config", path, "--N", "4"});
  CHECK(c.N == 4);
  CHECK(c.t == 0.5);
  CHECK(c.opt.seed == 9);
  CHECK(c.s == 0.0);
  {
    std::ofstream f(path);
    f << "N=3\nalpah=2\n";
  }
  CHECK(kind_of([&] { parse_args({"constants", "--config", path}); }) == ErrorKind::Parse);
  std::remove(path.c_str());
  CHECK(kind_of([] { parse_args({"constants", "--config", "no/such/file"}); }) == ErrorKind::Parse);
}

TEST_CASE("every key has a default and round-trips") {
  const RunConfig d = parse_args({"constants"});
  const auto items = config_items(d);
  CHECK(items.size() == 25);
  RunConfig copy;
  copy.subcommand = d.subcommand;
  for (const auto& [k, v] : items) {
    if (k != "subcommand" && !v.empty()) CHECK_NOTHROW(set_key(copy, k, v));
  }
  CHECK(config_items(copy) == items);
}

TEST_CASE("help shows defaults") {
  const std::string h = help_for({"maximize", "--help"});
  CHECK(h.find("--opt.node_count") != std::string::npos);
  CHECK(h.find("64") != std::string::npos);
  CHECK(help_for({"--help"}).find("theorem-e-check") != std::string::npos);
  CHECK(help_for({"--version"}).find("1.0.0") != std::string::npos);
}

TEST_CASE("constants output") {
  const Captured c = run_args({"constants", "--N", "2", "--t", "0"});
  CHECK(c.code == ExitCode::ok);
  CHECK(c.out.find("omega=6.283185") != std::string::npos);
  CHECK(c.out.find("alpha_crit=12.56637") != std::string::npos);
  const Captured j = run_args({"constants", "--N", "3", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["tool"] == "mtlab");
  CHECK(doc["exit_code"] == 0);
  CHECK(doc["config"]["N"] == "3");
}

TEST_CASE("exit codes") {
  const Captured bad = run_args({"verify-identities", "--N", "2", "--t", "2"});
  CHECK(bad.code == ExitCode::validation);
  CHECK(bad.err.find("integrab") != std::string::npos);
  CHECK(run_args({"maximize", "--alpha", "13"}).code == ExitCode::validation);

  const Captured sharp = run_args({"sharpness", "--N", "2", "--t", "0"});
  CHECK(sharp.code == ExitCode::ok);
  CHECK(sharp.out.rfind("k,ratio,paper_bound,grad_norm\n", 0) == 0);

  CHECK(run_args({"maximize", "--alpha", "6", "--opt.max_iterations", "2", "--opt.restarts", "1"}).code ==
        ExitCode::nonconvergence);
  // Nonradial bound fails for t < 0.
  CHECK(run_args({"verify-nonradial", "--s", "-1", "--t", "-1"}).code == ExitCode::acceptance_failure);
}

TEST_CASE("output file and byte-identical reruns") {
  const std::string path = "test_cli_out.csv";
  const std::vector<std::string> args = {"verify-log", "--N", "3", "--count", "5", "--output", path};
  CHECK(run_args(args).code == ExitCode::ok);
  std::ifstream a(path);
  const std::string first((std::istreambuf_iterator<char>(a)), {});
  CHECK(run_args(args).code == ExitCode::ok);
  std::ifstream b(path);
  const std::string second((std::istreambuf_iterator<char>(b)), {});
  CHECK_FALSE(first.empty());
  CHECK(first == second);
  std::remove(path.c_str());

  const std::vector<std::string> lp = {"lemma38-probe", "--count", "20", "--format", "json"};
  CHECK(run_args(lp).out == run_args(lp).out);
}
