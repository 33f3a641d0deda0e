#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using ultrana::cli::kExitPass;
using ultrana::cli::kExitUsage;
using ultrana::cli::run;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "ultrana_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(invoke({}).status == kExitUsage);
  CHECK(invoke({"frobnicate"}).status == kExitUsage);
  CHECK(invoke({"bootstrap-ratio", "--c0", "1", "--kappa", "0.5", "--nmax", "10"}).status == kExitUsage);
  CHECK(invoke({"bootstrap-ratio", "--c0", "abc", "--kappa", "2", "--nmax", "10"}).status == kExitUsage);
  CHECK(invoke({"propagate", "--nmax", "2"}).status == kExitUsage);
  CHECK(invoke({"propagate", "--format", "xml"}).status == kExitUsage);
  CHECK(invoke({"majorant", "--check", "nonsense"}).status == kExitUsage);
}

TEST_CASE("bootstrap ratio CSV") {
  const Outcome o = invoke({"bootstrap-ratio", "--c0", "1", "--kappa", "2", "--nmax", "100"});
  CHECK(o.status == kExitPass);
  CHECK(o.out.find("lemma_id") != std::string::npos);
  CHECK(o.out.find("bootstrap:c0=1:kappa=2") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args{"propagate", "--c0", "1", "--nmax", "60"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  CHECK(a.status == kExitPass);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,log_b_n,implied_C_n,envelope_margin", 0) == 0);
}

TEST_CASE("config file with flag override and metadata sidecar") {
  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "config.json";
  const fs::path report = dir / "report.csv";
  std::ofstream(cfg) << R"({"command": "propagate", "c0": 1, "nmax": 40, "kind": "first"})";
  const Outcome o = invoke({"--config", cfg.string(), "--nmax", "20", "--output", report.string()});
  CHECK(o.status == kExitPass);
  CHECK(o.out.empty());
  const std::string csv = slurp(report);
  long lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 21);
  const auto meta = nlohmann::json::parse(slurp(report.string() + ".meta.json"));
  CHECK(meta["command"] == "propagate");
  CHECK(meta["exit_status"] == 0);
  CHECK(meta.contains("generated_at"));
  CHECK(meta["settings"]["nmax"] == "20");
  // the timestamp lives only in the sidecar
  CHECK(csv.find("generated_at") == std::string::npos);

  std::ofstream(cfg) << R"({"command": "propagate", "bogus": 1})";
  CHECK(invoke({"--config", cfg.string()}).status == kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("sharp falsification JSON") {
  const Outcome o = invoke({"sharp", "--falsify", "lambda", "--c0", "1", "--C", "5", "--lambda", "2", "--nmax", "2000"});
  CHECK(o.status == kExitPass);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["violating_n"] == 31);
}

TEST_CASE("fit-k and kernel summaries") {
  const Outcome k = invoke({"fit-k", "--c0", "1", "--kappa", "2", "--nmax", "100", "--format", "json"});
  CHECK(k.status == kExitPass);
  CHECK(!k.out.empty());
  const Outcome g = invoke({"kernel", "--s", "2", "--d", "1", "--format", "json"});
  CHECK(g.status == kExitPass);
  CHECK(invoke({"kernel", "--s", "-1", "--d", "1"}).status == kExitUsage);
}

TEST_CASE("acceptance subset through the command line") {
  const Outcome o = invoke({"acceptance", "--only", "multiindex"});
  CHECK(o.status == kExitPass);
  CHECK(o.out.find("PASS criterion 9") != std::string::npos);
  CHECK(invoke({"acceptance", "--only", "nothing"}).status == kExitUsage);
}

TEST_CASE("precision from the environment") {
  ::setenv("ULTRANA_PRECISION", "128", 1);
  const Outcome o = invoke({"propagate", "--c0", "1", "--nmax", "10", "--format", "json"});
  ::unsetenv("ULTRANA_PRECISION");
  CHECK(o.status == kExitPass);
  CHECK(o.out.find("128") != std::string::npos);
  CHECK(invoke({"propagate", "--precision", "16"}).status == kExitUsage);
}
