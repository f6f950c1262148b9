// Integration tests that drive the command-line binary end to end.
// Usage: cli_tests <path-to-binary>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

std::string g_binary;
std::string g_dir;
int g_failures = 0;
int g_checks = 0;

void expect(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run(const std::string& args) {
  std::string out_path = g_dir + "/stdout.txt";
  std::string err_path = g_dir + "/stderr.txt";
  std::string cmd =
      g_binary + " " + args + " > " + out_path + " 2> " + err_path;
  int status = std::system(cmd.c_str());
  int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path), slurp(err_path)};
}

std::string kernel_file(const std::string& name, const std::string& body) {
  std::string path = g_dir + "/" + name;
  spit(path, body);
  return path;
}

void test_certify_verdicts() {
  std::string id2 = kernel_file(
      "id2.json", R"({"n":2,"format":"dense","rows":[[1,0],[0,1]]})");
  RunResult multiple = run("certify --input " + id2);
  expect(multiple.exit_code == 0, "certify exits 0 on identity");
  json jm = json::parse(multiple.out);
  expect(jm.at("verdict") == "multiple", "identity kernel verdict");
  expect(!jm.at("witness").is_null(), "identity kernel carries witness");

  std::string uni = kernel_file(
      "uni.json", R"({"n":2,"format":"dense","rows":[[0.5,0.5],[0.5,0.5]]})");
  RunResult unique = run("certify --input " + uni);
  expect(unique.exit_code == 0, "certify exits 0 on uniform");
  json ju = json::parse(unique.out);
  expect(ju.at("verdict") == "unique", "uniform kernel verdict");
  expect(std::abs(ju.at("measure")[0].get<double>() - 0.5) <= 1e-12 &&
             std::abs(ju.at("measure")[1].get<double>() - 0.5) <= 1e-12,
         "uniform measure");
  expect(ju.at("ergodic") == true, "uniform ergodic flag");
}

void test_analyze() {
  std::string split = kernel_file(
      "split.json",
      R"({"n":3,"format":"dense","rows":[[1,0,0],[0,0.4,0.6],[0,0.7,0.3]]})");
  RunResult r = run("analyze --input " + split);
  expect(r.exit_code == 0, "analyze exits 0");
  json j = json::parse(r.out);
  expect(j.at("verdict") == "decomposable", "split kernel decomposable");
  expect(j.at("closed_classes").size() == 2, "two closed classes");
  expect(j.at("witness").at("A") == json::array({0}), "witness A");
}

void test_error_paths() {
  std::string mangled = kernel_file("mangled.json", "{not json");
  RunResult bad = run("analyze --input " + mangled);
  expect(bad.exit_code == 1, "malformed JSON exits 1");
  json err = json::parse(bad.err);
  expect(err.at("error") == "ParseError", "machine-readable parse error");

  std::string sum = kernel_file(
      "badsum.json", R"({"n":2,"format":"dense","rows":[[0.5,0.4],[0,1]]})");
  RunResult rs = run("certify --input " + sum);
  expect(rs.exit_code == 1, "row-sum violation exits 1");
  expect(json::parse(rs.err).at("error") == "RowSumViolation",
         "row-sum error code");

  RunResult missing = run("certify --input " + g_dir + "/nope.json");
  expect(missing.exit_code == 1, "missing file exits 1");

  // An absurd rank threshold makes the stationary solve unable to isolate a
  // one-dimensional null space: internal inconsistency, exit 2.
  std::string uni = g_dir + "/uni.json";
  RunResult internal = run("certify --input " + uni + " --tol rank=1e6");
  expect(internal.exit_code == 2, "internal certificate failure exits 2");
  expect(json::parse(internal.err).at("error") == "RankDeficiency",
         "rank error code");
}

void test_resolvent_and_determinism() {
  std::string split = g_dir + "/split.json";
  RunResult first = run("resolvent --input " + split + " --a 0.5");
  RunResult second = run("resolvent --input " + split + " --a 0.5");
  expect(first.exit_code == 0, "resolvent exits 0");
  expect(first.out == second.out, "resolvent output is byte-stable");
  json j = json::parse(first.out);
  expect(j.at("positivity").at("matches_reachability") == true,
         "resolvent support matches reachability");

  RunResult series =
      run("resolvent --input " + split + " --a 0.5 --series-terms 60");
  json js = json::parse(series.out);
  expect(js.at("mode") == "series", "series mode reported");
  expect(js.at("tail_bound").get<double>() > 0, "series tail bound present");
}

void test_curves() {
  std::string cyc = kernel_file(
      "cyc.json", R"({"n":2,"format":"dense","rows":[[0,1],[1,0]]})");
  RunResult r = run("cesaro --input " + cyc + " --x 0 --n-max 6");
  expect(r.exit_code == 0, "cesaro exits 0");
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  expect(line == "n,tv", "cesaro CSV header");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  expect(rows == 6, "cesaro row count");

  // 2x2 with all-positive rows minorized by eps=0.4 against its own rows.
  std::string mix = kernel_file(
      "mix.json", R"({"n":2,"format":"dense","rows":[[0.7,0.3],[0.2,0.8]]})");
  std::string nu = kernel_file("nu.json", "[0.5,0.5]");
  RunResult d = run("doeblin --input " + mix + " --eps 0.4 --nu " + nu +
                    " --n-max 50");
  expect(d.exit_code == 0, "doeblin exits 0");
  expect(d.out.rfind("n,tv,bound\n", 0) == 0, "doeblin CSV header");
  expect(json::parse(d.err).at("bound_satisfied") == true,
         "doeblin verdict on stderr");
}

void test_simulate() {
  std::string cyc = g_dir + "/cyc.json";
  std::string obs = kernel_file("obs.json", "[1,0]");
  RunResult r = run("simulate --input " + cyc + " --x 0 --steps 1000 " +
                    "--seed 11 --observable " + obs);
  expect(r.exit_code == 0, "simulate exits 0");
  json j = json::parse(r.out);
  expect(j.at("time_average") == 0.5, "periodic chain time average");
  expect(j.at("abs_error").get<double>() <= 1e-12, "periodic chain error");

  std::string id2 = g_dir + "/id2.json";
  RunResult multi = run("simulate --input " + id2 + " --x 0 --steps 10 " +
                        "--seed 1 --observable " + obs);
  expect(multi.exit_code == 1, "simulate requires unique invariant measure");
  expect(json::parse(multi.err).at("error") == "NotUnique",
         "not-unique error code");
}

void test_invariants_command() {
  std::string id2 = g_dir + "/id2.json";
  std::string mu = kernel_file("mu.json", "[0.3,0.7]");
  RunResult r = run("invariants --input " + id2 + " --mu " + mu);
  expect(r.exit_code == 0, "invariants exits 0");
  json j = json::parse(r.out);
  expect(j.at("ergodic_measures").size() == 2, "two ergodic measures");
  json weights = json::array();
  for (const json& c : j.at("decomposition").at("components"))
    weights.push_back(c.at("weight"));
  expect(weights == json::array({0.3, 0.7}), "decomposition weights");
}

void test_example_command() {
  std::string spec = kernel_file(
      "fc.json", R"({"example":"fat_cantor","grid_n":64,"eps":0.25})");
  RunResult r = run("example --input " + spec);
  expect(r.exit_code == 0, "example fat_cantor exits 0");
  json j = json::parse(r.out);
  expect(j.at("kernel").at("n") == 64, "fat cantor grid size");
  double lam = j.at("meta").at("lambda_c").get<double>();
  expect(lam > 0.3 && lam < 0.7, "fat cantor cell fraction");
  expect(j.at("meta").at("mass_on_c").get<double>() == 0.25 * lam,
         "fat cantor closed-form mass");

  // Feed the emitted kernel back through certify: must be unique.
  spit(g_dir + "/fc_kernel.json", j.at("kernel").dump());
  RunResult certify = run("certify --input " + g_dir + "/fc_kernel.json");
  expect(json::parse(certify.out).at("verdict") == "unique",
         "fat cantor kernel certifies unique");

  std::string tp = kernel_file(
      "tp.json",
      R"({"example":"two_point_map","grid_n":16,"q_atoms":2,"eps":0.5})");
  RunResult rt = run("example --input " + tp);
  json jt = json::parse(rt.out);
  expect(jt.at("meta").at("atom_states") == json::array({16, 17}),
         "two-point-map atom states");
  json ref = jt.at("reference");
  expect(ref[16] == 0.0 && ref[17] == 0.0, "atoms carry zero reference mass");

  std::string unknown = kernel_file("unk.json", R"({"example":"nope"})");
  expect(run("example --input " + unknown).exit_code == 1,
         "unknown example exits 1");
}

void test_fuzz_command() {
  RunResult r = run("fuzz --count 1000 --seed 7");
  expect(r.exit_code == 0, "fuzz run is clean");
  json j = json::parse(r.out);
  expect(j.at("count") == 1000, "fuzz count echoed");
  expect(j.at("violations") == 0, "fuzz finds no violations");
}

void test_output_flag() {
  std::string uni = g_dir + "/uni.json";
  std::string out = g_dir + "/cert.json";
  RunResult r = run("certify --input " + uni + " --output " + out);
  expect(r.exit_code == 0, "certify --output exits 0");
  expect(r.out.empty(), "stdout empty when --output given");
  expect(json::parse(slurp(out)).at("verdict") == "unique",
         "artifact written to file");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <binary>\n";
    return 2;
  }
  g_binary = argv[1];
  g_dir = "cli_test_tmp";
  std::string mk = "mkdir -p " + g_dir;
  if (std::system(mk.c_str()) != 0) return 2;

  test_certify_verdicts();
  test_analyze();
  test_error_paths();
  test_resolvent_and_determinism();
  test_curves();
  test_simulate();
  test_invariants_command();
  test_example_command();
  test_fuzz_command();
  test_output_flag();

  std::printf("cli_tests: %d checks, %d failures\n", g_checks, g_failures);
  return g_failures == 0 ? 0 : 1;
}
