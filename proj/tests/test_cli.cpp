#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#ifndef BASEX_CLI_PATH
#error "BASEX_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "/tmp/basex_cli_out_" + std::to_string(counter);
  const std::string err_path = "/tmp/basex_cli_err_" + std::to_string(counter);
  ++counter;
  const std::string cmd = std::string(BASEX_CLI_PATH) + " " + args + " >" +
                          out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

const std::string kIdentity4 = "/tmp/basex_identity4.csv";
const std::string kTableDisjoint = "/tmp/basex_disjoint.csv";
const std::string kTriangle = "/tmp/basex_triangle.csv";

struct Fixtures {
  Fixtures() {
    write_file(kIdentity4, "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
    write_file(kTableDisjoint, "0;1,1.0\n2;3,1.0\n");
    write_file(kTriangle, "0,1,1.0\n1,2,1.0\n2,0,1.0\n");
  }
};
const Fixtures fixtures;

}  // namespace

TEST_CASE("repeated runs are byte-identical") {
  const std::string args =
      "sample --model kdpp --ensemble " + kIdentity4 +
      " --k 2 --num-samples 50 --seed 11 --epsilon 0.1";
  const auto a = run_cli(args + " --threads 1");
  const auto b = run_cli(args + " --threads 1");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);

  // thread count must not change the records either
  const auto c = run_cli(args + " --threads 4");
  CHECK(c.out == a.out);
}

TEST_CASE("steps zero emits the initializer state") {
  const auto r = run_cli("sample --model kdpp --ensemble " + kIdentity4 +
                         " --k 2 --num-samples 3 --steps 0 --seed 5");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(line == "{\"subset\":[0,1],\"steps\":0,\"accepts\":0}");
    ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("malformed CSV reports the line and exits 2") {
  const std::string bad = "/tmp/basex_bad.csv";
  write_file(bad, "1,0\n0,not_a_number\n");
  const auto r = run_cli("sample --model kdpp --ensemble " + bad + " --k 1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find(":2:") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("missing model inputs exit 3") {
  CHECK(run_cli("sample --model kdpp --k 2").exit_code == 3);
  CHECK(run_cli("sample --model table").exit_code == 3);
  CHECK(run_cli("init --model spanning-tree").exit_code == 3);
}

TEST_CASE("sampled frequencies are near uniform for the identity ensemble") {
  const auto r = run_cli("sample --model kdpp --ensemble " + kIdentity4 +
                         " --k 2 --num-samples 6000 --seed 3 --epsilon 0.05");
  CHECK(r.exit_code == 0);
  std::map<std::string, long> counts;
  std::istringstream lines(r.out);
  std::string line;
  long total = 0;
  while (std::getline(lines, line)) {
    const auto open = line.find('[');
    const auto close = line.find(']');
    counts[line.substr(open, close - open + 1)]++;
    ++total;
  }
  CHECK(total == 6000);
  CHECK(counts.size() == 6);
  for (const auto& [subset, c] : counts) {
    const double freq = static_cast<double>(c) / total;
    CHECK(freq > 1.0 / 6.0 - 0.05);
    CHECK(freq < 1.0 / 6.0 + 0.05);
  }
}

TEST_CASE("diagnose reports the uniform chain and exits 0") {
  const auto r = run_cli("diagnose --model kdpp --ensemble " + kIdentity4 +
                         " --k 2 --epsilon 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"n\":4") != std::string::npos);
  CHECK(r.out.find("\"k\":2") != std::string::npos);
  CHECK(r.out.find("\"support_size\":6") != std::string::npos);
  CHECK(r.out.find("\"c_mu\":0.125") != std::string::npos);
  CHECK(r.out.find("\"exchange_ok\":true") != std::string::npos);
  CHECK(r.out.find("\"negative_correlation_ok\":true") != std::string::npos);
}

TEST_CASE("diagnose flags a non-exchangeable table and exits 1") {
  const auto r =
      run_cli("diagnose --model table --table " + kTableDisjoint + " --epsilon 0.1");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("\"exchange_ok\":false") != std::string::npos);
  CHECK(r.err.find("exchange-property") != std::string::npos);
}

TEST_CASE("init prints the start-state report") {
  const auto kdpp = run_cli("init --model kdpp --ensemble " + kIdentity4 + " --k 2");
  CHECK(kdpp.exit_code == 0);
  CHECK(kdpp.out == "{\"subset\":[0,1],\"logmass\":0,\"method\":\"greedy_det\"}\n");

  const auto tree = run_cli("init --model spanning-tree --graph " + kTriangle);
  CHECK(tree.exit_code == 0);
  CHECK(tree.out.find("\"method\":\"max_weight_tree\"") != std::string::npos);

  const auto table = run_cli("init --model table --table " + kTableDisjoint);
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("\"method\":\"table_argmax\"") != std::string::npos);
}

TEST_CASE("sample accepts an explicit start and writes to a file") {
  const std::string out_path = "/tmp/basex_records.jsonl";
  const auto r = run_cli("sample --model spanning-tree --graph " + kTriangle +
                         " --start 1,2 --steps 0 --output " + out_path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out_path) == "{\"subset\":[1,2],\"steps\":0,\"accepts\":0}\n");
  std::remove(out_path.c_str());

  // start outside the support is rejected
  const auto bad = run_cli("sample --model table --table " + kTableDisjoint +
                           " --start 0,2 --steps 10");
  CHECK(bad.exit_code == 3);
}

TEST_CASE("enumeration cap surfaces as exit 4") {
  const auto r = run_cli("diagnose --model kdpp --ensemble " + kIdentity4 +
                         " --k 2 --cap 3");
  CHECK(r.exit_code == 4);
}
