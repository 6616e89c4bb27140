// End-to-end checks of the command line driver: exit codes, output shapes,
// and the format contract (csv and table carry the same numbers, reruns are
// byte-identical). The binary path comes in through ECH_CLI_PATH.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the driver with stderr dropped unless merge_stderr is set.
RunResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("'") + ECH_CLI_PATH + "' " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "ech_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Splits a line on commas and whitespace; csv and table rows normalize to the
// same token lists.
std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> token_rows(const std::string& s) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : lines_of(s)) out.push_back(tokens_of(line));
  return out;
}

const std::string kSphere = "ellipsoid:1:141421/100000:3";
const std::string kSphereB = "ellipsoid:1:173205/100000:3";

}  // namespace

TEST_CASE("cli homology of an exported ellipsoid file") {
  auto file = scratch() / "sphere.json";
  auto made = run_cli("model " + kSphere + " -o '" + file.string() + "'");
  REQUIRE(made.code == 0);

  auto r = run_cli("homology '" + file.string() + "'");
  REQUIRE(r.code == 0);
  auto rows = token_rows(r.out);
  REQUIRE(rows.size() == 7);  // header + gradings 0,2,...,10
  CHECK(rows[0] == std::vector<std::string>{"grading", "dim"});
  for (int k = 0; k <= 5; ++k) {
    CHECK(rows[static_cast<std::size_t>(k + 1)][0] == std::to_string(2 * k));
    CHECK(rows[static_cast<std::size_t>(k + 1)][1] == "1");
  }
  std::filesystem::remove(file);
}

TEST_CASE("cli homology with induced ranks") {
  auto r = run_cli("homology " + kSphere + " --u-ranks");
  REQUIRE(r.code == 0);
  auto rows = token_rows(r.out);
  REQUIRE(rows[0] == std::vector<std::string>{"grading", "dim", "u_rank"});
  // Rank 1 out of every grading except the bottom one.
  CHECK(rows[1] == std::vector<std::string>{"0", "1", "0"});
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i][2] == "1");
}

TEST_CASE("cli homology exit codes") {
  auto dir = scratch();

  auto garbled = dir / "garbled.json";
  write_file(garbled, "{nope");
  auto r1 = run_cli("homology '" + garbled.string() + "'", true);
  CHECK(r1.code == 1);

  auto corrupt = dir / "corrupt.json";
  write_file(corrupt, R"({"generators": [
    {"id": "a", "grading": 0, "action": "0/1"},
    {"id": "b", "grading": 1, "action": "1/1"}
  ], "differential": [["b", "ghost"]]})");
  auto r2 = run_cli("homology '" + corrupt.string() + "'", true);
  CHECK(r2.code == 2);
  CHECK(r2.out.find("ghost") != std::string::npos);

  auto missing = dir / "no_such_file.json";
  auto r3 = run_cli("homology '" + missing.string() + "'", true);
  CHECK(r3.code == 1);

  std::filesystem::remove(garbled);
  std::filesystem::remove(corrupt);
}

TEST_CASE("cli consum compares cone against derived tensor") {
  auto out = scratch() / "cone.json";
  auto r = run_cli("consum " + kSphere + " s1xs2:3 -o '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("EXCLUDED") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  // Every grading at or below the shallower factor's top (5 here) must match.
  auto rows = token_rows(r.out);
  REQUIRE(rows[0] == std::vector<std::string>{"grading", "cone", "tensor", "status"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    std::int64_t g = std::stoll(rows[i][0]);
    CHECK(rows[i][3] == (g <= 5 ? "PASS" : "EXCLUDED"));
    if (g <= 5) CHECK(rows[i][1] == rows[i][2]);
  }

  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(out.string() + ".blocks.json"));
  std::filesystem::remove(out);
  std::filesystem::remove(out.string() + ".blocks.json");
}

TEST_CASE("cli consum requires umaps") {
  auto file = scratch() / "no_umap.json";
  write_file(file, R"({"generators": [
    {"id": "a", "grading": 0, "action": "1/1"}
  ], "differential": []})");
  auto r = run_cli("consum '" + file.string() + "' " + kSphere, true);
  CHECK(r.code == 2);
  CHECK(r.out.find("umap") != std::string::npos);
  std::filesystem::remove(file);
}

TEST_CASE("cli conjecture emits the sweep csv") {
  auto r = run_cli("conjecture " + kSphere + " " + kSphereB +
                   " --kmax 3 --eps-list 1/100,1/10000");
  REQUIRE(r.code == 0);
  auto rows = token_rows(r.out);
  REQUIRE(rows.size() == 1 + 2 * 4);
  CHECK(rows[0] == std::vector<std::string>{"eps", "k", "c_k_cone", "maxconv", "diff",
                                            "converged"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 6);
    CHECK((rows[i][5] == "true" || rows[i][5] == "false"));
  }
  // Deepest pass agrees exactly, so every diff in the second half is zero.
  for (std::size_t i = 5; i < rows.size(); ++i) {
    CHECK(rows[i][0] == "1/10000");
    CHECK(rows[i][4] == "0/1");
    CHECK(rows[i][5] == "true");
  }
}

TEST_CASE("cli conjecture rejects malformed eps") {
  auto r = run_cli("conjecture " + kSphere + " " + kSphereB + " --kmax 2 --eps-list 1/100,zebra",
                   true);
  CHECK(r.code == 1);
}

TEST_CASE("cli spectral table") {
  auto r = run_cli("spectral " + kSphere + " --kmax 3");
  REQUIRE(r.code == 0);
  auto rows = token_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"k", "c_k", "witness", "threshold_index"});
  CHECK(rows[1][1] == "0/1");
  CHECK(rows[2][1] == "1/1");
  CHECK(rows[3][1] == "141421/100000");
  CHECK(rows[4][1] == "2/1");
}

TEST_CASE("cli index presets") {
  auto ps = run_cli("index --preset PS");
  REQUIRE(ps.code == 0);
  CHECK(ps.out.find("ind=1 I=1") != std::string::npos);
  CHECK(ps.out.find("PASS") != std::string::npos);

  auto pn = run_cli("index --preset PN");
  REQUIRE(pn.code == 0);
  CHECK(pn.out.find("ind=1 I=1") != std::string::npos);

  auto cyl = run_cli("index --preset cylinder");
  REQUIRE(cyl.code == 0);
  CHECK(cyl.out.find("ind=0 I=0") != std::string::npos);

  auto h = run_cli("index --preset h");
  REQUIRE(h.code == 0);
  CHECK(h.out.find("CZ(h)=0") != std::string::npos);

  auto bad = run_cli("index --preset Q", true);
  CHECK(bad.code == 1);
}

TEST_CASE("cli flow diagnostics") {
  auto r = run_cli("flow");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("overall") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  auto at0 = run_cli("flow --t 0");
  REQUIRE(at0.code == 0);
  bool saw_identity_pass = false;
  for (const auto& line : lines_of(at0.out))
    if (line.find("identity check") != std::string::npos &&
        line.find("PASS") != std::string::npos)
      saw_identity_pass = true;
  CHECK(saw_identity_pass);
}

TEST_CASE("cli spectrum csv") {
  auto r = run_cli("spectrum --S 2,0,0,-1 --modes 8");
  REQUIRE(r.code == 0);
  auto rows = token_rows(r.out);
  REQUIRE(rows.size() >= 3);
  CHECK(rows[0] == std::vector<std::string>{"eigenvalue", "winding"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 2);
    CHECK_NOTHROW(std::stod(rows[i][0]));
    CHECK_NOTHROW(std::stoll(rows[i][1]));
  }

  auto bad = run_cli("spectrum --S 2,0,0 --modes 8", true);
  CHECK(bad.code == 1);
  auto coarse = run_cli("spectrum --S 2,0,0,-1 --modes 16 --mesh 8", true);
  CHECK(coarse.code == 2);
}

TEST_CASE("cli model exports") {
  auto dir = scratch();
  auto lattice = dir / "lattice.csv";
  auto catalog = dir / "catalog.json";
  auto prefix = (dir / "tower").string();

  auto r = run_cli("model " + kSphere + " --lattice '" + lattice.string() + "' --catalog '" +
                   catalog.string() + "' --tower '" + prefix + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());

  std::ifstream lf(lattice);
  std::string first;
  std::getline(lf, first);
  CHECK(first == "m,n,action,grading");
  CHECK(std::filesystem::exists(catalog));
  CHECK(std::filesystem::exists(prefix + "_index.json"));

  auto bad = run_cli("model s1xs2:2 --lattice '" + lattice.string() + "'", true);
  CHECK(bad.code == 1);

  std::filesystem::remove(lattice);
  std::filesystem::remove(catalog);
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().filename().string().rfind("tower", 0) == 0) std::filesystem::remove(e.path());
}

TEST_CASE("cli reruns are byte identical") {
  auto a = run_cli("spectral " + kSphere + " --kmax 5");
  auto b = run_cli("spectral " + kSphere + " --kmax 5");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  auto c = run_cli("consum " + kSphere + " " + kSphere);
  auto d = run_cli("consum " + kSphere + " " + kSphere);
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("cli csv and table carry the same numbers") {
  auto table = run_cli("homology " + kSphere + " --u-ranks");
  auto csv = run_cli("homology " + kSphere + " --u-ranks --format csv");
  REQUIRE(table.code == 0);
  REQUIRE(csv.code == 0);
  CHECK(token_rows(table.out) == token_rows(csv.out));

  auto sweep_csv = run_cli("conjecture " + kSphere + " s1xs2:4 --kmax 2 --eps-list 1/2000");
  auto sweep_tab = run_cli("conjecture " + kSphere + " s1xs2:4 --kmax 2 --eps-list 1/2000" +
                           std::string(" --format table"));
  REQUIRE(sweep_csv.code == 0);
  REQUIRE(sweep_tab.code == 0);
  CHECK(token_rows(sweep_csv.out) == token_rows(sweep_tab.out));
}
