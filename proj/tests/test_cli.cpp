// End-to-end tests for the command-line front end: runs the built binary as a
// subprocess and checks output, exit codes, the text/JSON agreement property,
// and the malformed-input contract (always exit 2 with a diagnostic).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dring/json_io.hpp"

namespace {

namespace fs = std::filesystem;

using dring::ojson;

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd =
      std::string(DRING_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const fs::path& fixture_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "dring_cli_fixtures";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& content) {
  fs::path file = fixture_dir() / name;
  std::ofstream out(file);
  out << content;
  return file.string();
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// An unsolvable two_unknown instance: C = 0 but Psi != 0.
std::string unsolvable_instance() {
  return write_fixture("inst_unsolvable.json", R"({
    "kind": "two_unknown", "ring": "prime_field", "p": 3,
    "matrices": {
      "A": {"rows": 1, "cols": 1, "data": [[1]]},
      "B": {"rows": 1, "cols": 1, "data": [[1]]},
      "C": {"rows": 1, "cols": 1, "data": [[0]]},
      "D": {"rows": 1, "cols": 1, "data": [[1]]},
      "E": {"rows": 1, "cols": 1, "data": [[1]]},
      "F": {"rows": 1, "cols": 1, "data": [[1]]},
      "G": {"rows": 1, "cols": 1, "data": [[1]]},
      "H": {"rows": 1, "cols": 1, "data": [[1]]},
      "Phi": {"rows": 1, "cols": 1, "data": [[0]]},
      "Psi": {"rows": 1, "cols": 1, "data": [[2]]},
      "Omega": {"rows": 1, "cols": 1, "data": [[0]]}
    }})");
}

std::string solvable_instance() {
  return write_fixture("inst_solvable.json", R"({
    "kind": "classical_triple", "ring": "rationals",
    "matrices": {
      "A": {"rows": 1, "cols": 1, "data": [["2"]]},
      "E": {"rows": 1, "cols": 1, "data": [["3"]]},
      "Phi": {"rows": 1, "cols": 1, "data": [["5"]]}
    }})");
}

std::string quaternity_file() {
  return write_fixture("quaternity.json", R"({
    "ring": "prime_field", "p": 5,
    "A": {"rows": 2, "cols": 2, "data": [[1,0],[0,1]]},
    "B": {"rows": 2, "cols": 1, "data": [[1],[0]]},
    "C": {"rows": 1, "cols": 2, "data": [[1,1]]},
    "D": {"rows": 1, "cols": 2, "data": [[0,2]]}})");
}

}  // namespace

TEST_CASE("rank prints the exact rank and exits 0") {
  std::string zero = write_fixture(
      "zero.json", R"({"ring": "prime_field", "p": 3, "rows": 2, "cols": 3,
                       "data": [[0,0,0],[0,0,0]]})");
  CmdResult r = run_cli("rank --in " + zero);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0\n");

  CmdResult j = run_cli("rank --in " + zero + " --format json");
  CHECK(j.exit_code == 0);
  CHECK(ojson::parse(j.out).at("rank").get<int>() == 0);

  std::string quat = write_fixture(
      "qmat.json", R"({"ring": "rational_quaternions", "rows": 2, "cols": 2,
                       "data": [[["0","1","0","0"], "0"], ["0", "0"]]})");
  CmdResult q = run_cli("rank --in " + quat);
  CHECK(q.exit_code == 0);
  CHECK(q.out == "1\n");
}

TEST_CASE("invariants text and JSON carry the same numbers") {
  std::string file = quaternity_file();
  CmdResult text = run_cli("invariants --in " + file);
  CmdResult json = run_cli("invariants --in " + file + " --format json");
  REQUIRE(text.exit_code == 0);
  REQUIRE(json.exit_code == 0);
  ojson j = ojson::parse(json.out);
  for (const auto& [key, value] : j.items()) {
    if (key == "dims") continue;
    std::string line = key + " = " + std::to_string(value.get<int>()) + "\n";
    INFO("expected line: " << line);
    CHECK(text.out.find(line) != std::string::npos);
  }
  CHECK(j.at("dims") == ojson::array({2, 2, 1, 1, 1}));
}

TEST_CASE("dual-invariants mirrors the dual schema") {
  std::string file = write_fixture("dual.json", R"({
    "ring": "prime_field", "p": 3,
    "E": {"rows": 1, "cols": 2, "data": [[1,0]]},
    "F": {"rows": 1, "cols": 1, "data": [[2]]},
    "G": {"rows": 1, "cols": 1, "data": [[0]]},
    "H": {"rows": 1, "cols": 2, "data": [[0,1]]}})");
  CmdResult j = run_cli("dual-invariants --in " + file + " --format json");
  REQUIRE(j.exit_code == 0);
  ojson parsed = ojson::parse(j.out);
  CHECK(parsed.contains("v1"));
  CHECK(parsed.contains("v17"));
  CHECK(parsed.contains("rank_h"));
  CHECK(parsed.at("dims") == ojson::array({1, 1, 1, 1, 2}));
}

TEST_CASE("canon-build and decompose handle quaternities and dual arrays") {
  std::string file = quaternity_file();
  CmdResult cb = run_cli("canon-build --in " + file + " --format json");
  REQUIRE(cb.exit_code == 0);
  ojson built = ojson::parse(cb.out);
  CHECK(built.contains("invariants"));
  CHECK(built.at("S_a").at("rows").get<int>() == 2);

  CmdResult dec = run_cli("decompose --in " + file + " --format json");
  REQUIRE(dec.exit_code == 0);
  ojson d = ojson::parse(dec.out);
  for (const char* key : {"invariants", "M", "P", "Q", "S", "T", "S_a", "S_b", "S_c", "S_d"})
    CHECK(d.contains(key));

  std::string dual = write_fixture("dual2.json", R"({
    "ring": "rationals",
    "E": {"rows": 1, "cols": 1, "data": [["2"]]},
    "F": {"rows": 1, "cols": 1, "data": [["0"]]},
    "G": {"rows": 1, "cols": 1, "data": [["1/3"]]},
    "H": {"rows": 0, "cols": 1, "data": []}})");
  CmdResult dd = run_cli("decompose --in " + dual + " --format json");
  REQUIRE(dd.exit_code == 0);
  ojson d2 = ojson::parse(dd.out);
  for (const char* key : {"invariants", "M1", "P1", "Q1", "S1", "T1", "S_e", "S_f", "S_g", "S_h"})
    CHECK(d2.contains(key));
}

TEST_CASE("check reports the failed condition and exits 1 on verdict false") {
  std::string file = unsolvable_instance();
  CmdResult text = run_cli("check --kind two_unknown --in " + file);
  CHECK(text.exit_code == 1);
  CHECK(text.out.find("verdict: false") != std::string::npos);
  CHECK(text.out.find("[FAIL] (3.4) #1") != std::string::npos);

  CmdResult json = run_cli("check --kind two_unknown --in " + file + " --format json");
  CHECK(json.exit_code == 1);
  ojson j = ojson::parse(json.out);
  CHECK(j.at("kind") == "two_unknown");
  CHECK(j.at("verdict").get<bool>() == false);
  bool found = false;
  for (const auto& c : j.at("conditions"))
    if (c.at("label") == "(3.4) #1") {
      found = true;
      CHECK(c.at("holds").get<bool>() == false);
      CHECK(c.at("lhs_rank").get<int>() == 1);
      CHECK(c.at("rhs_rank").get<int>() == 0);
    }
  CHECK(found);
}

TEST_CASE("solve returns the witness or exits 1 when infeasible") {
  std::string good = solvable_instance();
  CmdResult text = run_cli("solve --in " + good);
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("5/6") != std::string::npos);
  CmdResult json = run_cli("solve --in " + good + " --format json");
  CHECK(json.exit_code == 0);
  ojson j = ojson::parse(json.out);
  CHECK(j.at("infeasible").get<bool>() == false);
  CHECK(j.at("unknowns").at("X").at("data")[0][0] == "5/6");

  std::string bad = unsolvable_instance();
  CmdResult inf = run_cli("solve --in " + bad);
  CHECK(inf.exit_code == 1);
  CHECK(inf.out.find("infeasible") != std::string::npos);
  CmdResult infj = run_cli("solve --in " + bad + " --format json");
  CHECK(infj.exit_code == 1);
  CHECK(ojson::parse(infj.out).at("infeasible").get<bool>() == true);
}

TEST_CASE("solve reports Hermitian witnesses") {
  std::string file = write_fixture("inst_hermitian.json", R"({
    "kind": "hermitian_3_4", "ring": "prime_field", "p": 3,
    "matrices": {
      "A": {"rows": 1, "cols": 1, "data": [[2]]},
      "B": {"rows": 1, "cols": 0, "data": [[]]},
      "C": {"rows": 0, "cols": 1, "data": []},
      "D": {"rows": 0, "cols": 1, "data": []},
      "Phi": {"rows": 1, "cols": 1, "data": [[1]]},
      "Psi": {"rows": 0, "cols": 0, "data": []},
      "Omega": {"rows": 0, "cols": 0, "data": []}
    }})");
  CmdResult j = run_cli("solve --in " + file + " --format json");
  CHECK(j.exit_code == 0);
  ojson parsed = ojson::parse(j.out);
  // 2x2 = 4 = 1 mod 3, so X = [1] works and must be flagged Hermitian.
  CHECK(parsed.at("unknowns").at("X").at("data")[0][0] == 1);
  CHECK(parsed.at("hermitian_unknowns") == ojson::array({"X", "Y"}));
}

TEST_CASE("cross-check agrees on generated solvable input and exits 0") {
  std::string file = solvable_instance();
  CmdResult r = run_cli("cross-check --in " + file + " --format json");
  CHECK(r.exit_code == 0);
  ojson j = ojson::parse(r.out);
  CHECK(j.at("agree").get<bool>() == true);
  CHECK(j.at("checker").at("verdict").get<bool>() == true);
  CHECK(j.at("oracle_feasible").get<bool>() == true);
  CHECK(j.at("witness").is_object());

  CmdResult text = run_cli("cross-check --in " + file);
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("agree: true") != std::string::npos);
}

TEST_CASE("malformed input always exits 2 with a diagnostic") {
  std::string broken = write_fixture("broken.json", "{\"not json");
  CmdResult r = run_cli("rank --in " + broken, /*merge_stderr=*/true);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("malformed JSON") != std::string::npos);

  CmdResult missing = run_cli("rank --in " + (fixture_dir() / "absent.json").string(),
                              /*merge_stderr=*/true);
  CHECK(missing.exit_code == 2);
  CHECK(missing.out.find("absent.json") != std::string::npos);

  std::string bad_field = write_fixture(
      "bad_field.json", R"({"ring": "prime_field", "p": 3, "rows": 1, "cols": 2,
                            "data": [[0]]})");
  CmdResult shape = run_cli("rank --in " + bad_field, /*merge_stderr=*/true);
  CHECK(shape.exit_code == 2);
  CHECK(shape.out.find("data") != std::string::npos);

  std::string bad_kind = unsolvable_instance();
  CmdResult mismatch =
      run_cli("check --kind three_unknown --in " + bad_kind, /*merge_stderr=*/true);
  CHECK(mismatch.exit_code == 2);
  CHECK(mismatch.out.find("disagrees") != std::string::npos);

  std::string no_ring = write_fixture("no_ring.json", R"({"rows": 1, "cols": 1, "data": [[1]]})");
  CmdResult nr = run_cli("rank --in " + no_ring, /*merge_stderr=*/true);
  CHECK(nr.exit_code == 2);
  CHECK(nr.out.find("ring") != std::string::npos);

  // Flag errors are input errors too.
  CHECK(run_cli("rank", /*merge_stderr=*/true).exit_code == 2);
  CHECK(run_cli("frobnicate --in x.json", /*merge_stderr=*/true).exit_code == 2);
  CHECK(run_cli("rank --in " + no_ring + " --format yaml", /*merge_stderr=*/true).exit_code == 2);
  CmdResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
}

TEST_CASE("ring flags must agree with the file and can supply a missing ring") {
  std::string zero = write_fixture(
      "zero2.json", R"({"ring": "prime_field", "p": 3, "rows": 1, "cols": 1, "data": [[0]]})");
  CHECK(run_cli("rank --in " + zero + " --ring prime_field --p 3").exit_code == 0);
  CHECK(run_cli("rank --in " + zero + " --p 3").exit_code == 0);  // --p implies prime_field
  CmdResult clash = run_cli("rank --in " + zero + " --ring rationals", /*merge_stderr=*/true);
  CHECK(clash.exit_code == 2);
  CHECK(clash.out.find("disagree") != std::string::npos);
  CHECK(run_cli("rank --in " + zero + " --p 5", /*merge_stderr=*/true).exit_code == 2);

  std::string bare = write_fixture("bare.json", R"({"rows": 1, "cols": 1, "data": [["1/2"]]})");
  CmdResult supplied = run_cli("rank --in " + bare + " --ring rationals");
  CHECK(supplied.exit_code == 0);
  CHECK(supplied.out == "1\n");
  CmdResult wrong =
      run_cli("rank --in " + bare + " --ring rationals --p 7", /*merge_stderr=*/true);
  CHECK(wrong.exit_code == 2);
  CHECK(wrong.out.find("--p") != std::string::npos);
}

TEST_CASE("--out writes exactly what stdout would carry") {
  std::string file = quaternity_file();
  fs::path out_file = fixture_dir() / "inv_report.json";
  CmdResult direct = run_cli("invariants --in " + file + " --format json");
  CmdResult filed =
      run_cli("invariants --in " + file + " --format json --out " + out_file.string());
  CHECK(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_file) == direct.out);
}

TEST_CASE("campaign requires an explicit seed and reports deterministically") {
  std::string cfg = write_fixture("campaign.json", R"({
    "rings": [{"ring": "prime_field", "p": 3}],
    "dim_bounds": 2,
    "instance_count": 3,
    "kinds": ["consistency", "two_unknown"]})");

  CmdResult unseeded = run_cli("campaign --in " + cfg, /*merge_stderr=*/true);
  CHECK(unseeded.exit_code == 2);
  CHECK(unseeded.out.find("--seed") != std::string::npos);

  fs::path rep1 = fixture_dir() / "camp_rep1.json";
  fs::path rep2 = fixture_dir() / "camp_rep2.json";
  CmdResult r1 = run_cli("campaign --in " + cfg + " --seed 99 --format json --out " +
                         rep1.string());
  CmdResult r2 = run_cli("campaign --in " + cfg + " --seed 99 --format json --out " +
                         rep2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  std::string body1 = slurp(rep1), body2 = slurp(rep2);
  CHECK(body1 == body2);
  ojson parsed = ojson::parse(body1);
  CHECK_FALSE(parsed.contains("wall_seconds"));
  for (const auto& t : parsed.at("tallies")) {
    CHECK(t.at("pass").get<int>() == 3);
    CHECK(t.at("fail").get<int>() == 0);
  }
  CHECK(parsed.at("counterexamples").empty());

  // Wall-clock goes to stderr only.
  CmdResult noisy = run_cli("campaign --in " + cfg + " --seed 99 --format json --out " +
                                rep1.string(),
                            /*merge_stderr=*/true);
  CHECK(noisy.out.find("wall time") != std::string::npos);

  // Text format carries the same tallies.
  CmdResult text = run_cli("campaign --in " + cfg + " --seed 99");
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("consistency over gf3: pass 3 fail 0") != std::string::npos);
  CHECK(text.out.find("two_unknown over gf3: pass 3 fail 0") != std::string::npos);

  // A --ring flag narrows the configured ring list.
  CmdResult narrowed = run_cli("campaign --in " + cfg +
                               " --seed 99 --ring rationals --format json");
  CHECK(narrowed.exit_code == 0);
  ojson nj = ojson::parse(narrowed.out);
  for (const auto& t : nj.at("tallies")) CHECK(t.at("ring") == "rationals");
}
