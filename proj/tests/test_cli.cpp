#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfo/cli.hpp"
#include "dfo/evaluator.hpp"
#include "dfo/parser.hpp"
#include "dfo/suites.hpp"
#include "fixtures.hpp"

using namespace dfo;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) {
  return std::string(DFO_TEST_DATA_DIR) + "/" + name;
}

std::string scratch_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

} // namespace

TEST_CASE("parse subcommand normalizes input") {
  CliRun run = cli({"parse", "--formula", data("leader.dfo")});
  CHECK(run.code == 0);
  CHECK(run.out == serialize_formula(parse_formula(run.out)) + "\n");

  CliRun structure = cli({"parse", "--structure", data("sample6.dst")});
  CHECK(structure.code == 0);
  CHECK(parse_structure(structure.out) == test::sample6());

  CliRun bad = cli({"parse"});
  CHECK(bad.code == 2);
  CliRun missing = cli({"parse", "--formula", data("missing.dfo")});
  CHECK(missing.code == 2);
}

TEST_CASE("check subcommand prints the verdict") {
  CliRun holds = cli({"check", "--structure", data("sample6.dst"),
                      "--formula", data("efo_r2.dfo")});
  CHECK(holds.code == 0);
  CHECK(holds.out == "true\n");

  CliRun fails = cli({"check", "--structure", data("sample6.dst"),
                      "--formula", data("suggested_twice.dfo")});
  CHECK(fails.code == 0);
  CHECK(fails.out == "false\n");

  // Free variables need an explicit assignment; missing ones are an error.
  std::string atom_path = scratch_file("dfo_atom.dfo", "rel(2,1,u,v)\n");
  CliRun bound = cli({"check", "--structure", data("sample6.dst"),
                      "--formula", atom_path, "--assign", "u=a,v=f"});
  CHECK(bound.code == 0);
  CHECK(bound.out == "true\n");
  CliRun unbound = cli({"check", "--structure", data("sample6.dst"),
                        "--formula", atom_path});
  CHECK(unbound.code == 2);
}

TEST_CASE("translate subcommand reports sizes") {
  CliRun run =
      cli({"translate", "--mode", "r2d2", "--formula", data("efo_r2.dfo")});
  CHECK(run.code == 0);
  CHECK(run.out.find("input_nodes=") == 0);
  CHECK(run.out.find("centers=1") != std::string::npos);
  // The emitted formula reparses.
  std::string body = run.out.substr(run.out.find('\n') + 1);
  CHECK(parse_formula(body)->kind == NodeKind::Exists);

  CliRun gated = cli(
      {"translate", "--mode", "r2d2", "--formula", data("suggested_twice.dfo")});
  CHECK(gated.code == 2);

  CliRun r1 = cli({"translate", "--mode", "r1", "--formula",
                   data("suggested_twice.dfo"), "--data", "2"});
  CHECK(r1.code == 2); // universal quantifier stays outside the fragment
}

TEST_CASE("structure transformations") {
  CliRun abs = cli({"abstract", "--structure", data("sample6.dst"),
                    "--centers", "a", "--radius", "2"});
  CHECK(abs.code == 0);
  auto [b, centers] = parse_with_centers(abs.out);
  CHECK(centers == std::vector<std::string>{"a"});
  CHECK(b.predicate_members("U_1_1_1") == std::set<std::string>{"a", "b"});

  std::string abs_path = scratch_file("dfo_abs.dst", abs.out);
  CliRun rec = cli({"reconstruct", "--structure", abs_path, "--radius", "2"});
  CHECK(rec.code == 0);
  DataStructure rebuilt = parse_structure(rec.out);
  CHECK(rebuilt.dim() == 2);
  CHECK(rebuilt.value("a", 1) == rebuilt.value("b", 1));

  CliRun padded = cli({"pad", "--structure", data("sample6.dst"), "--fields",
                       "1"});
  CHECK(padded.code == 0);
  CHECK(parse_structure(padded.out).dim() == 3);

  CliRun ge = cli({"addge", "--structure", data("sample6.dst")});
  CHECK(ge.code == 0);
  DataStructure g = parse_structure(ge.out);
  CHECK(g.size() == 55);
  std::string ge_path = scratch_file("dfo_ge.dst", ge.out);
  CliRun back = cli({"minusge", "--structure", ge_path});
  CHECK(back.code == 0);
  CHECK(parse_structure(back.out) == test::sample6());

  CliRun rel = cli({"relativize", "--formula", data("leader.dfo")});
  CHECK(rel.code == 0);
  CHECK(rel.out.find("!ge(") != std::string::npos);

  CliRun bad_radius = cli({"abstract", "--structure", data("sample6.dst"),
                           "--centers", "a", "--radius", "3"});
  CHECK(bad_radius.code == 2);
}

TEST_CASE("solve subcommand") {
  CliRun sat = cli({"solve", "--formula", data("leader.dfo"), "--data", "2",
                    "--max-size", "2"});
  CHECK(sat.code == 0);
  CHECK(sat.out == "SAT size=1\n");

  CliRun gated = cli({"solve", "--formula", data("efo_r2.dfo"), "--data", "3",
                      "--via", "reduction", "--max-size", "2"});
  CHECK(gated.code == 2);
  CHECK(gated.err.find("via_reduction supports") != std::string::npos);

  CliRun reduced = cli({"solve", "--formula", data("efo_r2.dfo"), "--data",
                        "2", "--via", "reduction", "--max-size", "3",
                        "--json"});
  CHECK(reduced.code == 0);
  CHECK(reduced.out.find("SAT size=2") == 0);
  CHECK(reduced.out.find("#json") != std::string::npos);
}

TEST_CASE("suite subcommand reports and gates on failures") {
  CliRun ok = cli({"suite", "lemma1", "--trials", "25", "--seed", "1"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("SUITE lemma1 trials=25 failures=0") == 0);

  CliRun unknown = cli({"suite", "nope", "--trials", "5", "--seed", "1"});
  CHECK(unknown.code == 2);

  CliRun unseeded = cli({"suite", "lemma1", "--trials", "5"});
  CHECK(unseeded.code == 2); // the seed is always explicit
}

TEST_CASE("export subcommand emits dot") {
  CliRun run = cli({"export", "--structure", data("sample6.dst"), "--format",
                    "dot"});
  CHECK(run.code == 0);
  size_t labels = 0, pos = 0;
  while ((pos = run.out.find("[label=", pos)) != std::string::npos) {
    ++labels;
    pos += 7;
  }
  CHECK(labels == 12);
}
