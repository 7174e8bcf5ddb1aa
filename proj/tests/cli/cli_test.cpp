#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "commands.hpp"
#include "fanoscope/projective.hpp"
#include "input.hpp"

namespace fanoscope::cli {
namespace {

const std::string kCorpus = FANOSCOPE_CORPUS_DIR;

nlohmann::json minimal_threefold() {
  // x0 x2^2 + x1 x3^2 over F_3 with plane {x0 = x1 = 0}.
  return nlohmann::json::parse(R"({
    "schema": "fanoscope.input.v1", "kind": "threefold", "characteristic": 3,
    "terms": [[[1, 0, 2, 0, 0], 1], [[0, 1, 0, 2, 0], 1]],
    "plane": [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
  })");
}

std::string pointer_of(const nlohmann::json& j) {
  try {
    parse_input(j);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "accepted";
}

JobOptions job(const std::string& command, const std::string& input) {
  JobOptions j;
  j.command = command;
  j.input = kCorpus + "/" + input;
  return j;
}

int exit_status(const std::string& args) {
  const int status = std::system((std::string(FANOSCOPE_BIN) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const nlohmann::json& j) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << j.dump();
  return path;
}

TEST(InputSchema, AcceptsMinimalThreefold) {
  const Input in = parse_input(minimal_threefold());
  EXPECT_EQ(in.field.characteristic(), 3u);
  EXPECT_EQ(in.cubic->terms().size(), 2u);
}

TEST(InputSchema, PointersNameTheOffendingField) {
  auto j = minimal_threefold();
  j.erase("schema");
  EXPECT_EQ(pointer_of(j), "/schema");

  j = minimal_threefold();
  j["terms"][1][0] = {0, 1, 0, 1, 0};
  EXPECT_EQ(pointer_of(j), "/terms/1/0");

  j = minimal_threefold();
  j["terms"][1][0][2] = 4;
  EXPECT_EQ(pointer_of(j), "/terms/1/0/2");

  j = minimal_threefold();
  j["terms"][1][0] = {1, 0, 2, 0, 0};
  EXPECT_EQ(pointer_of(j), "/terms/1/0");

  j = minimal_threefold();
  j["terms"][0][1] = "x";
  EXPECT_EQ(pointer_of(j), "/terms/0/1");

  j = minimal_threefold();
  j["plane"][2] = {0, 0, 1, 0, 0};
  EXPECT_EQ(pointer_of(j), "/plane");

  j = minimal_threefold();
  j["characteristic"] = 9;
  EXPECT_EQ(pointer_of(j), "/characteristic");

  j = minimal_threefold();
  j["kind"] = "surface";
  EXPECT_EQ(pointer_of(j), "/kind");
}

TEST(InputSchema, CharacteristicTwoIsSeparate) {
  auto j = minimal_threefold();
  j["characteristic"] = 2;
  EXPECT_THROW(parse_input(j), CharacteristicTwoInput);
}

TEST(InputSchema, ModulusMustBeMonicAndIrreducible) {
  auto j = minimal_threefold();
  j["modulus"] = {1, 0, 1};  // x^2 + 1 is irreducible over F_3
  EXPECT_EQ(pointer_of(j), "accepted");
  j["modulus"] = {2, 0, 1};  // x^2 + 2 = (x + 1)(x + 2)
  EXPECT_EQ(pointer_of(j), "/modulus");
  j["modulus"] = {1, 0, 2};
  EXPECT_EQ(pointer_of(j), "/modulus/2");
}

TEST(InputSchema, ExtensionValuesUseTheModulusRoot) {
  auto j = minimal_threefold();
  j["modulus"] = {2, 2, 1};
  const Input in = parse_input(j);
  const FieldSpec& fs = in.field;
  const Field& F = fs.field();
  const Elt a = fs.element(nlohmann::json::array({0, 1}), "");
  // a is a root of x^2 + 2x + 2.
  EXPECT_EQ(F.add(F.add(F.mul(a, a), F.mul(F.from_int(2), a)), F.from_int(2)), 0u);
  for (Elt x = 0; x < F.size(); ++x) EXPECT_EQ(fs.element(nlohmann::json(fs.to_json(x)), ""), x);
}

TEST(InputSchema, RationalValues) {
  EXPECT_EQ(parse_rational(nlohmann::json("-3/4"), ""), Rat(-3, 4));
  EXPECT_EQ(parse_rational(nlohmann::json(5), ""), Rat(5));
  EXPECT_THROW(parse_rational(nlohmann::json("1/0"), ""), SchemaError);
  EXPECT_THROW(parse_rational(nlohmann::json("a"), ""), SchemaError);
}

TEST(Commands, FourRationalNodes) {
  const CommandResult r = run(job("analyze-threefold", "threefolds/f5_four_rational_nodes.json"));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.report["singular_locus"]["rational_points"], 4);
  EXPECT_EQ(r.report["singular_locus"]["total_length"], 4);
  EXPECT_EQ(r.report["finite_field_verdict"]["witness_kind"], "node");
}

TEST(Commands, WitnessLineLiesOnTheInputCubic) {
  const JobOptions o = job("analyze-threefold", "threefolds/f5_no_rational_node.json");
  const Input in = load_input(o.input);
  const Json w = run(o).report["finite_field_verdict"];
  ASSERT_EQ(w["witness_kind"], "disjoint-line");
  const Field& F = in.field.field();
  const Line L = make_line(F, w["line"][0].get<Vec>(), w["line"][1].get<Vec>());
  EXPECT_TRUE(vanishes_on_line(*in.cubic, L));
  const Subspace P = make_subspace(F, in.plane);
  EXPECT_EQ(rank(F, {L.row(0), L.row(1), P.rows[0], P.rows[1], P.rows[2]}), 5);
}

TEST(Commands, EveryCheckNamesOperationAndMethod) {
  const CommandResult r = run(job("analyze-threefold", "threefolds/f3_moved_plane.json"));
  ASSERT_FALSE(r.report["checks"].empty());
  for (const auto& c : r.report["checks"]) {
    EXPECT_FALSE(c["operation"].get<std::string>().empty());
    EXPECT_FALSE(c["method"].get<std::string>().empty());
  }
}

TEST(Commands, RationalExamples) {
  const CommandResult node = run(job("rationality", "rational/node_example.json"));
  EXPECT_TRUE(node.pass);
  EXPECT_EQ(node.report["verdict"]["verdict"], "Rational");
  EXPECT_EQ(node.report["verdict"]["node"], Json::array({1, 1, 1}));

  const CommandResult definite = run(job("rationality", "rational/definite_example.json"));
  EXPECT_TRUE(definite.pass);
  EXPECT_EQ(definite.report["verdict"]["verdict"], "Irrational");
  EXPECT_EQ(definite.report["verdict"]["obstruction"]["place"], "R");
}

TEST(Commands, PlaneOffTheCubicIsASchemaError) {
  auto j = minimal_threefold();
  j["plane"] = {{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}};
  JobOptions o;
  o.command = "zeta";
  o.input = write_temp("off_plane.json", j);
  try {
    run(o);
    FAIL() << "accepted a plane off the cubic";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/plane");
  }
}

TEST(Commands, ReportsAreByteIdentical) {
  for (const char* command : {"analyze-threefold", "torsor-verify", "zeta"}) {
    const JobOptions o = job(command, "threefolds/f5_reduced_rational_node.json");
    EXPECT_EQ(run(o).report.dump(), run(o).report.dump()) << command;
  }
}

TEST(Commands, FiberScanIgnoresThreadCount) {
  JobOptions one = job("fiber-scan", "fourfolds/f5_fourfold_a.json");
  JobOptions three = one;
  three.threads = 3;
  const CommandResult a = run(one), b = run(three);
  EXPECT_EQ(a.report["scan"].dump(), b.report["scan"].dump());
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(a.csv.substr(0, a.csv.find('\n')), "dual,transverse,N1,N2,h,T,equal");
}

TEST(Commands, BudgetSamplesDualPoints) {
  JobOptions o = job("fiber-scan", "fourfolds/f5_fourfold_b.json");
  o.budget = 7;
  EXPECT_EQ(run(o).report["scan"]["dual_points"], 7);
}

TEST(Commands, TimingOnlyOnRequest) {
  JobOptions o = job("zeta", "threefolds/f3_moved_plane.json");
  EXPECT_FALSE(run(o).report.contains("timing_seconds"));
  o.timing = true;
  EXPECT_TRUE(run(o).report.contains("timing_seconds"));
}

TEST(Binary, ExitCodes) {
  const std::string good = kCorpus + "/threefolds/f3_moved_plane.json";
  EXPECT_EQ(exit_status("zeta --input " + good), 0);
  auto j = minimal_threefold();
  j["characteristic"] = 2;
  EXPECT_EQ(exit_status("zeta --input " + write_temp("char2.json", j)), 3);
  j = minimal_threefold();
  j["terms"][0][0] = {1, 1, 1, 1, 1};
  EXPECT_EQ(exit_status("zeta --input " + write_temp("bad.json", j)), 2);
  EXPECT_EQ(exit_status("zeta --no-such-flag"), 2);
  EXPECT_EQ(exit_status("analyze-fourfold --input " + good), 2);
}

TEST(Binary, EnvironmentOverride) {
  const std::string out = testing::TempDir() + "env_report.json";
  const std::string cmd = "FANOSCOPE_INPUT=" + kCorpus + "/threefolds/f3_moved_plane.json FANOSCOPE_SEED=17 " +
                          std::string(FANOSCOPE_BIN) + " zeta --output " + out;
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream f(out);
  const auto report = nlohmann::json::parse(f);
  EXPECT_EQ(report["job"]["seed"], 17);
}

}  // namespace
}  // namespace fanoscope::cli
