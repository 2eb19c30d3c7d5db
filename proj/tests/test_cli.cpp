#include <gtest/gtest.h>

#include <json.hpp>

#include "cli_harness.hpp"

using harness::Result;
using harness::Sandbox;

namespace {

const char* dual_numbers = R"({
  "field": {"kind": "rational"},
  "spaces": {"D": {"dims": {"0": 2}}},
  "complexes": {"D": {"space": "D", "differential": {"degree": -1, "blocks": {}}}},
  "structures": {
    "dual": {
      "complex": "D",
      "truncation": 4,
      "products": {"2": {"degree": 0, "blocks": {"0,0": [[[0, 0], 0, "1"], [[0, 1], 1, "1"], [[1, 0], 1, "1"]]}}}
    }
  }
})";

std::string verify(const Sandbox& sb, const std::string& file, const std::string& object, int* code = nullptr) {
  const Result r = sb.run({"verify", "--in", sb.path(file).string(), "--object", object});
  if (code) *code = r.code;
  return r.out;
}

}  // namespace

TEST(Cli, VerifyPassesOnDualNumbers) {
  Sandbox sb;
  harness::spit(sb.path("dual.json"), dual_numbers);
  int code = -1;
  EXPECT_EQ(verify(sb, "dual.json", "dual", &code), "OK structure dual up to arity 4\n");
  EXPECT_EQ(code, 0);
}

TEST(Cli, CorruptedStructureFailsAtArityThree) {
  Sandbox sb;
  std::string text = dual_numbers;
  // 1 * e = e + 1 breaks associativity first on three inputs.
  text.replace(text.find("[[0, 1], 1, \"1\"]"), 16, "[[0, 1], 1, \"1\"], [[0, 1], 0, \"1\"]");
  harness::spit(sb.path("bad.json"), text);
  int code = -1;
  const std::string out = verify(sb, "bad.json", "dual", &code);
  EXPECT_EQ(code, 1);
  EXPECT_EQ(out.rfind("FAIL structure dual", 0), 0u) << out;
  EXPECT_NE(out.find("violated at arity 3, degrees (0,0,0)"), std::string::npos) << out;
  // Lower arities still pass.
  const Result r = sb.run({"verify", "--in", sb.path("bad.json").string(), "--object", "dual", "--arity-max", "2"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, InputErrorsExitWithTwo) {
  Sandbox sb;
  harness::spit(sb.path("dual.json"), dual_numbers);
  harness::spit(sb.path("broken.json"), "{\"spaces\": ");
  const std::string in = sb.path("dual.json").string();
  const std::vector<std::vector<std::string>> cases{
      {"verify", "--in", in, "--object", "dual", "--bogus"},
      {"verify", "--in", sb.path("missing.json").string(), "--object", "dual"},
      {"verify", "--in", in, "--object", "nothing"},
      {"verify", "--in", in, "--object", "dual", "--arity-max", "5"},
      {"verify", "--in", sb.path("broken.json").string(), "--object", "dual"},
      {"lift", "--in", in, "--dir", "sideways", "--structure", "dual", "--map", "f"},
      {"frobnicate"},
      {},
      {"gen", "--seed", "1", "--profile", "flavor=z"},
  };
  for (const auto& args : cases) {
    const Result r = sb.run(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(r.code, 2) << joined << "\n" << r.out << r.err;
    EXPECT_FALSE(r.err.empty()) << joined;
  }
}

TEST(Cli, HelpExitsWithZero) {
  Sandbox sb;
  const Result r = sb.run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("transfer"), std::string::npos);
}

TEST(Cli, GenIsByteReproducible) {
  Sandbox sb;
  const std::vector<std::string> args{"gen", "--seed", "42", "--profile", "flavor=c,algebra=exterior,cones=2,N=4"};
  const Result a = sb.run(args);
  const Result b = sb.run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"seed\": 42"), std::string::npos);
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", sb.path("g.json").string()});
  ASSERT_EQ(sb.run(with_out).code, 0);
  EXPECT_EQ(harness::slurp(sb.path("g.json")), a.out);
  // The field can come from the environment.
  const Result p = sb.run(args, "AINF_FIELD=F11");
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("\"modulus\": 11"), std::string::npos);
}

TEST(Cli, PipelineOutputsReverify) {
  Sandbox sb;
  auto file = [&](const std::string& n) { return sb.path(n).string(); };
  auto step = [&](std::vector<std::string> args, const std::string& out) {
    args.insert(args.end(), {"--out", file(out)});
    const Result r = sb.run(args);
    EXPECT_EQ(r.code, 0) << args[0] << ": " << r.out << r.err;
  };
  auto ok = [&](const std::string& f, const std::string& object) {
    int code = -1;
    const std::string out = verify(sb, f, object, &code);
    EXPECT_EQ(code, 0) << object << ": " << out;
    EXPECT_EQ(out.rfind("OK ", 0), 0u) << out;
  };
  step({"gen", "--seed", "7", "--profile", "flavor=b,algebra=dual,cones=1,N=4,cone_degrees=0"}, "0.json");
  ok("0.json", "mu");
  ok("0.json", "equivalence");

  step({"transfer", "--in", file("0.json"), "--structure", "mu", "--fwd", "f", "--bwd", "g", "--htpy", "h",
        "--htpy-b", "k"},
       "1.json");
  for (const char* o : {"transfer", "transfer.nu", "transfer.F", "transfer.G", "transfer.H"}) ok("1.json", o);

  step({"transfer", "--in", file("0.json"), "--structure", "mu", "--fwd", "f", "--bwd", "g", "--htpy", "h",
        "--name", "half"},
       "1b.json");
  for (const char* o : {"half.nu", "half.G"}) ok("1b.json", o);

  step({"lift", "--in", file("1.json"), "--dir", "op", "--structure", "mu", "--map", "f", "--seed", "1", "--name",
        "a"},
       "2.json");
  step({"lift", "--in", file("2.json"), "--dir", "op", "--structure", "mu", "--map", "f", "--seed", "2", "--name",
        "b"},
       "3.json");
  for (const char* o : {"a.structure", "a.F", "b.F"}) ok("3.json", o);
  step({"connect", "--in", file("3.json"), "--left", "a.F", "--right", "b.F", "--given-isotopy", "mu"}, "4.json");
  for (const char* o : {"square", "square.S", "square.T", "square.eta"}) ok("4.json", o);

  step({"lift", "--in", file("1.json"), "--dir", "fib", "--structure", "transfer.nu", "--map", "f", "--seed", "3"},
       "5.json");
  ok("5.json", "lift.F");

  step({"compose", "--in", file("1.json"), "--first", "transfer.G", "--second", "transfer.F", "--isotopy", "mu",
        "--name", "FG"},
       "6.json");
  ok("6.json", "FG");

  // extend needs a homotopy A -> B of degree 1; add the zero one.
  nlohmann::json j = nlohmann::json::parse(harness::slurp(sb.path("1.json")));
  j["maps"]["z"] = {{"source", j["complexes"]["A"]["space"]},
                    {"target", j["complexes"]["B"]["space"]},
                    {"arity", 1},
                    {"degree", 1},
                    {"blocks", nlohmann::json::object()}};
  harness::spit(sb.path("1z.json"), j.dump(2));
  step({"extend", "--in", file("1z.json"), "--morphism", "transfer.F", "--map", "f", "--htpy", "z", "--seed", "5"},
       "7.json");
  for (const char* o : {"extend.psi", "extend.eta"}) ok("7.json", o);
}
