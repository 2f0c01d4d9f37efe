#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "contactsym/json_io.hpp"

using contactsym::json;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(CONTACTSYM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expect_code = 0) {
  const Outcome r = run(args + " --format json");
  EXPECT_EQ(r.code, expect_code) << args;
  return json::parse(r.out);
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, VerifyCasimir) {
  auto j = run_json("verify-casimir --n 1 --k 2 --delta 1/3");
  EXPECT_TRUE(j["pass"].get<bool>());
  auto z = run_json("verify-casimir --n 1 --k 0 --delta 0");
  EXPECT_TRUE(z["result"]["casimir_zero_on_family"].get<bool>());
  EXPECT_EQ(z["result"]["c"], "0");
  EXPECT_EQ(run("verify-casimir --k 1 --delta 1/0").code, 2);
  EXPECT_EQ(run("verify-casimir --k 1 --delta 0.5").code, 2);
  // critical weight only warns
  EXPECT_EQ(run("verify-casimir --k 1 --delta 0 --max-base-degree 2").code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("invariants --k 1").code, 2);
  EXPECT_EQ(run("invariants --k 1 --m 0 --l 1 --nu 0 --algebra lie").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, Invariants) {
  auto a = run_json("invariants --n 1 --k 1 --m 0 --l 1 --nu 0 --algebra affine");
  EXPECT_EQ(a["result"]["dimension"], 2);
  EXPECT_TRUE(a["result"]["match"].get<bool>());
  EXPECT_EQ(run_json("invariants --n 1 --k 1 --m 0 --l 1 --nu 1/3")["result"]["dimension"], 0);
  EXPECT_EQ(run_json("invariants --n 1 --k 1 --m 0 --l 1 --nu 0 --algebra contact")["result"]["dimension"], 1);
}

TEST(Cli, Decompose) {
  const auto xt = write_temp("xt.json", R"({"n":1,"blocks":["xi"],"terms":[{"coeff":"1","exp":{"xi_t":1}}]})");
  auto j = run_json("decompose --k 1 --delta 1 --input " + xt);
  const auto& comps = j["result"]["components"];
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_TRUE(comps[0]["XlT"]["terms"].empty());
  EXPECT_FALSE(comps[1]["XlT"]["terms"].empty());
  EXPECT_TRUE(j["result"]["reconstructed_ok"].get<bool>());

  const auto zero = write_temp("zero.json", R"({"n":1,"blocks":["xi"],"terms":[]})");
  auto z = run_json("decompose --k 1 --delta 1 --input " + zero);
  for (const auto& c : z["result"]["components"]) EXPECT_TRUE(c["T"]["terms"].empty());

  EXPECT_EQ(run("decompose --k 1 --delta 0 --input " + xt).code, 3);
  const auto bad = write_temp("bad.json", R"({"n":1,"blocks":["xi"],"terms":[{"coeff":"1","exp":{"xi_w":1}}]})");
  EXPECT_EQ(run("decompose --k 1 --delta 1 --input " + bad).code, 2);
  const auto inhom = write_temp("inhom.json", R"({"n":1,"blocks":["xi"],"terms":[{"coeff":"1","exp":{"p1":1}}]})");
  EXPECT_EQ(run("decompose --k 1 --delta 1 --input " + inhom).code, 3);
}

TEST(Cli, ClassifySameWeight) {
  auto j = run_json("classify-same-weight --n 1 --l 1 --k 1 --delta 1/3");
  EXPECT_EQ(j["result"]["dimension"], 2);
  EXPECT_EQ(j["result"]["predicted"], 2);
}

TEST(Cli, Diophantine) {
  auto p = run_json("diophantine pairs --n 1 --k 1 --kp 1 --delta 1/3 --deltap 1/3");
  EXPECT_EQ(p["pairs"], json::parse("[[0,0],[1,1]]"));
  EXPECT_TRUE(p["injective"].get<bool>());
  EXPECT_EQ(run("diophantine pairs --n 1 --k 1 --kp 1 --delta 0 --deltap 1/3").code, 3);

  auto d = run_json("diophantine discriminant --n 1 --k 1 --kp 0 --l 1 --lp 0 --delta 1");
  EXPECT_EQ(d["result"]["roots"], json::parse(R"(["0","1"])"));

  auto k3 = run_json("diophantine kappa3 --n 1 --k 2 --kp 1 --blocks 2:1,0:0,1:1");
  EXPECT_TRUE(k3["result"]["matches"].get<bool>());
  EXPECT_TRUE(k3["result"]["substitution_ok"].get<bool>());
  EXPECT_EQ(run("diophantine kappa3 --n 1 --k 2 --kp 1 --blocks 2:1,1:0,0:-1").code, 3);
  EXPECT_EQ(run("diophantine kappa3 --n 1 --k 2 --kp 1 --blocks 2:1,0:0,0:0").code, 3);
  EXPECT_EQ(run("diophantine kappa3 --n 1 --k 2 --kp 1 --blocks 2-1").code, 2);

  auto k4 = run_json("diophantine kappa4 --n 1 --k 3 --kp 3 --blocks 0:0,1:0,0:1,2:0");
  EXPECT_FALSE(k4["result"]["lambda_consistent"].get<bool>());
}

TEST(Cli, SelftestDeterministicAndFaultInjection) {
  const Outcome a = run("selftest --level fast --seed 42 --format json");
  const Outcome b = run("selftest --level fast --seed 42 --format json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out)["pass"].get<bool>());

  const Outcome f = run("selftest --level fast --inject-fault reeb-sign --format json");
  EXPECT_EQ(f.code, 1);
  auto j = json::parse(f.out);
  EXPECT_EQ(j["first_failure"]["check"], "hamiltonian_morphism");
  for (const auto& c : j["checks"])
    if (c["name"] != "hamiltonian_morphism") EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
  EXPECT_EQ(run("selftest --inject-fault nothing").code, 2);
}

TEST(Cli, ExportBasis) {
  EXPECT_EQ(run_json("export-basis --n 1")["dimension"], 10);
  EXPECT_EQ(run_json("export-basis --n 2")["dimension"], 21);
}

// Rerunning with the echoed parameters reproduces the report.
TEST(Cli, ReportsRoundTrip) {
  for (const std::string cmd : {"verify-casimir --k 1 --delta 2/5 --max-base-degree 2",
                                "invariants --k 1 --m 1 --l 0 --nu 1 --algebra contact",
                                "classify-same-weight --l 2 --k 0 --delta -5/7",
                                "diophantine pairs --k 1 --kp 0 --delta 1 --deltap 0"}) {
    const json first = run_json(cmd);
    std::string args = first["command"].get<std::string>();
    for (const auto& [key, v] : first["params"].items())
      args += " --" + key + " " + (v.is_string() ? v.get<std::string>() : v.dump());
    const json second = run_json(args);
    EXPECT_EQ(first, second) << args;
  }
}
