#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include "testutil.hpp"

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const char* bin = std::getenv("ATM_BIN");
  if (!bin) bin = ATM_BIN_PATH;
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json out_json(const CmdResult& r) { return nlohmann::json::parse(r.out); }

std::string model(const std::string& name) { return testutil::data_path(name); }

}  // namespace

TEST_CASE("metric command on the worked examples") {
  auto r = run_cli("metric " + model("ts.json") + " --domain min-cost --attr cost");
  CHECK(r.code == 0);
  auto j = out_json(r);
  CHECK(j["value"]["exact"] == "1");
  CHECK(j["algorithm"] == "bu");
  CHECK(j["structure"]["tree_structured"] == true);

  r = run_cli("metric " + model("ts.json") + " --domain prob --attr prob");
  CHECK(r.code == 0);
  CHECK(out_json(r)["value"]["exact"] == "7/100");

  r = run_cli("metric " + model("td.json") + " --domain min-time-dyn --attr time");
  CHECK(r.code == 0);
  j = out_json(r);
  CHECK(j["value"]["exact"] == "15");
  CHECK(j["algorithm"] == "enumerate");

  r = run_cli("metric " + model("td.json") + " --domain min-skill-dyn --attr skill");
  CHECK(out_json(r)["value"]["exact"] == "10");

  r = run_cli("metric " + model("fig3.json") + " --domain min-cost --attr cost");
  CHECK(r.code == 0);
  j = out_json(r);
  CHECK(j["value"]["exact"] == "2");
  CHECK(j["algorithm"] == "bdd");
}

TEST_CASE("exit code 2 for unsatisfiable dynamic models") {
  auto r = run_cli("metric " + model("sand-aa.json") + " --domain min-time-dyn --attr time");
  CHECK(r.code == 2);
  CHECK(out_json(r)["unsatisfiable"] == true);
}

TEST_CASE("usage and validation errors exit with 1") {
  CHECK(run_cli("metric " + model("ts.json") + " --domain nope --attr cost").code == 1);
  CHECK(run_cli("metric " + model("ts.json") + " --domain min-cost --attr nope").code == 1);
  CHECK(run_cli("metric " + model("no-such-file.json") + " --domain min-cost --attr c").code == 1);
  CHECK(run_cli("metric " + model("td.json") + " --domain min-cost --attr time").code == 1);
}

TEST_CASE("forcing the bottom-up fold onto the shared-subtree DAG") {
  auto refused = run_cli("metric " + model("fig3.json") + " --domain min-cost --attr cost --algo bu");
  CHECK(refused.code == 1);

  auto forced =
      run_cli("metric " + model("fig3.json") + " --domain min-cost --attr cost --algo bu --force");
  CHECK(forced.code == 0);
  auto j = out_json(forced);
  CHECK(j["value"]["exact"] == "4");
  CHECK(j["precondition_violation"] == true);
  CHECK(j["flag"] == "correctness preconditions violated");
}

TEST_CASE("enumerate prints sorted minimal attacks") {
  auto r = run_cli("enumerate " + model("ts.json"));
  CHECK(r.code == 0);
  auto j = out_json(r);
  CHECK(j["attacks"] == nlohmann::json::parse(R"([["n"],["p","t"]])"));

  r = run_cli("enumerate " + model("td.json"));
  auto attacks = out_json(r)["attacks"];
  REQUIRE(attacks.size() == 2);
  CHECK(attacks[0]["bas"] == nlohmann::json::parse(R"(["ff","w"])"));
  CHECK(attacks[0]["order"].empty());
  CHECK(attacks[1]["bas"] == nlohmann::json::parse(R"(["cc","w"])"));
  CHECK(attacks[1]["order"] == nlohmann::json::parse(R"([["w","cc"]])"));
}

TEST_CASE("ktop command") {
  auto r = run_cli("ktop " + model("fig3.json") + " --domain min-cost --attr costk --k 2");
  CHECK(r.code == 0);
  auto values = out_json(r)["values"];
  REQUIRE(values.size() == 2);
  CHECK(values[0]["exact"] == "1");
  CHECK(values[1]["exact"] == "7");

  r = run_cli("ktop " + model("fig3.json") + " --domain min-cost --attr costk --k 1");
  CHECK(out_json(r)["values"][0]["exact"] == "1");

  // dynamic tree goes through the multiset domain
  r = run_cli("ktop " + model("dyn-or.json") + " --domain min-time-dyn --attr time --k 2");
  CHECK(r.code == 0);
  values = out_json(r)["values"];
  REQUIRE(values.size() == 2);
  CHECK(values[0]["exact"] == "4");
  CHECK(values[1]["exact"] == "5");

  // dynamic DAG falls back to enumeration with the same domain
  r = run_cli("ktop " + model("td.json") + " --domain min-time-dyn --attr time --k 2");
  CHECK(r.code == 0);
  values = out_json(r)["values"];
  REQUIRE(values.size() == 2);
  CHECK(values[0]["exact"] == "15");
  CHECK(values[1]["exact"] == "16");
}

TEST_CASE("enumerating an unsatisfiable dynamic model exits with 2") {
  auto r = run_cli("enumerate " + model("sand-aa.json"));
  CHECK(r.code == 2);
  auto j = out_json(r);
  CHECK(j["attacks"].empty());
  CHECK(j["unsatisfiable"] == true);
}

TEST_CASE("pareto front over cost and parallel time") {
  auto r = run_cli("pareto " + model("fig3.json") +
                   " --attrs cost,time --domains min-cost,min-time-par");
  CHECK(r.code == 0);
  auto front = out_json(r)["value"]["antichain"];
  REQUIRE(front.size() == 2);
  CHECK(front[0]["tuple"][0]["exact"] == "2");
  CHECK(front[0]["tuple"][1]["exact"] == "10");
  CHECK(front[1]["tuple"][0]["exact"] == "7");
  CHECK(front[1]["tuple"][1]["exact"] == "5");

  CHECK(run_cli("pareto " + model("fig3.json") + " --attrs cost --domains min-cost,prob").code ==
        1);
}

TEST_CASE("single-objective pareto degenerates to the plain metric") {
  auto r = run_cli("pareto " + model("ts.json") + " --attrs cost --domains min-cost");
  CHECK(r.code == 0);
  auto front = out_json(r)["value"]["antichain"];
  REQUIRE(front.size() == 1);
  CHECK(front[0]["tuple"][0]["exact"] == "1");
}

TEST_CASE("mixed orientations: cheap and likely dominates expensive and unlikely") {
  auto r = run_cli("pareto " + model("ts.json") + " --attrs cost,prob --domains min-cost,prob");
  CHECK(r.code == 0);
  auto front = out_json(r)["value"]["antichain"];
  REQUIRE(front.size() == 1);  // {n}: cost 1, probability 0.07 dominates {t,p}
  CHECK(front[0]["tuple"][0]["exact"] == "1");
  CHECK(front[0]["tuple"][1]["exact"] == "7/100");
}

TEST_CASE("pareto over a dynamic DAG uses the poset semantics") {
  auto r = run_cli("pareto " + model("td.json") +
                   " --attrs time,skill --domains min-time-dyn,min-skill-dyn");
  CHECK(r.code == 0);
  auto front = out_json(r)["value"]["antichain"];
  REQUIRE(front.size() == 2);
  CHECK(front[0]["tuple"][0]["exact"] == "15");
  CHECK(front[0]["tuple"][1]["exact"] == "42");
  CHECK(front[1]["tuple"][0]["exact"] == "16");
  CHECK(front[1]["tuple"][1]["exact"] == "10");
}

TEST_CASE("total probability command prints the exact rational") {
  auto r = run_cli("totalprob " + model("ts.json") + " --attr prob");
  CHECK(r.code == 0);
  auto j = out_json(r);
  CHECK(j["value"]["exact"] == "15767/200000");
  CHECK(j["value"]["decimal"] == "0.078835");
}

TEST_CASE("modules command lists modules bottom-up") {
  auto r = run_cli("modules " + model("tprime.json"));
  CHECK(r.code == 0);
  CHECK(out_json(r)["modules"] == nlohmann::json::parse(R"(["v","pickpocket"])"));
}

TEST_CASE("bdd command writes deterministic DOT") {
  std::string dot1 = "/tmp/atm_test1.dot", dot2 = "/tmp/atm_test2.dot";
  auto r = run_cli("bdd " + model("ts.json") + " --dot " + dot1);
  CHECK(r.code == 0);
  auto j = out_json(r);
  CHECK(j["bdd"]["node_count"] == 5);
  CHECK(j["bdd"]["path_count"] == "2");
  run_cli("bdd " + model("ts.json") + " --dot " + dot2);
  std::ifstream f1(dot1), f2(dot2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(!s1.empty());

  r = run_cli("bdd " + model("fig3.json") + " --order file:" + model("order_bac.json") +
              " --dot /tmp/atm_test3.dot");
  CHECK(r.code == 0);
  CHECK(out_json(r)["bdd"]["node_count"] == 5);
}

TEST_CASE("model can arrive on stdin") {
  auto r = run_cli("metric - --domain min-cost --attr cost < " + model("ts.json"));
  CHECK(r.code == 0);
  CHECK(out_json(r)["value"]["exact"] == "1");
}

TEST_CASE("min-attack needs no attribution and reports the witness") {
  auto r = run_cli("metric " + model("fig3.json") + " --domain min-attack");
  CHECK(r.code == 0);
  CHECK(out_json(r)["value"]["attack"] == nlohmann::json::parse(R"(["b"])"));
}

TEST_CASE("interval attributions switch to the interval domain") {
  auto r = run_cli("metric " + model("ts.json") + " --domain min-cost --attr costiv");
  CHECK(r.code == 0);
  auto j = out_json(r);
  CHECK(j["domain"] == "interval<min-cost>");
  CHECK(j["value"]["tuple"][0]["exact"] == "1");
  CHECK(j["value"]["tuple"][1]["exact"] == "2");
}
