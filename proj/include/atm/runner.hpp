#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "atm/bottomup.hpp"
#include "atm/model_io.hpp"
#include "atm/semantics.hpp"

namespace atm {

struct RunOptions {
  std::string domain;
  std::string attr;
  std::string algo = "auto";  // auto | bu | bdd | enumerate | modular
  bool force = false;
  std::string order = "dfs";  // dfs | file:<path>
  unsigned k = 1;
  std::vector<std::string> pareto_attrs;
  std::vector<std::string> pareto_domains;
};

struct RunReport {
  std::string command;
  std::string domain;
  std::string algorithm;
  bool forced = false;
  bool precondition_violation = false;
  StructureKind structure;
  bool has_value = false;
  Value value;
  bool unsatisfiable = false;
  std::vector<Value> values;  // k-top results, best first
  std::vector<std::string> warnings;
  nlohmann::json extras = nlohmann::json::object();
  double total_ms = 0.0;

  nlohmann::json to_json() const;
  int exit_code() const { return unsatisfiable ? 2 : 0; }
};

nlohmann::json value_to_json(const Value& v);

RunReport run_metric(const Model& m, const RunOptions& opt);
RunReport run_ktop(const Model& m, const RunOptions& opt);
RunReport run_pareto(const Model& m, const RunOptions& opt);
RunReport run_enumerate(const Model& m);
RunReport run_bdd_export(const Model& m, const RunOptions& opt, std::string* dot_out);
RunReport run_modules(const Model& m);
RunReport run_totalprob(const Model& m, const std::string& attr);

}  // namespace atm
