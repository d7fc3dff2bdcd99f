// Command-line front end: load an attack tree model, pick a domain and an
// attribution, and print metric results as JSON.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "atm/errors.hpp"
#include "atm/runner.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) atm::fail(atm::Errc::usage, "cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const atm::RunReport& report) {
  std::cout << report.to_json().dump(2) << "\n";
  return report.exit_code();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative security metrics on attack trees"};
  app.require_subcommand(1);

  std::string model_path;
  atm::RunOptions opt;
  std::string dot_path;
  std::string attrs_csv, domains_csv;

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "model file (JSON), or - for stdin")->required();
  };

  CLI::App* metric = app.add_subcommand("metric", "compute a metric value");
  add_model(metric);
  metric->add_option("--domain", opt.domain, "attribute domain name")->required();
  metric->add_option("--attr", opt.attr, "attribution name (not needed for min-attack)");
  metric->add_option("--algo", opt.algo, "auto|bu|bdd|enumerate|modular")->capture_default_str();
  metric->add_option("--order", opt.order, "BDD variable order: dfs or file:<path>")
      ->capture_default_str();
  metric->add_flag("--force", opt.force, "run an algorithm even when its preconditions fail");

  CLI::App* ktop = app.add_subcommand("ktop", "the k best metric values");
  add_model(ktop);
  ktop->add_option("--domain", opt.domain)->required();
  ktop->add_option("--attr", opt.attr);
  ktop->add_option("--k", opt.k, "how many values")->required();
  ktop->add_option("--order", opt.order)->capture_default_str();

  CLI::App* pareto = app.add_subcommand("pareto", "Pareto front over several objectives");
  add_model(pareto);
  pareto->add_option("--attrs", attrs_csv, "comma-separated attribution names")->required();
  pareto->add_option("--domains", domains_csv, "comma-separated domain names")->required();
  pareto->add_option("--order", opt.order)->capture_default_str();

  CLI::App* enumerate = app.add_subcommand("enumerate", "list the minimal attacks");
  add_model(enumerate);

  CLI::App* bdd = app.add_subcommand("bdd", "build the BDD and report statistics");
  add_model(bdd);
  bdd->add_option("--dot", dot_path, "write GraphViz DOT to this path");
  bdd->add_option("--order", opt.order)->capture_default_str();

  CLI::App* modules = app.add_subcommand("modules", "list the modules bottom-up");
  add_model(modules);

  CLI::App* totalprob = app.add_subcommand("totalprob", "exact total attack probability");
  add_model(totalprob);
  totalprob->add_option("--attr", opt.attr, "probability attribution")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    atm::Model model = atm::parse_model(read_input(model_path));
    if (metric->parsed()) return emit(atm::run_metric(model, opt));
    if (ktop->parsed()) return emit(atm::run_ktop(model, opt));
    if (pareto->parsed()) {
      opt.pareto_attrs = split_list(attrs_csv);
      opt.pareto_domains = split_list(domains_csv);
      return emit(atm::run_pareto(model, opt));
    }
    if (enumerate->parsed()) return emit(atm::run_enumerate(model));
    if (bdd->parsed()) {
      std::string dot;
      atm::RunReport report = atm::run_bdd_export(model, opt, &dot);
      if (!dot_path.empty()) {
        std::ofstream out(dot_path, std::ios::binary);
        if (!out) atm::fail(atm::Errc::usage, "cannot write '" + dot_path + "'");
        out << dot;
        report.extras["dot_written"] = dot_path;
        return emit(report);
      }
      std::cout << dot;
      std::cerr << report.to_json().dump(2) << "\n";
      return 0;
    }
    if (modules->parsed()) return emit(atm::run_modules(model));
    if (totalprob->parsed()) return emit(atm::run_totalprob(model, opt.attr));
  } catch (const atm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
