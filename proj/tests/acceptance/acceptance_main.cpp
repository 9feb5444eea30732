#include "migsched/acceptance.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
  migsched::AcceptanceOptions options;
  std::vector<int> only;
  std::string verdict;
  std::string scratch;
  app.add_option("--scale", options.scale, "Corpus size multiplier");
  app.add_option("--seed", options.seed, "Corpus seed");
  app.add_option("--only", only, "Criterion ids to run")->delimiter(',');
  app.add_option("--verdict", verdict, "Also write the verdict JSON here");
  app.add_option("--scratch", scratch, "Directory for the determinism check");
  CLI11_PARSE(app, argc, argv);
  options.scratch = scratch;

  const auto results = migsched::run_acceptance(options, {only.begin(), only.end()});
  bool pass = true;
  for (const auto& r : results) {
    std::cout << migsched::format_result(r) << std::endl;
    pass = pass && r.pass;
  }
  if (!verdict.empty()) migsched::write_json_file(verdict, migsched::verdict_to_json(results, options.scale));
  return pass ? 0 : 1;
}
