#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace markoff::cli;
  RunConfig config;
  CLI::App app{"p-adic minimality checks on Markoff surfaces", "markoff-padic"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"census", "count points of X_D*(Z/p^k) and their orbit partition"},
      {"orbits", "list orbits with representatives"},
      {"identities", "Chebyshev and companion matrix identities"},
      {"flow-check", "Mahler flow checks on sample maps"},
      {"expansions", "stabilizer expansions on polydisk charts"},
      {"certify", "build and replay a minimality certificate"},
      {"xd-check", "search for a witness that X_D fails"},
      {"catalog", "sizes of the catalogued finite orbits"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--p", config.p, "odd prime")->required();
    sub->add_option("--k", config.k, "precision");
    sub->add_option("--d", config.d, "D, an integer expression allowing sqrt(...)");
    sub->add_option("--budget-words", config.budget_words, "maximum word length for searches");
    sub->add_option("--workers", config.workers, "worker threads for enumeration");
    sub->add_option("--out", config.out, "write the JSON report here instead of stdout");
    sub->add_option("--gens", config.gens, "gamma or aut");
    sub->add_option("--case", config.catalog_case, "catalog case or all");
    sub->add_option("--lemma", config.lemma, "parab-f, g-and-h, nonpara-f or all");
    sub->add_option("--csv", config.csv, "write orbit representatives as CSV");
    sub->add_flag("--optimized-exponent", config.optimized_exponent, "use rotation orders for g and h");
    sub->callback([&config, sub] { config.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  RunResult result = run(config);
  if (!result.error.empty()) {
    std::cerr << "markoff-padic: " << result.error << '\n';
    return result.exit_code;
  }
  try {
    write_outputs(config, result);
  } catch (const std::exception& e) {
    std::cerr << "markoff-padic: " << e.what() << '\n';
    return kExitUsage;
  }
  return result.exit_code;
}
