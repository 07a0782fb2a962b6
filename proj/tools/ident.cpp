#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ident/analysis.hpp"
#include "ident/errors.hpp"
#include "ident/problem.hpp"

namespace {

struct CommonOpts {
  std::string file;
  std::string grid_step;
  std::string method = "auto";
  std::uint64_t cap = ident::kDefaultEnumerationCap;
  double eps = ident::kDefaultEps;
};

void attach(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("file", opts.file, "problem document")->required();
  sub->add_option("--grid-step", opts.grid_step,
                  "override the document's grid step (e.g. 0.05)");
  sub->add_option("--cap", opts.cap, "enumeration cap in states");
  sub->add_option("--eps", opts.eps, "assumption-satisfaction tolerance");
  sub->add_option("--method", opts.method, "auto | enumerate | lp");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Identifiability, identification regions, and assumption refutability "
      "over declared statistical universes"};
  app.require_subcommand(1);
  CommonOpts opts;
  attach(app.add_subcommand("analyze",
                            "decide identifiability of each estimand"),
         opts);
  attach(app.add_subcommand(
             "region", "identification regions at the observed point"),
         opts);
  attach(app.add_subcommand("refute",
                            "classify each assumption as a-priori refutable "
                            "or irrefutable"),
         opts);
  attach(app.add_subcommand(
             "oracle", "recompute regions by forced brute-force enumeration"),
         opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ifstream in(opts.file);
    if (!in) {
      std::cerr << "error: cannot read '" << opts.file << "'\n";
      return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    ident::ProblemSpec spec = ident::parse(buffer.str());

    ident::RunOptions run_opts;
    if (!opts.grid_step.empty())
      run_opts.grid_step = ident::Rat::parse_decimal(opts.grid_step);
    run_opts.cap = opts.cap;
    run_opts.eps = opts.eps;
    run_opts.method = ident::method_from_name(opts.method);

    const std::string& cmd = app.get_subcommands().front()->get_name();
    ident::RunResult res =
        ident::run(spec, ident::command_from_name(cmd), run_opts);
    std::cout << res.json;
    std::cerr << res.diagnostics;
    return res.exit_code;
  } catch (const ident::EmptyUniverse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ident::UnreachableObservation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ident::Infeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ident::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
