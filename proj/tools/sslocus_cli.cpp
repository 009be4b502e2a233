// Command-line front end: classes, solve, verify.

#include <sslocus/commands.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

enum class Format { table, structured };

Format default_format() {
  const char* env = std::getenv("SSLOCUS_FORMAT");
  if (env && std::string(env) == "structured") return Format::structured;
  return Format::table;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sslocus::cli;
  CLI::App app{"sslocus: supersingular locus classes, intersection numbers and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  Format format = default_format();
  std::string output;
  const std::map<std::string, Format> formats{{"table", Format::table}, {"structured", Format::structured}};
  app.add_option("--format", format, "table or structured (default from SSLOCUS_FORMAT)")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
      ->option_text("table|structured");
  app.add_option("--output", output, "write the report to this file instead of stdout");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--g", opt.g, "genus");
    sub->add_option("--p", opt.p, "prime");
  };

  auto* classes = app.add_subcommand("classes", "cycle classes, masses and component counts for 1 <= g <= 4");
  common(classes);

  auto* solve = app.add_subcommand("solve", "intersection-number derivation for g = 3 or 4");
  std::optional<int> solve_g;
  solve->add_option("genus", solve_g, "3 or 4 (or use --g)");
  solve->add_option("--g", opt.g, "genus");

  auto* verify = app.add_subcommand("verify", "verification suites");
  std::string suite;
  verify->add_option("suite", suite, "counts | identities | dieudonne | all")
      ->required()
      ->check(CLI::IsMember({"counts", "identities", "dieudonne", "all"}));
  common(verify);
  verify->add_option("--m", opt.m, "residue degree for Witt vectors")->check(CLI::Range(1u, 8u));
  verify->add_option("--precision", opt.precision, "Witt vector precision N");
  verify->add_option("--trials", opt.trials, "samples per suite");
  verify->add_option("--seed", opt.seed, "random seed");
  verify->add_option("--budget", opt.budget, "enumeration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Report report;
  try {
    if (*classes) {
      if (!opt.g) throw std::invalid_argument("classes: --g is required");
      report = cmd_classes(*opt.g, opt.p);
    } else if (*solve) {
      std::optional<int> g = solve_g ? solve_g : opt.g;
      if (!g) throw std::invalid_argument("solve: genus required");
      report = cmd_solve(*g);
    } else {
      report = cmd_verify(suite, opt);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = format == Format::structured ? report.to_json().dump(2) + "\n" : report.to_table();
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return 2;
    }
    out << text;
  }
  return report.exit_code();
}
