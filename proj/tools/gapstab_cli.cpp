#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>

#include "gapstab/suite.hpp"

namespace {

using namespace gapstab;

struct Options {
  std::string config;
  std::vector<std::string> suites;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
  std::optional<std::size_t> max_sites;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "TOML run configuration")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory (overrides out_dir)");
  sub->add_option("--seed", o.seed, "random seed for the checks");
  sub->add_option("--tol-scale", o.tol_scale, "multiplies every tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-sites", o.max_sites, "largest doubled many-body window");
}

void print(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    std::printf("%-8s %-40s %-12.4g %s %.4g", to_string(c.status), c.id.c_str(), c.measured,
                c.relation.empty() ? "  " : c.relation.c_str(), c.tolerance);
    if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
    std::printf("\n");
  }
  std::printf("%zu checks: %zu passed, %zu failed, %zu skipped\n", rep.checks.size(), rep.count(Status::pass),
              rep.count(Status::fail), rep.count(Status::skipped));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for gap stability of weakly interacting fermions"};
  app.require_subcommand(1);

  struct Command {
    std::vector<std::string> suites;
    std::string help;
  };
  const std::map<std::string, Command> commands{
      {"check", {{"geometry", "car"}, "lattice metric and canonical anticommutation relations"}},
      {"spectrum", {{"spectrum", "majorana"}, "single-particle gap, decay fit and Majorana structure"}},
      {"transform", {{"doubling", "transform"}, "doubled Hamiltonian and the interaction in eta modes"}},
      {"flow", {{"flow"}, "spectral flow, filter and gap along s"}},
      {"assemble", {{"assembly"}, "effective interactions W1, W2, W3 and the gap bound"}},
      {"localize", {{"localization"}, "conditional expectations and shell decomposition"}},
      {"lr", {{"lr"}, "Lieb-Robinson commutator profiles and velocity"}},
      {"suite", {{}, "run the selected verification suites"}},
  };
  Options o;
  for (const auto& [name, c] : commands) {
    auto* sub = app.add_subcommand(name, c.help);
    add_common(sub, o);
    if (name == "suite")
      sub->add_option("--suite", o.suites, "suite names, comma separated (default from config)")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  std::vector<std::string> suites;
  try {
    cfg = load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.tol_scale) cfg.tol_scale = *o.tol_scale;
    if (o.max_sites) cfg.max_doubled_sites = *o.max_sites;
    if (!o.out.empty()) cfg.out_dir = o.out;
    suites = cmd == "suite" ? (o.suites.empty() ? cfg.suites : o.suites) : commands.at(cmd).suites;
    suites = resolve_suites(suites);
    validate_config(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
    return 2;
  }

  try {
    VerificationReport rep = run_suite(cfg, suites, cmd);
    print(rep);
    emit(rep, cfg.out_dir);
    return rep.passed() ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
    return e.code() == Errc::config ? 2 : 1;
  }
}
