#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bethe/config.hpp"
#include "bethe/harness.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
  std::optional<std::size_t> rank_cap;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "experiment config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "write records here instead of stdout");
  sub->add_option("--format", o.format, "record format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", o.seed, "Monte Carlo seed (overrides config)");
  sub->add_option("--depth", o.depth, "quadrature subdivision depth (overrides config)")->check(CLI::Range(0, 20));
  sub->add_option("--rank-cap", o.rank_cap, "refuse Weyl groups larger than this (overrides config)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bethe ansatz eigenfunctions on Weyl alcoves"};
  app.set_version_flag("--version", BETHE_VERSION);
  app.require_subcommand(1);

  Options opts;
  const char* commands[][2] = {
      {"solve", "solve the Bethe ansatz equations and certify the minimizers"},
      {"verify", "check the eigenvalue equation and the wall boundary conditions"},
      {"norm-check", "compare the quadrature norm with |c|^2 det B / #W"},
      {"limit-scan", "follow a coupling grid toward zero"},
      {"gram", "Gram matrix of the leading eigenfunctions"},
      {"probe", "projection residual of a fixed bump onto leading eigenfunctions"},
  };
  for (auto& [name, help] : commands) add_common(app.add_subcommand(name, help), opts);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  bethe::Report report;
  try {
    auto cfg = bethe::load_config(opts.config);
    if (opts.seed) {
      cfg.seed = *opts.seed;
      cfg.entries.emplace_back("--seed", std::to_string(*opts.seed));
    }
    if (opts.depth) {
      cfg.depth = *opts.depth;
      cfg.entries.emplace_back("--depth", std::to_string(*opts.depth));
    }
    if (opts.rank_cap) {
      cfg.rank_cap = *opts.rank_cap;
      cfg.entries.emplace_back("--rank-cap", std::to_string(*opts.rank_cap));
    }
    bethe::validate(cfg);
    report = bethe::run_command(command, cfg);
  } catch (const bethe::Error& e) {
    std::cerr << "bethe-alcove " << command << ": " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!opts.out.empty()) {
    file.open(opts.out);
    if (!file) {
      std::cerr << "bethe-alcove: cannot write '" << opts.out << "'\n";
      return 2;
    }
  }
  std::ostream& os = opts.out.empty() ? std::cout : file;
  if (opts.format == "csv")
    bethe::write_csv(os, report);
  else
    bethe::write_jsonl(os, report);
  bethe::write_summary(std::cerr, report);
  return report.passed() ? 0 : 1;
}
