#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asymp/cli_io.hpp"

namespace {

// "name=value,name=value"
std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw asymp::ParseError("tolerance override must be NAME=VALUE: " + item);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw asymp::ParseError("tolerance override is not a number: " + item);
    }
    if (!(value > 0.0)) throw asymp::ParseError("tolerances must be positive: " + item);
    out[item.substr(0, eq)] = value;
  }
  return out;
}

void apply_formats(asymp::RunConfig& cfg, const std::vector<std::string>& formats) {
  if (formats.empty()) return;
  cfg.json = cfg.csv = false;
  for (const auto& f : formats) {
    if (f == "json") {
      cfg.json = true;
    } else if (f == "csv") {
      cfg.csv = true;
    } else {
      throw asymp::ParseError("unknown format '" + f + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic charges of scattering scenarios"};
  app.require_subcommand(1);

  asymp::RunConfig cfg;
  cfg.out_dir = asymp::default_out_dir();
  int grid_order = 0;
  std::vector<std::string> formats, tolerances;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--grid-order", grid_order, "Sphere grid order")->check(CLI::Range(1, 400));
    sub->add_option("--out", cfg.out_dir, "Output directory (default $ASYMP_OUT_DIR or .)");
    sub->add_option("--format", formats, "Output formats: json, csv")->delimiter(',');
    sub->add_option("--tolerance", tolerances, "Tolerance override NAME=VALUE")->delimiter(',');
  };

  auto* charges = app.add_subcommand("charges", "Soft, hard and total charges of scenario files");
  charges->add_option("kind", cfg.command, "em or scalar")->required()->check(CLI::IsMember({"em", "scalar"}));
  charges->add_option("--scenario", cfg.scenarios, "Scenario JSON file")->required();
  charges->add_option("--jobs", cfg.jobs, "Scenarios computed in parallel")->check(CLI::PositiveNumber);
  common(charges);

  auto* verify = app.add_subcommand("verify", "Identity verification suite");
  verify->add_option("--suite", cfg.suite, "all or a single check name");
  common(verify);

  auto* reconstruct = app.add_subcommand("reconstruct", "Sample a reconstructed bulk field on a grid");
  reconstruct->add_option("--input", cfg.input, "Profile or current JSON file")->required();
  reconstruct->add_option("--grid", cfg.grid_spec, "N:L[:T], N^3 points on [-L,L]^3 at time T")->required();
  common(reconstruct);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? asymp::exit_pass : asymp::exit_parse;
  }

  try {
    if (grid_order > 0) cfg.grid_order = grid_order;
    cfg.tolerances = parse_tolerances(tolerances);
    if (*reconstruct) cfg.csv = true, cfg.json = false;
    apply_formats(cfg, formats);
    asymp::SuiteResult result;
    if (*charges) {
      if (cfg.grid_order && *cfg.grid_order < 4) throw asymp::ParseError("charge runs need --grid-order >= 4");
      result = asymp::run_charges(cfg, std::cout);
    } else if (*verify) {
      cfg.command = "verify";
      result = asymp::run_verify(cfg, std::cout);
    } else {
      cfg.command = "reconstruct";
      result = asymp::run_reconstruct(cfg, std::cout);
    }
    return result.exit_code;
  } catch (const asymp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return asymp::exit_parse;
  } catch (const asymp::Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return asymp::exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return asymp::exit_validation;
  }
}
