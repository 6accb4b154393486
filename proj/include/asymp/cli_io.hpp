#ifndef ASYMP_CLI_IO_HPP
#define ASYMP_CLI_IO_HPP

// Batch front-end: scenario files, charge and verification runs, field
// dumps, and their JSON/CSV output.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "asymp/charges.hpp"
#include "asymp/profiles.hpp"
#include "asymp/reconstruct.hpp"

namespace asymp {

enum ExitCode : int { exit_pass = 0, exit_tolerance = 1, exit_parse = 2, exit_validation = 3 };

enum class FieldKind { em, scalar };

struct Smearing {
  std::string id;
  std::vector<std::tuple<int, int, double>> terms;  // (l, m, amplitude)

  GaugeScalarAsymptote asymptote() const { return GaugeScalarAsymptote::harmonics(terms); }
};

/// A validated scenario file.
struct ScenarioFile {
  std::string id;
  FieldKind kind = FieldKind::em;
  std::variant<EMScenario, ScalarScenario> scenario;
  std::optional<int> grid_order;
  std::vector<Smearing> smearings;
};

/// Throws ParseError on malformed input or schema violations and the
/// module errors (ChargeMismatch, VanishingViolation, FalloffViolation,
/// InvalidArgument) on physically inconsistent data.
ScenarioFile parse_scenario(const std::string& text, const std::string& fallback_id = "scenario");
ScenarioFile load_scenario(const std::string& path);

struct RunConfig {
  std::string command;
  std::vector<std::string> scenarios;
  std::optional<int> grid_order;
  LineQuadrature line;
  std::map<std::string, double> tolerances;
  std::string out_dir = ".";
  bool json = true;
  bool csv = false;
  int jobs = 1;
  std::string suite = "all";
  std::string input;
  std::string grid_spec;

  double tolerance(const std::string& name, double fallback) const;
};

/// Output directory from ASYMP_OUT_DIR, or ".".
std::string default_out_dir();

struct CheckRow {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string note;
};

struct SuiteResult {
  std::vector<CheckRow> rows;
  int exit_code = exit_pass;

  bool pass() const;
};

struct ChargeRow {
  std::string scenario_id;
  std::string smearing_id;
  ChargeReport report;
};

/// Fixed field order, 17 significant digits; non-finite numbers as null.
std::string format_number(double x);
std::string charges_json(const std::string& scenario_id, FieldKind kind, int grid_order,
                         double tolerance, const std::vector<ChargeRow>& rows);
std::string charges_csv(const std::vector<ChargeRow>& rows);
std::string suite_json(const SuiteResult& r);
std::string suite_csv(const SuiteResult& r);

/// Charge reports for one scenario on the given grid.
std::vector<ChargeRow> compute_charges(const ScenarioFile& s, int grid_order, const LineQuadrature& line);

SuiteResult run_charges(const RunConfig& cfg, std::ostream& log);
SuiteResult run_verify(const RunConfig& cfg, std::ostream& log);
SuiteResult run_reconstruct(const RunConfig& cfg, std::ostream& log);

// ---------------------------------------------------------------------------
// Verification suite

struct VerifyCheck {
  std::string name;
  double tolerance;
  /// Returns the measured residual; `note` receives extra detail.
  std::function<double(int grid_order, std::string& note)> run;
};

const std::vector<VerifyCheck>& verify_checks();

// ---------------------------------------------------------------------------
// Random consistent scenarios (used by the verification suite)

EMScenario random_em_scenario(std::mt19937_64& rng, bool radiation = true, bool matter = true);
ScalarScenario random_scalar_scenario(std::mt19937_64& rng, bool radiation = true, bool matter = true);
/// Random combination of real harmonics with 1 <= l <= l_max.
GaugeScalarAsymptote random_smearing(std::mt19937_64& rng, int l_max = 3);

}  // namespace asymp

#endif  // ASYMP_CLI_IO_HPP
