#include "asymp/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace asymp {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
    if (!known) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T field(const json& j, const char* key, const std::string& where, std::optional<T> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError("missing key '" + std::string(key) + "' in " + where);
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

Vector3 vec3(const json& j, const char* key, const std::string& where, const Vector3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = field<std::vector<double>>(j, key, where);
  if (v.size() != 3) throw ParseError("'" + std::string(key) + "' in " + where + " needs 3 numbers");
  return {v[0], v[1], v[2]};
}

Vector4 vec4(const json& j, const char* key, const std::string& where, const Vector4& fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = field<std::vector<double>>(j, key, where);
  if (v.size() != 4) throw ParseError("'" + std::string(key) + "' in " + where + " needs 4 numbers");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<TermSpec> parse_terms(const json& j, const std::string& where, bool em) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<TermSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    if (em) {
      require_keys(t, {"shape", "center", "width", "power", "l", "m", "amplitude", "polarization"}, w);
    } else {
      require_keys(t, {"shape", "center", "width", "power", "l", "m", "amplitude"}, w);
    }
    TermSpec spec;
    const auto shape = field<std::string>(t, "shape", w);
    try {
      spec.shape.kind = shape_from_name(shape);
    } catch (const InvalidArgument&) {
      throw ParseError("unknown shape '" + shape + "' in " + w);
    }
    spec.shape.center = field<double>(t, "center", w, 0.0);
    spec.shape.width = field<double>(t, "width", w, 1.0);
    spec.shape.power = field<double>(t, "power", w, 1.0);
    spec.angular.l = field<int>(t, "l", w, 0);
    spec.angular.m = field<int>(t, "m", w, 0);
    spec.amplitude = field<double>(t, "amplitude", w, 1.0);
    if (em) {
      const auto pol = field<std::string>(t, "polarization", w, std::string("grad"));
      if (pol == "grad") {
        spec.polarization = Polarization::grad;
      } else if (pol == "curl") {
        spec.polarization = Polarization::curl;
      } else {
        throw ParseError("unknown polarization '" + pol + "' in " + w);
      }
    }
    out.push_back(spec);
  }
  return out;
}

HyperboloidPoint<double> parse_velocity(const json& j, const std::string& where) {
  require_keys(j, {"rho", "nhat"}, where);
  return {field<double>(j, "rho", where, 0.0), vec3(j, "nhat", where, Vector3::UnitZ())};
}

MatterFlux parse_matter(const json& j, const std::string& where, End end) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  MatterFlux m;
  m.end = end;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    require_keys(j[i], {"q", "rho", "nhat"}, w);
    m.particles.push_back({field<double>(j[i], "q", w),
                           HyperboloidPoint<double>(field<double>(j[i], "rho", w, 0.0),
                                                    vec3(j[i], "nhat", w, Vector3::UnitZ()))});
  }
  return m;
}

std::vector<Smearing> default_smearings() {
  return {{"Y1-1", {{1, -1, 1.0}}}, {"Y10", {{1, 0, 1.0}}}, {"Y11", {{1, 1, 1.0}}}};
}

std::vector<Smearing> parse_smearings(const json& j) {
  if (!j.is_array()) throw ParseError("smearings must be an array");
  std::vector<Smearing> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = "smearings[" + std::to_string(i) + "]";
    require_keys(j[i], {"id", "terms"}, w);
    Smearing s;
    s.id = field<std::string>(j[i], "id", w, "smearing" + std::to_string(i));
    const json terms = j[i].contains("terms") ? j[i].at("terms") : json::array();
    if (!terms.is_array()) throw ParseError(w + ".terms must be an array");
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string tw = w + ".terms[" + std::to_string(k) + "]";
      require_keys(terms[k], {"l", "m", "amplitude"}, tw);
      const int l = field<int>(terms[k], "l", tw), m = field<int>(terms[k], "m", tw);
      if (l < 0 || std::abs(m) > l) throw ParseError("invalid harmonic indices in " + tw);
      s.terms.emplace_back(l, m, field<double>(terms[k], "amplitude", tw, 1.0));
    }
    out.push_back(std::move(s));
  }
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const json& j) {
  if (!j.contains("schema")) return;
  if (field<int>(j, "schema", "document") != 1) throw ParseError("unsupported schema version");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

template <typename Value>
void require_falloff(const RadiativeProfile<Value>& p, const std::string& what) {
  if (p.empty()) return;
  const auto r = validate_falloff(p);
  if (!r.pass) throw FalloffViolation(what + " violates its declared fall-off");
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::string& fallback_id) {
  const json j = parse_json(text);
  require_keys(j, {"schema", "id", "kind", "free_in", "free_out_shape", "matter_in", "matter_out",
                   "grid_order", "smearings"},
               "scenario");
  check_schema(j);
  ScenarioFile s;
  s.id = field<std::string>(j, "id", "scenario", fallback_id);
  const auto kind = field<std::string>(j, "kind", "scenario");
  if (kind != "em" && kind != "scalar") throw ParseError("kind must be \"em\" or \"scalar\"");
  s.kind = kind == "em" ? FieldKind::em : FieldKind::scalar;
  const bool em = s.kind == FieldKind::em;
  const json empty = json::array();
  const auto in_terms = parse_terms(j.contains("free_in") ? j.at("free_in") : empty, "free_in", em);
  const auto out_terms =
      parse_terms(j.contains("free_out_shape") ? j.at("free_out_shape") : empty, "free_out_shape", em);
  const auto min = parse_matter(j.contains("matter_in") ? j.at("matter_in") : empty, "matter_in", End::past);
  const auto mout =
      parse_matter(j.contains("matter_out") ? j.at("matter_out") : empty, "matter_out", End::future);
  if (j.contains("grid_order")) s.grid_order = field<int>(j, "grid_order", "scenario");
  s.smearings = j.contains("smearings") ? parse_smearings(j.at("smearings")) : default_smearings();
  if (em) {
    const auto fin = make_em_profile(in_terms, End::past);
    const auto fout = make_em_profile(out_terms, End::future);
    require_falloff(fin, "free_in");
    require_falloff(fout, "free_out_shape");
    s.scenario = build_scenario(fin, min, mout, fout);
  } else {
    const auto fin = make_scalar_profile(in_terms, End::past);
    const auto fout = make_scalar_profile(out_terms, End::future);
    require_falloff(fin, "free_in");
    require_falloff(fout, "free_out_shape");
    s.scenario = build_scenario(fin, min, mout, fout);
  }
  return s;
}

ScenarioFile load_scenario(const std::string& path) { return parse_scenario(read_file(path), stem_of(path)); }

double RunConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

std::string default_out_dir() {
  const char* env = std::getenv("ASYMP_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

bool SuiteResult::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string charges_json(const std::string& scenario_id, FieldKind kind, int grid_order,
                         double tolerance, const std::vector<ChargeRow>& rows) {
  std::ostringstream o;
  bool all = true;
  o << "{\n  \"scenario\": " << quoted(scenario_id) << ",\n  \"kind\": \""
    << (kind == FieldKind::em ? "em" : "scalar") << "\",\n  \"grid_order\": " << grid_order
    << ",\n  \"tolerance\": " << format_number(tolerance) << ",\n  \"rows\": [";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].report;
    const bool pass = r.conservation_residual <= tolerance;
    all = all && pass;
    o << (i ? ",\n" : "\n") << "    {\"smearing\": " << quoted(rows[i].smearing_id)
      << ", \"soft_plus\": " << format_number(r.soft_plus)
      << ", \"soft_minus\": " << format_number(r.soft_minus)
      << ", \"hard_plus\": " << format_number(r.hard_plus)
      << ", \"hard_minus\": " << format_number(r.hard_minus)
      << ", \"total_plus\": " << format_number(r.total_plus)
      << ", \"total_minus\": " << format_number(r.total_minus)
      << ", \"residual\": " << format_number(r.conservation_residual)
      << ", \"route_discrepancy\": " << format_number(r.route_discrepancy)
      << ", \"pass\": " << (pass ? "true" : "false") << "}";
  }
  o << (rows.empty() ? "]" : "\n  ]") << ",\n  \"pass\": " << (all ? "true" : "false") << "\n}\n";
  return o.str();
}

std::string charges_csv(const std::vector<ChargeRow>& rows) {
  std::ostringstream o;
  o << "scenario_id,smearing_id,soft_plus,soft_minus,hard_plus,hard_minus,total_plus,total_minus,"
       "residual,route_discrepancy\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    o << row.scenario_id << ',' << row.smearing_id << ',' << format_number(r.soft_plus) << ','
      << format_number(r.soft_minus) << ',' << format_number(r.hard_plus) << ','
      << format_number(r.hard_minus) << ',' << format_number(r.total_plus) << ','
      << format_number(r.total_minus) << ',' << format_number(r.conservation_residual) << ','
      << format_number(r.route_discrepancy) << '\n';
  }
  return o.str();
}

std::string suite_json(const SuiteResult& r) {
  std::ostringstream o;
  o << "{\n  \"checks\": [";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& c = r.rows[i];
    o << (i ? ",\n" : "\n") << "    {\"name\": " << quoted(c.name) << ", \"status\": \""
      << (c.pass ? "pass" : "fail") << "\", \"residual\": " << format_number(c.residual)
      << ", \"tolerance\": " << format_number(c.tolerance) << ", \"seconds\": " << format_number(c.seconds)
      << ", \"note\": " << quoted(c.note) << "}";
  }
  o << (r.rows.empty() ? "]" : "\n  ]") << ",\n  \"pass\": " << (r.pass() ? "true" : "false") << "\n}\n";
  return o.str();
}

std::string suite_csv(const SuiteResult& r) {
  std::ostringstream o;
  o << "name,status,residual,tolerance,seconds\n";
  for (const auto& c : r.rows)
    o << c.name << ',' << (c.pass ? "pass" : "fail") << ',' << format_number(c.residual) << ','
      << format_number(c.tolerance) << ',' << format_number(c.seconds) << '\n';
  return o.str();
}

// ---------------------------------------------------------------------------
// Runs

std::vector<ChargeRow> compute_charges(const ScenarioFile& s, int grid_order, const LineQuadrature& line) {
  if (grid_order < 4) throw InvalidArgument("charge runs need grid order >= 4");
  const auto grid = build_sphere_grid(grid_order);
  std::vector<ChargeRow> rows;
  if (const auto* em = std::get_if<EMScenario>(&s.scenario)) {
    const auto f = derive_f0_f2(*em, line);
    for (const auto& sm : s.smearings)
      rows.push_back({s.id, sm.id, conservation_report_em(*em, sm.asymptote(), grid, &f)});
  } else {
    const auto& sc = std::get<ScalarScenario>(s.scenario);
    for (const auto& sm : s.smearings)
      rows.push_back({s.id, sm.id, conservation_report_scalar(sc, sm.asymptote(), grid)});
  }
  return rows;
}

SuiteResult run_charges(const RunConfig& cfg, std::ostream& log) {
  SuiteResult result;
  const double tol = cfg.tolerance("conservation", 1e-6);
  struct Outcome {
    std::optional<ScenarioFile> file;
    std::vector<ChargeRow> rows;
    int grid_order = 24;
    int code = exit_pass;
    std::string message;
    double seconds = 0.0;
  };
  std::vector<Outcome> outcomes(cfg.scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cfg.scenarios.size(); i = next++) {
      auto& out = outcomes[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out.file = load_scenario(cfg.scenarios[i]);
        if (cfg.command == "em" && out.file->kind != FieldKind::em)
          throw ParseError("scenario kind is \"scalar\" but the em subcommand was used");
        if (cfg.command == "scalar" && out.file->kind != FieldKind::scalar)
          throw ParseError("scenario kind is \"em\" but the scalar subcommand was used");
        out.grid_order = cfg.grid_order.value_or(out.file->grid_order.value_or(24));
        out.rows = compute_charges(*out.file, out.grid_order, cfg.line);
      } catch (const ParseError& e) {
        out.code = exit_parse;
        out.message = std::string("parse error: ") + e.what();
      } catch (const ChargeMismatch& e) {
        out.code = exit_validation;
        out.message = std::string("validation error (charge conservation): ") + e.what();
      } catch (const VanishingViolation& e) {
        out.code = exit_validation;
        out.message = std::string("validation error (vanishing property): ") + e.what();
      } catch (const FalloffViolation& e) {
        out.code = exit_validation;
        out.message = std::string("validation error (fall-off): ") + e.what();
      } catch (const Error& e) {
        out.code = exit_validation;
        out.message = std::string("validation error: ") + e.what();
      }
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cfg.scenarios.size())));
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& out = outcomes[i];
    if (out.code != exit_pass) {
      log << cfg.scenarios[i] << ": " << out.message << '\n';
      result.rows.push_back({cfg.scenarios[i], false, NAN, tol, out.seconds, out.message});
      result.exit_code = std::max(result.exit_code, out.code);
      continue;
    }
    const auto dir = std::filesystem::path(cfg.out_dir);
    const std::string base = "charges_" + out.file->id;
    if (cfg.json)
      write_file(dir / (base + ".json"), charges_json(out.file->id, out.file->kind, out.grid_order, tol, out.rows));
    if (cfg.csv) write_file(dir / (base + ".csv"), charges_csv(out.rows));
    double worst = 0.0;
    for (const auto& r : out.rows) worst = std::max(worst, r.report.conservation_residual);
    const bool pass = worst <= tol;
    log << out.file->id << ": " << out.rows.size() << " smearings, max residual " << format_number(worst)
        << (pass ? " (pass)" : " (FAIL)") << '\n';
    result.rows.push_back({out.file->id, pass, worst, tol, out.seconds, ""});
    if (!pass) result.exit_code = std::max(result.exit_code, static_cast<int>(exit_tolerance));
  }
  return result;
}

SuiteResult run_verify(const RunConfig& cfg, std::ostream& log) {
  SuiteResult result;
  const int order = cfg.grid_order.value_or(24);
  bool matched = false;
  for (const auto& check : verify_checks()) {
    if (cfg.suite != "all" && cfg.suite != check.name) continue;
    matched = true;
    CheckRow row;
    row.name = check.name;
    row.tolerance = cfg.tolerance(check.name, check.tolerance);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      row.residual = check.run(order, row.note);
      row.pass = std::isfinite(row.residual) && row.residual <= row.tolerance;
    } catch (const Error& e) {
      row.residual = NAN;
      row.pass = false;
      row.note = std::string("error: ") + e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[160];
    std::snprintf(line, sizeof line, "%s %-22s residual %-11.3e tolerance %-9.3g", row.pass ? "PASS" : "FAIL",
                  row.name.c_str(), row.residual, row.tolerance);
    log << line << (row.note.empty() ? "" : "  " + row.note)
        << '\n';
    result.rows.push_back(row);
  }
  if (!matched) throw ParseError("unknown verification check '" + cfg.suite + "'");
  const auto dir = std::filesystem::path(cfg.out_dir);
  if (cfg.json) write_file(dir / "verify.json", suite_json(result));
  if (cfg.csv) write_file(dir / "verify.csv", suite_csv(result));
  result.exit_code = result.pass() ? exit_pass : exit_tolerance;
  return result;
}

// ---------------------------------------------------------------------------
// Field dumps

namespace {

struct SampleGrid {
  int n;
  double half;
  double time;
};

SampleGrid parse_grid_spec(const std::string& spec) {
  // N:L[:T] -> N^3 points on [-L, L]^3 at time T
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 2 || parts.size() > 3) throw ParseError("grid spec must be N:L or N:L:T");
  try {
    SampleGrid g{std::stoi(parts[0]), std::stod(parts[1]), parts.size() == 3 ? std::stod(parts[2]) : 0.0};
    if (g.n < 1 || !(g.half >= 0.0)) throw ParseError("grid spec needs N >= 1 and L >= 0");
    return g;
  } catch (const std::logic_error&) {
    throw ParseError("grid spec must be N:L or N:L:T with numbers");
  }
}

struct DumpSource {
  std::function<Vector4(const SpacetimePoint<double>&)> field;  // scalar fields use component 0
  int components;
  double scale;  // local length scale for the finite-difference step
};

DumpSource parse_dump_source(const json& j, int order) {
  require_keys(j, {"schema", "kind", "profile", "field", "worldlines", "blobs", "grid_order"}, "input");
  check_schema(j);
  const auto kind = field<std::string>(j, "kind", "input");
  const int grid_order = field<int>(j, "grid_order", "input", order);
  const auto grid = build_sphere_grid(grid_order);
  if (kind == "scalar") {
    const json empty = json::array();
    const auto chi = make_scalar_profile(parse_terms(j.contains("profile") ? j.at("profile") : empty, "profile", false));
    double scale = 1.0;
    for (const auto& t : chi.terms()) scale = std::min(scale, t.shape.width);
    return {[chi, grid](const SpacetimePoint<double>& x) { return Vector4(scalar_from_chi(chi, x, grid), 0, 0, 0); },
            1, scale};
  }
  if (kind != "current") throw ParseError("input kind must be \"scalar\" or \"current\"");
  const auto fld = field<std::string>(j, "field", "input", std::string("em"));
  if (fld != "em" && fld != "scalar") throw ParseError("field must be \"em\" or \"scalar\"");
  CurrentModel c;
  double scale = 1.0;
  if (j.contains("worldlines")) {
    const json& ws = j.at("worldlines");
    if (!ws.is_array()) throw ParseError("worldlines must be an array");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string w = "worldlines[" + std::to_string(i) + "]";
      require_keys(ws[i], {"q", "kink", "v_in", "v_out", "smoothing"}, w);
      KinkedWorldline k{field<double>(ws[i], "q", w), vec4(ws[i], "kink", w, Vector4::Zero()),
                        parse_velocity(ws[i].contains("v_in") ? ws[i].at("v_in") : json::object(), w + ".v_in"),
                        parse_velocity(ws[i].contains("v_out") ? ws[i].at("v_out") : json::object(), w + ".v_out"),
                        field<double>(ws[i], "smoothing", w, 0.0)};
      if (k.smoothing > 0.0) scale = std::min(scale, k.smoothing);
      c.worldlines.push_back(k);
    }
  }
  if (j.contains("blobs")) {
    const json& bs = j.at("blobs");
    if (!bs.is_array()) throw ParseError("blobs must be an array");
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const std::string w = "blobs[" + std::to_string(i) + "]";
      require_keys(bs[i], {"q", "center", "direction", "sigma"}, w);
      GaussianBlob b{field<double>(bs[i], "q", w), vec4(bs[i], "center", w, Vector4::Zero()),
                     vec4(bs[i], "direction", w, Vector4(1, 0, 0, 0)), field<double>(bs[i], "sigma", w, 1.0)};
      if (!(b.sigma > 0.0)) throw InvalidArgument("blob width must be positive");
      scale = std::min(scale, b.sigma);
      c.blobs.push_back(b);
    }
  }
  if (fld == "em")
    return {[c, grid](const SpacetimePoint<double>& x) { return radiation_field(c, x, grid); }, 4, scale};
  return {[c, grid](const SpacetimePoint<double>& x) {
            return Vector4(radiation_field_scalar(c, x, grid), 0, 0, 0);
          },
          1, scale};
}

}  // namespace

SuiteResult run_reconstruct(const RunConfig& cfg, std::ostream& log) {
  SuiteResult result;
  const auto source = parse_dump_source(parse_json(read_file(cfg.input)), cfg.grid_order.value_or(24));
  const auto g = parse_grid_spec(cfg.grid_spec);
  const double h = 1e-3 * source.scale;
  const std::function<Vector4(const SpacetimePoint<double>&)> f = source.field;

  struct Sample {
    Vector4 x;
    Vector4 value;
    double residual;
  };
  std::vector<Sample> samples;
  int excluded = 0;
  double field_scale = 0.0, worst = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < g.n; ++k)
      for (int m = 0; m < g.n; ++m) {
        auto coord = [&](int a) { return g.n == 1 ? 0.0 : -g.half + 2.0 * g.half * a / (g.n - 1); };
        const SpacetimePoint<double> x(g.time, coord(i), coord(k), coord(m));
        try {
          const Vector4 v = f(x);
          const double r = dalembertian_fd(f, x, h, 4).norm();
          samples.push_back({x.vector(), v, r});
          field_scale = std::max(field_scale, v.norm());
          worst = std::max(worst, r);
        } catch (const WorldlineSingularity&) {
          ++excluded;
        }
      }

  const double rel = field_scale > 0.0 ? worst / field_scale : 0.0;
  CheckRow row{"fd_residual", false, rel, cfg.tolerance("fd_residual", 1e-6), 0.0,
               "excluded_singular=" + std::to_string(excluded)};
  row.pass = rel <= row.tolerance;
  result.rows.push_back(row);
  result.exit_code = row.pass ? exit_pass : exit_tolerance;

  const auto dir = std::filesystem::path(cfg.out_dir);
  const std::string base = "reconstruct_" + stem_of(cfg.input);
  const char* names[] = {"a0", "a1", "a2", "a3"};
  if (cfg.csv) {
    std::ostringstream o;
    o << "# excluded_singular: " << excluded << "\n# fd_step: " << format_number(h) << "\nt,x,y,z,";
    if (source.components == 1) {
      o << "value";
    } else {
      for (int c = 0; c < 4; ++c) o << (c ? "," : "") << names[c];
    }
    o << ",fd_residual\n";
    for (const auto& s : samples) {
      for (int c = 0; c < 4; ++c) o << format_number(s.x(c)) << ',';
      for (int c = 0; c < source.components; ++c) o << format_number(s.value(c)) << ',';
      o << format_number(s.residual) << '\n';
    }
    write_file(dir / (base + ".csv"), o.str());
  }
  if (cfg.json) {
    std::ostringstream o;
    o << "{\n  \"excluded_singular\": " << excluded << ",\n  \"fd_step\": " << format_number(h)
      << ",\n  \"max_relative_residual\": " << format_number(rel) << ",\n  \"samples\": [";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      o << (i ? ",\n" : "\n") << "    {\"x\": [";
      for (int c = 0; c < 4; ++c) o << (c ? ", " : "") << format_number(s.x(c));
      o << "], \"value\": [";
      for (int c = 0; c < source.components; ++c) o << (c ? ", " : "") << format_number(s.value(c));
      o << "], \"fd_residual\": " << format_number(s.residual) << "}";
    }
    o << (samples.empty() ? "]" : "\n  ]") << "\n}\n";
    write_file(dir / (base + ".json"), o.str());
  }
  log << samples.size() << " samples, " << excluded << " excluded on worldlines, max relative FD residual "
      << format_number(rel) << (row.pass ? " (pass)" : " (FAIL)") << '\n';
  return result;
}

}  // namespace asymp
