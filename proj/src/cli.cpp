#include "diracstep/cli.hpp"

#include "diracstep/algebra.hpp"
#include "diracstep/dynamics.hpp"
#include "diracstep/io/atomic_file.hpp"
#include "diracstep/io/csv.hpp"
#include "diracstep/io/representation_json.hpp"
#include "diracstep/io/svg.hpp"
#include "diracstep/scattering.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace diracstep::cli {

namespace {

using nlohmann::json;
using scattering::Coupling;

struct ParamSpec {
  const char* key;
  const char* help;
};

const std::vector<ParamSpec> kScatterParams = {
    {"coupling", "Lorentz structure of the step: vector, scalar or pseudoscalar"},
    {"E", "total energy (natural units)"},
    {"V0", "step height"},
    {"m0", "rest mass (default 1)"},
    {"sweep", "AXIS:FROM:TO:STEPS with AXIS one of E, V0, m0"},
};

const std::vector<ParamSpec> kEvolveParams = {
    {"coupling", "vector, scalar or pseudoscalar"},
    {"E", "packet central energy E_c (alias of --Ec, default 2)"},
    {"Ec", "packet central energy E_c"},
    {"kc", "packet central wavenumber (alternative to --Ec)"},
    {"m0", "rest mass (default 1)"},
    {"V0", "step height (default 0)"},
    {"grid-n", "grid points, power of two >= 256 (default 4096)"},
    {"domain-l", "domain length (default 400), domain is [-L/2, L/2)"},
    {"dt", "time step (default 0.04)"},
    {"steps", "number of steps (default: ceil(t-final / dt))"},
    {"t-final", "run duration when --steps is not given (default 200)"},
    {"sigma", "packet width (default 10)"},
    {"xc", "packet centre (default -L/4)"},
    {"x-step", "step position (default 0)"},
    {"smoothing", "tanh smoothing width of the step (default 0, sharp)"},
    {"record-every", "observable recording interval in steps (default 10)"},
    {"max-dt-ratio", "accuracy limit dt <= ratio * dx (default 0.5)"},
    {"snapshots", "directory for per-record field snapshots"},
    {"summary", "path for the summary JSON"},
};

const std::vector<ParamSpec> kAlgebraParams = {
    {"n", "spatial dimension"},
    {"emit-json", "write the representation as JSON to this path"},
    {"input", "verify a representation read from this JSON file instead of building one"},
    {"tolerance", "verification tolerance (default 1e-12)"},
};

const std::vector<ParamSpec>& params_for(Subcommand sub) {
  switch (sub) {
    case Subcommand::Scatter: return kScatterParams;
    case Subcommand::Evolve: return kEvolveParams;
    case Subcommand::Algebra: return kAlgebraParams;
  }
  throw std::logic_error("unknown subcommand");
}

bool is_known(Subcommand sub, const std::string& key) {
  for (const auto& p : params_for(sub)) {
    if (key == p.key) return true;
  }
  return false;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "svg") return OutputFormat::Svg;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("--format must be csv, svg or json, got '" + text + "'");
}

std::string json_scalar_to_string(const std::string& key, const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number()) return io::format_number(value.get<double>());
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  throw ConfigError("config key '" + key + "' must be a string, number or boolean");
}

void merge_config_file(const std::string& path, RunConfig& config, bool output_given,
                       bool format_given) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "output") {
      if (!output_given) config.output_path = json_scalar_to_string(key, value);
    } else if (key == "format") {
      if (!format_given) config.format = parse_format(json_scalar_to_string(key, value));
    } else if (is_known(config.subcommand, key)) {
      config.parameters.try_emplace(key, json_scalar_to_string(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "' for this subcommand");
    }
  }
}

/// Typed view of the parameter map; every accessor names the flag on error.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& values) : values_(values) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback = {}) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_number(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    long value = 0;
    const auto& s = it->second;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ConfigError("--" + key + ": expected an integer, got '" + s + "'");
    }
    return value;
  }

  Coupling coupling() const {
    const std::string name = text("coupling", "vector");
    const auto c = scattering::parse_coupling(name);
    if (!c) throw ConfigError("--coupling must be vector, scalar or pseudoscalar, got '" + name + "'");
    return *c;
  }

  static double parse_number(const std::string& key, const std::string& s) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(value)) {
      throw ConfigError("--" + key + ": expected a finite number, got '" + s + "'");
    }
    return value;
  }

 private:
  const std::map<std::string, std::string>& values_;
};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string short_complex(std::complex<double> z) {
  return short_number(z.real()) + (z.imag() < 0.0 ? "-" : "+") +
         short_number(std::abs(z.imag())) + "i";
}

/// Writes to the output path atomically, or to `out` when no path is set.
void emit(const RunConfig& config, std::ostream& out,
          const std::function<void(std::ostream&)>& writer) {
  if (config.output_path.empty()) {
    writer(out);
  } else {
    io::write_atomically(config.output_path, writer);
  }
}

// ---------------------------------------------------------------- scatter

struct SweepRequest {
  scattering::SweepAxis axis;
  double from;
  double to;
  int steps;
};

SweepRequest parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) throw ConfigError("--sweep must be AXIS:FROM:TO:STEPS, got '" + text + "'");
  const auto axis = scattering::parse_sweep_axis(parts[0]);
  if (!axis) throw ConfigError("--sweep axis must be E, V0 or m0, got '" + parts[0] + "'");
  SweepRequest req{*axis, Params::parse_number("sweep", parts[1]),
                   Params::parse_number("sweep", parts[2]), 0};
  long steps = 0;
  const auto [end, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), steps);
  if (ec != std::errc() || end != parts[3].data() + parts[3].size() || steps < 2 ||
      steps > 10'000'000) {
    throw ConfigError("--sweep STEPS must be an integer >= 2, got '" + parts[3] + "'");
  }
  req.steps = static_cast<int>(steps);
  if (!(req.from < req.to)) throw ConfigError("--sweep requires FROM < TO");
  return req;
}

json row_to_json(const scattering::SweepRow& row) {
  json j = {{"E", row.query.energy},
            {"V0", row.query.step_height},
            {"m0", row.query.mass},
            {"coupling", scattering::to_string(row.query.coupling)},
            {"status", scattering::to_string(row.status)}};
  if (row.result) {
    const auto& r = *row.result;
    j["a"] = r.incident_factor;
    j["b"] = {r.transmitted_factor.real(), r.transmitted_factor.imag()};
    j["R"] = {r.reflection_amplitude.real(), r.reflection_amplitude.imag()};
    j["T"] = {r.transmission_amplitude.real(), r.transmission_amplitude.imag()};
    j["r"] = r.reflection;
    j["t"] = r.transmission;
    j["regime"] = scattering::to_string(r.regime);
  } else {
    j["message"] = row.message;
  }
  return j;
}

/// Klein threshold V0 = E + m0 expressed on the swept axis.
double klein_threshold_on_axis(const scattering::ScatteringQuery& q, scattering::SweepAxis axis) {
  switch (axis) {
    case scattering::SweepAxis::StepHeight: return q.energy + q.mass;
    case scattering::SweepAxis::Energy: return q.step_height - q.mass;
    case scattering::SweepAxis::Mass: return q.step_height - q.energy;
  }
  return std::nan("");
}

std::string sweep_svg(const std::vector<scattering::SweepRow>& rows, const SweepRequest& req,
                      const scattering::ScatteringQuery& base) {
  const std::string axis(scattering::to_string(req.axis));
  io::NumericTable table{{axis, "r", "t"}, {}};
  for (const auto& row : rows) {
    const double x = req.axis == scattering::SweepAxis::Energy       ? row.query.energy
                     : req.axis == scattering::SweepAxis::StepHeight ? row.query.step_height
                                                                     : row.query.mass;
    const double nan = std::nan("");
    table.rows.push_back({x, row.result ? row.result->reflection : nan,
                          row.result ? row.result->transmission : nan});
  }
  io::PlotSpec spec;
  spec.x_column = axis;
  spec.y_columns = {"r", "t"};
  spec.title = std::string("Step scattering, ") + std::string(scattering::to_string(base.coupling)) +
               " coupling";
  spec.x_label = axis;
  spec.y_label = "coefficient";
  if (base.coupling == Coupling::Vector) {
    spec.rules.push_back({klein_threshold_on_axis(base, req.axis), "Klein threshold V0 = E + m0"});
  }
  return io::render_svg(table, spec);
}

int run_sweep(const RunConfig& config, const Params& p, scattering::ScatteringQuery base,
              std::ostream& out, std::ostream& err) {
  const SweepRequest req = parse_sweep(p.text("sweep"));
  using scattering::SweepAxis;
  // Non-swept parameters are validated up front; swept points become rows.
  if (req.axis != SweepAxis::Energy && !p.has("E")) throw ConfigError("missing required parameter --E");
  if (req.axis != SweepAxis::Mass && !(base.mass > 0.0)) throw ConfigError("--m0 must be > 0");
  if (req.axis == SweepAxis::StepHeight && !(base.energy > base.mass)) {
    throw ConfigError("incident wave below threshold: requires E > m0");
  }
  if (base.coupling == Coupling::Pseudoscalar) {
    throw ConfigError("no closed-form step scattering for pseudoscalar coupling; use evolve");
  }

  const auto rows = scattering::sweep(base, req.axis, req.from, req.to, req.steps);

  switch (config.format) {
    case OutputFormat::Csv:
      emit(config, out, [&](std::ostream& os) { io::write_scatter_csv(os, rows); });
      break;
    case OutputFormat::Json: {
      json doc = json::array();
      for (const auto& row : rows) doc.push_back(row_to_json(row));
      emit(config, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
      break;
    }
    case OutputFormat::Svg: {
      const std::string svg = sweep_svg(rows, req, base);
      emit(config, out, [&](std::ostream& os) { os << svg; });
      break;
    }
  }

  std::size_t invalid = 0;
  std::size_t singular = 0;
  for (const auto& row : rows) {
    if (row.status == scattering::RowStatus::Invalid) ++invalid;
    if (row.status == scattering::RowStatus::Singular) ++singular;
  }
  if (singular > 0) {
    err << "warning: " << singular << " sweep point(s) sit on the pole E - V0 = -m0 (or E = -(m0 + V0)); "
        << "marked 'singular'\n";
  }
  if (invalid > 0) {
    err << "error: " << invalid << " sweep point(s) violate E > m0 > 0; marked 'invalid'\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run_scatter(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Params p(config.parameters);
  scattering::ScatteringQuery base{p.number("E", std::nan("")), p.number("V0", 0.0),
                                   p.number("m0", 1.0), p.coupling()};
  if (p.has("sweep")) return run_sweep(config, p, base, out, err);

  if (!p.has("E")) throw ConfigError("missing required parameter --E");
  if (config.format == OutputFormat::Svg) throw ConfigError("svg output needs --sweep");
  if (base.coupling == Coupling::Pseudoscalar) {
    throw ConfigError("no closed-form step scattering for pseudoscalar coupling; use evolve");
  }

  const auto result = scattering::amplitudes(base);
  out << "E=" << short_number(base.energy) << " V0=" << short_number(base.step_height)
      << " m0=" << short_number(base.mass) << " coupling=" << scattering::to_string(base.coupling)
      << " a=" << short_number(result.incident_factor)
      << " b=" << short_complex(result.transmitted_factor)
      << " R=" << short_complex(result.reflection_amplitude)
      << " T=" << short_complex(result.transmission_amplitude)
      << " r=" << short_number(result.reflection) << " t=" << short_number(result.transmission)
      << " regime=" << scattering::to_string(result.regime) << '\n';

  if (!config.output_path.empty()) {
    const std::vector<scattering::SweepRow> rows{
        {base, scattering::RowStatus::Ok, result, {}}};
    if (config.format == OutputFormat::Json) {
      io::write_atomically(config.output_path, row_to_json(rows.front()).dump(2) + "\n");
    } else {
      io::write_atomically(config.output_path,
                           [&](std::ostream& os) { io::write_scatter_csv(os, rows); });
    }
  }
  return kExitOk;
}

// ----------------------------------------------------------------- evolve

int run_evolve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Params p(config.parameters);
  const Coupling coupling = p.coupling();
  const double mass = p.number("m0", 1.0);
  if (mass < 0.0) throw ConfigError("--m0 must be >= 0");

  if (p.has("E") && p.has("Ec")) throw ConfigError("give only one of --E and --Ec");
  const std::string energy_key = p.has("Ec") ? "Ec" : "E";
  if (p.has("kc") && p.has(energy_key)) throw ConfigError("give either --kc or --" + energy_key);
  double energy = 0.0;
  double wavenumber = 0.0;
  if (p.has("kc")) {
    wavenumber = p.number("kc", 0.0);
    if (!(wavenumber > 0.0)) throw ConfigError("--kc must be > 0");
    energy = std::hypot(wavenumber, mass);
  } else {
    energy = p.number(energy_key, 2.0);
    if (!(energy > mass)) throw ConfigError("--" + energy_key + " must exceed m0 (requires E > m0)");
    wavenumber = std::sqrt((energy - mass) * (energy + mass));
  }

  const double height = p.number("V0", 0.0);
  const long points = p.integer("grid-n", 4096);
  if (points < 1) throw ConfigError("--grid-n must be positive");
  const double length = p.number("domain-l", 400.0);
  const double dt = p.number("dt", 0.04);
  if (!(dt > 0.0)) throw ConfigError("--dt must be > 0");
  long steps = 0;
  if (p.has("steps")) {
    steps = p.integer("steps", 0);
  } else {
    const double t_final = p.number("t-final", 200.0);
    if (!(t_final > 0.0)) throw ConfigError("--t-final must be > 0");
    steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  }
  if (steps < 1) throw ConfigError("--steps must be >= 1");
  const double sigma = p.number("sigma", 10.0);
  const double center = p.number("xc", -0.25 * length);
  const double x_step = p.number("x-step", 0.0);
  const double smoothing = p.number("smoothing", 0.0);
  const long record_every = p.integer("record-every", 10);
  if (record_every < 1) throw ConfigError("--record-every must be >= 1");
  dynamics::EvolveOptions options;
  options.max_dt_over_dx = p.number("max-dt-ratio", 0.5);
  if (!(options.max_dt_over_dx > 0.0)) throw ConfigError("--max-dt-ratio must be > 0");

  // Construction validates grid, packet and step before the run starts.
  const dynamics::Grid grid(static_cast<std::size_t>(points), length, -0.5 * length);
  const auto profile = dynamics::PotentialProfile::step(height, x_step, smoothing, coupling);
  if (!(x_step > grid.left_edge() && x_step < grid.right_edge())) {
    throw ConfigError("--x-step must lie inside the domain");
  }
  if (dt > options.max_dt_over_dx * grid.dx()) {
    throw ConfigError("--dt " + short_number(dt) + " exceeds the accuracy limit " +
                      short_number(options.max_dt_over_dx) + " dx = " +
                      short_number(options.max_dt_over_dx * grid.dx()) +
                      " (raise --max-dt-ratio to override)");
  }
  const auto initial = dynamics::gaussian_packet(grid, center, wavenumber, sigma, mass);

  if (p.has("snapshots")) {
    const std::filesystem::path dir = p.text("snapshots");
    std::filesystem::create_directories(dir);
    options.on_record = [dir](const dynamics::WavePacketState& state,
                              const dynamics::ObservableRecord& rec) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%08ld.csv", rec.step);
      io::write_atomically(dir / name,
                           [&](std::ostream& os) { io::write_snapshot_csv(os, state); });
    };
  }

  const auto result = dynamics::evolve(initial, profile, mass, dt, steps, record_every, options);
  const auto& records = result.records;
  double drift = 0.0;
  for (const auto& rec : records) {
    drift = std::max(drift, std::abs(rec.norm - records.front().norm) / records.front().norm);
  }

  json summary = {{"coupling", scattering::to_string(coupling)},
                  {"E_c", energy},
                  {"k_c", wavenumber},
                  {"m0", mass},
                  {"V0", height},
                  {"grid_n", points},
                  {"domain_l", length},
                  {"dt", dt},
                  {"dx", grid.dx()},
                  {"dt_over_dx", dt / grid.dx()},
                  {"max_dt_over_dx", options.max_dt_over_dx},
                  {"smoothing", smoothing},
                  {"steps", steps},
                  {"final_time", result.state.time},
                  {"p_left_final", records.back().p_left},
                  {"p_right_final", records.back().p_right},
                  {"norm_drift", drift}};
  if (coupling != Coupling::Pseudoscalar && mass > 0.0) {
    try {
      const auto analytic = scattering::amplitudes({energy, height, mass, coupling});
      summary["analytic_r"] = analytic.reflection;
      summary["analytic_t"] = analytic.transmission;
      summary["analytic_regime"] = scattering::to_string(analytic.regime);
    } catch (const scattering::SingularConfiguration& e) {
      err << "warning: no analytic coefficients: " << e.what() << '\n';
    }
  }

  switch (config.format) {
    case OutputFormat::Csv:
      if (!config.output_path.empty()) {
        io::write_atomically(config.output_path,
                             [&](std::ostream& os) { io::write_observables_csv(os, records); });
      }
      break;
    case OutputFormat::Json:
      if (!config.output_path.empty()) {
        io::write_atomically(config.output_path, summary.dump(2) + "\n");
      }
      break;
    case OutputFormat::Svg: {
      if (config.output_path.empty()) throw ConfigError("svg output needs --output");
      io::NumericTable table{{"time", "p_left", "p_right", "norm"}, {}};
      for (const auto& rec : records) table.rows.push_back({rec.time, rec.p_left, rec.p_right, rec.norm});
      io::PlotSpec spec;
      spec.x_column = "time";
      spec.y_columns = {"p_left", "p_right", "norm"};
      spec.title = std::string("Wave packet, ") + std::string(scattering::to_string(coupling)) +
                   " step V0 = " + short_number(height);
      spec.x_label = "time";
      spec.y_label = "probability";
      io::write_atomically(config.output_path, io::render_svg(table, spec));
      break;
    }
  }
  if (p.has("summary")) io::write_atomically(p.text("summary"), summary.dump(2) + "\n");
  out << summary.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- algebra

int run_algebra(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Params p(config.parameters);
  const double tolerance = p.number("tolerance", algebra::kDefaultTolerance);
  if (tolerance < 0.0) throw ConfigError("--tolerance must be >= 0");
  if (config.format == OutputFormat::Svg || (config.format == OutputFormat::Csv && !config.output_path.empty())) {
    throw ConfigError("algebra output supports --format json only");
  }

  algebra::DiracRepresentation rep;
  if (p.has("input")) {
    if (p.has("n")) throw ConfigError("give either --n or --input");
    std::ifstream in(p.text("input"));
    if (!in) throw ConfigError("cannot read " + p.text("input"));
    try {
      rep = io::representation_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigError("malformed representation JSON: " + std::string(e.what()));
    }
  } else {
    if (!p.has("n")) throw ConfigError("missing required parameter --n");
    const long n = p.integer("n", 0);
    if (n < 1 || n > 20) throw ConfigError("--n must be between 1 and 20 (spatial dimension >= 1)");
    rep = algebra::build_representation(static_cast<int>(n));
  }

  const auto report = algebra::verify_clifford(rep, tolerance);
  out << "n=" << rep.n << " dim=" << rep.dim
      << " minimal_dim=" << algebra::minimal_spinor_dimension(rep.n)
      << " passed=" << (report.passed ? "true" : "false")
      << " max_deviation=" << short_number(report.max_deviation) << '\n';
  for (const auto& f : report.failures) {
    out << "  failed " << f.identity << " deviation=" << short_number(f.deviation) << '\n';
  }

  const std::string doc = io::to_json(rep).dump() + "\n";
  if (p.has("emit-json")) io::write_atomically(p.text("emit-json"), doc);
  if (config.format == OutputFormat::Json && !config.output_path.empty()) {
    io::write_atomically(config.output_path, doc);
  }
  if (!report.passed) {
    err << "error: representation fails the Dirac algebra at tolerance " << short_number(tolerance)
        << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.subcommand) {
    case Subcommand::Scatter: return run_scatter(config, out, err);
    case Subcommand::Evolve: return run_evolve(config, out, err);
    case Subcommand::Algebra: return run_algebra(config, out, err);
  }
  return kExitUsage;
}

// ------------------------------------------------------------ entry point

ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Dirac step-potential scattering, wave-packet evolution and Dirac-matrix tools"};
  app.require_subcommand(1);

  std::string output;
  std::string format = "csv";
  std::string config_path;
  struct Sub {
    Subcommand kind;
    CLI::App* app;
    std::map<std::string, std::string> storage;
  };
  std::vector<Sub> subs;
  subs.reserve(3);
  const std::pair<Subcommand, const char*> names[] = {
      {Subcommand::Scatter, "scatter"}, {Subcommand::Evolve, "evolve"}, {Subcommand::Algebra, "algebra"}};
  const char* descriptions[] = {"closed-form step scattering (single point or sweep)",
                                "split-step wave-packet evolution",
                                "build and verify Dirac matrices in n+1 dimensions"};
  for (std::size_t i = 0; i < 3; ++i) {
    subs.push_back({names[i].first, app.add_subcommand(names[i].second, descriptions[i]), {}});
  }
  for (auto& sub : subs) {
    sub.app->add_option("--output", output, "output file (written atomically)");
    sub.app->add_option("--format", format, "csv, svg or json");
    sub.app->add_option("--config", config_path, "JSON config file; flags win on conflict");
    for (const auto& param : params_for(sub.kind)) {
      sub.app->add_option(std::string("--") + param.key, sub.storage[param.key], param.help);
    }
  }

  ParseOutcome outcome;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = app.exit(e, out, err);
    if (outcome.exit_code != 0) outcome.exit_code = kExitUsage;
    return outcome;
  }

  for (const auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    RunConfig& config = outcome.config;
    config.subcommand = sub.kind;
    for (const auto& param : params_for(sub.kind)) {
      if (sub.app->count(std::string("--") + param.key) > 0) {
        config.parameters[param.key] = sub.storage.at(param.key);
      }
    }
    const bool output_given = sub.app->count("--output") > 0;
    const bool format_given = sub.app->count("--format") > 0;
    config.output_path = output;
    config.format = parse_format(format);
    if (sub.app->count("--config") > 0) {
      merge_config_file(config_path, config, output_given, format_given);
    }
  }
  return outcome;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const ParseOutcome parsed = parse_command_line(argc, argv, out, err);
    if (parsed.exit_code >= 0) return parsed.exit_code;
    return run(parsed.config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const dynamics::NumericalBreakdown& e) {
    err << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace diracstep::cli
