// Copyright 2026 The Telechan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "telechan/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "telechan/explab.hpp"
#include "telechan/metrics.hpp"
#include "telechan/records_io.hpp"
#include "telechan/teleport.hpp"

namespace telechan {

namespace {

using nlohmann::json;

class BadArguments : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<int> bell;
  std::optional<std::string> env;
  std::optional<double> gamma;
  std::optional<double> j;
  std::optional<double> delta;
  std::optional<double> t;
  std::optional<int> m;
  std::optional<std::string> engine;
  std::optional<double> step;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> config;

  std::vector<double> t_grid;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> t_count;
  std::vector<double> delta_grid;
  std::vector<std::string> quantities;

  std::optional<std::string> kind;
  std::optional<std::string> axis;
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
  std::optional<long> samples;

  std::optional<int> n_theta;
  std::optional<int> n_phi;
};

constexpr double kDefaultGamma = 0.05;
constexpr double kDefaultTMax = 100.0;
constexpr int kDefaultTCount = 201;
constexpr int kDefaultNTheta = 17;
constexpr int kDefaultNPhi = 32;

template <typename T>
void fill(std::optional<T>& slot, const json& v) {
  if (!slot) slot = v.get<T>();
}

template <typename T>
void fill(std::vector<T>& slot, const json& v) {
  if (!slot.empty()) return;
  if (v.is_array()) {
    slot = v.get<std::vector<T>>();
  } else {
    slot = {v.get<T>()};
  }
}

void fill_strings(std::vector<std::string>& slot, const json& v) {
  if (!slot.empty()) return;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    for (std::string item; std::getline(ss, item, ',');) slot.push_back(item);
  } else {
    slot = v.get<std::vector<std::string>>();
  }
}

// Values already given on the command line win over the file.
void merge_config(Options& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadArguments("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw BadArguments("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw BadArguments("config file " + path + " must hold a JSON object");

  const std::map<std::string, std::function<void(const json&)>> setters{
      {"bell", [&](const json& v) { fill(o.bell, v); }},
      {"env", [&](const json& v) { fill(o.env, v); }},
      {"gamma", [&](const json& v) { fill(o.gamma, v); }},
      {"j", [&](const json& v) { fill(o.j, v); }},
      {"delta", [&](const json& v) { fill(o.delta, v); }},
      {"t", [&](const json& v) { fill(o.t, v); }},
      {"m", [&](const json& v) { fill(o.m, v); }},
      {"engine", [&](const json& v) { fill(o.engine, v); }},
      {"step", [&](const json& v) { fill(o.step, v); }},
      {"out", [&](const json& v) { fill(o.out, v); }},
      {"format", [&](const json& v) { fill(o.format, v); }},
      {"t_grid", [&](const json& v) { fill(o.t_grid, v); }},
      {"t_min", [&](const json& v) { fill(o.t_min, v); }},
      {"t_max", [&](const json& v) { fill(o.t_max, v); }},
      {"t_count", [&](const json& v) { fill(o.t_count, v); }},
      {"delta_grid", [&](const json& v) { fill(o.delta_grid, v); }},
      {"quantities", [&](const json& v) { fill_strings(o.quantities, v); }},
      {"kind", [&](const json& v) { fill(o.kind, v); }},
      {"axis", [&](const json& v) { fill(o.axis, v); }},
      {"bracket_lo", [&](const json& v) { fill(o.bracket_lo, v); }},
      {"bracket_hi", [&](const json& v) { fill(o.bracket_hi, v); }},
      {"samples", [&](const json& v) { fill(o.samples, v); }},
      {"n_theta", [&](const json& v) { fill(o.n_theta, v); }},
      {"n_phi", [&](const json& v) { fill(o.n_phi, v); }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw BadArguments("unknown config key: " + key);
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw BadArguments("config key '" + key + "' has the wrong type: " + e.what());
    }
  }
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--bell", o.bell, "initial Bell state index 0..3");
  sub->add_option("--env", o.env, "dissipative | noisy | dephasing");
  sub->add_option("--gamma", o.gamma, "environment coupling rate");
  sub->add_option("--j", o.j, "exchange coupling J");
  sub->add_option("--delta", o.delta, "anisotropy Delta");
  sub->add_option("--t", o.t, "evolution time");
  sub->add_option("--m", o.m, "Pauli correction branch 0..3 (default: best branch)");
  sub->add_option("--engine", o.engine, "analytic | integrator | both");
  sub->add_option("--step", o.step, "RK4 step size");
  sub->add_option("--out", o.out, "write results to this file");
  sub->add_option("--format", o.format, "csv | json");
  sub->add_option("--config", o.config, "JSON file with option values; flags override it");
}

struct Resolved {
  int bell = 0;
  EnvironmentSpec env;
  ChannelParams params;
  double t = 0.0;
  std::optional<int> m;
  Engine engine = Engine::Analytic;
  std::optional<double> step;
  std::string format = "csv";
};

Resolved resolve(const Options& o) {
  Resolved r;
  r.bell = o.bell.value_or(0);
  if (r.bell < 0 || r.bell > 3) throw BadArguments("--bell must be 0..3");
  const Environment kind = parse_environment(o.env.value_or("dissipative"));
  r.env = EnvironmentSpec(kind, o.gamma.value_or(kDefaultGamma));
  r.params = {o.j.value_or(0.0), o.delta.value_or(0.0)};
  r.t = o.t.value_or(0.0);
  if (!(r.t >= 0.0) || !std::isfinite(r.t)) throw BadArguments("--t must be a finite time >= 0");
  r.m = o.m;
  if (r.m && (*r.m < 0 || *r.m > 3)) throw BadArguments("--m must be 0..3");
  r.engine = parse_engine(o.engine.value_or("analytic"));
  r.step = o.step;
  if (r.step && !(*r.step > 0.0)) throw BadArguments("--step must be > 0");
  r.format = o.format.value_or("csv");
  if (r.format != "csv" && r.format != "json") throw BadArguments("--format must be csv or json");
  return r;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string complex6(Complex z) {
  return fixed6(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + fixed6(std::abs(z.imag())) + "i";
}

DensityMatrix channel_state(const Resolved& r, double* disagreement) {
  const ChannelModel model(r.bell, r.env, r.params, r.engine, r.step);
  DensityMatrix rho = model.state_at(r.t);
  if (r.engine == Engine::Both && disagreement) {
    *disagreement = (model.analytic_state(r.t).mat() - rho.mat()).cwiseAbs().maxCoeff();
  }
  return rho;
}

std::string cmd_evolve(const Options& o) {
  const Resolved r = resolve(o);
  double gap = 0.0;
  const DensityMatrix rho = channel_state(r, &gap);
  std::string s;
  if (r.format == "json") {
    json doc;
    doc["t"] = r.t;
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
      json row = json::array();
      for (int k = 0; k < 4; ++k) row.push_back({rho(i, k).real(), rho(i, k).imag()});
      rows.push_back(row);
    }
    doc["rho"] = rows;
    if (r.engine == Engine::Both) doc["engine_disagreement"] = gap;
    return doc.dump(2) + "\n";
  }
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      s += "rho" + std::to_string(i + 1) + std::to_string(k + 1) + "=" + complex6(rho(i, k)) + "\n";
    }
  }
  if (r.engine == Engine::Both) s += "engine_disagreement=" + format_double(gap) + "\n";
  return s;
}

std::string cmd_teleport(const Options& o) {
  const Resolved r = resolve(o);
  double gap = 0.0;
  const DensityMatrix rho = channel_state(r, &gap);
  const TeleportReport rep = teleport_report(rho, r.m);
  const double f = rep.avg_fidelity_per_m[static_cast<std::size_t>(rep.m_used)];
  const double c = concurrence(rho);
  const double p = purity(rho);
  if (r.format == "json") {
    json doc;
    doc["F"] = f;
    doc["m_star"] = rep.m_star;
    doc["m_used"] = rep.m_used;
    doc["chi"] = rep.chi.chi;
    doc["C"] = c;
    doc["P"] = p;
    doc["shrink"] = rep.shrink;
    doc["bloch_coeffs"] = rep.bloch_coeffs;
    if (r.engine == Engine::Both) doc["engine_disagreement"] = gap;
    return doc.dump(2) + "\n";
  }
  std::string s;
  s += "F=" + fixed6(f) + "\n";
  s += "m*=" + std::to_string(rep.m_star) + "\n";
  if (r.m) s += "m=" + std::to_string(rep.m_used) + "\n";
  for (std::size_t i = 0; i < 4; ++i) s += "chi" + std::to_string(i) + "=" + fixed6(rep.chi[static_cast<int>(i)]) + "\n";
  s += "C=" + fixed6(c) + "\n";
  s += "P=" + fixed6(p) + "\n";
  s += "delta_x=" + fixed6(rep.shrink[0]) + "\n";
  s += "delta_y=" + fixed6(rep.shrink[1]) + "\n";
  s += "delta_z=" + fixed6(rep.shrink[2]) + "\n";
  if (r.engine == Engine::Both) s += "engine_disagreement=" + format_double(gap) + "\n";
  return s;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw BadArguments("--t-count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (count - 1);
  g.back() = hi;
  return g;
}

std::string cmd_sweep(const Options& o) {
  const Resolved r = resolve(o);
  SweepSpec spec;
  spec.initial_bell = r.bell;
  spec.env = r.env;
  spec.params = r.params;
  spec.engine = r.engine;
  spec.m_override = r.m;
  spec.step = r.step;
  if (!o.t_grid.empty()) {
    if (o.t_min || o.t_max || o.t_count) throw BadArguments("--t-grid cannot be combined with --t-min/--t-max/--t-count");
    spec.t_grid = o.t_grid;
  } else {
    spec.t_grid = linspace(o.t_min.value_or(0.0), o.t_max.value_or(kDefaultTMax), o.t_count.value_or(kDefaultTCount));
  }
  spec.delta_grid = o.delta_grid;
  if (!o.quantities.empty()) {
    spec.quantities.clear();
    for (const auto& q : o.quantities) spec.quantities.push_back(parse_quantity(q));
  }
  spec.validate();
  const auto records = sweep(spec);
  return r.format == "json" ? records_to_json(spec, records) : records_to_csv(records, spec.quantities, spec.engine);
}

std::string cmd_critical(const Options& o) {
  const Resolved r = resolve(o);
  const std::string kind = o.kind.value_or("classical");
  CriticalOptions copts;
  copts.m_override = r.m;
  copts.samples = o.samples;
  if (o.bracket_lo || o.bracket_hi) {
    const Bracket def = r.env.gamma > 0.0 ? default_bracket(r.env) : Bracket{0.0, 0.0};
    if (!o.bracket_hi && r.env.gamma == 0.0) throw BadArguments("--bracket-hi is required when gamma is 0");
    copts.bracket = Bracket{o.bracket_lo.value_or(def.lo), o.bracket_hi.value_or(def.hi)};
  } else if (r.env.gamma == 0.0) {
    throw BadArguments("gamma is 0: pass --bracket-hi");
  }
  const std::string axis = o.axis.value_or("x");
  if (axis == "x") {
    copts.axis = 0;
  } else if (axis == "y") {
    copts.axis = 1;
  } else if (axis == "z") {
    copts.axis = 2;
  } else {
    throw BadArguments("--axis must be x, y or z");
  }

  const ChannelModel model(r.bell, r.env, r.params, r.engine, r.step);
  CriticalTimeResult res;
  if (kind == "classical") {
    res = find_classical_crossing(model, copts);
  } else if (kind == "fmin") {
    res = find_fidelity_minimum(model, copts);
  } else if (kind == "esd") {
    res = find_esd_time(model, copts);
  } else if (kind == "shrinkmin") {
    res = find_shrink_minimum(model, copts);
  } else {
    throw BadArguments("--kind must be classical, fmin, esd or shrinkmin");
  }

  if (r.format == "json") {
    json doc;
    doc["kind"] = std::string(to_string(res.kind));
    doc["status"] = std::string(to_string(res.status));
    doc["t"] = res.t ? json(*res.t) : json(nullptr);
    doc["value"] = res.value_at_t;
    return doc.dump(2) + "\n";
  }
  std::string s;
  s += "kind=" + std::string(to_string(res.kind)) + "\n";
  s += "status=" + std::string(to_string(res.status)) + "\n";
  s += "t_c=" + (res.t ? fixed6(*res.t) : std::string("none-in-bracket")) + "\n";
  s += "value=" + fixed6(res.value_at_t) + "\n";
  return s;
}

std::string cmd_bloch(const Options& o) {
  const Resolved r = resolve(o);
  const ChannelModel model(r.bell, r.env, r.params, r.engine, r.step);
  const BlochMesh mesh =
      bloch_mesh(model, r.t, r.m, o.n_theta.value_or(kDefaultNTheta), o.n_phi.value_or(kDefaultNPhi));
  if (r.format == "json") {
    json doc;
    doc["t"] = r.t;
    doc["m_used"] = mesh.m_used;
    doc["semi_axes"] = mesh.semi_axes;
    json pts = json::array();
    for (const auto& p : mesh.points) pts.push_back({p.theta, p.phi, p.x, p.y, p.z});
    doc["points"] = pts;
    return doc.dump(2) + "\n";
  }
  std::string s = "theta,phi,x,y,z\n";
  for (const auto& p : mesh.points) {
    s += format_double(p.theta) + "," + format_double(p.phi) + "," + format_double(p.x) + "," + format_double(p.y) +
         "," + format_double(p.z) + "\n";
  }
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Teleportation through a two-qubit XY channel in a Markovian environment", "telechan"};
  app.require_subcommand(1);
  Options o;

  auto* evolve = app.add_subcommand("evolve", "print the channel state rho(t)");
  auto* teleport = app.add_subcommand("teleport", "report F, m*, chi, C, P and shrink factors at time t");
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate quantities over a (delta, t) grid");
  auto* critical = app.add_subcommand("critical", "locate a critical time");
  auto* bloch = app.add_subcommand("bloch", "export the distorted Bloch sphere mesh");
  for (auto* sub : {evolve, teleport, sweep_cmd, critical, bloch}) add_common(sub, o);

  sweep_cmd->add_option("--t-grid", o.t_grid, "comma-separated times")->delimiter(',');
  sweep_cmd->add_option("--t-min", o.t_min, "first time of an even grid");
  sweep_cmd->add_option("--t-max", o.t_max, "last time of an even grid");
  sweep_cmd->add_option("--t-count", o.t_count, "number of times in an even grid");
  sweep_cmd->add_option("--delta-grid", o.delta_grid, "comma-separated Delta values")->delimiter(',');
  sweep_cmd->add_option("--quantities", o.quantities, "subset of F,C,P,chi,shrink,blochcoeff")->delimiter(',');

  critical->add_option("--kind", o.kind, "classical | fmin | esd | shrinkmin");
  critical->add_option("--axis", o.axis, "x | y | z for shrinkmin");
  critical->add_option("--bracket-lo", o.bracket_lo, "search interval start");
  critical->add_option("--bracket-hi", o.bracket_hi, "search interval end");
  critical->add_option("--samples", o.samples, "scan resolution");

  bloch->add_option("--n-theta", o.n_theta, "polar grid size");
  bloch->add_option("--n-phi", o.n_phi, "azimuthal grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    if (o.config) merge_config(o, *o.config);
    std::string text;
    if (evolve->parsed()) {
      text = cmd_evolve(o);
    } else if (teleport->parsed()) {
      text = cmd_teleport(o);
    } else if (sweep_cmd->parsed()) {
      text = cmd_sweep(o);
    } else if (critical->parsed()) {
      text = cmd_critical(o);
    } else {
      text = cmd_bloch(o);
    }
    if (o.out) {
      std::ofstream file(*o.out, std::ios::binary);
      if (!file) throw BadArguments("cannot open output file: " + *o.out);
      file << text;
      if (!file) throw BadArguments("failed writing output file: " + *o.out);
    } else {
      out << text;
    }
    return kExitOk;
  } catch (const BadArguments& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const SweepError& e) {
    err << "numerical failure at delta=" << format_double(e.delta()) << " t=" << format_double(e.t()) << ": "
        << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const IntegrationDiverged& e) {
    err << "numerical failure at t=" << format_double(e.time()) << ": " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace telechan
