// Copyright 2026 The qbh Authors
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

#include "qbh/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "qbh/fock_engine.hpp"
#include "qbh/gaussian_engine.hpp"
#include "qbh/ladder_algebra.hpp"
#include "qbh/lindblad_engine.hpp"
#include "qbh/network_lab.hpp"
#include "qbh/quad_core.hpp"

namespace qbh {

using nlohmann::json;

std::string report_schema_version() { return "1"; }

namespace {

const std::map<std::string, std::vector<std::string>>& allowed_parameters() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"spectrum", {"kind", "delta1", "delta2", "g"}},
      {"symmetry-audit", {"count", "max_modes", "seed"}},
      {"hole-occupation", {"n", "theta", "alpha_re", "alpha_im"}},
      {"steady-state", {"delta", "lambda_re", "lambda_im", "gamma", "channel"}},
      {"pump-residual", {"delta", "lambda_re", "lambda_im", "gamma", "theta", "cutoffs"}},
      {"dimer-entanglement", {"case", "r", "g", "t", "delta", "steps"}},
      {"duality-check", {"kind", "delta1", "delta2", "g", "mode", "theta", "t", "cutoffs"}},
      {"bell-steady", {"delta", "g", "t"}},
      {"trimer-flow",
       {"kind", "flux", "flux_pi", "g", "delta", "theta", "gauge", "t_max", "dt", "expect_order"}},
      {"flux-dual", {"count", "seed", "flux", "flux_pi"}},
  };
  return table;
}

class Params {
 public:
  explicit Params(const json& j) : j_(j) {}

  double num(const std::string& key, double def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_number()) throw ValidationError("parameter '" + key + "' must be a number");
    const double v = j_[key].get<double>();
    if (!std::isfinite(v)) throw ValidationError("parameter '" + key + "' must be finite");
    return v;
  }

  long integer(const std::string& key, long def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_number_integer())
      throw ValidationError("parameter '" + key + "' must be an integer");
    return j_[key].get<long>();
  }

  std::string str(const std::string& key, const std::string& def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_string()) throw ValidationError("parameter '" + key + "' must be a string");
    return j_[key].get<std::string>();
  }

  std::vector<Index> int_list(const std::string& key, const std::vector<Index>& def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_array()) throw ValidationError("parameter '" + key + "' must be an array");
    std::vector<Index> out;
    for (const auto& v : j_[key]) {
      if (!v.is_number_integer() || v.get<long>() < 1)
        throw ValidationError("parameter '" + key + "' must hold positive integers");
      out.push_back(v.get<long>());
    }
    return out;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

 private:
  const json& j_;
};

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

void put(ScenarioResult& r, const std::string& key, double v) { r.values[key] = format_double(v); }
void put(ScenarioResult& r, const std::string& key, cplx v) {
  r.values[key + "_re"] = format_double(v.real());
  r.values[key + "_im"] = format_double(v.imag());
}
void put(ScenarioResult& r, const std::string& key, const std::string& v) { r.values[key] = v; }
void put_int(ScenarioResult& r, const std::string& key, long v) {
  r.values[key] = std::to_string(v);
}

double tol_or(const ScenarioConfig& c, double def) { return c.tol > 0.0 ? c.tol : def; }

DimerSpec dimer_from(const Params& p, const std::string& def_kind, double d1, double d2,
                     double g) {
  DimerSpec d;
  d.kind = parse_dimer_kind(p.str("kind", def_kind));
  d.delta1 = p.num("delta1", d1);
  d.delta2 = p.num("delta2", d2);
  d.g = p.num("g", g);
  if (d.g < 0.0) throw ValidationError("parameter 'g' must be nonnegative");
  return d;
}

double flux_from(const Params& p, double def) {
  if (p.has("flux") && p.has("flux_pi"))
    throw ValidationError("give either 'flux' or 'flux_pi', not both");
  if (p.has("flux_pi")) return p.num("flux_pi", 0.0) * kPi;
  return p.num("flux", def);
}

std::vector<cplx> sorted_eigenvalues(const VectorXc& ev) {
  std::vector<cplx> v(ev.data(), ev.data() + ev.size());
  // Round away last-bit noise so the order is stable across runs.
  auto key = [](cplx z) {
    return std::make_pair(std::round(z.real() * 1e9), std::round(z.imag() * 1e9));
  };
  std::sort(v.begin(), v.end(), [&](cplx a, cplx b) { return key(a) > key(b); });
  return v;
}

double multiset_distance(const VectorXc& a, const VectorXc& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    Index best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(a[i] - b[j]) < bd) {
        bd = std::abs(a[i] - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

ScenarioResult run_spectrum(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-9);
  const DimerSpec d = dimer_from(p, "DBS", 1.0, 1.0, 0.5);
  const DynamicalMatrix h = build_bdg(build_dimer(d));
  const SpectrumReport sp = spectrum(h, tol);
  ScenarioResult r;
  put(r, "dimer", to_string(d.kind));
  const auto ev = sorted_eigenvalues(sp.eigenvalues);
  for (std::size_t k = 0; k < ev.size(); ++k) put(r, "eigenvalue_" + std::to_string(k), ev[k]);
  double pair_res = 0.0;
  for (const auto& [n, nb] : sp.pairing)
    pair_res = std::max(pair_res, std::abs(sp.eigenvalues[n] + sp.eigenvalues[nb]));
  put(r, "regime", to_string(sp.regime));
  put(r, "residual", pair_res);
  put(r, "tol", tol);
  r.passed = pair_res < tol;
  return r;
}

ScenarioResult run_symmetry_audit(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-12);
  const long count = p.integer("count", 100);
  const long max_modes = p.integer("max_modes", 4);
  if (count < 1 || max_modes < 1) throw ValidationError("count and max_modes must be positive");
  std::mt19937_64 rng(static_cast<std::uint64_t>(p.integer("seed", 2026)));
  std::uniform_int_distribution<long> nd(1, max_modes);
  double ph = 0.0;
  double pp = 0.0;
  double tr = 0.0;
  for (long k = 0; k < count; ++k) {
    const SymmetryReport s = check_symmetries(build_bdg(random_hermitian_form(rng, nd(rng))), tol);
    ph = std::max(ph, s.pseudo_hermiticity);
    pp = std::max(pp, s.particle_hole);
    tr = std::max(tr, s.transposition);
  }
  ScenarioResult r;
  put_int(r, "count", count);
  put(r, "pseudo_hermiticity_residual", ph);
  put(r, "particle_hole_residual", pp);
  put(r, "transposition_residual", tr);
  put(r, "residual", std::max({ph, pp, tr}));
  put(r, "tol", tol);
  r.passed = ph < tol && pp < tol && tr < tol;
  return r;
}

ScenarioResult run_hole_occupation(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-12);
  const long n = p.integer("n", 3);
  if (n < 0) throw ValidationError("parameter 'n' must be nonnegative");
  const double theta = p.num("theta", 0.0);
  const cplx alpha(p.num("alpha_re", 0.0), p.num("alpha_im", 0.0));
  const LadderPolynomial obs = displace(LadderPolynomial::number(1, 0), 0, alpha);
  const cplx v = hole_frame_expectation(obs, {int(n)}, {int(n)}, {FrameTag::hole(theta)});
  const double expected = std::norm(alpha) - double(n + 1);
  ScenarioResult r;
  put_int(r, "n", n);
  put(r, "theta", theta);
  put(r, "occupation", v);
  put(r, "expected", expected);
  const double res = std::abs(v - expected);
  put(r, "residual", res);
  put(r, "tol", tol);
  r.passed = res <= tol * std::max(1.0, std::abs(expected));
  return r;
}

DissipativeModel model_from(const Params& p, Jump def_jump) {
  DissipativeModel m;
  m.detuning = p.num("delta", 0.0);
  m.drive = {p.num("lambda_re", 1.0), p.num("lambda_im", 0.0)};
  const std::string ch = p.str("channel", def_jump == Jump::Loss ? "loss" : "pump");
  if (ch != "loss" && ch != "pump") throw ValidationError("channel must be 'loss' or 'pump'");
  m.channels.push_back({ch == "loss" ? Jump::Loss : Jump::Pump, p.num("gamma", 2.0)});
  m.validate();
  return m;
}

ScenarioResult run_steady_state(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-8);
  const DissipativeModel m = model_from(p, Jump::Loss);
  ScenarioResult r;
  put(r, "tol", tol);
  if (m.rate(Jump::Pump) > 0.0) {
    try {
      steady_state(m, FockBasis({std::max<Index>(c.cutoff, 10)}));
      put(r, "outcome", "steady-state");
      r.passed = false;
    } catch (const NoSteadyStateError& e) {
      put(r, "outcome", "no-normalizable-steady-state");
      put(r, "abscissa", e.abscissa());
      put(r, "residual", 0.0);
      r.passed = e.abscissa() > 0.0;
    }
    return r;
  }
  const SteadyStateReport s = loss_steady_state_report(m, c.cutoff);
  put(r, "outcome", "steady-state");
  put(r, "abar", s.abar);
  put(r, "mean_a", s.mean_a);
  put(r, "mean_n", s.mean_n);
  put(r, "fidelity", s.fidelity);
  put_int(r, "cutoff", s.cutoff);
  put(r, "residual", s.residual);
  const double infidelity = 1.0 - s.fidelity;
  put(r, "infidelity", infidelity);
  r.passed = infidelity <= tol && std::abs(s.mean_a - s.abar) <= 1e-7 && s.residual <= 1e-10;
  return r;
}

ScenarioResult run_pump_residual(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-10);
  const DissipativeModel m = model_from(p, Jump::Pump);
  if (m.rate(Jump::Loss) > 0.0) throw ValidationError("pump-residual requires a pump channel");
  const std::vector<Index> cutoffs = p.int_list("cutoffs", {20, 30, 40});
  const PumpResidualReport rep = pump_formal_residual(m, cutoffs, p.num("theta", 0.0));
  ScenarioResult r;
  put(r, "abar", rep.abar);
  put(r, "decreasing", fmt_bool(rep.decreasing));
  put(r, "similarity_residual", rep.similarity_residual);
  put(r, "residual", rep.table.empty() ? 0.0 : rep.table.back().residual);
  put(r, "tol", tol);
  r.trace_columns = {"cutoff", "residual", "trace_re", "trace_im", "omega_condition"};
  for (const auto& row : rep.table)
    r.trace_rows.push_back({double(row.cutoff), row.residual, row.trace.real(), row.trace.imag(),
                            row.condition});
  r.passed = rep.decreasing;
  return r;
}

ScenarioResult run_dimer_entanglement(const ScenarioConfig& c, const Params& p) {
  const std::string kase = p.str("case", "resonant");
  ScenarioResult r;
  put(r, "case", kase);
  if (kase == "tmsv") {
    const double tol = tol_or(c, 1e-10);
    const double rr = p.num("r", 0.5);
    const double en = log_negativity(tmsv(rr), {0});
    put(r, "log_negativity", en);
    put(r, "expected", 2.0 * std::abs(rr));
    put(r, "residual", std::abs(en - 2.0 * std::abs(rr)));
    put(r, "tol", tol);
    r.passed = std::abs(en - 2.0 * std::abs(rr)) <= tol;
  } else if (kase == "resonant") {
    const double tol = tol_or(c, 1e-8);
    const double g = p.num("g", 1.0);
    const double delta = p.num("delta", 1.0);
    const double t = p.num("t", 0.6);
    const long steps = p.integer("steps", 12);
    if (steps < 1) throw ValidationError("parameter 'steps' must be positive");
    // DBS(D, D, g) is the hole-frame partner of the resonant pairing dimer.
    const QuadraticForm dbs = build_dimer({DimerKind::DBS, delta, delta, g});
    double worst = 0.0;
    r.trace_columns = {"t", "E_N"};
    for (long k = 0; k <= steps; ++k) {
      const double tk = t * double(k) / double(steps);
      const DualFrameEntanglement e =
          dual_frame_entanglement(dbs, 0, 0.0, EntanglementScenario::ResonantEvolution, tk);
      r.trace_rows.push_back({tk, e.ph_en});
      worst = std::max(worst, std::abs(e.ph_en - 2.0 * g * tk));
    }
    const double en = r.trace_rows.back()[1];
    put(r, "ph_log_negativity", en);
    put(r, "expected", 2.0 * g * t);
    put(r, "residual", worst);
    put(r, "tol", tol);
    r.passed = worst <= tol;
  } else if (kase == "ground") {
    const double tol = tol_or(c, 1e-9);
    const double g = p.num("g", 0.6);
    const double delta = p.num("delta", 1.0);
    const QuadraticForm apt = build_dimer({DimerKind::DBS, -delta, delta, g});
    const DualFrameEntanglement e =
        dual_frame_entanglement(apt, 0, 0.0, EntanglementScenario::Ground);
    const double expected = 2.0 * pairing_squeezing(delta, g);
    put(r, "ph_log_negativity", e.ph_en);
    put(r, "expected", expected);
    put(r, "residual", std::abs(e.ph_en - expected));
    put(r, "tol", tol);
    r.passed = std::abs(e.ph_en - expected) <= tol;
  } else {
    throw ValidationError("case must be 'tmsv', 'resonant' or 'ground'");
  }
  return r;
}

ScenarioResult run_duality_check(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-10);
  const DimerSpec d = dimer_from(p, "DBS", 1.0, 1.0, 0.5);
  const long mode = p.integer("mode", 0);
  if (mode < 0 || mode > 1) throw ValidationError("parameter 'mode' must be 0 or 1");
  const double theta = p.num("theta", 0.0);
  const double t = p.num("t", 0.5);
  const QuadraticForm q = build_dimer(d);
  const QuadraticForm dual = dual_quadratic(q, mode, theta);
  ScenarioResult r;
  put(r, "dimer", to_string(d.kind));
  put_int(r, "mode", mode);
  put(r, "theta", theta);
  bool ok = true;
  if (mode == 0 && theta == 0.0 && (d.kind == DimerKind::DBS || d.kind == DimerKind::BS)) {
    const DimerKind partner = d.kind == DimerKind::DBS ? DimerKind::P : DimerKind::DP;
    const QuadraticForm expected =
        build_dimer({partner, d.delta1, d.delta2, d.g}).with_constant(-d.delta1);
    const double cr = max_coefficient_difference(dual, expected);
    put(r, "partner", to_string(partner));
    put(r, "coefficient_residual", cr);
    ok = ok && cr <= tol;
  } else {
    put(r, "partner", "none");
  }
  put(r, "dual_constant", dual.c0());
  const double sr = multiset_distance(spectrum(build_bdg(q)).eigenvalues,
                                      spectrum(build_bdg(dual)).eigenvalues);
  put(r, "spectral_residual", sr);
  const DualityEvolutionReport ev =
      duality_evolution_check(q, mode, theta, t, p.int_list("cutoffs", {}));
  put(r, "heisenberg_residual", ev.heisenberg_residual);
  if (!ev.table.empty()) {
    put(r, "schrodinger_converged", fmt_bool(ev.converged));
    r.trace_columns = {"cutoff", "interior_residual"};
    for (const auto& row : ev.table) r.trace_rows.push_back({double(row.cutoff), row.residual});
  }
  ok = ok && sr <= tol && ev.heisenberg_residual <= tol;
  put(r, "residual", std::max(sr, ev.heisenberg_residual));
  put(r, "tol", tol);
  r.passed = ok;
  return r;
}

ScenarioResult run_bell_steady(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-8);
  const double delta = p.num("delta", 1.0);
  const double g = p.num("g", 1.0);
  const double t = p.num("t", 2.5);
  const BellReport b = bell_evolution(delta, g, t, std::max<Index>(c.cutoff, 2));
  ScenarioResult r;
  put(r, "fidelity", b.fidelity);
  put(r, "closed_form", b.closed_form);
  put(r, "log_norm", b.log_norm);
  put(r, "residual", std::abs(b.fidelity - b.closed_form));
  put(r, "tol", tol);
  r.passed = std::abs(b.fidelity - b.closed_form) <= tol;
  return r;
}

TrimerSpec trimer_from(const Params& p) {
  const std::string kind = p.str("kind", "BST");
  if (kind != "BST" && kind != "SHT") throw ValidationError("kind must be 'BST' or 'SHT'");
  const std::string gauge = p.str("gauge", "symmetric");
  if (gauge != "symmetric" && gauge != "concentrated")
    throw ValidationError("gauge must be 'symmetric' or 'concentrated'");
  TrimerSpec t = TrimerSpec::with_flux(kind == "BST" ? TrimerKind::BST : TrimerKind::SHT,
                                       flux_from(p, -kPi / 2.0), p.num("g", 1.0),
                                       gauge == "symmetric" ? GaugeStyle::Symmetric
                                                            : GaugeStyle::Concentrated);
  t.delta = p.num("delta", 0.0);
  t.theta = p.num("theta", 0.0);
  return t;
}

ScenarioResult run_trimer_flow(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-10);
  const TrimerSpec spec = trimer_from(p);
  const double t_max = p.num("t_max", 8.0);
  const double dt = p.num("dt", 0.01);
  if (!(t_max > 0.0) || !(dt > 0.0)) throw ValidationError("t_max and dt must be positive");
  const Index steps = static_cast<Index>(std::llround(t_max / dt));
  VectorXd times(steps + 1);
  for (Index k = 0; k <= steps; ++k) times[k] = double(k) * dt;
  const FlowTrace tr = chiral_flow(spec, times);
  ScenarioResult r;
  r.trace_header = "# " + spec.describe();
  r.trace_columns = {"t", "p1", "p2", "p3"};
  for (Index k = 0; k < times.size(); ++k)
    r.trace_rows.push_back(
        {times[k], tr.populations(k, 0), tr.populations(k, 1), tr.populations(k, 2)});
  const std::string order = order_string(tr.order);
  put(r, "order", order);
  put(r, "flux", spec.flux());
  put(r, "revival_period", revival_period(spec));
  put(r, "population_drift", tr.max_population_drift);
  put(r, "residual", tr.max_population_drift);
  put(r, "tol", tol);
  const std::string expect = p.str("expect_order", "");
  if (!expect.empty()) put(r, "expected_order", expect);
  r.passed = tr.max_population_drift <= tol && (expect.empty() || expect == order);
  return r;
}

ScenarioResult run_flux_dual(const ScenarioConfig& c, const Params& p) {
  const double tol = tol_or(c, 1e-12);
  std::vector<TrimerSpec> specs;
  if (p.has("flux") || p.has("flux_pi")) {
    specs.push_back(TrimerSpec::with_flux(TrimerKind::BST, flux_from(p, 0.0)));
  } else {
    const long count = p.integer("count", 50);
    if (count < 1) throw ValidationError("count must be positive");
    std::mt19937_64 rng(static_cast<std::uint64_t>(p.integer("seed", 11)));
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (long k = 0; k < count; ++k) {
      TrimerSpec t;
      t.phi12 = u(rng);
      t.phi23 = u(rng);
      t.phi31 = u(rng);
      specs.push_back(t);
    }
  }
  ScenarioResult r;
  r.trace_columns = {"flux", "dual_flux", "deviation"};
  double worst = 0.0;
  for (const TrimerSpec& t : specs) {
    const FluxDualReport f = hole_loop_flux_check(t);
    r.trace_rows.push_back({f.flux, f.dual_flux, f.deviation});
    worst = std::max(worst, f.deviation);
  }
  put_int(r, "count", static_cast<long>(specs.size()));
  if (specs.size() == 1) {
    put(r, "flux", r.trace_rows[0][0]);
    put(r, "dual_flux", r.trace_rows[0][1]);
  }
  put(r, "residual", worst);
  put(r, "tol", tol);
  r.passed = worst <= tol;
  return r;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : allowed_parameters()) v.push_back(k);
    return v;
  }();
  return names;
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> top{"scenario", "parameters", "cutoff", "tol", "out_dir"};
  for (const auto& [k, _] : j.items())
    if (!top.count(k)) throw ValidationError("unknown config key '" + k + "'");
  if (!j.contains("scenario") || !j["scenario"].is_string())
    throw ValidationError("config needs a string 'scenario'");
  ScenarioConfig c;
  c.scenario = j["scenario"].get<std::string>();
  const auto& table = allowed_parameters();
  auto it = table.find(c.scenario);
  if (it == table.end()) throw ValidationError("unknown scenario '" + c.scenario + "'");
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ValidationError("'parameters' must be an object");
    c.parameters = j["parameters"];
    for (const auto& [k, _] : c.parameters.items())
      if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw ValidationError("unknown parameter '" + k + "' for scenario " + c.scenario);
  }
  if (j.contains("cutoff")) {
    if (!j["cutoff"].is_number_integer() || j["cutoff"].get<long>() < 1)
      throw ValidationError("'cutoff' must be a positive integer");
    c.cutoff = j["cutoff"].get<long>();
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0))
      throw ValidationError("'tol' must be a positive number");
    c.tol = j["tol"].get<double>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw ValidationError("'out_dir' must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  return c;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  using Runner = std::function<ScenarioResult(const ScenarioConfig&, const Params&)>;
  static const std::map<std::string, Runner> runners{
      {"spectrum", run_spectrum},
      {"symmetry-audit", run_symmetry_audit},
      {"hole-occupation", run_hole_occupation},
      {"steady-state", run_steady_state},
      {"pump-residual", run_pump_residual},
      {"dimer-entanglement", run_dimer_entanglement},
      {"duality-check", run_duality_check},
      {"bell-steady", run_bell_steady},
      {"trimer-flow", run_trimer_flow},
      {"flux-dual", run_flux_dual},
  };
  auto it = runners.find(config.scenario);
  if (it == runners.end()) throw ValidationError("unknown scenario '" + config.scenario + "'");
  const Params params(config.parameters);
  ScenarioResult r = it->second(config, params);
  r.values["scenario"] = config.scenario;
  r.values["schema_version"] = report_schema_version();
  r.values["passed"] = fmt_bool(r.passed);
  return r;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string render_result(const ScenarioResult& r) {
  std::ostringstream os;
  for (const auto& [k, v] : r.values) os << k << " = " << v << '\n';
  return os.str();
}

std::string render_trace(const ScenarioResult& r) {
  std::ostringstream os;
  if (!r.trace_header.empty()) os << r.trace_header << '\n';
  for (std::size_t k = 0; k < r.trace_columns.size(); ++k)
    os << (k ? "," : "") << r.trace_columns[k];
  os << '\n';
  for (const auto& row : r.trace_rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_double(row[k]);
    os << '\n';
  }
  return os.str();
}

void write_outputs(const ScenarioResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream f(base / "result.kv");
    if (!f) throw ValidationError("cannot write " + (base / "result.kv").string());
    f << render_result(r);
  }
  if (!r.trace_columns.empty()) {
    std::ofstream f(base / "trace.csv");
    if (!f) throw ValidationError("cannot write " + (base / "trace.csv").string());
    f << render_trace(r);
  }
}

std::map<std::string, std::string> parse_result(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(" = ");
    if (pos == std::string::npos) continue;
    out[line.substr(0, pos)] = line.substr(pos + 3);
  }
  return out;
}

}  // namespace qbh
