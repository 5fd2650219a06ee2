#include "tumorstab/cli.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "tumorstab/dynamics.hpp"
#include "tumorstab/eigenmode_fields.hpp"
#include "tumorstab/errors.hpp"
#include "tumorstab/mode_solver.hpp"
#include "tumorstab/radial_stationary.hpp"
#include "tumorstab/spectrum.hpp"

namespace tumorstab {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T read(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + "." + key + ": " + e.what());
  }
}

std::string g17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_number(double x) { return std::isfinite(x) ? g17(x) : std::string(); }

json stability_json(Stability s) {
  if (s == Stability::marginal) return nullptr;
  return s == Stability::stable;
}

// Stationary state plus its unit-ball rescaling for one configuration.
struct Pipeline {
  NormalizedModel model;
  RadialStationary state;
  UnitStationary unit;
  double nu = 1.0;

  // Model-unit surface tension to the unit-ball value used by the spectrum.
  [[nodiscard]] double to_unit(double gamma) const { return state.R_s * gamma / nu; }
  [[nodiscard]] double to_model(double gamma_unit) const { return gamma_unit * nu / state.R_s; }
};

Pipeline build_pipeline(const RunConfig& cfg) {
  Pipeline p;
  p.model = canonical_model(cfg.model);
  p.nu = cfg.model.nu;
  const auto report = validate_assumptions(p.model.functions);
  if (!report.passed()) {
    std::string msg = "model violates the structural assumptions:";
    for (const auto& f : report.failures()) msg += "\n  " + f;
    throw ValidationError(msg);
  }
  StationaryOptions so;
  so.ode = cfg.ode;
  p.state = find_stationary(p.model.functions, p.model.gamma, {0.1, 20.0}, so);
  p.unit = rescale_to_unit(p.state, p.model.functions);
  return p;
}

ModeOptions mode_options(const RunConfig& cfg) {
  ModeOptions mo;
  mo.ode = cfg.ode;
  mo.moment = cfg.quadrature;
  mo.threads = cfg.threads;
  return mo;
}

SpectrumReport spectrum_for(const RunConfig& cfg, const Pipeline& p, int L_max) {
  SpectrumOptions so;
  so.L_max = L_max;
  so.modes = mode_options(cfg);
  return compute_spectrum(p.unit.state, p.unit.functions, so);
}

void require_gammas(const RunConfig& cfg, Command c) {
  if (cfg.gamma_values.empty()) {
    throw ValidationError(to_string(c) + ": gamma_values must be non-empty (config or --gamma)");
  }
}

std::string gamma_tag(std::size_t k) { return "_g" + std::to_string(k); }

int run_stationary(const RunConfig& cfg, std::ostream& out) {
  const auto p = build_pipeline(cfg);
  std::ostringstream csv;
  write_profile_csv(csv, p.state);
  write_text(cfg.output_dir / "stationary_profile.csv", csv.str());
  write_json(cfg.output_dir / "stationary.json",
             {{"R_s", p.state.R_s},
              {"sigma_center", p.state.sigma_center},
              {"sigma_prime_at_R", p.state.sigma_s_prime_at_R},
              {"mass_balance", p.state.mass_balance},
              {"pressure_at_R", p.state.p_s.back()},
              {"gamma", p.model.gamma},
              {"model", to_json(cfg.model)}});
  out << "R_s=" << g17(p.state.R_s) << " sigma_center=" << g17(p.state.sigma_center)
      << " sigma_prime_at_R=" << g17(p.state.sigma_s_prime_at_R) << '\n';
  return kExitOk;
}

int run_modes(const RunConfig& cfg, std::ostream& out) {
  const auto p = build_pipeline(cfg);
  const auto modes = solve_modes(0, cfg.L_max, p.unit.state, p.unit.functions, mode_options(cfg));
  std::ostringstream csv;
  csv << "l,I_l,J_l,F_l_at_1,F_l_prime_at_1\n";
  for (const auto& m : modes) {
    csv << m.l << ',' << g17(m.I_l) << ',' << g17(m.J_l) << ',' << g17(m.value(1.0)) << ',' << g17(m.F_prime_at_1)
        << '\n';
  }
  write_text(cfg.output_dir / "modes.csv", csv.str());

  const int shown = std::min(cfg.L_max, 16);
  std::ostringstream prof;
  prof << "r";
  for (int l = 0; l <= shown; ++l) prof << ",F_" << l;
  prof << '\n';
  const auto& nodes = modes.front().nodes;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    prof << g17(nodes[k]);
    for (int l = 0; l <= shown; ++l) prof << ',' << g17(modes[static_cast<std::size_t>(l)].F[k]);
    prof << '\n';
  }
  write_text(cfg.output_dir / "mode_profiles.csv", prof.str());
  out << "modes=" << modes.size() << " I_0=" << g17(modes[0].I_l) << " I_2=" << g17(modes[2].I_l) << '\n';
  return kExitOk;
}

int run_spectrum(const RunConfig& cfg, std::ostream& out) {
  require_gammas(cfg, Command::spectrum);
  const auto p = build_pipeline(cfg);
  const auto rep = spectrum_for(cfg, p, cfg.L_max);
  for (std::size_t k = 0; k < cfg.gamma_values.size(); ++k) {
    const double gamma = cfg.gamma_values[k];
    const double gu = p.to_unit(gamma);
    const auto cls = full_spectrum(gu, rep);
    std::ostringstream csv;
    csv << "l,gamma_l,alpha_l,gamma_tilde_l,multiplicity\n";
    for (int l = 0; l <= rep.L_max; ++l) {
      const auto li = static_cast<std::size_t>(l);
      csv << l << ',' << csv_number(rep.gamma_l[li]) << ',' << g17(rep.alpha(l, gu)) << ','
          << csv_number(rep.gamma_tilde_l[li]) << ',' << (l == 1 ? 3 : 2 * l + 1) << '\n';
    }
    write_text(cfg.output_dir / ("spectrum" + gamma_tag(k) + ".csv"), csv.str());
    write_json(cfg.output_dir / ("spectrum" + gamma_tag(k) + ".json"),
               {{"gamma", gamma},
                {"gamma_unit", gu},
                {"alpha_0", rep.alpha_0},
                {"gamma_star", rep.gamma_star},
                {"l_star", rep.l_star},
                {"gamma_tilde_star", rep.gamma_tilde_star},
                {"stable", stability_json(cls.stability)},
                {"classification", to_string(cls.stability)},
                {"L_max", rep.L_max}});
    out << "gamma=" << g17(gamma) << " gamma_star=" << g17(p.to_model(rep.gamma_star)) << " l_star=" << rep.l_star
        << " stable=" << to_string(cls.stability) << '\n';
  }
  return kExitOk;
}

int run_threshold(const RunConfig& cfg, std::ostream& out) {
  const auto p = build_pipeline(cfg);
  const auto rep = spectrum_for(cfg, p, cfg.L_max);
  write_json(cfg.output_dir / "threshold.json",
             {{"gamma_star", p.to_model(rep.gamma_star)},
              {"gamma_star_unit", rep.gamma_star},
              {"l_star", rep.l_star},
              {"tie", rep.l_star_tie},
              {"alpha_0", rep.alpha_0},
              {"R_s", p.state.R_s},
              {"L_max", rep.L_max},
              {"certificate",
               {{"satisfied", rep.certificate.satisfied},
                {"l_bar", rep.certificate.l_bar},
                {"decreasing_run", rep.certificate.decreasing_run},
                {"gamma_at_L_max", rep.certificate.gamma_at_L_max}}}});
  out << "gamma_star=" << g17(p.to_model(rep.gamma_star)) << " l_star=" << rep.l_star
      << " stable=" << to_string(full_spectrum(p.to_unit(cfg.model.gamma), rep).stability) << '\n';
  return kExitOk;
}

int run_eigenmode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_gammas(cfg, Command::eigenmode);
  require_field_degree(cfg.eigenmode.l);
  const auto p = build_pipeline(cfg);
  const int L = std::max(cfg.L_max, cfg.eigenmode.l);
  const auto rep = spectrum_for(cfg, p, L);
  const auto mode = solve_mode(cfg.eigenmode.l, p.unit.state, p.unit.functions, mode_options(cfg));
  int status = kExitOk;
  for (std::size_t k = 0; k < cfg.gamma_values.size(); ++k) {
    const double gu = p.to_unit(cfg.gamma_values[k]);
    const auto fields = assemble_fields(cfg.eigenmode.l, cfg.eigenmode.m, gu, mode, p.unit.state, p.unit.functions);
    const auto res = residual_report(fields, rep.alpha(cfg.eigenmode.l, gu));
    auto j = to_json(fields, res);
    j["gamma"] = cfg.gamma_values[k];
    j["gamma_unit"] = gu;
    write_json(cfg.output_dir / ("eigenmode" + gamma_tag(k) + ".json"), j);
    std::ostringstream csv;
    write_fields_csv(csv, fields);
    write_text(cfg.output_dir / ("eigenmode" + gamma_tag(k) + ".csv"), csv.str());
    out << "gamma=" << g17(cfg.gamma_values[k]) << " l=" << fields.l() << " m=" << fields.m()
        << " alpha=" << g17(res.alpha_formula) << " max_residual=" << g17(res.max_field_residual())
        << " multiplier_gap=" << g17(res.multiplier_cross_check) << " passed=" << (res.passed() ? "true" : "false")
        << '\n';
    if (!res.passed()) {
      err << "error: eigenmode residual breach at gamma=" << g17(cfg.gamma_values[k]) << '\n';
      status = kExitNumerical;
    }
  }
  return status;
}

int run_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_gammas(cfg, Command::evolve);
  const auto p = build_pipeline(cfg);
  const int L = cfg.evolve.L_max;
  const auto rep = spectrum_for(cfg, p, std::max({cfg.L_max, L, 2}));
  const auto initial = random_state(L, cfg.evolve.seed, cfg.evolve.l_min);
  for (std::size_t k = 0; k < cfg.gamma_values.size(); ++k) {
    const double gu = p.to_unit(cfg.gamma_values[k]);
    double dominant = -std::numeric_limits<double>::infinity();
    for (int l = std::max(2, cfg.evolve.l_min); l <= L; ++l) dominant = std::max(dominant, rep.alpha(l, gu));
    const double T = cfg.evolve.T.value_or(std::abs(dominant) > 0.0 ? 200.0 / std::abs(dominant) : 1.0);
    const auto traj = simulate(initial, rep, gu, T, cfg.evolve.samples);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_text(cfg.output_dir / ("trajectory" + gamma_tag(k) + ".csv"), csv.str());
    for (const auto& [suffix, state] : {std::pair{"_start", &initial}, std::pair{"_end", &traj.final_state}}) {
      const auto snap = boundary_snapshot(*state, cfg.evolve.epsilon);
      if (snap.outside_small_regime) {
        err << "warning: epsilon * max|eta| = " << g17(snap.max_deviation) << " exceeds 0.3 in snapshot" << suffix
            << gamma_tag(k) << '\n';
      }
      std::ostringstream s;
      write_snapshot_csv(s, snap);
      write_text(cfg.output_dir / ("snapshot" + gamma_tag(k) + suffix + ".csv"), s.str());
    }
    if (traj.saturated_degree) {
      err << "warning: growth saturated at degree " << *traj.saturated_degree << '\n';
    }
    const double rate = late_rate(traj);
    out << "gamma=" << g17(cfg.gamma_values[k]) << " T=" << g17(T) << " measured_rate=" << g17(rate)
        << " predicted_rate=" << g17(dominant) << " stable=" << to_string(full_spectrum(gu, rep).stability) << '\n';
  }
  return kExitOk;
}

int run_compare_darcy(const RunConfig& cfg, std::ostream& out) {
  const auto p = build_pipeline(cfg);
  const auto rep = spectrum_for(cfg, p, cfg.L_max);
  std::ostringstream csv;
  csv << "l,gamma_l,gamma_tilde_l\n";
  bool ordered = true;
  for (int l = 2; l <= rep.L_max; ++l) {
    const auto li = static_cast<std::size_t>(l);
    csv << l << ',' << g17(rep.gamma_l[li]) << ',' << g17(rep.gamma_tilde_l[li]) << '\n';
    ordered = ordered && rep.gamma_tilde_l[li] < rep.gamma_l[li];
  }
  write_text(cfg.output_dir / "darcy.csv", csv.str());
  out << "gamma_star=" << g17(p.to_model(rep.gamma_star)) << " gamma_tilde_star=" << g17(p.to_model(rep.gamma_tilde_star))
      << " l_star=" << rep.l_star << " l_tilde_star=" << rep.l_tilde_star
      << " ordered=" << (ordered ? "true" : "false") << '\n';
  return kExitOk;
}

}  // namespace

void RunConfig::validate() const {
  validate_params(model);
  if (L_max < 2) throw ValidationError("L_max must be >= 2");
  for (double g : gamma_values) {
    if (!std::isfinite(g) || g < 0.0) throw ValidationError("gamma_values must be finite and >= 0");
  }
  ode.validate();
  quadrature.validate();
  if (eigenmode.l < 0 || std::abs(eigenmode.m) > eigenmode.l) throw ValidationError("eigenmode: need |m| <= l");
  if (evolve.L_max < 0) throw ValidationError("evolve.L_max must be >= 0");
  if (evolve.samples < 10) throw ValidationError("evolve.samples must be >= 10");
  if (evolve.T && !(*evolve.T > 0.0)) throw ValidationError("evolve.T must be positive");
  if (!std::isfinite(evolve.epsilon)) throw ValidationError("evolve.epsilon must be finite");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j, {"model", "L_max", "gamma_values", "tolerances", "output_dir", "eigenmode", "evolve", "threads"},
                 "config");
  RunConfig c;
  if (j.contains("model")) c.model = model_params_from_json(j.at("model"));
  if (j.contains("L_max")) c.L_max = read<int>(j, "L_max", "config");
  if (j.contains("gamma_values")) c.gamma_values = read<std::vector<double>>(j, "gamma_values", "config");
  if (j.contains("output_dir")) c.output_dir = read<std::string>(j, "output_dir", "config");
  if (j.contains("threads")) c.threads = read<unsigned>(j, "threads", "config");
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    reject_unknown(t, {"ode_rel", "ode_abs", "quad_rel", "quad_abs"}, "config.tolerances");
    if (t.contains("ode_rel")) c.ode.rel = read<double>(t, "ode_rel", "config.tolerances");
    if (t.contains("ode_abs")) c.ode.abs = read<double>(t, "ode_abs", "config.tolerances");
    if (t.contains("quad_rel")) c.quadrature.rel = read<double>(t, "quad_rel", "config.tolerances");
    if (t.contains("quad_abs")) c.quadrature.abs = read<double>(t, "quad_abs", "config.tolerances");
  }
  if (j.contains("eigenmode")) {
    const auto& e = j.at("eigenmode");
    reject_unknown(e, {"l", "m"}, "config.eigenmode");
    if (e.contains("l")) c.eigenmode.l = read<int>(e, "l", "config.eigenmode");
    if (e.contains("m")) c.eigenmode.m = read<int>(e, "m", "config.eigenmode");
  }
  if (j.contains("evolve")) {
    const auto& e = j.at("evolve");
    reject_unknown(e, {"L_max", "T", "samples", "epsilon", "seed", "l_min"}, "config.evolve");
    if (e.contains("L_max")) c.evolve.L_max = read<int>(e, "L_max", "config.evolve");
    if (e.contains("T")) c.evolve.T = read<double>(e, "T", "config.evolve");
    if (e.contains("samples")) c.evolve.samples = read<int>(e, "samples", "config.evolve");
    if (e.contains("epsilon")) c.evolve.epsilon = read<double>(e, "epsilon", "config.evolve");
    if (e.contains("seed")) c.evolve.seed = read<std::uint64_t>(e, "seed", "config.evolve");
    if (e.contains("l_min")) c.evolve.l_min = read<int>(e, "l_min", "config.evolve");
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"stationary", "modes",  "spectrum",     "threshold",
                                                 "eigenmode",  "evolve", "compare-darcy"};
  return names;
}

Command parse_command(const std::string& name) {
  const auto& n = command_names();
  const auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) throw ValidationError("unknown command '" + name + "'");
  return static_cast<Command>(it - n.begin());
}

std::string to_string(Command c) { return command_names().at(static_cast<std::size_t>(c)); }

int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    std::filesystem::create_directories(config.output_dir);
    switch (command) {
      case Command::stationary:
        return run_stationary(config, out);
      case Command::modes:
        return run_modes(config, out);
      case Command::spectrum:
        return run_spectrum(config, out);
      case Command::threshold:
        return run_threshold(config, out);
      case Command::eigenmode:
        return run_eigenmode(config, out, err);
      case Command::evolve:
        return run_evolve(config, out, err);
      case Command::compare_darcy:
        return run_compare_darcy(config, out);
    }
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DegreeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tumorstab
