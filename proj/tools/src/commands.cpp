#include "mqrm_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mqrm/parallel.hpp"
#include "mqrm/se_oracle.hpp"
#include "mqrm/tn/tdvp.hpp"
#include "mqrm/zeno.hpp"
#include "mqrm_cli/output.hpp"

namespace mqrm::cli {

namespace {

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct PointResult {
  std::string csv;
  nlohmann::json meta;
  std::vector<std::string> warnings;
  std::vector<double> gamma;
};

PointResult decay_point(const RunConfig& cfg, unsigned inner_jobs) {
  const auto p = cfg.model_params();
  const auto st = cfg.squeeze_thermal();
  const auto curve = zeno::decay_curve(cfg.task.engine, p, st, cfg.task.tau, cfg.decay_options(inner_jobs));
  CsvTable t({"tau", "p_sur", "gamma", "engine"});
  const auto engine = zeno::to_string(curve.engine);
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    t.add(curve.tau[i]).add(curve.p_sur[i]).add(curve.gamma[i]).add(engine);
    t.end_row();
  }
  PointResult r{t.str(), sidecar(cfg, "decay"), curve.warnings, curve.gamma};
  r.meta["result"] = curve_json(curve);
  return r;
}

PointResult angles_point(const RunConfig& cfg, unsigned inner_jobs) {
  const auto p = cfg.model_params();
  const auto st = cfg.squeeze_thermal();
  const auto grid = zeno::uniform_phi_grid(cfg.task.phi_points);
  const auto scan = zeno::critical_angle_scan(cfg.task.engine, p, st, cfg.task.angle_tau, grid,
                                              cfg.decay_options(inner_jobs));
  CsvTable t({"phi", "gamma", "r", "g", "tau", "beta"});
  for (std::size_t i = 0; i < scan.phi.size(); ++i) {
    t.add(scan.phi[i]).add(scan.gamma[i]).add(st.r()).add(p.g()).add(scan.tau).add(st.beta().to_string());
    t.end_row();
  }
  PointResult r{t.str(), sidecar(cfg, "angles"), scan.warnings, scan.gamma};
  r.meta["result"] = scan_json(scan);
  return r;
}

PointResult energy_point(const RunConfig& cfg) {
  const auto p = cfg.model_params();
  const auto st = cfg.squeeze_thermal();
  std::vector<double> times;
  for (int k = 1; k <= cfg.task.t_samples; ++k) {
    times.push_back(cfg.task.t_final * k / cfg.task.t_samples);
  }
  zeno::EnergyFlowInput in;
  std::vector<std::string> warnings;
  nlohmann::json engine_report;
  switch (cfg.task.engine) {
    case zeno::Engine::Analytic:
      throw ConfigError("energy flow needs task.engine = se or tdvp");
    case zeno::Engine::Se: {
      const double dt = cfg.task.se_dt > 0.0 ? cfg.task.se_dt : se::default_step(p);
      const auto traj = se::se_sample(p, st, times, dt, true);
      in = zeno::energy_flow_input(traj, p, st);
      engine_report = {{"step", traj.step},
                       {"halving_deviation", traj.halving_deviation},
                       {"max_norm_drift", traj.max_norm_drift},
                       {"max_energy_drift", traj.max_energy_drift}};
      break;
    }
    case zeno::Engine::Tdvp: {
      auto ncfg = cfg.numerics;
      if (cfg.task.auto_n_max) ncfg.n_max = tn::suggest_n_max(p, st, ncfg, cfg.task.t_final);
      const auto traj = tn::run_tdvp(p, st, ncfg, times);
      in = zeno::energy_flow_input(traj);
      engine_report = report_json(traj.report);
      engine_report["n_max_used"] = ncfg.n_max;
      warnings = traj.report.warnings;
      break;
    }
  }
  zeno::EnergyFlowOptions eo;
  eo.fit_window = cfg.task.fit_window;
  eo.backflow_threshold = cfg.task.backflow_threshold;
  const auto flow = zeno::energy_flow_analysis(in, p, eo);

  std::vector<std::string> header{"t", "e_tls"};
  for (int m = 0; m < p.num_modes(); ++m) header.push_back("e_mode_" + std::to_string(m));
  CsvTable t(header);
  for (std::size_t k = 0; k < flow.time.size(); ++k) {
    t.add(flow.time[k]).add(flow.e_tls[k]);
    for (const auto& e : flow.e_modes) t.add(e[k]);
    t.end_row();
  }
  PointResult r{t.str(), sidecar(cfg, "energy"), warnings, {}};
  nlohmann::json backflow = nlohmann::json::array();
  for (std::size_t m = 0; m < flow.backflow.size(); ++m) {
    nlohmann::json ivs = nlohmann::json::array();
    for (const auto& iv : flow.backflow[m]) ivs.push_back({iv.begin, iv.end});
    backflow.push_back({{"mode", m}, {"intervals", ivs}});
  }
  r.meta["result"] = {{"engine", zeno::to_string(cfg.task.engine)},
                      {"a1", flow.a1},
                      {"a2", flow.a2},
                      {"fit_samples", flow.fit_samples},
                      {"qaze_enabling", flow.qaze_enabling},
                      {"identity_residual", std::isnan(flow.identity_residual)
                                                ? nlohmann::json(nullptr)
                                                : nlohmann::json(flow.identity_residual)},
                      {"backflow", backflow},
                      {"engine_report", engine_report},
                      {"warnings", warnings}};
  return r;
}

template <class T>
std::vector<T> axis_or(const std::vector<T>& axis, T value) {
  return axis.empty() ? std::vector<T>{value} : axis;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Decay:
      return "decay";
    case Command::Angles:
      return "angles";
    case Command::Energy:
      return "energy";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  if (name == "decay") return Command::Decay;
  if (name == "angles") return Command::Angles;
  if (name == "energy") return Command::Energy;
  throw ConfigError("unknown command '" + std::string(name) + "' (expected decay, angles or energy)");
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
  const auto& t = cfg.task;
  const auto mv = axis_or(t.sweep_num_modes, cfg.model.num_modes);
  const auto gv = axis_or(t.sweep_g, cfg.model.g);
  const auto rv = axis_or(t.sweep_r, cfg.state.r);
  const auto pv = axis_or(t.sweep_phi, cfg.state.phi);
  const auto bv = axis_or(t.sweep_beta, cfg.state.beta);
  const auto tv = axis_or(t.sweep_angle_tau, t.angle_tau);
  RunConfig base = cfg;
  base.task.sweep_num_modes.clear();
  base.task.sweep_g.clear();
  base.task.sweep_r.clear();
  base.task.sweep_phi.clear();
  base.task.sweep_beta.clear();
  base.task.sweep_angle_tau.clear();
  std::vector<RunConfig> out;
  for (int m : mv)
    for (double g : gv)
      for (double r : rv)
        for (double phi : pv)
          for (const auto& b : bv)
            for (double tau : tv) {
              RunConfig c = base;
              c.model.num_modes = m;
              c.model.g = g;
              c.state.r = r;
              c.state.phi = phi;
              c.state.beta = b;
              c.task.angle_tau = tau;
              out.push_back(std::move(c));
            }
  return out;
}

std::string point_tag(const RunConfig& c) {
  std::string tag = c.output.label.empty() ? "" : c.output.label + "_";
  tag += "M" + std::to_string(c.model.num_modes) + "_g" + short_real(c.model.g) + "_r" + short_real(c.state.r) +
         "_phi" + short_real(c.state.phi) + "_beta" + c.state.beta;
  return tag;
}

double estimate_job_memory_mb(const RunConfig& cfg) {
  if (cfg.task.engine != zeno::Engine::Tdvp) return 0.0;
  const double sites = 2.0 * cfg.model.num_modes + 1.0;
  const double d = cfg.numerics.n_max + 1.0;
  const double D = cfg.numerics.d_max;
  // tensors, environments and Krylov vectors of a two-site block
  const double blocks = 3.0 * sites + 2.0 * (cfg.numerics.krylov_dim + 4.0) * d;
  return 16.0 * D * D * d * blocks / (1024.0 * 1024.0);
}

void check_memory(const RunConfig& cfg, unsigned jobs) {
  const double need = estimate_job_memory_mb(cfg) * std::max(1u, jobs);
  if (need > cfg.memory_limit_mb) {
    throw ConfigError("estimated memory " + short_real(need) + " MB for " + std::to_string(jobs) +
                      " job(s) exceeds numerics.memory_limit_mb = " + short_real(cfg.memory_limit_mb));
  }
}

RunSummary run_command(Command cmd, const std::vector<RunConfig>& inputs, const CommandOptions& opts) {
  std::vector<RunConfig> points;
  for (const auto& in : inputs) {
    in.validate();
    for (auto& p : expand_sweep(in)) points.push_back(std::move(p));
  }
  if (points.empty()) throw ConfigError("nothing to run");
  const unsigned jobs = std::max(1u, opts.jobs);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(jobs, points.size()));
  const unsigned inner = points.size() == 1 ? jobs : 1u;
  for (const auto& p : points) check_memory(p, std::max(outer, inner));

  if (opts.log) {
    *opts.log << to_string(cmd) << ": " << points.size() << " point(s), " << jobs << " job(s)\n";
  }
  auto results = parallel_map(points.size(), outer, [&](std::size_t i) {
    switch (cmd) {
      case Command::Decay:
        return decay_point(points[i], inner);
      case Command::Angles:
        return angles_point(points[i], inner);
      case Command::Energy:
        return energy_point(points[i]);
    }
    throw std::logic_error("unhandled command");
  });

  RunSummary summary;
  const auto dir = output_directory(points.front(), opts.out);
  CsvTable index({"point", "num_modes", "g", "r", "phi", "beta", "angle_tau", "config_hash", "csv", "json"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& cfg = points[i];
    const auto stem = to_string(cmd) + "_" + point_tag(cfg) + "_" + cfg.hash();
    std::string csv_name;
    std::string json_name;
    if (cfg.output.csv) {
      csv_name = stem + ".csv";
      write_file(dir / csv_name, results[i].csv);
      summary.files.push_back(dir / csv_name);
    }
    if (cfg.output.json) {
      json_name = stem + ".json";
      auto meta = results[i].meta;
      meta["csv"] = csv_name;
      write_file(dir / json_name, meta.dump(2) + "\n");
      summary.files.push_back(dir / json_name);
    }
    for (const auto& w : results[i].warnings) {
      summary.warnings.push_back(point_tag(cfg) + ": " + w);
      if (opts.log) *opts.log << "warning: " << point_tag(cfg) << ": " << w << "\n";
    }
    index.add(static_cast<long long>(i))
        .add(static_cast<long long>(cfg.model.num_modes))
        .add(cfg.model.g)
        .add(cfg.state.r)
        .add(cfg.state.phi)
        .add(cfg.state.beta)
        .add(cfg.task.angle_tau)
        .add(cfg.hash())
        .add(csv_name)
        .add(json_name);
    index.end_row();
  }
  if (points.size() > 1) {
    std::string joined;
    for (const auto& p : points) joined += p.hash();
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
    const auto name = to_string(cmd) + "_index_" + buf + ".csv";
    write_file(dir / name, index.str());
    summary.files.push_back(dir / name);

    if (cmd == Command::Angles) {
      // gamma / g^2 per point on the shared phi grid
      std::vector<std::string> header{"phi"};
      for (const auto& p : points) header.push_back("gamma_over_g2_" + point_tag(p));
      CsvTable collapse(header);
      bool same_grid = true;
      for (const auto& p : points) same_grid &= p.task.phi_points == points.front().task.phi_points;
      if (same_grid && std::all_of(points.begin(), points.end(), [](const RunConfig& p) { return p.model.g > 0.0; })) {
        const auto grid = zeno::uniform_phi_grid(points.front().task.phi_points);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          collapse.add(grid[k]);
          for (std::size_t j = 0; j < points.size(); ++j) {
            collapse.add(results[j].gamma[k] / (points[j].model.g * points[j].model.g));
          }
          collapse.end_row();
        }
        const auto cname = std::string("angles_collapse_") + buf + ".csv";
        write_file(dir / cname, collapse.str());
        summary.files.push_back(dir / cname);
      }
    }
  }
  return summary;
}

RunSummary run_decay(const RunConfig& cfg, const CommandOptions& opts) {
  return run_command(Command::Decay, {cfg}, opts);
}

RunSummary run_angles(const RunConfig& cfg, const CommandOptions& opts) {
  return run_command(Command::Angles, {cfg}, opts);
}

RunSummary run_energy(const RunConfig& cfg, const CommandOptions& opts) {
  return run_command(Command::Energy, {cfg}, opts);
}

}  // namespace mqrm::cli
