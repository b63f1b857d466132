#include "mqrm_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mqrm::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view text, std::string_view key) {
  const auto t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) {
    throw ConfigError("'" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text, std::string_view key) {
  const auto t = trim(text);
  int v = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) {
    throw ConfigError("'" + std::string(key) + "': expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text, std::string_view key) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("'" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_real(v[i]);
  }
  return s;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

const char* b2s(bool b) { return b ? "true" : "false"; }

struct KeyHandler {
  std::function<void(RunConfig&, std::string_view)> set;
};

const std::map<std::string, KeyHandler, std::less<>>& handlers() {
  static const std::map<std::string, KeyHandler, std::less<>> table = [] {
    std::map<std::string, KeyHandler, std::less<>> h;
    auto real = [&h](std::string key, auto member) {
      h[key] = {[key, member](RunConfig& c, std::string_view v) { member(c) = parse_real(v, key); }};
    };
    auto integer = [&h](std::string key, auto member) {
      h[key] = {[key, member](RunConfig& c, std::string_view v) { member(c) = parse_int(v, key); }};
    };
    auto boolean = [&h](std::string key, auto member) {
      h[key] = {[key, member](RunConfig& c, std::string_view v) { member(c) = parse_bool(v, key); }};
    };
    auto reals = [&h](std::string key, auto member) {
      h[key] = {[member](RunConfig& c, std::string_view v) { member(c) = parse_real_list(v); }};
    };

    real("model.delta", [](RunConfig& c) -> double& { return c.model.delta; });
    real("model.omega0", [](RunConfig& c) -> double& { return c.model.omega0; });
    real("model.g", [](RunConfig& c) -> double& { return c.model.g; });
    integer("model.num_modes", [](RunConfig& c) -> int& { return c.model.num_modes; });

    real("state.r", [](RunConfig& c) -> double& { return c.state.r; });
    real("state.phi", [](RunConfig& c) -> double& { return c.state.phi; });
    h["state.beta"] = {[](RunConfig& c, std::string_view v) {
      c.state.beta = std::string(trim(v));
      (void)InverseTemperature::parse(c.state.beta);
    }};

    integer("numerics.n_max", [](RunConfig& c) -> int& { return c.numerics.n_max; });
    integer("numerics.d_max", [](RunConfig& c) -> int& { return c.numerics.d_max; });
    real("numerics.dt", [](RunConfig& c) -> double& { return c.numerics.dt; });
    integer("numerics.krylov_dim", [](RunConfig& c) -> int& { return c.numerics.krylov_dim; });
    real("numerics.krylov_tol", [](RunConfig& c) -> double& { return c.numerics.krylov_tol; });
    real("numerics.svd_cutoff", [](RunConfig& c) -> double& { return c.numerics.svd_cutoff; });
    real("numerics.max_phase_step", [](RunConfig& c) -> double& { return c.numerics.max_phase_step; });
    integer("numerics.warmup_steps", [](RunConfig& c) -> int& { return c.numerics.warmup_steps; });
    real("numerics.truncation_budget", [](RunConfig& c) -> double& { return c.numerics.truncation_budget; });
    real("numerics.tail_warning", [](RunConfig& c) -> double& { return c.numerics.tail_warning; });
    boolean("numerics.drop_fictitious_at_T0", [](RunConfig& c) -> bool& { return c.numerics.drop_fictitious_at_T0; });
    boolean("numerics.check_hermiticity", [](RunConfig& c) -> bool& { return c.numerics.check_hermiticity; });
    boolean("numerics.appendixC_sign_convention",
            [](RunConfig& c) -> bool& { return c.numerics.convention.appendix_c_sign; });
    boolean("numerics.appendixC_omega_convention",
            [](RunConfig& c) -> bool& { return c.numerics.convention.appendix_c_omega; });
    real("numerics.memory_limit_mb", [](RunConfig& c) -> double& { return c.memory_limit_mb; });

    h["task.engine"] = {[](RunConfig& c, std::string_view v) {
      try {
        c.task.engine = zeno::parse_engine(trim(v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("'task.engine': ") + e.what());
      }
    }};
    reals("task.tau", [](RunConfig& c) -> std::vector<double>& { return c.task.tau; });
    real("task.angle_tau", [](RunConfig& c) -> double& { return c.task.angle_tau; });
    integer("task.phi_points", [](RunConfig& c) -> int& { return c.task.phi_points; });
    real("task.t_final", [](RunConfig& c) -> double& { return c.task.t_final; });
    integer("task.t_samples", [](RunConfig& c) -> int& { return c.task.t_samples; });
    real("task.fit_window", [](RunConfig& c) -> double& { return c.task.fit_window; });
    real("task.backflow_threshold", [](RunConfig& c) -> double& { return c.task.backflow_threshold; });
    boolean("task.squeezed_analytic", [](RunConfig& c) -> bool& { return c.task.squeezed_analytic; });
    boolean("task.auto_n_max", [](RunConfig& c) -> bool& { return c.task.auto_n_max; });
    real("task.se_dt", [](RunConfig& c) -> double& { return c.task.se_dt; });
    reals("task.sweep_g", [](RunConfig& c) -> std::vector<double>& { return c.task.sweep_g; });
    reals("task.sweep_r", [](RunConfig& c) -> std::vector<double>& { return c.task.sweep_r; });
    reals("task.sweep_phi", [](RunConfig& c) -> std::vector<double>& { return c.task.sweep_phi; });
    reals("task.sweep_angle_tau", [](RunConfig& c) -> std::vector<double>& { return c.task.sweep_angle_tau; });
    h["task.sweep_num_modes"] = {[](RunConfig& c, std::string_view v) {
      c.task.sweep_num_modes.clear();
      if (trim(v).empty()) return;
      for (auto item : split(v, ',')) c.task.sweep_num_modes.push_back(parse_int(item, "task.sweep_num_modes"));
    }};
    h["task.sweep_beta"] = {[](RunConfig& c, std::string_view v) {
      c.task.sweep_beta.clear();
      if (trim(v).empty()) return;
      for (auto item : split(v, ',')) {
        (void)InverseTemperature::parse(item);
        c.task.sweep_beta.emplace_back(item);
      }
    }};

    h["output.directory"] = {[](RunConfig& c, std::string_view v) { c.output.directory = std::string(trim(v)); }};
    h["output.label"] = {[](RunConfig& c, std::string_view v) { c.output.label = std::string(trim(v)); }};
    h["output.formats"] = {[](RunConfig& c, std::string_view v) {
      c.output.csv = false;
      c.output.json = false;
      for (auto f : split(v, ',')) {
        if (f == "csv") {
          c.output.csv = true;
        } else if (f == "json") {
          c.output.json = true;
        } else if (!f.empty()) {
          throw ConfigError("'output.formats': unknown format '" + std::string(f) + "' (expected csv, json)");
        }
      }
    }};
    return h;
  }();
  return table;
}

std::vector<double> default_tau_grid() { return parse_real_list("0.01:1:0.01"); }

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(parts[0], "list"));
    } else if (parts.size() == 3) {
      const double a = parse_real(parts[0], "range start");
      const double b = parse_real(parts[1], "range stop");
      const double h = parse_real(parts[2], "range step");
      if (!(h > 0.0) || b < a) throw ConfigError("range '" + std::string(item) + "' needs step > 0 and stop >= start");
      const auto n = static_cast<long long>(std::floor((b - a) / h + 0.5));
      if (n > 10'000'000) throw ConfigError("range '" + std::string(item) + "' is too long");
      for (long long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * h);
    } else {
      throw ConfigError("malformed list item '" + std::string(item) + "' (expected x or start:stop:step)");
    }
  }
  return out;
}

ModelParams RunConfig::model_params() const { return {model.delta, model.omega0, model.g, model.num_modes}; }

SqueezeThermal RunConfig::squeeze_thermal() const {
  return {state.r, state.phi, InverseTemperature::parse(state.beta)};
}

zeno::DecayOptions RunConfig::decay_options(unsigned jobs) const {
  zeno::DecayOptions o;
  o.numerics = numerics;
  o.se_dt = task.se_dt;
  o.squeezed_analytic = task.squeezed_analytic;
  o.auto_n_max = task.auto_n_max;
  o.jobs = jobs;
  return o;
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "model {\n"
     << "  delta = " << format_real(model.delta) << "\n"
     << "  omega0 = " << format_real(model.omega0) << "\n"
     << "  g = " << format_real(model.g) << "\n"
     << "  num_modes = " << model.num_modes << "\n"
     << "}\n";
  os << "state {\n"
     << "  r = " << format_real(state.r) << "\n"
     << "  phi = " << format_real(state.phi) << "\n"
     << "  beta = " << state.beta << "\n"
     << "}\n";
  const auto& n = numerics;
  os << "numerics {\n"
     << "  n_max = " << n.n_max << "\n"
     << "  d_max = " << n.d_max << "\n"
     << "  dt = " << format_real(n.dt) << "\n"
     << "  krylov_dim = " << n.krylov_dim << "\n"
     << "  krylov_tol = " << format_real(n.krylov_tol) << "\n"
     << "  svd_cutoff = " << format_real(n.svd_cutoff) << "\n"
     << "  max_phase_step = " << format_real(n.max_phase_step) << "\n"
     << "  warmup_steps = " << n.warmup_steps << "\n"
     << "  truncation_budget = " << format_real(n.truncation_budget) << "\n"
     << "  tail_warning = " << format_real(n.tail_warning) << "\n"
     << "  drop_fictitious_at_T0 = " << b2s(n.drop_fictitious_at_T0) << "\n"
     << "  check_hermiticity = " << b2s(n.check_hermiticity) << "\n"
     << "  appendixC_sign_convention = " << b2s(n.convention.appendix_c_sign) << "\n"
     << "  appendixC_omega_convention = " << b2s(n.convention.appendix_c_omega) << "\n"
     << "  memory_limit_mb = " << format_real(memory_limit_mb) << "\n"
     << "}\n";
  const auto& t = task;
  os << "task {\n"
     << "  engine = " << zeno::to_string(t.engine) << "\n"
     << "  tau = " << join_reals(t.tau) << "\n"
     << "  angle_tau = " << format_real(t.angle_tau) << "\n"
     << "  phi_points = " << t.phi_points << "\n"
     << "  t_final = " << format_real(t.t_final) << "\n"
     << "  t_samples = " << t.t_samples << "\n"
     << "  fit_window = " << format_real(t.fit_window) << "\n"
     << "  backflow_threshold = " << format_real(t.backflow_threshold) << "\n"
     << "  squeezed_analytic = " << b2s(t.squeezed_analytic) << "\n"
     << "  auto_n_max = " << b2s(t.auto_n_max) << "\n"
     << "  se_dt = " << format_real(t.se_dt) << "\n"
     << "  sweep_g = " << join_reals(t.sweep_g) << "\n"
     << "  sweep_num_modes = " << join(t.sweep_num_modes) << "\n"
     << "  sweep_r = " << join_reals(t.sweep_r) << "\n"
     << "  sweep_phi = " << join_reals(t.sweep_phi) << "\n"
     << "  sweep_beta = " << join(t.sweep_beta) << "\n"
     << "  sweep_angle_tau = " << join_reals(t.sweep_angle_tau) << "\n"
     << "}\n";
  std::string formats;
  if (output.csv) formats = "csv";
  if (output.json) formats += formats.empty() ? "json" : ",json";
  os << "output {\n"
     << "  directory = " << output.directory << "\n"
     << "  formats = " << formats << "\n"
     << "  label = " << output.label << "\n"
     << "}\n";
  return os.str();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(to_text())));
  return buf;
}

void RunConfig::validate() const {
  try {
    (void)model_params();
    (void)squeeze_thermal();
    for (const auto& b : task.sweep_beta) (void)InverseTemperature::parse(b);
    numerics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double g : task.sweep_g) {
    if (g < 0.0) throw ConfigError("task.sweep_g entries must be >= 0");
  }
  for (int m : task.sweep_num_modes) {
    if (m < 1) throw ConfigError("task.sweep_num_modes entries must be >= 1");
  }
  for (double r : task.sweep_r) {
    if (r < 0.0) throw ConfigError("task.sweep_r entries must be >= 0");
  }
  for (double t : task.sweep_angle_tau) {
    if (!(t > 0.0)) throw ConfigError("task.sweep_angle_tau entries must be > 0");
  }
  if (task.tau.empty()) throw ConfigError("task.tau is empty");
  if (!(task.angle_tau > 0.0)) throw ConfigError("task.angle_tau must be > 0");
  if (task.phi_points < 3) throw ConfigError("task.phi_points must be >= 3");
  if (!(task.t_final > 0.0)) throw ConfigError("task.t_final must be > 0");
  if (task.t_samples < 3) throw ConfigError("task.t_samples must be >= 3");
  if (!(task.fit_window > 0.0)) throw ConfigError("task.fit_window must be > 0");
  if (task.se_dt < 0.0) throw ConfigError("task.se_dt must be >= 0");
  if (!(memory_limit_mb > 0.0)) throw ConfigError("numerics.memory_limit_mb must be > 0");
  if (!output.csv && !output.json) throw ConfigError("output.formats selects nothing");
}

void assign(RunConfig& cfg, std::string_view dotted_key, std::string_view value) {
  const auto key = trim(dotted_key);
  const auto& table = handlers();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    it->second.set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + std::string(key) + "': " + e.what());
  }
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form block.key=value");
  }
  assign(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  RunConfig cfg = std::move(base);
  if (cfg.task.tau.empty()) cfg.task.tau = default_tau_grid();
  std::string block;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (line == "}") {
      if (block.empty()) throw ConfigError("unmatched '}'" + where);
      block.clear();
      continue;
    }
    if (line.back() == '{') {
      if (!block.empty()) throw ConfigError("nested block" + where);
      block = std::string(trim(line.substr(0, line.size() - 1)));
      static const char* known[] = {"model", "state", "numerics", "task", "output"};
      if (std::find(std::begin(known), std::end(known), block) == std::end(known)) {
        throw ConfigError("unknown block '" + block + "'" + where);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value" + where);
    const auto key = trim(line.substr(0, eq));
    const std::string full = block.empty() ? std::string(key) : block + "." + std::string(key);
    try {
      assign(cfg, full, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what() + where);
    }
  }
  if (!block.empty()) throw ConfigError("block '" + block + "' is not closed");
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
    if (!j.contains("resolved_config") || !j["resolved_config"].is_string()) {
      throw ConfigError("'" + path + "' is JSON but has no resolved_config string");
    }
    return parse_config(j["resolved_config"].get<std::string>(), std::move(base));
  }
  return parse_config(text, std::move(base));
}

}  // namespace mqrm::cli
