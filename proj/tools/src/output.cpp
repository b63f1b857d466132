#include "mqrm_cli/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace mqrm::cli {

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string s = "\"";
  for (char c : field) {
    if (c == '"') s += '"';
    s += c;
  }
  s += '"';
  return s;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) field(h);
  end_row();
  rows_ = 0;
}

void CsvTable::field(std::string_view v) {
  if (in_row_ == columns_) throw std::logic_error("CSV row has too many fields");
  if (in_row_ > 0) out_ += ',';
  out_ += csv_escape(v);
  ++in_row_;
}

CsvTable& CsvTable::add(double v) {
  field(format_real(v));
  return *this;
}

CsvTable& CsvTable::add(std::string_view v) {
  field(v);
  return *this;
}

CsvTable& CsvTable::add(long long v) {
  field(std::to_string(v));
  return *this;
}

void CsvTable::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CSV row has too few fields");
  out_ += "\r\n";
  in_row_ = 0;
  ++rows_;
}

std::string CsvTable::str() const { return out_; }

std::filesystem::path output_directory(const RunConfig& cfg, const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output.directory.empty()) return cfg.output.directory;
  if (const char* env = std::getenv("MQRM_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json report_json(const tn::TdvpReport& r) {
  return {{"step", r.step},
          {"steps", r.steps},
          {"warmup_steps", r.warmup_steps_done},
          {"max_norm_drift", r.max_norm_drift},
          {"max_relative_energy_drift", r.max_relative_energy_drift},
          {"discarded_weight", r.discarded_weight},
          {"truncation_exceeded", r.truncation_exceeded},
          {"max_krylov_error", r.max_krylov_error},
          {"krylov_matvecs", r.krylov_matvecs},
          {"krylov_splits", r.krylov_splits},
          {"krylov_converged", r.krylov_converged},
          {"max_tail", r.max_tail},
          {"tail_warning", r.tail_warning},
          {"bond_dims", r.bond_dims},
          {"converged", r.converged()}};
}

nlohmann::json curve_json(const zeno::DecayCurve& c) {
  nlohmann::json j{{"engine", zeno::to_string(c.engine)}, {"points", c.tau.size()}, {"warnings", c.warnings}};
  if (c.se) {
    j["se"] = {{"step", c.se->step},
               {"halving_deviation", c.se->halving_deviation},
               {"max_norm_drift", c.se->max_norm_drift},
               {"max_energy_drift", c.se->max_energy_drift}};
  }
  if (c.tdvp) {
    j["tdvp"] = report_json(*c.tdvp);
    j["tdvp"]["n_max_used"] = c.n_max_used;
  }
  if (c.tau.size() >= 5) {
    const auto cr = zeno::classify_and_crossover(c);
    j["regime"] = zeno::to_string(cr.regime);
    j["tau_c"] = cr.tau_c ? nlohmann::json(*cr.tau_c) : nlohmann::json(nullptr);
    j["sign_changes"] = cr.sign_changes;
  }
  return j;
}

nlohmann::json scan_json(const zeno::AngleScan& s) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return {{"tau", s.tau},
          {"degenerate", s.degenerate},
          {"phi_max", num(s.phi_max)},
          {"phi_min", num(s.phi_min)},
          {"shift_max", num(s.shift_max)},
          {"shift_min", num(s.shift_min)},
          {"separation", num(s.separation)},
          {"resolution", s.resolution},
          {"relative_depth", s.relative_depth},
          {"warnings", s.warnings}};
}

nlohmann::json sidecar(const RunConfig& cfg, std::string_view command) {
  return {{"tool", "mqrm"},
          {"command", command},
          {"config_hash", cfg.hash()},
          {"resolved_config", cfg.to_text()}};
}

}  // namespace mqrm::cli
