#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqrm/tn/tdvp.hpp"
#include "mqrm/zeno.hpp"
#include "mqrm_cli/config.hpp"

namespace mqrm::cli {

/// RFC 4180 CSV: fields containing a comma, quote or line break are quoted,
/// quotes doubled; reals use %.17g; records end in CRLF.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add(double v);
  CsvTable& add(std::string_view v);
  CsvTable& add(long long v);
  void end_row();

  std::size_t rows() const { return rows_; }
  std::string str() const;

 private:
  void field(std::string_view v);
  std::string out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
};

std::string csv_escape(std::string_view field);

/// Output directory: cfg.output.directory, else $MQRM_OUT_DIR, else ".".
std::filesystem::path output_directory(const RunConfig& cfg, const std::string& cli_out = {});

/// Writes atomically through a temporary file.
void write_file(const std::filesystem::path& path, std::string_view content);

nlohmann::json report_json(const tn::TdvpReport& r);
nlohmann::json curve_json(const zeno::DecayCurve& c);
nlohmann::json scan_json(const zeno::AngleScan& s);

/// Common sidecar fields: tool version, command, hash and resolved config.
nlohmann::json sidecar(const RunConfig& cfg, std::string_view command);

}  // namespace mqrm::cli
