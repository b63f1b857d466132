#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mqrm_cli/commands.hpp"
#include "mqrm_cli/config.hpp"
#include "mqrm_cli/output.hpp"
#include "mqrm_cli/validate.hpp"

using namespace mqrm::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mqrm_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> column(const std::string& csv, int index) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream row(line);
    std::string field;
    for (int i = 0; i <= index; ++i) std::getline(row, field, ',');
    out.push_back(field);
  }
  return out;
}

fs::path only(const RunSummary& s, const std::string& ext) {
  for (const auto& f : s.files)
    if (f.extension() == ext) return f;
  return {};
}

}  // namespace

TEST(Config, DefaultsFollowThePaper) {
  const auto c = parse_config("");
  EXPECT_EQ(c.model.num_modes, 15);
  EXPECT_EQ(c.model.delta, c.model.omega0);
  EXPECT_EQ(c.numerics.d_max, 15);
  EXPECT_EQ(c.numerics.n_max, 80);
  EXPECT_EQ(c.numerics.dt, 0.0);
  EXPECT_DOUBLE_EQ(c.numerics.resolved_step(mqrm::ModelParams::resonant(0.01, 1), mqrm::SqueezeThermal::vacuum()),
                   0.1);
  EXPECT_EQ(c.task.tau.size(), 100u);
  EXPECT_DOUBLE_EQ(c.task.tau.back(), 1.0);
}

TEST(Config, BlocksTopLevelKeysAndComments) {
  const auto c = parse_config(
      "# test\n"
      "model {\n  g = 0.2   # strong\n  num_modes = 3\n}\n"
      "state.beta = 0.5\n"
      "task {\n engine = se\n tau = 0.1:0.3:0.1, 0.5\n}\n");
  EXPECT_EQ(c.model.g, 0.2);
  EXPECT_EQ(c.model.num_modes, 3);
  EXPECT_EQ(c.state.beta, "0.5");
  EXPECT_EQ(c.task.engine, mqrm::zeno::Engine::Se);
  ASSERT_EQ(c.task.tau.size(), 4u);
  EXPECT_DOUBLE_EQ(c.task.tau[2], 0.30000000000000004);
  EXPECT_EQ(c.task.tau[3], 0.5);
}

TEST(Config, RejectsUnknownKeysAndMalformedInput) {
  EXPECT_THROW(parse_config("model {\n gg = 1\n}\n"), ConfigError);
  EXPECT_THROW(parse_config("physics {\n}\n"), ConfigError);
  EXPECT_THROW(parse_config("model {\n g = fast\n}\n"), ConfigError);
  EXPECT_THROW(parse_config("model {\n g = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("}\n"), ConfigError);
  EXPECT_THROW(parse_config("task.engine = exact\n"), ConfigError);
  EXPECT_THROW(parse_config("state.beta = cold\n"), ConfigError);
  RunConfig c = parse_config("");
  EXPECT_THROW(apply_override(c, "numerics.n_max"), ConfigError);
  EXPECT_THROW(apply_override(c, "numerics.nmax=3"), ConfigError);
}

TEST(Config, ResolvedTextRoundTripsAndHashIsStable) {
  RunConfig c = parse_config("model.g = 0.05\nnumerics.appendixC_sign_convention = true\ntask.sweep_beta = inf,0.5\n");
  const auto again = parse_config(c.to_text());
  EXPECT_EQ(again.to_text(), c.to_text());
  EXPECT_EQ(again.hash(), c.hash());
  EXPECT_EQ(c.hash().size(), 16u);
  apply_override(c, "model.g=0.06");
  EXPECT_NE(again.hash(), c.hash());
}

TEST(Config, Fnv1aReference) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, ValidateCatchesInconsistentValues) {
  RunConfig c = parse_config("");
  c.validate();
  apply_override(c, "model.num_modes=0");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Csv, Rfc4180Quoting) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  CsvTable t({"x", "label"});
  t.add(0.1).add("u,v");
  t.end_row();
  EXPECT_EQ(t.str(), "x,label\r\n0.10000000000000001,\"u,v\"\r\n");
  EXPECT_THROW(t.end_row(), std::logic_error);
}

TEST(Sweep, CartesianExpansion) {
  RunConfig c = parse_config("task.sweep_g = 0.01,0.1\ntask.sweep_beta = inf,1,0.5\n");
  const auto pts = expand_sweep(c);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[0].model.g, 0.01);
  EXPECT_EQ(pts[0].state.beta, "inf");
  EXPECT_EQ(pts[1].state.beta, "1");
  EXPECT_EQ(pts[5].model.g, 0.1);
  for (const auto& p : pts) EXPECT_TRUE(p.task.sweep_g.empty());
}

TEST(Sweep, MemoryBoundIsEnforced) {
  RunConfig c = parse_config("task.engine = tdvp\nnumerics.memory_limit_mb = 1\n");
  EXPECT_GT(estimate_job_memory_mb(c), 1.0);
  EXPECT_THROW(check_memory(c, 1), ConfigError);
  apply_override(c, "task.engine=analytic");
  EXPECT_NO_THROW(check_memory(c, 64));
}

TEST(Commands, DecayWritesCsvAndSidecarThatReproduces) {
  const auto dir = scratch_dir("decay");
  RunConfig c = parse_config("model.num_modes = 15\nmodel.g = 0.01\nstate.beta = 0.5\ntask.tau = 0.05:1:0.05\n");
  CommandOptions o;
  o.out = dir.string();
  const auto s = run_decay(c, o);
  const auto csv = slurp(only(s, ".csv"));
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "tau,p_sur,gamma,engine");
  EXPECT_NE(only(s, ".csv").filename().string().find(c.hash()), std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(only(s, ".json")));
  EXPECT_EQ(meta["config_hash"], c.hash());

  const auto again = load_config(only(s, ".json").string());
  EXPECT_EQ(again.hash(), c.hash());
  CommandOptions o2;
  o2.out = (dir / "rerun").string();
  const auto s2 = run_decay(again, o2);
  EXPECT_EQ(slurp(only(s2, ".csv")), csv);
}

TEST(Commands, AnalyticAndSeAgreeAtWeakCoupling) {
  const auto dir = scratch_dir("cross");
  RunConfig c = parse_config("model.g = 0.01\nstate.beta = 0.5\ntask.tau = 0.05:1:0.05\n");
  CommandOptions o;
  o.out = dir.string();
  const auto a = column(slurp(only(run_decay(c, o), ".csv")), 2);
  apply_override(c, "task.engine=se");
  const auto s = column(slurp(only(run_decay(c, o), ".csv")), 2);
  ASSERT_EQ(a.size(), s.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::stod(a[i]) / std::stod(s[i]), 1.0, 0.02);
}

TEST(Commands, ZeroCouplingGivesZeroGamma) {
  const auto dir = scratch_dir("zero");
  RunConfig c = parse_config("model.g = 0\ntask.tau = 0.1:1:0.1\n");
  CommandOptions o;
  o.out = dir.string();
  for (const auto& g : column(slurp(only(run_decay(c, o), ".csv")), 2)) EXPECT_EQ(std::stod(g), 0.0);
}

TEST(Commands, AnglesWithoutSqueezingAreFlat) {
  const auto dir = scratch_dir("angles");
  RunConfig c = parse_config("model.num_modes = 2\nstate.r = 0\ntask.phi_points = 16\n");
  CommandOptions o;
  o.out = dir.string();
  const auto s = run_angles(c, o);
  const auto csv = slurp(only(s, ".csv"));
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "phi,gamma,r,g,tau,beta");
  const auto g = column(csv, 1);
  for (const auto& v : g) EXPECT_EQ(v, g.front());
  EXPECT_TRUE(nlohmann::json::parse(slurp(only(s, ".json")))["result"]["degenerate"].get<bool>());
}

TEST(Commands, AngleSweepWritesCollapseTable) {
  const auto dir = scratch_dir("collapse");
  RunConfig c = parse_config("model.num_modes = 3\nstate.r = 0.3\ntask.phi_points = 16\ntask.sweep_g = 0.01,0.02\n");
  CommandOptions o;
  o.out = dir.string();
  o.jobs = 2;
  const auto s = run_angles(c, o);
  bool found = false;
  for (const auto& f : s.files) {
    if (f.filename().string().rfind("angles_collapse_", 0) == 0) {
      found = true;
      const auto col1 = column(slurp(f), 1);
      const auto col2 = column(slurp(f), 2);
      for (std::size_t i = 0; i < col1.size(); ++i) EXPECT_NEAR(std::stod(col1[i]) / std::stod(col2[i]), 1.0, 1e-12);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Commands, EnergyZeroCouplingAndIdentity) {
  const auto dir = scratch_dir("energy");
  RunConfig c = parse_config("model.num_modes = 3\nmodel.g = 0\ntask.engine = se\ntask.t_final = 1\n");
  CommandOptions o;
  o.out = dir.string();
  auto s = run_energy(c, o);
  const auto csv = slurp(only(s, ".csv"));
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "t,e_tls,e_mode_0,e_mode_1,e_mode_2");
  for (int m = 2; m <= 4; ++m)
    for (const auto& v : column(csv, m)) EXPECT_EQ(std::stod(v), 0.0);

  apply_override(c, "model.g=0.1");
  apply_override(c, "model.num_modes=15");
  apply_override(c, "state.beta=0.5");
  s = run_energy(c, o);
  const auto meta = nlohmann::json::parse(slurp(only(s, ".json")));
  EXPECT_LT(meta["result"]["identity_residual"].get<double>(), 1e-10);
  apply_override(c, "task.engine=analytic");
  EXPECT_THROW(run_energy(c, o), ConfigError);
}

TEST(Commands, OutputDirectoryFromEnvironment) {
  const auto dir = scratch_dir("env");
  ::setenv("MQRM_OUT_DIR", dir.string().c_str(), 1);
  EXPECT_EQ(output_directory(parse_config("")), dir);
  EXPECT_EQ(output_directory(parse_config("output.directory = elsewhere\n")), fs::path("elsewhere"));
  ::unsetenv("MQRM_OUT_DIR");
  EXPECT_EQ(output_directory(parse_config("")), fs::path("."));
}

TEST(Commands, ParallelRunIsByteIdentical) {
  RunConfig c = parse_config("model.num_modes = 4\nstate.r = 0.2\ntask.phi_points = 24\ntask.sweep_g = 0.01,0.05,0.1\n");
  CommandOptions o1, o3;
  o1.out = scratch_dir("serial").string();
  o3.out = scratch_dir("parallel").string();
  o3.jobs = 3;
  const auto a = run_angles(c, o1);
  const auto b = run_angles(c, o3);
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    EXPECT_EQ(a.files[i].filename(), b.files[i].filename());
    EXPECT_EQ(slurp(a.files[i]), slurp(b.files[i]));
  }
}

TEST(Presets, AllRecipesResolve) {
  const auto base = parse_config("");
  for (const char* name : {"fig1a", "fig1b", "fig2", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b"}) {
    const auto& p = find_preset(name);
    const auto points = preset_points(p, base);
    ASSERT_FALSE(points.empty()) << name;
    for (const auto& c : points) EXPECT_NO_THROW(c.validate()) << name;
  }
  EXPECT_EQ(preset_points(find_preset("fig1a"), base).size(), 4u);
  EXPECT_THROW(find_preset("fig9"), ConfigError);
}

TEST(Presets, Fig1aShapes) {
  const auto dir = scratch_dir("fig1a");
  CommandOptions o;
  o.out = dir.string();
  const auto s = run_command(Command::Decay, preset_points(find_preset("fig1a"), parse_config("")), o);
  int crossovers = 0, zeno = 0;
  for (const auto& f : s.files) {
    if (f.extension() != ".json") continue;
    const auto regime = nlohmann::json::parse(slurp(f))["result"]["regime"].get<std::string>();
    crossovers += regime == "crossover";
    zeno += regime == "pure QZE";
  }
  EXPECT_EQ(zeno, 2);
  EXPECT_EQ(crossovers, 2);
}

TEST(Validate, CorruptedSignIsReported) {
  RunConfig c = parse_config("numerics.appendixC_sign_convention = true\n");
  const auto rep = run_validate(c);
  EXPECT_FALSE(rep.ok());
  bool hermiticity_failed = false;
  for (const auto& chk : rep.checks) {
    hermiticity_failed |= chk.name.find("Hermiticity") != std::string::npos && chk.status == CheckStatus::Fail;
  }
  EXPECT_TRUE(hermiticity_failed);
  EXPECT_NE(format_report(rep).find("FAIL"), std::string::npos);
}

TEST(Validate, SmallCutoffRaisesConvergenceWarning) {
  RunConfig c = parse_config("numerics.n_max = 4\n");
  const auto rep = run_validate(c);
  bool warned = false;
  for (const auto& chk : rep.checks) warned |= chk.status == CheckStatus::Warn;
  EXPECT_TRUE(warned);
}
