#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fplab/checks.hpp"
#include "fplab/config.hpp"
#include "fplab/estimates.hpp"
#include "fplab/io.hpp"

using namespace fplab;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("fplab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string data_dir = FPLAB_TEST_DATA_DIR;
  const RunConfig cfg = parse_config(data_dir + "/bump.cfg");
  CHECK(cfg.dim == 1);
  CHECK(cfg.h == 0.05);
  CHECK(cfg.r_ext == 4.0);
  CHECK(cfg.kernel.s == 0.5);
  CHECK(cfg.kernel.p == 3.0);
  CHECK(cfg.kernel.form == KernelSpec::Form::canonical);
  CHECK(cfg.horizon == 0.4);
  CHECK(cfg.dt == 0.02);
  CHECK(cfg.checks == std::vector<std::string>{"ladder", "inequalities"});
  CHECK(cfg.sigmas == std::vector<double>{0.25, 0.5, 0.75});
  CHECK(cfg.refine == 2);
  CHECK(cfg.u0.terms.size() == 1);
  CHECK(cfg.u0.eval({0.0, 0.0}) == 1.0);
  CHECK(cfg.u0.eval({0.9, 0.0}) == 0.0);
  CHECK(cfg.g.terms.empty());
}

TEST_CASE("malformed configs name the offending key and line") {
  SUBCASE("unknown key") {
    try {
      parse_config_text("[mesh]\nn = 1\nextents = -1:1\nh = 0.1\nr_ext = 2\nwat = 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key == "wat");
      CHECK(e.line == 6);
      CHECK(std::string(e.what()).find("wat") != std::string::npos);
    }
  }
  SUBCASE("bad number") {
    try {
      parse_config_text("[mesh]\nn = 1\nextents = -1:1\nh = fast\nr_ext = 2\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("mesh.h") != std::string::npos);
    }
  }
  SUBCASE("unknown section") {
    CHECK_THROWS_AS(parse_config_text("[mess]\nn = 1\n"), ConfigError);
  }
  SUBCASE("missing mesh") {
    CHECK_THROWS_AS(parse_config_text("[kernel]\ns = 0.5\n"), ConfigError);
  }
  SUBCASE("bad field term") {
    CHECK_THROWS_AS(
        parse_config_text(
            "[mesh]\nn = 1\nextents = -1:1\nh = 0.1\nr_ext = 2\n[problem]\nu0 = blob(1)\n"),
        ConfigError);
  }
}

TEST_CASE("field expressions") {
  const ScalarFieldSpec f = ScalarFieldSpec::parse("bump(0,0.5,1) + constant(0.25)", 1);
  CHECK(f.eval({0.0, 0.0}) == doctest::Approx(1.25));
  CHECK(f.eval({2.0, 0.0}) == doctest::Approx(0.25));
  const ScalarFieldSpec dipole =
      ScalarFieldSpec::parse("bump(-0.4,0.3,1) + bump(0.4,0.3,-0.6)", 1);
  CHECK(dipole.eval({-0.4, 0.0}) == doctest::Approx(1.0));
  CHECK(dipole.eval({0.4, 0.0}) == doctest::Approx(-0.6));
  const ScalarFieldSpec zero = ScalarFieldSpec::parse("zero", 2);
  CHECK(zero.eval({0.3, 0.4}) == 0.0);
}

TEST_CASE("mesh and field round-trip through CSV") {
  const fs::path dir = temp_dir("io");
  const Mesh mesh = build_mesh(2, {-1.0, -1.0}, {1.0, 1.0}, 0.25, 2.0);
  save_mesh(mesh, (dir / "mesh.csv").string());
  const Mesh loaded = load_mesh((dir / "mesh.csv").string());
  CHECK(loaded.n_nodes() == mesh.n_nodes());
  CHECK(loaded.dim == mesh.dim);
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    CHECK(loaded.point(i)[0] == mesh.point(i)[0]);
    CHECK(loaded.point(i)[1] == mesh.point(i)[1]);
    CHECK(loaded.interior[i] == mesh.interior[i]);
  }

  Field f{std::vector<double>(mesh.n_nodes()), 0.125};
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = std::sin(i * 0.7) * 1e-3 + i;
  save_field(f, (dir / "field.csv").string());
  const Field g = load_field((dir / "field.csv").string());
  CHECK(g.time == f.time);
  CHECK(g.values == f.values);  // bitwise, via 17 significant digits
}

TEST_CASE("solve writes index + one snapshot per step, and round-trips") {
  const std::string data_dir = FPLAB_TEST_DATA_DIR;
  RunConfig cfg = parse_config(data_dir + "/bump.cfg");
  cfg.horizon = 0.1;  // 5 steps at dt = 0.02
  const fs::path dir = temp_dir("solve");
  const ProblemSpec spec = make_problem(cfg);
  const Trajectory traj = solve(spec, cfg.step);
  save_trajectory(traj, spec.mesh, dir.string());

  // file-count oracle: ceil(T/dt) + 1 snapshots
  const std::size_t expected = static_cast<std::size_t>(std::ceil(0.1 / 0.02)) + 1;
  std::size_t snaps = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename().string().rfind("snap_", 0) == 0) ++snaps;
  CHECK(snaps == expected);
  CHECK(fs::exists(dir / "index.csv"));
  CHECK(fs::exists(dir / "mesh.csv"));

  const auto [loaded, loaded_mesh] = load_trajectory(dir.string());
  REQUIRE(loaded.fields.size() == traj.fields.size());
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    CHECK(loaded.fields[k].time == traj.fields[k].time);
    CHECK(loaded.fields[k].values == traj.fields[k].values);
  }

  // loaded-then-checked equals checked-in-process, bit for bit
  const Cylinder q{spec.mesh.center, 0.5, 0.1, 0.03};
  const BoundednessReport in_process = boundedness_check(
      traj, spec.mesh, q, 0.5, BoundednessMode::nonneg_subsolution, cfg.kernel.s,
      cfg.kernel.p);
  const BoundednessReport from_disk = boundedness_check(
      loaded, loaded_mesh, q, 0.5, BoundednessMode::nonneg_subsolution, cfg.kernel.s,
      cfg.kernel.p);
  CHECK(in_process.lhs == from_disk.lhs);
  CHECK(in_process.rhs == from_disk.rhs);
  CHECK(in_process.c_emp == from_disk.c_emp);
}

TEST_CASE("verify reports are byte-identical across reruns with one seed") {
  const std::string data_dir = FPLAB_TEST_DATA_DIR;
  RunConfig cfg = parse_config(data_dir + "/bump.cfg");
  cfg.trials = 2000;
  const fs::path dir_a = temp_dir("det_a");
  const fs::path dir_b = temp_dir("det_b");
  for (const std::string check : {"ladder", "inequalities", "ellipticity"}) {
    const CheckResult a = run_check(check, cfg, 77, 1, dir_a.string());
    const CheckResult b = run_check(check, cfg, 77, 1, dir_b.string());
    CHECK(a.payload_json == b.payload_json);
    CHECK(a.pass);
  }
}

TEST_CASE("unknown check names the available ones") {
  const std::string data_dir = FPLAB_TEST_DATA_DIR;
  const RunConfig cfg = parse_config(data_dir + "/bump.cfg");
  try {
    run_check("nope", cfg, 1, 1, "/tmp");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ladder") != std::string::npos);
    CHECK(msg.find("caccioppoli") != std::string::npos);
  }
}
