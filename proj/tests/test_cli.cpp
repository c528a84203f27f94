#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ringing/cli.hpp"

using namespace ringing;
using namespace ringing::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ringsim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig tiny_pumpprobe() {
  RunConfig c;
  c.mode = Mode::pumpprobe;
  c.grid = TimeGrid{0.0, 0.05, 512};
  c.probe = PulseSpec{};
  c.probe->area = 1.0;
  c.probe->delay = -0.5;
  c.solver.z_max = 0.2;
  c.solver.n_z = 10;
  return c;
}

}  // namespace

TEST_CASE("config round trip through json") {
  RunConfig c = tiny_pumpprobe();
  c.medium.gamma2 = 0.25;
  c.outputs.z_cuts = {0.1, 0.2};
  c.variants = {{"a", json{{"probe", {{"delay", 0.5}}}}}};
  const RunConfig d = parse_config(to_json(c));
  CHECK(to_json(d) == to_json(c));
  CHECK(d.medium.gamma2 == 0.25);
  CHECK(d.probe->delay == -0.5);
  CHECK(d.variants.size() == 1);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"medium", {{"gamma2", "x"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"mode", "teleport"}}), ConfigError);
  RunConfig c = tiny_pumpprobe();
  c.outputs.z_cuts = {5.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = tiny_pumpprobe();
  c.probe.reset();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("presets carry the figure parameters") {
  CHECK(preset_names().size() == 8);
  for (const auto& n : preset_names()) CHECK_NOTHROW(preset(n).validate());

  const auto f1 = preset("fig1");
  CHECK(f1.mode == Mode::dispersion);
  REQUIRE(f1.variants.size() == 3);
  std::vector<double> g2;
  for (const auto& v : f1.variants) g2.push_back(resolve_variant(f1, v).medium.gamma2);
  CHECK(g2 == std::vector<double>{1.1, 0.15, 0.0});

  const auto f2 = preset("fig2");
  CHECK(f2.pump.spectral_fwhm == 1.0);
  CHECK(f2.solver.z_max == 1.0);
  CHECK(f2.medium.gamma2 == 1e-3);
  std::vector<double> det;
  for (const auto& v : f2.variants) det.push_back(resolve_variant(f2, v).pump.detuning);
  CHECK(det == std::vector<double>{0.0, 0.5, 1.0});

  const auto f4 = preset("fig4");
  std::vector<double> delays;
  for (const auto& v : f4.variants) delays.push_back(resolve_variant(f4, v).probe->delay);
  CHECK(delays == std::vector<double>{-0.5, 0.0, 0.5});
  CHECK(f4.pump.area == doctest::Approx(0.49 * kPi));
  CHECK(f4.geometry.angle == doctest::Approx(kPi / 180.0));

  const auto f5 = preset("fig5");
  CHECK(f5.z_cuts() == std::vector<double>{0.5, 1.0, 2.0});

  const auto f7 = preset("fig7");
  CHECK(f7.probe->spectral_fwhm == 1.0);
  CHECK(f7.probe->detuning == 2.5);
  CHECK(f7.probe->delay == 0.0);
  CHECK(f7.pump.spectral_fwhm == 10.0);
  CHECK(preset("fig8").z_cuts() == std::vector<double>{0.1, 0.5, 1.0, 2.0});
}

TEST_CASE("dotted paths and sweeps") {
  json doc = json::object();
  set_path(doc, "probe.delay", 0.5);
  CHECK(doc["probe"]["delay"] == 0.5);
  const auto vs = sweep_variants({{"probe.delay", {-0.5, 0.5}}, {"solver.z_max", {1.0, 2.0, 3.0}}});
  REQUIRE(vs.size() == 6);
  CHECK(vs[1].patch["solver"]["z_max"] == 2.0);
  CHECK(vs[3].patch["probe"]["delay"] == 0.5);
  CHECK(vs[0].label != vs[1].label);
}

TEST_CASE("empty emit set writes the manifest only") {
  RunConfig c = tiny_pumpprobe();
  c.outputs.emit.clear();
  const auto dir = scratch_dir("empty");
  const auto m = run(c, dir);
  CHECK(m.exit_code == 0);
  CHECK(m.files.empty());
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++count;
    CHECK(e.path().filename() == "manifest.json");
  }
  CHECK(count == 1);
}

TEST_CASE("runs are deterministic and checksummed") {
  RunConfig c = tiny_pumpprobe();
  c.variants = {{"m", json{{"probe", {{"delay", -0.5}}}}}, {"p", json{{"probe", {{"delay", 0.5}}}}}};
  const auto d1 = scratch_dir("det1");
  const auto d2 = scratch_dir("det2");
  const auto m1 = run(c, d1, 1);
  const auto m2 = run(c, d2, 2);
  REQUIRE(m1.exit_code == 0);
  REQUIRE(m1.files.size() == m2.files.size());
  REQUIRE_FALSE(m1.files.empty());
  for (std::size_t i = 0; i < m1.files.size(); ++i) {
    CHECK(m1.files[i].path == m2.files[i].path);
    CHECK(m1.files[i].sha256 == m2.files[i].sha256);
    CHECK(slurp(d1 / m1.files[i].path) == slurp(d2 / m2.files[i].path));
    CHECK(sha256_file(d1 / m1.files[i].path) == m1.files[i].sha256);
  }
  const json manifest = json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(parse_config(manifest["config"]).variants.size() == 2);
  CHECK(manifest["results"].contains("m"));
}

TEST_CASE("csv payload round trips") {
  RunConfig c = tiny_pumpprobe();
  c.outputs.emit = {"fields"};
  const auto dir = scratch_dir("csv");
  const auto m = run(c, dir);
  REQUIRE(m.exit_code == 0);
  fs::path field;
  for (const auto& f : m.files) {
    if (f.path.find("probe_field") != std::string::npos && f.path.find("input") == std::string::npos) {
      field = dir / f.path;
    }
  }
  REQUIRE_FALSE(field.empty());
  std::ifstream in(field);
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau_wc,re,im,abs");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double t, re, im, ab;
    char sep;
    std::istringstream ls(line);
    ls >> t >> sep >> re >> sep >> im >> sep >> ab;
    CHECK(t == doctest::Approx(0.05 * rows).epsilon(1e-15));
    CHECK(ab == doctest::Approx(std::hypot(re, im)).epsilon(1e-14));
    ++rows;
  }
  CHECK(rows == 512);
}

TEST_CASE("failures map to exit codes") {
  RunConfig c = tiny_pumpprobe();
  c.probe.reset();
  const auto m = run(c, scratch_dir("cfg"));
  CHECK(m.exit_code == 1);
  CHECK(m.status == "error");

  RunConfig bad = tiny_pumpprobe();
  bad.medium.omega_c = 1e200;
  const auto n = run(bad, scratch_dir("num"));
  CHECK(n.exit_code == 2);

  const fs::path blocker = scratch_dir("io");
  std::ofstream(blocker) << "x";
  const auto io = run(tiny_pumpprobe(), blocker / "sub");
  CHECK(io.exit_code == 3);
}
