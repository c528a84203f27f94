#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "ringing/analysis.hpp"
#include "ringing/cli.hpp"
#include "ringing/lindisp.hpp"
#include "ringing/spectrum.hpp"
#include "ringing/warnings.hpp"
#include "svg.hpp"

#ifndef RINGING_VERSION
#define RINGING_VERSION "unknown"
#endif

namespace ringing::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string safe_label(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
                    c == '+' || c == '=' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

std::string ztag(double z) { return "z" + fmt_g(z); }

double gaussian_a(const PulseSpec& p) { return spectral_fwhm_to_a(p.spectral_fwhm); }

// Writes the files of one variant and records their checksums.
class Writer {
 public:
  Writer(fs::path dir, std::string label, const OutputSpec& outputs)
      : dir_(std::move(dir)), label_(safe_label(label)), outputs_(outputs) {}

  bool emits(const char* what) const { return outputs_.emit.count(what) > 0; }
  const std::vector<FileRecord>& files() const { return files_; }

  void field(const std::string& name, const ComplexEnvelope& env) {
    std::string body = "tau_wc,re,im,abs\n";
    for (std::size_t j = 0; j < env.size(); ++j) {
      row(body, {env.grid.time(j), env.samples[j].real(), env.samples[j].imag(),
                 std::abs(env.samples[j])});
    }
    put(name + ".csv", body);
  }

  void spectrum(const std::string& name, const Spectrum& s) {
    std::string body = "omega_over_wc,re,im,abs\n";
    for (std::size_t i = 0; i < s.n; ++i) {
      row(body, {s.omega(i), s.values[i].real(), s.values[i].imag(), std::abs(s.values[i])});
    }
    put(name + ".csv", body);
  }

  void transmission(const std::string& name, const TransmissionCurve& t) {
    std::string body = "omega_over_wc,ratio,masked\n";
    for (std::size_t i = 0; i < t.n; ++i) {
      row(body, {t.omega(i), t.ratio[i], t.masked[i] ? 1.0 : 0.0});
    }
    put(name + ".csv", body);
  }

  void table(const std::string& name, const std::string& header,
             const std::vector<std::vector<std::string>>& rows) {
    std::string body = header + "\n";
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) body += (k ? "," : "") + r[k];
      body += "\n";
    }
    put(name + ".csv", body);
  }

  void json_file(const std::string& name, const json& j) { put(name + ".json", j.dump(2) + "\n"); }

  void plot(const std::string& name, const std::vector<detail::Series>& series,
            const detail::PlotSpec& spec) {
    if (!outputs_.plot) return;
    detail::PlotSpec s = spec;
    s.title = label_ + ": " + spec.title;
    put(name + ".svg", detail::render_svg(series, s));
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  static void row(std::string& body, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) body += ',';
      body += num(v);
      first = false;
    }
    body += '\n';
  }

  void put(const std::string& file, const std::string& body) {
    const std::string rel = label_ + "_" + file;
    const fs::path path = dir_ / rel;
    {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot open " + path.string() + " for writing");
      out << body;
      if (!out) throw IoError("write failed for " + path.string());
    }
    files_.push_back({rel, sha256_file(path), static_cast<std::uintmax_t>(body.size())});
  }

  fs::path dir_;
  std::string label_;
  const OutputSpec& outputs_;
  std::vector<FileRecord> files_;
};

detail::Series abs_series(const std::string& label, const ComplexEnvelope& env) {
  detail::Series s{label, {}, {}};
  for (std::size_t j = 0; j < env.size(); ++j) {
    s.x.push_back(env.grid.time(j));
    s.y.push_back(std::abs(env.samples[j]));
  }
  return s;
}

detail::Series abs_series(const std::string& label, const Spectrum& sp, double window) {
  detail::Series s{label, {}, {}};
  for (std::size_t i = 0; i < sp.n; ++i) {
    if (std::abs(sp.omega(i)) > window) continue;
    s.x.push_back(sp.omega(i));
    s.y.push_back(std::abs(sp.values[i]));
  }
  return s;
}

detail::Series ratio_series(const std::string& label, const TransmissionCurve& t, double window) {
  detail::Series s{label, {}, {}};
  for (std::size_t i = 0; i < t.n; ++i) {
    if (std::abs(t.omega(i)) > window) continue;
    s.x.push_back(t.omega(i));
    s.y.push_back(t.masked[i] ? std::nan("") : t.ratio[i]);
  }
  return s;
}

json feature_json(const FeatureReport& r) {
  return {{"kind", to_string(r.kind)},
          {"peak_offsets", {r.peak_offsets.first, r.peak_offsets.second}},
          {"width", r.width},
          {"contrast", r.contrast}};
}

json coupling_json(const MediumParams& m, double z) {
  const auto d = coupling_diagnostics(m, z);
  return {{"omega_d", d.omega_d},
          {"strong_coupling", d.strong_coupling},
          {"ringing_observable", d.ringing_observable}};
}

const detail::PlotSpec kFieldPlot{"|Omega(tau)|", "omega_c tau", "|Omega| / omega_c", false};

json run_dispersion(const RunConfig& c, Writer& w) {
  std::vector<std::vector<std::string>> ck_rows, vg_rows;
  detail::Series re{"Re ck", {}, {}}, im{"Im ck", {}, {}}, vg{"V_g / c", {}, {}};
  const double step = (c.omega_max - c.omega_min) / static_cast<double>(c.omega_points - 1);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < c.omega_points; ++i) {
    const double om = c.omega_min + step * static_cast<double>(i);
    try {
      const cplx ck = wavevector(om, c.medium);
      ck_rows.push_back({Writer::num(om), Writer::num(ck.real()), Writer::num(ck.imag()),
                         Writer::num(std::abs(ck))});
      re.x.push_back(om);
      re.y.push_back(ck.real());
      im.x.push_back(om);
      im.y.push_back(ck.imag());
      const double v = group_velocity(om, c.medium);
      vg_rows.push_back({Writer::num(om), Writer::num(v)});
      vg.x.push_back(om);
      vg.y.push_back(v);
    } catch (const std::domain_error&) {
      ++skipped;
    }
  }
  if (w.emits("spectra")) {
    w.table("dispersion", "omega_over_wc,re,im,abs", ck_rows);
    w.table("group_velocity", "omega_over_wc,vg_over_c", vg_rows);
    w.plot("dispersion", {re, im}, {"c k(omega)", "omega / omega_c", "c k / omega_c", false});
    w.plot("group_velocity", {vg}, {"group velocity", "omega / omega_c", "V_g / c", false});
  }
  json res = {{"skipped_points", skipped}, {"coupling", coupling_json(c.medium, c.solver.z_max)}};
  if (w.emits("diagnostics")) w.json_file("diagnostics", res);
  return res;
}

json run_ring(const RunConfig& c, Writer& w) {
  const auto in = gaussian_pulse(c.pump, c.grid);
  const double t_tail = c.pump.center() + 3.0 * gaussian_a(c.pump);
  if (w.emits("fields")) w.field("input_field", in);
  const auto fin = spectrum(in);
  if (w.emits("spectra")) w.spectrum("input_spectrum", fin);

  std::vector<detail::Series> fields{abs_series("input", in)};
  std::vector<detail::Series> spectra{abs_series("input", fin, c.outputs.plot_window)};
  json per_z = json::array();
  for (double z : c.z_cuts()) {
    const auto out = propagate_fourier(in, z, c.medium);
    const auto fout = spectrum(out);
    const auto nodes = find_ringing_nodes(out, t_tail);
    if (w.emits("fields")) w.field(ztag(z) + "_field", out);
    if (w.emits("spectra")) w.spectrum(ztag(z) + "_spectrum", fout);
    if (w.emits("nodes")) {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t k = 0; k < nodes.size(); ++k) rows.push_back({std::to_string(k + 1), Writer::num(nodes[k])});
      w.table(ztag(z) + "_nodes", "index,tau_wc", rows);
    }
    fields.push_back(abs_series(ztag(z), out));
    spectra.push_back(abs_series(ztag(z), fout, c.outputs.plot_window));
    per_z.push_back({{"z", z},
                     {"tail_start", t_tail},
                     {"tail_peak", tail_peak(out, t_tail)},
                     {"nodes", nodes},
                     {"energy_ratio", pulse_energy(out) / pulse_energy(in)},
                     {"coupling", coupling_json(c.medium, z)}});
  }
  w.plot("fields", fields, kFieldPlot);
  w.plot("spectra", spectra, {"|F(omega)|", "omega / omega_c", "|F|", c.outputs.log_y});
  json res = {{"cuts", per_z}};
  if (w.emits("diagnostics")) w.json_file("diagnostics", res);
  return res;
}

json run_propagate(const RunConfig& c, Writer& w) {
  const auto in = gaussian_pulse(c.pump, c.grid);
  SolverConfig sc = c.solver;
  sc.record_z = c.z_cuts();
  const auto tr = simulate_single_beam(in, c.medium, sc);
  const auto fin = spectrum(in);
  if (w.emits("fields")) w.field("input_field", in);
  if (w.emits("spectra")) w.spectrum("input_spectrum", fin);
  std::vector<detail::Series> fields{abs_series("input", in)};
  std::vector<detail::Series> spectra{abs_series("input", fin, c.outputs.plot_window)};
  json per_z = json::array();
  for (double z : c.z_cuts()) {
    const auto& out = tr.pump_fields[tr.index_of(z)];
    const auto lin = propagate_fourier(in, z, c.medium);
    const auto fout = spectrum(out);
    if (w.emits("fields")) w.field(ztag(z) + "_field", out);
    if (w.emits("spectra")) w.spectrum(ztag(z) + "_spectrum", fout);
    fields.push_back(abs_series(ztag(z), out));
    spectra.push_back(abs_series(ztag(z), fout, c.outputs.plot_window));
    per_z.push_back({{"z", tr.z_samples[tr.index_of(z)]},
                     {"energy_ratio", pulse_energy(out) / pulse_energy(in)},
                     {"relative_l2_vs_linear", relative_l2(out, lin)},
                     {"output_area", {pulse_area(out).real(), pulse_area(out).imag()}}});
  }
  w.plot("fields", fields, kFieldPlot);
  w.plot("spectra", spectra, {"|F(omega)|", "omega / omega_c", "|F|", c.outputs.log_y});
  json res = {{"cuts", per_z}, {"bloch_norm_drift", tr.bloch_norm_drift}};
  if (w.emits("diagnostics")) w.json_file("diagnostics", res);
  return res;
}

json run_pumpprobe(const RunConfig& c, Writer& w) {
  const auto pump = gaussian_pulse(c.pump, c.grid);
  const auto probe = gaussian_pulse(*c.probe, c.grid);
  SolverConfig sc = c.solver;
  sc.record_z = c.z_cuts();
  const auto tr = simulate_pump_probe(pump, probe, c.geometry, c.medium, sc);

  const auto fin = spectrum(probe);
  double in_peak = 0.0;
  for (const auto& v : fin.values) in_peak = std::max(in_peak, std::abs(v));
  const double t_tail = c.probe->center() + 3.0 * gaussian_a(*c.probe);
  FeatureOptions fopt;
  fopt.core = 3.0 * c.medium.gamma2;

  if (w.emits("fields")) w.field("probe_input_field", probe);
  if (w.emits("spectra")) w.spectrum("probe_input_spectrum", fin);
  std::vector<detail::Series> fields{abs_series("input", probe)};
  std::vector<detail::Series> spectra{abs_series("input", fin, c.outputs.plot_window)};
  std::vector<detail::Series> trans;
  std::vector<std::vector<std::string>> feature_rows;
  json per_z = json::array();
  for (double z : c.z_cuts()) {
    const std::size_t idx = tr.index_of(z);
    const auto& out = tr.probe_fields[idx];
    const auto fout = spectrum(out);
    const auto lin = propagate_fourier(probe, z, c.medium);
    const auto t = transmission(fout, fin);
    const auto base = transmission(spectrum(lin), fin);
    const auto rep = feature_report(t, base, fopt);
    const auto nodes = find_ringing_nodes(out, t_tail);

    double generated = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) {
      if (t.masked[i] && std::abs(t.omega(i)) <= fopt.window) {
        generated = std::max(generated, std::abs(fout.values[i]) / in_peak);
      }
    }

    const std::string tag = ztag(z);
    if (w.emits("fields")) {
      w.field(tag + "_probe_field", out);
      w.field(tag + "_pump_field", tr.pump_fields[idx]);
    }
    if (w.emits("spectra")) w.spectrum(tag + "_probe_spectrum", fout);
    if (w.emits("transmission")) {
      w.transmission(tag + "_transmission", t);
      w.transmission(tag + "_linear_transmission", base);
    }
    if (w.emits("nodes")) {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t k = 0; k < nodes.size(); ++k) rows.push_back({std::to_string(k + 1), Writer::num(nodes[k])});
      w.table(tag + "_nodes", "index,tau_wc", rows);
    }
    feature_rows.push_back({Writer::num(z), to_string(rep.kind), Writer::num(rep.peak_offsets.first),
                            Writer::num(rep.peak_offsets.second), Writer::num(rep.width),
                            Writer::num(rep.contrast)});
    fields.push_back(abs_series(tag, out));
    spectra.push_back(abs_series(tag, fout, c.outputs.plot_window));
    trans.push_back(ratio_series(tag, t, c.outputs.plot_window));
    trans.push_back(ratio_series(tag + " linear", base, c.outputs.plot_window));
    per_z.push_back({{"z", tr.z_samples[idx]},
                     {"energy_ratio", pulse_energy(out) / pulse_energy(probe)},
                     {"feature", feature_json(rep)},
                     {"spectral_extrema", count_spectral_extrema(fout, fopt.window)},
                     {"generated_peak_rel", generated},
                     {"node_count", nodes.size()}});
  }
  if (w.emits("features")) {
    w.table("features", "z,kind,peak_neg,peak_pos,width,contrast", feature_rows);
  }
  if (w.emits("fields")) w.plot("fields", fields, kFieldPlot);
  if (w.emits("spectra")) {
    w.plot("spectra", spectra, {"probe |F(omega)|", "omega / omega_c", "|F|", c.outputs.log_y});
  }
  if (w.emits("transmission")) {
    w.plot("transmission", trans, {"probe transmission", "omega / omega_c", "|F_out| / |F_in|", false});
  }
  json res = {{"cuts", per_z}, {"bloch_norm_drift", tr.bloch_norm_drift}};
  if (w.emits("diagnostics")) w.json_file("diagnostics", res);
  return res;
}

json run_interfere(const RunConfig& c, Writer& w) {
  const auto in = gaussian_pulse(c.pump, c.grid);
  const double z = c.solver.z_max;
  FourierOptions opt;
  opt.periodic = true;
  auto composed = propagate_fourier(in, z, c.medium, opt);
  const long shift = std::lround(c.tau1 / c.grid.dt);
  const double tau1 = static_cast<double>(shift) * c.grid.dt;
  if (std::abs(tau1 - c.tau1) > 1e-9 * std::max(1.0, c.tau1)) {
    warn("interfere: tau1 snapped to the grid, using " + fmt_g(tau1));
  }
  const std::size_t n = c.grid.n;
  for (std::size_t j = 0; j < n; ++j) {
    composed.samples[(j + static_cast<std::size_t>(shift)) % n] += in.samples[j];
  }
  const auto fin = spectrum(in);
  const auto fout = spectrum(composed);
  const auto closed = interference_spectrum(fin, z, tau1, c.medium);

  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < fout.n; ++i) peak = std::max(peak, std::abs(fout.values[i]));
  std::vector<std::vector<std::string>> rows;
  detail::Series a{"closed form", {}, {}}, b{"two-path", {}, {}};
  for (std::size_t i = 0; i < fout.n; ++i) {
    const double om = fout.omega(i);
    if (om != 0.0) worst = std::max(worst, std::abs(std::abs(fout.values[i]) - closed[i]));
    rows.push_back({Writer::num(om), Writer::num(closed[i]), Writer::num(std::abs(fout.values[i]))});
    if (std::abs(om) <= c.outputs.plot_window) {
      a.x.push_back(om);
      a.y.push_back(closed[i]);
      b.x.push_back(om);
      b.y.push_back(std::abs(fout.values[i]));
    }
  }
  if (w.emits("fields")) w.field("two_path_field", composed);
  if (w.emits("spectra")) {
    w.spectrum("two_path_spectrum", fout);
    w.table("interference", "omega_over_wc,closed_form,two_path", rows);
    w.plot("interference", {a, b}, {"|F_+(omega)|", "omega / omega_c", "|F_+|", c.outputs.log_y});
  }
  json res = {{"tau1", tau1}, {"z", z}, {"max_relative_error", peak > 0.0 ? worst / peak : 0.0}};
  if (w.emits("diagnostics")) w.json_file("diagnostics", res);
  return res;
}

struct VariantOutcome {
  std::vector<FileRecord> files;
  json results;
  std::vector<std::string> warnings;
  int exit_code = 0;
  std::string error;
};

VariantOutcome run_variant(const RunConfig& c, const std::string& label, const fs::path& dir) {
  VariantOutcome o;
  WarningCapture capture;
  Writer w(dir, label, c.outputs);
  try {
    switch (c.mode) {
      case Mode::dispersion:
        o.results = run_dispersion(c, w);
        break;
      case Mode::ring:
        o.results = run_ring(c, w);
        break;
      case Mode::propagate:
        o.results = run_propagate(c, w);
        break;
      case Mode::pumpprobe:
        o.results = run_pumpprobe(c, w);
        break;
      case Mode::interfere:
        o.results = run_interfere(c, w);
        break;
    }
  } catch (const ConfigError& e) {
    o.exit_code = 1;
    o.error = e.what();
  } catch (const std::invalid_argument& e) {
    o.exit_code = 1;
    o.error = e.what();
  } catch (const IoError& e) {
    o.exit_code = 3;
    o.error = e.what();
  } catch (const fs::filesystem_error& e) {
    o.exit_code = 3;
    o.error = e.what();
  } catch (const std::exception& e) {
    o.exit_code = 2;
    o.error = e.what();
  }
  o.files = w.files();
  for (const auto& m : capture.messages()) o.warnings.push_back(label + ": " + m);
  return o;
}

}  // namespace

json RunManifest::to_json() const {
  json files_json = json::array();
  for (const auto& f : files) {
    files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return {{"tool", "ringsim"},
          {"version", version},
          {"status", status},
          {"exit_code", exit_code},
          {"error", error},
          {"wall_time_s", wall_time_s},
          {"config", config},
          {"files", files_json},
          {"results", results},
          {"warnings", warnings}};
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string version_string() { return RINGING_VERSION; }

unsigned default_threads() {
  if (const char* env = std::getenv("RINGSIM_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

RunManifest run(const RunConfig& config, const fs::path& out_dir, unsigned threads) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.config = to_json(config);
  m.version = version_string();

  auto finish = [&](bool write_manifest) {
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!write_manifest) return;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << m.to_json().dump(2) << "\n";
    if (!out && m.exit_code == 0) {
      m.status = "error";
      m.exit_code = 3;
      m.error = "cannot write manifest.json";
    }
  };
  auto fail = [&](int code, const std::string& msg) {
    m.status = "error";
    m.exit_code = code;
    m.error = msg;
  };

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    fail(3, "cannot create output directory " + out_dir.string());
    finish(false);
    return m;
  }

  std::vector<std::pair<std::string, RunConfig>> jobs;
  try {
    config.validate();
    if (config.variants.empty()) {
      jobs.emplace_back("main", config);
    } else {
      for (const auto& v : config.variants) jobs.emplace_back(v.label, resolve_variant(config, v));
    }
    for (const auto& [label, job] : jobs) {
      (void)label;
      job.validate();
    }
  } catch (const ConfigError& e) {
    fail(1, e.what());
    finish(true);
    return m;
  }

  std::vector<VariantOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      outcomes[i] = run_variant(jobs[i].second, jobs[i].first, out_dir);
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& o = outcomes[i];
    m.files.insert(m.files.end(), o.files.begin(), o.files.end());
    m.warnings.insert(m.warnings.end(), o.warnings.begin(), o.warnings.end());
    if (o.exit_code == 0) {
      m.results[jobs[i].first] = o.results;
    } else if (m.exit_code == 0) {
      fail(o.exit_code, jobs[i].first + ": " + o.error);
    }
  }
  finish(true);
  return m;
}

}  // namespace ringing::cli
