#include <algorithm>
#include <cmath>
#include <sstream>

#include "ringing/cli.hpp"

namespace ringing::cli {

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void read_number(const json& obj, const char* key, double& out, const std::string& where) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  out = obj.at(key).get<double>();
}

MediumParams parse_medium(const json& j) {
  check_keys(j, "medium", {"omega_c", "gamma1", "gamma2", "d_eq"});
  MediumParams m;
  read_number(j, "omega_c", m.omega_c, "medium");
  read_number(j, "gamma1", m.gamma1, "medium");
  read_number(j, "gamma2", m.gamma2, "medium");
  read_number(j, "d_eq", m.d_eq, "medium");
  return m;
}

json medium_json(const MediumParams& m) {
  return {{"omega_c", m.omega_c}, {"gamma1", m.gamma1}, {"gamma2", m.gamma2}, {"d_eq", m.d_eq}};
}

PulseSpec parse_pulse(const json& j, const std::string& where) {
  check_keys(j, where, {"area", "spectral_fwhm", "detuning", "center_time", "delay"});
  PulseSpec p;
  read_number(j, "area", p.area, where);
  read_number(j, "spectral_fwhm", p.spectral_fwhm, where);
  read_number(j, "detuning", p.detuning, where);
  read_number(j, "center_time", p.center_time, where);
  read_number(j, "delay", p.delay, where);
  return p;
}

json pulse_json(const PulseSpec& p) {
  return {{"area", p.area},
          {"spectral_fwhm", p.spectral_fwhm},
          {"detuning", p.detuning},
          {"center_time", p.center_time},
          {"delay", p.delay}};
}

std::string corrector_name(FieldCorrector c) {
  switch (c) {
    case FieldCorrector::euler:
      return "euler";
    case FieldCorrector::heun:
      return "heun";
    case FieldCorrector::rk4:
      return "rk4";
  }
  return "rk4";
}

FieldCorrector corrector_from(const std::string& s) {
  if (s == "euler") return FieldCorrector::euler;
  if (s == "heun") return FieldCorrector::heun;
  if (s == "rk4") return FieldCorrector::rk4;
  throw ConfigError("solver.field_corrector: expected euler, heun or rk4, got '" + s + "'");
}

std::string fmt_label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::dispersion:
      return "dispersion";
    case Mode::ring:
      return "ring";
    case Mode::propagate:
      return "propagate";
    case Mode::pumpprobe:
      return "pumpprobe";
    case Mode::interfere:
      return "interfere";
  }
  return "pumpprobe";
}

Mode mode_from_string(const std::string& name) {
  for (Mode m : {Mode::dispersion, Mode::ring, Mode::propagate, Mode::pumpprobe, Mode::interfere}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("mode: unknown mode '" + name + "'");
}

std::vector<double> RunConfig::z_cuts() const {
  if (outputs.z_cuts.empty()) return {solver.z_max};
  return outputs.z_cuts;
}

void RunConfig::validate() const {
  try {
    medium.validate(mode == Mode::dispersion);
    pump.validate();
    if (probe) probe->validate();
    geometry.validate();
    solver.validate();
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (mode == Mode::pumpprobe && !probe) throw ConfigError("pumpprobe mode needs a probe pulse");
  if (mode == Mode::interfere && medium.gamma2 != 0.0) {
    throw ConfigError("interfere mode needs a coherent medium (gamma2 = 0)");
  }
  if (mode == Mode::dispersion && (!(omega_max > omega_min) || omega_points < 2)) {
    throw ConfigError("dispersion: need omega_max > omega_min and at least two points");
  }
  if (mode == Mode::interfere && !(tau1 >= 0.0)) throw ConfigError("interfere: tau1 must be >= 0");
  for (double z : outputs.z_cuts) {
    if (!(z >= 0.0) || z > solver.z_max * (1.0 + 1e-12)) {
      throw ConfigError("outputs.z_cuts: " + fmt_label(z) + " outside [0, solver.z_max]");
    }
  }
  static const std::set<std::string> kEmit = {"fields", "spectra", "transmission",
                                              "nodes",  "features", "diagnostics"};
  for (const auto& e : outputs.emit) {
    if (!kEmit.count(e)) throw ConfigError("outputs.emit: unknown series '" + e + "'");
  }
  if (!(outputs.plot_window > 0.0)) throw ConfigError("outputs.plot_window must be positive");
  std::set<std::string> labels;
  for (const auto& v : variants) {
    if (v.label.empty() || !labels.insert(v.label).second) {
      throw ConfigError("variants: labels must be unique and nonempty");
    }
  }
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, "config",
             {"name", "mode", "medium", "pump", "probe", "geometry", "solver", "grid", "outputs",
              "dispersion", "interfere", "variants"});
  RunConfig c;
  read(doc, "name", c.name, "config");
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode: expected a string");
    c.mode = mode_from_string(doc["mode"].get<std::string>());
  }
  if (doc.contains("medium")) c.medium = parse_medium(doc["medium"]);
  if (doc.contains("pump")) c.pump = parse_pulse(doc["pump"], "pump");
  if (doc.contains("probe") && !doc["probe"].is_null()) c.probe = parse_pulse(doc["probe"], "probe");
  if (doc.contains("geometry")) {
    const auto& g = doc["geometry"];
    check_keys(g, "geometry", {"angle_deg"});
    double deg = c.geometry.angle * 180.0 / kPi;
    read_number(g, "angle_deg", deg, "geometry");
    c.geometry.angle = deg * kPi / 180.0;
  }
  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    check_keys(s, "solver",
               {"z_max", "n_z", "field_corrector", "include_probe_drift", "pump_area_guard"});
    read_number(s, "z_max", c.solver.z_max, "solver");
    read(s, "n_z", c.solver.n_z, "solver");
    if (s.contains("field_corrector")) {
      if (!s["field_corrector"].is_string()) throw ConfigError("solver.field_corrector: expected a string");
      c.solver.field_corrector = corrector_from(s["field_corrector"].get<std::string>());
    }
    read(s, "include_probe_drift", c.solver.include_probe_drift, "solver");
    read_number(s, "pump_area_guard", c.solver.pump_area_guard, "solver");
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    check_keys(g, "grid", {"t_start", "dt", "n"});
    read_number(g, "t_start", c.grid.t_start, "grid");
    read_number(g, "dt", c.grid.dt, "grid");
    read(g, "n", c.grid.n, "grid");
  }
  if (doc.contains("outputs")) {
    const auto& o = doc["outputs"];
    check_keys(o, "outputs", {"z_cuts", "emit", "plot", "log_y", "plot_window"});
    read(o, "z_cuts", c.outputs.z_cuts, "outputs");
    if (o.contains("emit")) {
      std::vector<std::string> emit;
      read(o, "emit", emit, "outputs");
      c.outputs.emit = std::set<std::string>(emit.begin(), emit.end());
    }
    read(o, "plot", c.outputs.plot, "outputs");
    read(o, "log_y", c.outputs.log_y, "outputs");
    read_number(o, "plot_window", c.outputs.plot_window, "outputs");
  }
  if (doc.contains("dispersion")) {
    const auto& d = doc["dispersion"];
    check_keys(d, "dispersion", {"omega_min", "omega_max", "points"});
    read_number(d, "omega_min", c.omega_min, "dispersion");
    read_number(d, "omega_max", c.omega_max, "dispersion");
    read(d, "points", c.omega_points, "dispersion");
  }
  if (doc.contains("interfere")) {
    const auto& d = doc["interfere"];
    check_keys(d, "interfere", {"tau1"});
    read_number(d, "tau1", c.tau1, "interfere");
  }
  if (doc.contains("variants")) {
    if (!doc["variants"].is_array()) throw ConfigError("variants: expected an array");
    for (const auto& v : doc["variants"]) {
      check_keys(v, "variant", {"label", "patch"});
      Variant var;
      read(v, "label", var.label, "variant");
      var.patch = v.value("patch", json::object());
      if (!var.patch.is_object()) throw ConfigError("variant.patch: expected an object");
      c.variants.push_back(std::move(var));
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["mode"] = to_string(c.mode);
  doc["medium"] = medium_json(c.medium);
  doc["pump"] = pulse_json(c.pump);
  doc["probe"] = c.probe ? pulse_json(*c.probe) : json(nullptr);
  doc["geometry"] = {{"angle_deg", c.geometry.angle * 180.0 / kPi}};
  doc["solver"] = {{"z_max", c.solver.z_max},
                   {"n_z", c.solver.n_z},
                   {"field_corrector", corrector_name(c.solver.field_corrector)},
                   {"include_probe_drift", c.solver.include_probe_drift},
                   {"pump_area_guard", c.solver.pump_area_guard}};
  doc["grid"] = {{"t_start", c.grid.t_start}, {"dt", c.grid.dt}, {"n", c.grid.n}};
  doc["outputs"] = {{"z_cuts", c.outputs.z_cuts},
                    {"emit", std::vector<std::string>(c.outputs.emit.begin(), c.outputs.emit.end())},
                    {"plot", c.outputs.plot},
                    {"log_y", c.outputs.log_y},
                    {"plot_window", c.outputs.plot_window}};
  doc["dispersion"] = {{"omega_min", c.omega_min}, {"omega_max", c.omega_max}, {"points", c.omega_points}};
  doc["interfere"] = {{"tau1", c.tau1}};
  json vars = json::array();
  for (const auto& v : c.variants) vars.push_back({{"label", v.label}, {"patch", v.patch}});
  doc["variants"] = vars;
  return doc;
}

RunConfig resolve_variant(const RunConfig& base, const Variant& variant) {
  RunConfig flat = base;
  flat.variants.clear();
  json doc = to_json(flat);
  doc.merge_patch(variant.patch);
  RunConfig out = parse_config(doc);
  out.variants.clear();
  return out;
}

void set_path(json& doc, const std::string& path, const json& value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("bad parameter path '" + path + "'");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::vector<Variant> sweep_variants(
    const std::vector<std::pair<std::string, std::vector<double>>>& params) {
  std::vector<Variant> out{Variant{"", json::object()}};
  for (const auto& [path, values] : params) {
    if (values.empty()) throw ConfigError("sweep: parameter '" + path + "' has no values");
    std::vector<Variant> next;
    for (const auto& v : out) {
      for (double x : values) {
        Variant w = v;
        set_path(w.patch, path, x);
        w.label += (w.label.empty() ? "" : "_") + path + "=" + fmt_label(x);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.medium = MediumParams{1.0, 1e-3, 1e-3, 1.0};
  c.grid = TimeGrid{0.0, 0.05, 8192};
  c.solver.z_max = 1.0;
  c.solver.n_z = 100;

  // Broadband pump-probe pair of the resonant probe figures.
  auto broadband = [&] {
    c.mode = Mode::pumpprobe;
    c.pump = PulseSpec{0.49 * kPi, 10.0, 0.0, 2.5, 0.0};
    c.probe = PulseSpec{1.0, 10.0, 0.0, 2.5, 0.0};
  };
  auto delays = [&](std::initializer_list<double> taus) {
    for (double t : taus) {
      c.variants.push_back({"tau0=" + fmt_label(t), json{{"probe", {{"delay", t}}}}});
    }
  };

  if (name == "fig1") {
    c.mode = Mode::dispersion;
    c.outputs.emit = {"spectra", "diagnostics"};
    for (double g : {1.1, 0.15, 0.0}) {
      c.variants.push_back({"gamma2=" + fmt_label(g), json{{"medium", {{"gamma2", g}}}}});
    }
  } else if (name == "fig2") {
    c.mode = Mode::ring;
    c.pump = PulseSpec{0.49 * kPi, 1.0, 0.0, 20.0, 0.0};
    c.outputs.emit = {"fields", "spectra", "nodes", "diagnostics"};
    for (double d : {0.0, 0.5, 1.0}) {
      c.variants.push_back({"detuning=" + fmt_label(d), json{{"pump", {{"detuning", d}}}}});
    }
  } else if (name == "fig3") {
    broadband();
    c.outputs.emit = {"spectra", "diagnostics"};
    delays({-0.5, 0.5});
  } else if (name == "fig4") {
    broadband();
    c.outputs.emit = {"transmission", "features", "diagnostics"};
    c.outputs.plot_window = 3.0;
    delays({-0.5, 0.0, 0.5});
  } else if (name == "fig5") {
    broadband();
    c.solver.z_max = 2.0;
    c.solver.n_z = 200;
    c.outputs.z_cuts = {0.5, 1.0, 2.0};
    c.outputs.emit = {"transmission", "features", "diagnostics"};
    c.outputs.plot_window = 3.0;
    delays({0.5, -0.5});
  } else if (name == "fig6") {
    broadband();
    c.outputs.emit = {"fields", "nodes", "diagnostics"};
    delays({-0.5, 0.5});
  } else if (name == "fig7" || name == "fig8") {
    c.mode = Mode::pumpprobe;
    c.pump = PulseSpec{0.49 * kPi, 10.0, 0.0, 20.0, 0.0};
    c.probe = PulseSpec{1.0, 1.0, 2.5, 20.0, 0.0};
    c.outputs.emit = {"spectra", "transmission", "diagnostics"};
    c.outputs.log_y = true;
    if (name == "fig8") {
      c.solver.z_max = 2.0;
      c.solver.n_z = 200;
      c.outputs.z_cuts = {0.1, 0.5, 1.0, 2.0};
    }
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace ringing::cli
