#include "qtalbot/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qtalbot/error.hpp"

namespace qtalbot {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Dim { length, energy, field, angle, frequency, fraction, time };

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "description"}},
      {"frame", {"V0", "gamma"}},
      {"particle", {"species", "lambda_dB", "energy"}},
      {"packet", {"sigma_x", "sigma_y", "x0", "y0"}},
      {"grid", {"spacing", "x_min", "x_max", "y_min", "y_max"}},
      {"solver",
       {"spatial_order", "time_step", "damping_sharpness", "damping_offset", "norm_check_interval",
        "norm_drift_abort", "max_steps"}},
      {"grating",
       {"period", "opening_fraction", "thickness", "barrier_height", "position", "y_offset",
        "slit_count"}},
      {"image_charge", {"enabled", "cutoff", "charge_factor"}},
      {"mask", {"enabled", "position", "opening_fraction", "y_offset", "offset_step", "offset_max"}},
      {"field",
       {"kind", "x_lo", "x_hi", "E0", "theta", "lambda_prime", "omega", "reference",
        "companion_uniform"}},
      {"sensitivity",
       {"e0_baseline", "theta_e0", "e0_deltas", "theta_baseline", "e0_for_theta", "theta_deltas"}},
      {"snapshots", {"planes"}},
      {"analysis", {"window_half_width", "spectrum", "sidebands", "eta_max", "distortion"}},
      {"output", {"directory", "parallelism", "write_snapshots"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& what) {
  if (line > 0) throw ConfigError("line " + std::to_string(line) + ": " + what);
  throw ConfigError(what);
}

struct Item {
  double number = 0.0;
  std::string unit;
};

// "1.5 nm" or "0, 25, 50 V/m" (a trailing unit is shared by bare list items).
std::vector<Item> parse_items(const Entry& e) {
  std::vector<Item> items;
  std::stringstream ss(e.value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::string t = trim(part);
    if (t.empty()) fail(e.line, "empty list element");
    Item it;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, it.number);
    if (ec != std::errc()) fail(e.line, "expected a number, got '" + t + "'");
    it.unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    items.push_back(it);
  }
  if (items.empty()) fail(e.line, "missing value");
  for (std::size_t k = items.size(); k-- > 1;) {
    if (items[k - 1].unit.empty()) items[k - 1].unit = items[k].unit;
  }
  return items;
}

class Document {
 public:
  explicit Document(std::string_view text) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++line_no;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header");
        current = trim(line.substr(1, line.size() - 2));
        if (!known_keys().count(current)) fail(line_no, "unknown section [" + current + "]");
        sections_[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
      if (current.empty()) fail(line_no, "key outside of any section");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (!known_keys().at(current).count(key)) {
        fail(line_no, "unknown key '" + key + "' in [" + current + "]");
      }
      if (value.empty()) fail(line_no, "key '" + key + "' has no value");
      auto& sec = sections_[current];
      if (sec.count(key)) fail(line_no, "duplicate key '" + key + "' in [" + current + "]");
      sec[key] = {value, line_no};
    }
  }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  const Entry* find(const std::string& s, const std::string& k) const {
    auto it = sections_.find(s);
    if (it == sections_.end()) return nullptr;
    auto kt = it->second.find(k);
    return kt == it->second.end() ? nullptr : &kt->second;
  }

 private:
  std::map<std::string, Section> sections_;
};

// Context needed by the relative units.
struct Units {
  double lambda = 0.0;  // m
  double period = 0.0;  // m
  double spacing = 0.0; // m
  double E_k0 = 0.0;    // J
  double omega0 = 0.0;  // rad/s

  double convert(const Item& it, Dim dim, int line) const {
    const std::string& u = it.unit;
    const double x = it.number;
    auto need = [&](double v, const char* what) {
      if (!(v > 0.0)) fail(line, std::string("unit '") + u + "' needs " + what + " to be defined first");
      return v;
    };
    if (u.empty()) fail(line, "missing unit on value " + std::to_string(x));
    switch (dim) {
      case Dim::length:
        if (u == "m") return x;
        if (u == "um") return x * 1e-6;
        if (u == "nm") return x * 1e-9;
        if (u == "angstrom") return x * 1e-10;
        if (u == "lambda_dB") return x * need(lambda, "the de Broglie wavelength");
        if (u == "d") return x * need(period, "the grating period");
        if (u == "L_T") return x * need(period, "the grating period") * period / need(lambda, "the de Broglie wavelength");
        if (u == "cells") return x * need(spacing, "the grid spacing");
        break;
      case Dim::energy:
        if (u == "J") return x;
        if (u == "eV") return x * kElectronVolt;
        if (u == "meV") return x * 1e-3 * kElectronVolt;
        if (u == "E_k0") return x * need(E_k0, "the particle energy");
        break;
      case Dim::field:
        if (u == "V/m") return x;
        if (u == "kV/m") return x * 1e3;
        break;
      case Dim::angle:
        if (u == "deg") return x * kPi / 180.0;
        if (u == "rad") return x;
        break;
      case Dim::frequency:
        if (u == "rad/s") return x;
        if (u == "Hz") return 2.0 * kPi * x;
        if (u == "MHz") return 2.0 * kPi * x * 1e6;
        if (u == "GHz") return 2.0 * kPi * x * 1e9;
        if (u == "omega0") return x * need(omega0, "a field region");
        break;
      case Dim::fraction:
        if (u == "%") return x / 100.0;
        break;
      case Dim::time:
        if (u == "s") return x;
        if (u == "ns") return x * 1e-9;
        if (u == "ps") return x * 1e-12;
        if (u == "fs") return x * 1e-15;
        break;
    }
    fail(line, "unit '" + u + "' is not valid here");
  }
};

class Reader {
 public:
  Reader(const Document& doc, Units& units) : doc_(doc), units_(units) {}

  const Entry* entry(const std::string& s, const std::string& k) const { return doc_.find(s, k); }

  const Entry& require(const std::string& s, const std::string& k) const {
    const Entry* e = doc_.find(s, k);
    if (!e) throw ConfigError("missing required key '" + k + "' in [" + s + "]");
    return *e;
  }

  double scalar(const Entry& e, Dim dim) const {
    const auto items = parse_items(e);
    if (items.size() != 1) fail(e.line, "expected a single value");
    return units_.convert(items.front(), dim, e.line);
  }
  std::vector<double> list(const Entry& e, Dim dim) const {
    std::vector<double> out;
    for (const auto& it : parse_items(e)) out.push_back(units_.convert(it, dim, e.line));
    return out;
  }
  double get(const std::string& s, const std::string& k, Dim dim) const { return scalar(require(s, k), dim); }
  double get_or(const std::string& s, const std::string& k, Dim dim, double fallback) const {
    const Entry* e = entry(s, k);
    return e ? scalar(*e, dim) : fallback;
  }
  std::vector<double> list_or(const std::string& s, const std::string& k, Dim dim) const {
    const Entry* e = entry(s, k);
    return e ? list(*e, dim) : std::vector<double>{};
  }
  long long integer_or(const std::string& s, const std::string& k, long long fallback) const {
    const Entry* e = entry(s, k);
    if (!e) return fallback;
    long long v = 0;
    const auto& t = e->value;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(e->line, "expected an integer count, got '" + t + "'");
    return v;
  }
  double plain_or(const std::string& s, const std::string& k, double fallback) const {
    const Entry* e = entry(s, k);
    if (!e) return fallback;
    double v = 0;
    const auto& t = e->value;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(e->line, "expected a plain number, got '" + t + "'");
    return v;
  }
  bool boolean_or(const std::string& s, const std::string& k, bool fallback) const {
    const Entry* e = entry(s, k);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "on") return true;
    if (e->value == "false" || e->value == "no" || e->value == "off") return false;
    fail(e->line, "expected true or false, got '" + e->value + "'");
  }
  std::string text_or(const std::string& s, const std::string& k, const std::string& fallback) const {
    const Entry* e = entry(s, k);
    return e ? e->value : fallback;
  }
  int line_of(const std::string& s, const std::string& k) const {
    const Entry* e = entry(s, k);
    return e ? e->line : 0;
  }

 private:
  const Document& doc_;
  Units& units_;
};

void require_all(const Document& doc) {
  static const std::vector<std::pair<std::string, std::string>> required = {
      {"packet", "sigma_x"}, {"packet", "sigma_y"},         {"packet", "x0"},
      {"grid", "spacing"},   {"grid", "x_min"},             {"grid", "x_max"},
      {"grid", "y_min"},     {"grid", "y_max"},             {"grating", "period"},
      {"grating", "opening_fraction"}, {"grating", "thickness"}, {"grating", "barrier_height"},
      {"snapshots", "planes"},
  };
  std::vector<std::string> missing;
  if (!doc.find("frame", "V0") && !doc.find("frame", "gamma")) missing.push_back("[frame] V0 or gamma");
  if (!doc.find("particle", "lambda_dB") && !doc.find("particle", "energy")) {
    missing.push_back("[particle] lambda_dB or energy");
  }
  for (const auto& [s, k] : required) {
    if (!doc.find(s, k)) missing.push_back("[" + s + "] " + k);
  }
  if (missing.empty()) return;
  std::string msg = "missing required keys:";
  for (const auto& m : missing) msg += "\n  " + m;
  throw ConfigError(msg);
}

// Wraps a module precondition failure with the line that introduced it.
template <class F>
void checked(int line, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    fail(line, e.what());
  } catch (const DomainError& e) {
    fail(line, e.what());
  }
}

}  // namespace

std::vector<double> MaskSettings::offsets() const {
  std::vector<double> out;
  if (!(offset_step > 0.0)) return {0.0};
  const auto n = static_cast<long long>(std::floor(offset_max / offset_step + 1e-9));
  for (long long k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) * offset_step);
  return out;
}

double ScenarioConfig::talbot_length() const { return grating.period * grating.period * frame.gamma / lambda_dB; }

double ScenarioConfig::velocity() const {
  return frame.constants.planck() / (frame.particle.mass * lambda_dB);
}

double ScenarioConfig::omega0() const {
  const double length = (field.x_hi - field.x_lo) * frame.gamma;
  if (!(length > 0.0)) return 0.0;
  return 2.0 * kPi * velocity() / length;
}

ScenarioConfig parse_config(std::string_view text) {
  const Document doc(text);
  require_all(doc);
  Units units;
  const Reader r(doc, units);
  ScenarioConfig cfg;
  cfg.source_text = std::string(text);
  cfg.name = r.text_or("scenario", "name", "scenario");
  cfg.description = r.text_or("scenario", "description", "");

  // Frame and particle first; the relative units depend on them.
  const std::string species = r.text_or("particle", "species", "proton");
  if (species != "proton") fail(r.line_of("particle", "species"), "only protons are supported");
  if (doc.find("frame", "V0") && doc.find("frame", "gamma")) {
    fail(r.line_of("frame", "gamma"), "give either V0 or gamma, not both");
  }
  checked(r.line_of("frame", doc.find("frame", "V0") ? "V0" : "gamma"), [&] {
    cfg.frame = doc.find("frame", "V0") ? build_frame(r.get("frame", "V0", Dim::energy))
                                        : build_frame_from_length(r.get("frame", "gamma", Dim::length));
  });
  const double h = cfg.frame.constants.planck();
  const double m = cfg.frame.particle.mass;
  if (doc.find("particle", "lambda_dB") && doc.find("particle", "energy")) {
    fail(r.line_of("particle", "energy"), "give either lambda_dB or energy, not both");
  }
  if (doc.find("particle", "lambda_dB")) {
    cfg.lambda_dB = r.get("particle", "lambda_dB", Dim::length);
    if (!(cfg.lambda_dB > 0.0)) fail(r.line_of("particle", "lambda_dB"), "wavelength must be positive");
    cfg.E_k0 = h * h / (2.0 * m * cfg.lambda_dB * cfg.lambda_dB);
  } else {
    cfg.E_k0 = r.get("particle", "energy", Dim::energy);
    if (!(cfg.E_k0 > 0.0)) fail(r.line_of("particle", "energy"), "energy must be positive");
    cfg.lambda_dB = h / std::sqrt(2.0 * m * cfg.E_k0);
  }
  units.lambda = cfg.lambda_dB;
  units.E_k0 = cfg.E_k0;
  cfg.k = dimensionless_wavenumber(cfg.lambda_dB, cfg.frame);
  const double g = cfg.frame.gamma;

  units.period = r.get("grating", "period", Dim::length);
  units.spacing = r.get("grid", "spacing", Dim::length);

  // Lattice.
  cfg.grid.dx = cfg.grid.dy = units.spacing / g;
  const double x_min = r.get("grid", "x_min", Dim::length) / g;
  const double x_max = r.get("grid", "x_max", Dim::length) / g;
  const double y_min = r.get("grid", "y_min", Dim::length) / g;
  const double y_max = r.get("grid", "y_max", Dim::length) / g;
  if (!(x_max > x_min) || !(y_max > y_min)) fail(r.line_of("grid", "x_max"), "grid extent must be positive");
  cfg.grid.x_origin = x_min;
  cfg.grid.y_origin = y_min;
  cfg.grid.nx = static_cast<std::size_t>(std::llround((x_max - x_min) / cfg.grid.dx)) + 1;
  cfg.grid.ny = static_cast<std::size_t>(std::llround((y_max - y_min) / cfg.grid.dy)) + 1;
  checked(r.line_of("grid", "spacing"), [&] {
    cfg.grid.validate();
    cfg.grid.require_resolution(cfg.k);
  });

  // Packet.
  cfg.packet.sigma_x = r.get("packet", "sigma_x", Dim::length) / g;
  cfg.packet.sigma_y = r.get("packet", "sigma_y", Dim::length) / g;
  cfg.packet.x0 = r.get("packet", "x0", Dim::length) / g;
  cfg.packet.y0 = r.get_or("packet", "y0", Dim::length, 0.0) / g;
  cfg.packet.k = cfg.k;
  checked(r.line_of("packet", "sigma_x"), [&] { cfg.packet.validate(); });

  // Solver.
  auto& s = cfg.solver;
  s.spatial_order = static_cast<int>(r.integer_or("solver", "spatial_order", 4));
  checked(r.line_of("solver", "spatial_order"), [&] { second_derivative_weights(s.spatial_order); });
  if (const Entry* e = r.entry("solver", "time_step")) {
    const auto items = parse_items(*e);
    if (items.size() != 1) fail(e->line, "expected a single value");
    if (items.front().unit == "%") {
      s.dt_fraction = items.front().number / 100.0;
      if (!(s.dt_fraction > 0.0 && s.dt_fraction <= 1.0)) fail(e->line, "time step must be within (0, 100] % of the stability bound");
    } else {
      s.dt_seconds = units.convert(items.front(), Dim::time, e->line);
      if (!(s.dt_seconds > 0.0)) fail(e->line, "time step must be positive");
    }
  }
  s.damping_sharpness = r.get_or("solver", "damping_sharpness", Dim::length, 5.0 * units.spacing) / g;
  s.damping_offset = r.get_or("solver", "damping_offset", Dim::length, 0.0) / g;
  s.norm_check_interval = r.integer_or("solver", "norm_check_interval", 200);
  s.norm_drift_abort = r.get_or("solver", "norm_drift_abort", Dim::fraction, 1e-3);
  s.max_steps = r.integer_or("solver", "max_steps", 1'000'000);
  if (!(s.damping_sharpness > 0.0)) fail(r.line_of("solver", "damping_sharpness"), "damping sharpness must be positive");
  if (s.norm_check_interval <= 0) fail(r.line_of("solver", "norm_check_interval"), "norm check interval must be positive");
  if (s.max_steps <= 0) fail(r.line_of("solver", "max_steps"), "max steps must be positive");

  // Grating.
  auto& gr = cfg.grating;
  gr.period = units.period / g;
  gr.opening_fraction = r.get("grating", "opening_fraction", Dim::fraction);
  gr.thickness = r.get("grating", "thickness", Dim::length) / g;
  gr.barrier_height = r.get("grating", "barrier_height", Dim::energy) / cfg.frame.V0;
  gr.x_position = r.get_or("grating", "position", Dim::length, 0.0) / g;
  gr.y_offset = r.get_or("grating", "y_offset", Dim::length, 0.0) / g;
  gr.slit_count = static_cast<int>(r.integer_or("grating", "slit_count", 0));
  gr.role = GratingRole::diffraction;
  checked(r.line_of("grating", "period"), [&] { gr.validate(); });

  cfg.image.enabled = r.boolean_or("image_charge", "enabled", false);
  cfg.image.cutoff = r.get_or("image_charge", "cutoff", Dim::length, units.spacing) / g;
  cfg.image.induced_charge_factor = r.plain_or("image_charge", "charge_factor", -1.0);
  checked(r.line_of("image_charge", "cutoff"), [&] { cfg.image.validate(); });

  // Field region before anything in omega0 units.
  auto& f = cfg.field;
  const std::string kind = r.text_or("field", "kind", "none");
  if (kind == "uniform") f.kind = FieldKind::uniform;
  else if (kind == "spatial") f.kind = FieldKind::spatial;
  else if (kind == "temporal") f.kind = FieldKind::temporal;
  else if (kind != "none") fail(r.line_of("field", "kind"), "field kind must be none, uniform, spatial or temporal");
  if (f.kind) {
    f.x_lo = r.get("field", "x_lo", Dim::length) / g;
    f.x_hi = r.get("field", "x_hi", Dim::length) / g;
    if (!(f.x_hi > f.x_lo)) fail(r.line_of("field", "x_hi"), "field region requires x_lo < x_hi");
    units.omega0 = cfg.omega0();
    const Entry& e0 = r.require("field", "E0");
    f.E0 = r.list(e0, Dim::field);
    for (double v : f.E0) if (!(v >= 0.0)) fail(e0.line, "E0 must be non-negative");
    f.theta = r.list_or("field", "theta", Dim::angle);
    f.lambda_prime = r.list_or("field", "lambda_prime", Dim::length);
    f.omega = r.list_or("field", "omega", Dim::frequency);
    if (*f.kind == FieldKind::uniform && f.theta.empty()) fail(r.line_of("field", "kind"), "uniform field needs a theta list");
    if (*f.kind == FieldKind::spatial && f.lambda_prime.empty()) fail(r.line_of("field", "kind"), "spatial field needs a lambda_prime list");
    if (*f.kind == FieldKind::temporal && f.omega.empty()) fail(r.line_of("field", "kind"), "temporal field needs an omega list");
    for (double v : f.lambda_prime) if (!(v > 0.0)) fail(r.line_of("field", "lambda_prime"), "lambda_prime must be positive");
    for (double v : f.omega) if (!(v >= 0.0)) fail(r.line_of("field", "omega"), "omega must be non-negative");
    f.reference = r.boolean_or("field", "reference", true);
    f.companion_uniform = r.boolean_or("field", "companion_uniform", false);
  } else {
    for (const char* k : {"x_lo", "x_hi", "E0", "theta", "lambda_prime", "omega"}) {
      if (r.entry("field", k)) fail(r.line_of("field", k), std::string("'") + k + "' given without a field kind");
    }
  }
  if (doc.has_section("sensitivity")) {
    if (!f.kind || *f.kind != FieldKind::uniform) {
      fail(r.line_of("sensitivity", "e0_deltas"), "sensitivity points need a uniform field");
    }
    SensitivitySettings sen;
    sen.e0_baseline = r.get_or("sensitivity", "e0_baseline", Dim::field, 0.0);
    sen.theta_e0 = r.get_or("sensitivity", "theta_e0", Dim::angle, 0.5 * kPi);
    sen.e0_deltas = r.list_or("sensitivity", "e0_deltas", Dim::field);
    sen.theta_baseline = r.get_or("sensitivity", "theta_baseline", Dim::angle, 0.0);
    sen.e0_for_theta = r.get_or("sensitivity", "e0_for_theta", Dim::field, 0.0);
    sen.theta_deltas = r.list_or("sensitivity", "theta_deltas", Dim::angle);
    cfg.sensitivity = sen;
  }

  if (r.boolean_or("mask", "enabled", doc.has_section("mask"))) {
    MaskSettings mk;
    mk.grating = gr;
    mk.grating.role = GratingRole::mask;
    mk.grating.slit_count = 0;
    mk.grating.x_position = r.get("mask", "position", Dim::length) / g;
    mk.grating.opening_fraction = r.get_or("mask", "opening_fraction", Dim::fraction, gr.opening_fraction);
    mk.grating.y_offset = r.get_or("mask", "y_offset", Dim::length, 0.0) / g;
    mk.offset_step = r.get("mask", "offset_step", Dim::length) / g;
    mk.offset_max = r.get_or("mask", "offset_max", Dim::length, units.period) / g;
    if (!(mk.offset_step > 0.0)) fail(r.line_of("mask", "offset_step"), "mask offset step must be positive");
    checked(r.line_of("mask", "position"), [&] { mk.grating.validate(); });
    cfg.mask = mk;
  }

  for (double p : r.list(r.require("snapshots", "planes"), Dim::length)) cfg.planes.push_back(p / g);
  if (!std::is_sorted(cfg.planes.begin(), cfg.planes.end())) {
    fail(r.line_of("snapshots", "planes"), "snapshot planes must be sorted");
  }
  for (double p : cfg.planes) {
    if (!(p > cfg.packet.x0 && p < cfg.grid.x_last())) {
      fail(r.line_of("snapshots", "planes"), "snapshot plane lies outside the lattice or behind the packet");
    }
  }

  auto& an = cfg.analysis;
  an.window_half_width = r.get_or("analysis", "window_half_width", Dim::length, 3.0 * units.period) / g;
  an.spectrum = r.boolean_or("analysis", "spectrum", true);
  an.sidebands = r.boolean_or("analysis", "sidebands", f.kind && *f.kind == FieldKind::temporal);
  an.eta_max = static_cast<int>(r.integer_or("analysis", "eta_max", 3));
  an.distortion = r.boolean_or("analysis", "distortion", f.kind && *f.kind == FieldKind::spatial);
  if (an.eta_max < 0) fail(r.line_of("analysis", "eta_max"), "eta_max must be non-negative");
  if (an.distortion && (!f.kind || *f.kind != FieldKind::spatial)) {
    fail(r.line_of("analysis", "distortion"), "distortion needs a spatial field");
  }
  if (an.distortion) f.companion_uniform = true;

  auto& out = cfg.output;
  out.directory = r.text_or("output", "directory", "out/" + cfg.name);
  const long long par = r.integer_or("output", "parallelism", 1);
  if (par < 1) fail(r.line_of("output", "parallelism"), "parallelism must be at least 1");
  out.parallelism = static_cast<std::size_t>(par);
  out.write_snapshots = r.boolean_or("output", "write_snapshots", false);

  // The packet must fit inside the lattice with its margin.
  checked(r.line_of("packet", "x0"), [&] {
    const double mx = kPacketClearance * cfg.packet.sigma_x;
    const double my = kPacketClearance * cfg.packet.sigma_y;
    if (cfg.packet.x0 - cfg.grid.x_origin < mx || cfg.grid.x_last() - cfg.packet.x0 < mx ||
        cfg.packet.y0 - cfg.grid.y_origin < my || cfg.grid.y_last() - cfg.packet.y0 < my) {
      throw ConfigError("wave packet needs 4.3 sigma of clearance to every lattice edge");
    }
  });
  if (cfg.packet.x0 + kPacketClearance * cfg.packet.sigma_x > gr.x_position) {
    fail(r.line_of("packet", "x0"), "wave packet overlaps the grating at start");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<FieldPoint> sweep_points(const ScenarioConfig& cfg) {
  std::vector<FieldPoint> pts;
  const auto& f = cfg.field;
  if (!f.kind) {
    pts.push_back({FieldKind::uniform, 0.0, 0.0, 0.0, 0.0, "sweep"});
    return pts;
  }
  auto add = [&](FieldPoint p) {
    for (const auto& q : pts) {
      if (q.kind == p.kind && q.E0 == p.E0 && q.theta == p.theta && q.lambda_prime == p.lambda_prime &&
          q.omega == p.omega) {
        return;
      }
    }
    pts.push_back(std::move(p));
  };
  const FieldKind kind = *f.kind;
  for (double e0 : f.E0) {
    switch (kind) {
      case FieldKind::uniform:
        for (double th : f.theta) add({kind, e0, th, 0.0, 0.0, "sweep"});
        break;
      case FieldKind::spatial:
        for (double lp : f.lambda_prime) add({kind, e0, 0.5 * kPi, lp, 0.0, "sweep"});
        break;
      case FieldKind::temporal:
        for (double w : f.omega) add({kind, e0, 0.5 * kPi, 0.0, w, "sweep"});
        break;
    }
  }
  if (cfg.sensitivity) {
    const auto& s = *cfg.sensitivity;
    if (!s.e0_deltas.empty()) add({FieldKind::uniform, s.e0_baseline, s.theta_e0, 0.0, 0.0, "sensitivity"});
    for (double d : s.e0_deltas) add({FieldKind::uniform, s.e0_baseline + d, s.theta_e0, 0.0, 0.0, "sensitivity"});
    if (!s.theta_deltas.empty()) add({FieldKind::uniform, s.e0_for_theta, s.theta_baseline, 0.0, 0.0, "sensitivity"});
    for (double d : s.theta_deltas) add({FieldKind::uniform, s.e0_for_theta, s.theta_baseline + d, 0.0, 0.0, "sensitivity"});
  }
  if (f.companion_uniform) {
    for (double e0 : f.E0) add({FieldKind::uniform, e0, 0.5 * kPi, 0.0, 0.0, "companion"});
  }
  if (f.reference) add({FieldKind::uniform, 0.0, 0.0, 0.0, 0.0, "reference"});
  return pts;
}

FieldSpec make_field(const ScenarioConfig& cfg, const FieldPoint& p) {
  const double lo = cfg.field.x_lo;
  const double hi = cfg.field.x_hi;
  switch (p.kind) {
    case FieldKind::uniform: return FieldSpec::uniform(p.E0, p.theta, lo, hi);
    case FieldKind::spatial: return FieldSpec::spatial(p.E0, p.lambda_prime, lo, hi);
    case FieldKind::temporal: return FieldSpec::temporal(p.E0, p.omega, lo, hi);
  }
  return {};
}

PotentialStack make_stack(const ScenarioConfig& cfg, const FieldPoint& p) {
  PotentialStack stack;
  stack.frame = cfg.frame;
  stack.grating = cfg.grating;
  stack.image = cfg.image;
  if (cfg.field.kind && !p.field_free()) stack.fields.push_back(make_field(cfg, p));
  return stack;
}

SolverConfig make_solver_config(const ScenarioConfig& cfg) {
  SolverConfig sc;
  sc.spatial_order = cfg.solver.spatial_order;
  sc.damping = default_damping(cfg.grid, cfg.solver.damping_sharpness, cfg.solver.damping_offset);
  sc.norm_check_interval = cfg.solver.norm_check_interval;
  sc.norm_drift_abort = cfg.solver.norm_drift_abort;
  sc.max_steps = cfg.solver.max_steps;
  double v_max = 0.0;
  for (const auto& p : sweep_points(cfg)) {
    v_max = std::max(v_max, LatticePotential(cfg.grid, make_stack(cfg, p)).max_abs());
  }
  const double bound = max_stable_dt(cfg.grid, sc.spatial_order, v_max);
  sc.dT = cfg.solver.dt_seconds > 0.0 ? cfg.solver.dt_seconds / cfg.frame.tau : cfg.solver.dt_fraction * bound;
  if (sc.dT > bound) {
    std::ostringstream msg;
    msg << "time step dT = " << sc.dT << " exceeds the stability bound dT_max = " << bound;
    throw ConfigError(msg.str());
  }
  return sc;
}

}  // namespace qtalbot
