#include "ringsense/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ringsense {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Field {
  std::function<double(const RunConfig&)> get;
  std::function<void(RunConfig&, double)> set;
};

std::map<std::string, Field>& numeric_fields() {
  static std::map<std::string, Field> f = [] {
    std::map<std::string, Field> m;
    auto add = [&m](const std::string& k, auto member) {
      m[k] = {[member](const RunConfig& c) -> double { return c.*member; },
              [member](RunConfig& c, double v) { c.*member = v; }};
    };
    auto add_sys = [&m](const std::string& k, auto member) {
      m["system." + k] = {
          [member](const RunConfig& c) -> double { return c.system.*member; },
          [member](RunConfig& c, double v) { c.system.*member = v; }};
    };
    add_sys("atom_count", &SystemParams::atom_count);
    add_sys("moment_of_inertia_over_hbar_s",
            &SystemParams::moment_of_inertia_over_hbar);
    add_sys("winding_number", &SystemParams::winding_number);
    add_sys("collision_rate_hz", &SystemParams::collision_rate_hz);
    add_sys("coupling_hz", &SystemParams::coupling_hz);
    add_sys("cavity_linewidth_hz", &SystemParams::cavity_linewidth_hz);
    add_sys("mechanical_damping_hz", &SystemParams::mechanical_damping_hz);
    add_sys("detuning_hz", &SystemParams::detuning_hz);
    add_sys("input_power_w", &SystemParams::input_power_w);
    add_sys("laser_frequency_hz", &SystemParams::laser_frequency_hz);
    add_sys("bec_temperature_k", &SystemParams::bec_temperature_k);
    add_sys("ambient_temperature_k", &SystemParams::ambient_temperature_k);
    add_sys("ring_radius_m", &SystemParams::ring_radius_m);
    add_sys("radial_trap_hz", &SystemParams::radial_trap_hz);
    add_sys("axial_trap_hz", &SystemParams::axial_trap_hz);
    m["system.oam_order"] = {
        [](const RunConfig& c) -> double { return c.system.oam_order; },
        [](RunConfig& c, double v) {
          c.system.oam_order = static_cast<int>(std::lround(v));
        }};
    m["squeeze.amplitude"] = {
        [](const RunConfig& c) -> double { return c.squeeze.amplitude; },
        [](RunConfig& c, double v) { c.squeeze.amplitude = v; }};
    m["squeeze.angle_rad"] = {
        [](const RunConfig& c) -> double { return c.squeeze.angle; },
        [](RunConfig& c, double v) { c.squeeze.angle = v; }};
    m["squeeze.thermal_photons"] = {
        [](const RunConfig& c) -> double { return c.squeeze.thermal_photons; },
        [](RunConfig& c, double v) { c.squeeze.thermal_photons = v; }};
    add("bae.power_plus_w", &RunConfig::bae_power_plus_w);
    add("bae.power_minus_w", &RunConfig::bae_power_minus_w);
    add("bae.delta_hz", &RunConfig::bae_delta_hz);
    add("detection.phi_rad", &RunConfig::phi_rad);
    m["grid.points"] = {
        [](const RunConfig& c) -> double { return c.grid.points; },
        [](RunConfig& c, double v) {
          c.grid.points = static_cast<int>(std::lround(v));
        }};
    m["grid.refine_factor"] = {
        [](const RunConfig& c) -> double { return c.grid.refine_factor; },
        [](RunConfig& c, double v) {
          c.grid.refine_factor = static_cast<int>(std::lround(v));
        }};
    m["grid.peak_halfwidth_in_gamma"] = {
        [](const RunConfig& c) -> double {
          return c.grid.peak_halfwidth_in_gamma;
        },
        [](RunConfig& c, double v) { c.grid.peak_halfwidth_in_gamma = v; }};
    m["grid.span_low"] = {
        [](const RunConfig& c) -> double { return c.grid.span_low; },
        [](RunConfig& c, double v) { c.grid.span_low = v; }};
    m["grid.span_high"] = {
        [](const RunConfig& c) -> double { return c.grid.span_high; },
        [](RunConfig& c, double v) { c.grid.span_high = v; }};
    m["run.jobs"] = {[](const RunConfig& c) -> double { return c.jobs; },
                     [](RunConfig& c, double v) {
                       c.jobs = static_cast<int>(std::lround(v));
                     }};
    return m;
  }();
  return f;
}

bool parse_bool(const std::string& v, const std::string& path) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::runtime_error("config: expected true/false for " + path);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  return v;
}

void assign(RunConfig& cfg, std::map<std::string, SweepAxis>& axes,
            const std::string& path, const std::string& raw) {
  const std::string v = trim(raw);
  if (path == "scheme") {
    cfg.scheme = unquote(v);
    if (cfg.scheme != "mono-squeezed" && cfg.scheme != "bae")
      throw std::runtime_error("config: unknown scheme '" + cfg.scheme + "'");
    return;
  }
  if (path == "system.collisions") {
    cfg.collisions = parse_bool(v, path);
    return;
  }
  if (path == "system.detuning_mode") {
    cfg.detuning_mode = unquote(v);
    if (cfg.detuning_mode != "zero-effective" && cfg.detuning_mode != "bare")
      throw std::runtime_error("config: unknown detuning_mode");
    return;
  }
  if (path == "bae.resonant") {
    cfg.bae_resonant = parse_bool(v, path);
    return;
  }
  if (path == "detection.phi_policy") {
    cfg.phi_policy = unquote(v);
    if (cfg.phi_policy != "auto" && cfg.phi_policy != "fixed" &&
        cfg.phi_policy != "explicit")
      throw std::runtime_error("config: unknown phi_policy");
    return;
  }
  if (path == "output.emit") {
    cfg.emit = unquote(v);
    if (cfg.emit != "csv" && cfg.emit != "json" && cfg.emit != "both")
      throw std::runtime_error("config: unknown emit mode");
    return;
  }
  if (path.rfind("sweep.", 0) == 0) {
    const auto rest = path.substr(6);
    const auto dot = rest.find('.');
    if (dot == std::string::npos)
      throw std::runtime_error("config: malformed sweep key " + path);
    const std::string axis = rest.substr(0, dot);
    const std::string key = rest.substr(dot + 1);
    SweepAxis& ax = axes[axis];
    if (key == "path") {
      ax.path = unquote(v);
    } else if (key == "from") {
      ax.from = std::stod(v);
    } else if (key == "to") {
      ax.to = std::stod(v);
    } else if (key == "points") {
      ax.points = std::stoi(v);
    } else if (key == "scale") {
      const std::string s = unquote(v);
      if (s != "log" && s != "linear")
        throw std::runtime_error("config: sweep scale must be log or linear");
      ax.log_scale = s == "log";
    } else {
      throw std::runtime_error("config: unknown sweep key " + path);
    }
    return;
  }
  const auto& fields = numeric_fields();
  const auto it = fields.find(path);
  if (it == fields.end())
    throw std::runtime_error("config: unknown key '" + path + "'");
  try {
    it->second.set(cfg, std::stod(v));
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("config: bad numeric value for " + path);
  }
}

}  // namespace

RunConfig paper_defaults() {
  RunConfig cfg;  // SystemParams defaults are the Fig.-2 caption set
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg = paper_defaults();
  std::map<std::string, SweepAxis> axes;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string path = section.empty() ? key : section + "." + key;
    assign(cfg, axes, path, line.substr(eq + 1));
  }
  for (auto& [name, ax] : axes) {
    if (ax.path.empty())
      throw std::runtime_error("config: sweep." + name + " missing path");
    const auto& fields = numeric_fields();
    if (fields.find(ax.path) == fields.end())
      throw std::runtime_error("config: sweep." + name +
                               " references unknown path " + ax.path);
    if (ax.points < 1 || !std::isfinite(ax.from) || !std::isfinite(ax.to))
      throw std::runtime_error("config: sweep." + name + " has a bad range");
    if (ax.log_scale && (ax.from <= 0 || ax.to <= 0))
      throw std::runtime_error("config: sweep." + name +
                               " log scale needs positive bounds");
    cfg.sweeps.push_back(ax);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::string> sweepable_paths() {
  std::vector<std::string> out;
  for (const auto& [k, v] : numeric_fields()) out.push_back(k);
  return out;
}

void apply_parameter(RunConfig& cfg, const std::string& path, double value) {
  const auto& fields = numeric_fields();
  const auto it = fields.find(path);
  if (it == fields.end())
    throw std::runtime_error("unknown parameter path '" + path + "'");
  it->second.set(cfg, value);
}

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "scheme=" << cfg.scheme << "\n";
  out << "system.collisions=" << (cfg.collisions ? "true" : "false") << "\n";
  out << "system.detuning_mode=" << cfg.detuning_mode << "\n";
  out << "bae.resonant=" << (cfg.bae_resonant ? "true" : "false") << "\n";
  out << "detection.phi_policy=" << cfg.phi_policy << "\n";
  out << "output.emit=" << cfg.emit << "\n";
  for (const auto& [k, f] : numeric_fields())
    out << k << "=" << format_full(f.get(cfg)) << "\n";
  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) {
    const auto& ax = cfg.sweeps[i];
    out << "sweep." << i << "=" << ax.path << "," << format_full(ax.from)
        << "," << format_full(ax.to) << "," << ax.points << ","
        << (ax.log_scale ? "log" : "linear") << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a64(canonical_config(cfg));
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& file, const CsvTable& table) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << table.header[i] << (i + 1 < table.header.size() ? "," : "");
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

CsvTable read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  CsvTable t;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(trim(line.substr(1)));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      t.header = cells;
      header_seen = true;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

}  // namespace ringsense
