#include "pdicke/config.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <sstream>

namespace pdicke {

namespace {

enum class Kind { kNumber, kInteger, kWord, kIntegerList, kVector };

struct KeySpec {
  std::string_view name;
  Kind kind;
  std::vector<std::string_view> units;  // empty: unitless, no suffix allowed
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"experiment", Kind::kWord, {}},
      {"environment", Kind::kWord, {}},
      {"atoms.N", Kind::kInteger, {}},
      {"atoms.omega_A", Kind::kNumber, {"rad/s"}},
      {"atoms.dipole", Kind::kNumber, {"C*m", "Cm", "C.m"}},
      {"atoms.polarization", Kind::kVector, {}},
      {"atoms.x", Kind::kNumber, {"m"}},
      {"atoms.y", Kind::kNumber, {"m"}},
      {"atoms.z", Kind::kNumber, {"m"}},
      {"drive.intensity", Kind::kNumber, {"W/m^2", "W/m2"}},
      {"drive.detuning", Kind::kNumber, {"rad/s"}},
      {"drive.mode", Kind::kWord, {}},
      {"solver.rtol", Kind::kNumber, {}},
      {"solver.atol", Kind::kNumber, {}},
      {"solver.max_steps", Kind::kInteger, {}},
      {"solver.output_intervals", Kind::kInteger, {}},
      {"solver.t_max", Kind::kNumber, {"s"}},
      {"scaling.atoms", Kind::kIntegerList, {}},
      {"scaling.min_fit_atoms", Kind::kInteger, {}},
      {"map.x_min", Kind::kNumber, {"m"}},
      {"map.x_max", Kind::kNumber, {"m"}},
      {"map.nx", Kind::kInteger, {}},
      {"map.z_min", Kind::kNumber, {"m"}},
      {"map.z_max", Kind::kNumber, {"m"}},
      {"map.nz", Kind::kInteger, {}},
      {"map.corridor_lo", Kind::kNumber, {}},
      {"map.corridor_hi", Kind::kNumber, {}},
      {"output.directory", Kind::kWord, {}},
  };
  return table;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& spec : key_table()) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

/// Product of factors separated by '*', where a factor is a number or `pi`.
std::optional<double> parse_product(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double sign = 1.0;
  if (s.front() == '-') {
    sign = -1.0;
    s.remove_prefix(1);
  }
  double result = sign;
  while (true) {
    const auto star = s.find('*');
    const std::string_view factor = trim(s.substr(0, star));
    if (factor == "pi") {
      result *= constants::kPi;
    } else {
      const auto v = parse_double(factor);
      if (!v) return std::nullopt;
      result *= *v;
    }
    if (star == std::string_view::npos) break;
    s.remove_prefix(star + 1);
  }
  return result;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

/// Typed view over the parsed document. Every accessor strips and checks the
/// unit suffix for its key.
class Document {
 public:
  explicit Document(std::map<std::string, KeyValueEntry> entries) : entries_(std::move(entries)) {
    for (const auto& [key, entry] : entries_) {
      if (find_key(key) == nullptr) {
        throw ConfigError(key, entry.line, "unknown key");
      }
    }
  }

  bool has(std::string_view key) const { return entries_.count(std::string(key)) != 0; }
  int line(std::string_view key) const {
    const auto it = entries_.find(std::string(key));
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::optional<double> number(std::string_view key) const {
    const auto body = value_without_unit(key);
    if (!body) return std::nullopt;
    const auto v = parse_product(*body);
    if (!v || !std::isfinite(*v)) fail(key, "expected a number, got '" + std::string(*body) + "'");
    return v;
  }

  std::optional<long long> integer(std::string_view key) const {
    const auto body = value_without_unit(key);
    if (!body) return std::nullopt;
    const auto v = parse_integer(*body);
    if (!v) fail(key, "expected an integer, got '" + std::string(*body) + "'");
    return v;
  }

  std::optional<std::string> word(std::string_view key) const {
    const auto body = value_without_unit(key);
    if (!body) return std::nullopt;
    if (body->empty()) fail(key, "value is empty");
    return std::string(*body);
  }

  std::optional<std::vector<int>> integer_list(std::string_view key) const {
    const auto body = value_without_unit(key);
    if (!body) return std::nullopt;
    std::vector<int> out;
    for (const auto part : split(*body, ',')) {
      const auto v = parse_integer(part);
      if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
        fail(key, "expected a comma-separated integer list");
      }
      out.push_back(static_cast<int>(*v));
    }
    return out;
  }

  std::optional<Eigen::Vector3d> vector(std::string_view key) const {
    const auto body = value_without_unit(key);
    if (!body) return std::nullopt;
    if (*body == "x") return Eigen::Vector3d::UnitX();
    if (*body == "y") return Eigen::Vector3d::UnitY();
    if (*body == "z") return Eigen::Vector3d::UnitZ();
    const auto parts = split(*body, ',');
    if (parts.size() != 3) fail(key, "expected x, y, z or three comma-separated components");
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
      const auto c = parse_product(parts[static_cast<std::size_t>(i)]);
      if (!c) fail(key, "malformed vector component '" + std::string(parts[static_cast<std::size_t>(i)]) + "'");
      v[i] = *c;
    }
    return v;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw ConfigError(std::string(key), line(key), message);
  }

 private:
  std::optional<std::string_view> value_without_unit(std::string_view key) const {
    const auto it = entries_.find(std::string(key));
    if (it == entries_.end()) return std::nullopt;
    const KeySpec* spec = find_key(key);
    std::string_view value = trim(it->second.value);
    if (spec->kind != Kind::kNumber && spec->kind != Kind::kInteger) {
      return value;
    }
    const auto space = value.find_last_of(" \t");
    if (space == std::string_view::npos) return value;
    const std::string_view body = trim(value.substr(0, space));
    const std::string_view unit = trim(value.substr(space + 1));
    // "2 * pi * 1e8" has no suffix: its last token is still a factor.
    if (parse_product(unit) || body.back() == '*' || unit.front() == '*') return value;
    if (spec->units.empty()) {
      fail(key, "unexpected unit suffix '" + std::string(unit) + "' on a dimensionless key");
    }
    if (std::find(spec->units.begin(), spec->units.end(), unit) == spec->units.end()) {
      fail(key, "unit suffix mismatch: expected '" + std::string(spec->units.front()) +
                    "', got '" + std::string(unit) + "'");
    }
    return body;
  }

  std::map<std::string, KeyValueEntry> entries_;
};

const char* unit_of(std::string_view key) {
  const KeySpec* spec = find_key(key);
  return (spec == nullptr || spec->units.empty()) ? "" : spec->units.front().data();
}

void validate(const RunConfig& cfg, const Document& doc) {
  const auto require = [&doc](bool ok, std::string_view key, const std::string& message) {
    if (!ok) doc.fail(key, message);
  };
  require(cfg.n_atoms >= 1, "atoms.N", "atom count must be >= 1");
  require(cfg.omega_a > 0.0, "atoms.omega_A", "transition frequency must be positive");
  require(cfg.dipole_magnitude > 0.0, "atoms.dipole", "dipole moment must be positive");
  require(cfg.polarization.norm() > 0.0, "atoms.polarization", "polarization must be nonzero");
  if (cfg.environment == Environment::kPerfectMirror) {
    require(cfg.position.z > 0.0, "atoms.z", "atoms must sit above the plate (z > 0)");
  }
  if (cfg.drive) {
    require(cfg.drive->intensity >= 0.0, "drive.intensity", "intensity must be nonnegative");
  }
  require(cfg.solver.rtol > 0.0, "solver.rtol", "tolerance must be positive");
  require(cfg.solver.atol > 0.0, "solver.atol", "tolerance must be positive");
  require(cfg.solver.max_steps >= 1, "solver.max_steps", "must be positive");
  require(cfg.solver.output_intervals >= 16, "solver.output_intervals", "must be >= 16");
  if (cfg.t_max) require(*cfg.t_max > 0.0, "solver.t_max", "horizon must be positive");

  for (int n : cfg.scaling.atom_counts) {
    require(n >= 1, "scaling.atoms", "atom counts must be >= 1");
  }
  require(!cfg.scaling.atom_counts.empty(), "scaling.atoms", "list is empty");
  require(cfg.scaling.min_fit_atoms >= 1, "scaling.min_fit_atoms", "must be >= 1");
  if (cfg.experiment == Experiment::kScaling) {
    const auto fit_points = std::count_if(cfg.scaling.atom_counts.begin(), cfg.scaling.atom_counts.end(),
                                          [&](int n) { return n >= cfg.scaling.min_fit_atoms; });
    require(fit_points >= 4, "scaling.atoms", "power-law fits need at least 4 atom counts >= min_fit_atoms");
  }

  const GridSpec& g = cfg.map.grid;
  require(g.nx >= 1, "map.nx", "grid needs at least one column");
  require(g.nz >= 1, "map.nz", "grid needs at least one row");
  require(g.x_max >= g.x_min, "map.x_max", "must not be below map.x_min");
  require(g.z_max >= g.z_min, "map.z_max", "must not be below map.z_min");
  if (cfg.environment == Environment::kPerfectMirror) {
    require(g.z_min > 0.0, "map.z_min", "mirror maps must stay above the plate (z > 0)");
  }
  require(cfg.map.corridor_lo <= cfg.map.corridor_hi, "map.corridor_hi", "must be >= map.corridor_lo");
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kEmission:
      return "emission";
    case Experiment::kPotential:
      return "potential";
    case Experiment::kFidelityMap:
      return "fidelity-map";
    case Experiment::kScaling:
      return "scaling";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (auto e : {Experiment::kEmission, Experiment::kPotential, Experiment::kFidelityMap,
                 Experiment::kScaling}) {
    if (name == to_string(e)) return e;
  }
  return std::nullopt;
}

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error(key + (line > 0 ? " (line " + std::to_string(line) + ")" : "") + ": " +
                         message),
      key_(key),
      line_(line),
      message_(message) {}

EnsembleConfig RunConfig::ensemble() const { return ensemble(n_atoms); }

EnsembleConfig RunConfig::ensemble(int n_atoms_override) const {
  EnsembleConfig e;
  e.n_atoms = n_atoms_override;
  e.omega_a = omega_a;
  e.dipole = (dipole_magnitude * polarization.normalized()).cast<Complex>();
  e.position = position;
  e.environment = environment;
  return e;
}

std::map<std::string, KeyValueEntry> parse_key_values(std::string_view text) {
  std::map<std::string, KeyValueEntry> entries;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(std::string(line), line_no, "malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    }
    const std::string_view raw_key = trim(line.substr(0, eq));
    if (raw_key.empty()) throw ConfigError("", line_no, "missing key before '='");
    std::string key = section.empty() ? std::string(raw_key) : section + "." + std::string(raw_key);
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (entries.count(key) != 0) throw ConfigError(key, line_no, "duplicate key");
    entries.emplace(std::move(key), KeyValueEntry{std::string(value), line_no});
  }
  return entries;
}

RunConfig parse_config(std::string_view text, std::optional<Experiment> fallback) {
  const Document doc(parse_key_values(text));
  RunConfig cfg;

  if (const auto name = doc.word("experiment")) {
    const auto e = parse_experiment(*name);
    if (!e) doc.fail("experiment", "unknown experiment '" + *name + "'");
    if (fallback && *fallback != *e) {
      doc.fail("experiment", std::string("config names '") + to_string(*e) +
                                 "' but the command requested '" + to_string(*fallback) + "'");
    }
    cfg.experiment = *e;
  } else if (fallback) {
    cfg.experiment = *fallback;
  } else {
    throw ConfigError("experiment", 0, "missing required key");
  }

  if (const auto env = doc.word("environment")) {
    if (*env == "mirror") {
      cfg.environment = Environment::kPerfectMirror;
    } else if (*env == "free-space") {
      cfg.environment = Environment::kFreeSpace;
    } else {
      doc.fail("environment", "expected 'mirror' or 'free-space'");
    }
  }

  if (const auto n = doc.integer("atoms.N")) {
    if (*n < std::numeric_limits<int>::min() || *n > std::numeric_limits<int>::max()) {
      doc.fail("atoms.N", "out of range");
    }
    cfg.n_atoms = static_cast<int>(*n);
  }
  if (const auto v = doc.number("atoms.omega_A")) cfg.omega_a = *v;
  if (const auto v = doc.number("atoms.dipole")) cfg.dipole_magnitude = *v;
  // Maps default to a tangential dipole.
  if (cfg.experiment == Experiment::kFidelityMap) cfg.polarization = Eigen::Vector3d::UnitX();
  if (const auto v = doc.vector("atoms.polarization")) cfg.polarization = *v;
  if (const auto v = doc.number("atoms.x")) cfg.position.x = *v;
  if (const auto v = doc.number("atoms.y")) cfg.position.y = *v;
  if (const auto v = doc.number("atoms.z")) cfg.position.z = *v;

  if (doc.has("drive.intensity") || doc.has("drive.detuning") || doc.has("drive.mode")) {
    if (!doc.has("drive.intensity")) doc.fail("drive.intensity", "missing required key for a drive block");
    DriveConfig drive;
    drive.intensity = *doc.number("drive.intensity");
    if (const auto v = doc.number("drive.detuning")) drive.detuning = *v;
    if (const auto mode = doc.word("drive.mode")) {
      if (*mode == "rwa") {
        drive.mode = DriveMode::kRotatingWave;
      } else if (*mode == "full-cosine") {
        drive.mode = DriveMode::kFullCosine;
      } else {
        doc.fail("drive.mode", "expected 'rwa' or 'full-cosine'");
      }
    }
    cfg.drive = drive;
  }

  if (const auto v = doc.number("solver.rtol")) cfg.solver.rtol = *v;
  if (const auto v = doc.number("solver.atol")) cfg.solver.atol = *v;
  if (const auto v = doc.integer("solver.max_steps")) cfg.solver.max_steps = static_cast<long>(*v);
  if (const auto v = doc.integer("solver.output_intervals")) {
    if (*v > std::numeric_limits<int>::max() || *v < 0) doc.fail("solver.output_intervals", "out of range");
    cfg.solver.output_intervals = static_cast<int>(*v);
  }
  if (const auto v = doc.number("solver.t_max")) cfg.t_max = *v;

  if (const auto v = doc.integer_list("scaling.atoms")) cfg.scaling.atom_counts = *v;
  if (const auto v = doc.integer("scaling.min_fit_atoms")) cfg.scaling.min_fit_atoms = static_cast<int>(*v);

  if (const auto v = doc.number("map.x_min")) cfg.map.grid.x_min = *v;
  if (const auto v = doc.number("map.x_max")) cfg.map.grid.x_max = *v;
  if (const auto v = doc.integer("map.nx")) cfg.map.grid.nx = static_cast<int>(*v);
  if (const auto v = doc.number("map.z_max")) cfg.map.grid.z_max = *v;
  if (const auto v = doc.integer("map.nz")) cfg.map.grid.nz = static_cast<int>(*v);
  // Default lower edge: one grid cell above the surface.
  cfg.map.grid.z_min = cfg.map.grid.z_max / std::max(cfg.map.grid.nz, 1);
  if (const auto v = doc.number("map.z_min")) cfg.map.grid.z_min = *v;
  if (const auto v = doc.number("map.corridor_lo")) cfg.map.corridor_lo = *v;
  if (const auto v = doc.number("map.corridor_hi")) cfg.map.corridor_hi = *v;

  if (const auto v = doc.word("output.directory")) cfg.output_directory = *v;

  validate(cfg, doc);
  return cfg;
}

std::string format_roundtrip(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  const auto put = [&os](std::string_view key, const std::string& value) {
    os << key << " = " << value;
    const std::string unit = unit_of(key);
    if (!unit.empty()) os << ' ' << unit;
    os << '\n';
  };
  const auto num = [](double v) { return format_roundtrip(v); };

  put("experiment", to_string(cfg.experiment));
  put("environment", to_string(cfg.environment));
  put("atoms.N", std::to_string(cfg.n_atoms));
  put("atoms.omega_A", num(cfg.omega_a));
  put("atoms.dipole", num(cfg.dipole_magnitude));
  put("atoms.polarization", num(cfg.polarization.x()) + ", " + num(cfg.polarization.y()) + ", " +
                                num(cfg.polarization.z()));
  put("atoms.x", num(cfg.position.x));
  put("atoms.y", num(cfg.position.y));
  put("atoms.z", num(cfg.position.z));
  if (cfg.drive) {
    put("drive.intensity", num(cfg.drive->intensity));
    put("drive.detuning", num(cfg.drive->detuning));
    put("drive.mode", cfg.drive->mode == DriveMode::kFullCosine ? "full-cosine" : "rwa");
  }
  put("solver.rtol", num(cfg.solver.rtol));
  put("solver.atol", num(cfg.solver.atol));
  put("solver.max_steps", std::to_string(cfg.solver.max_steps));
  put("solver.output_intervals", std::to_string(cfg.solver.output_intervals));
  if (cfg.t_max) put("solver.t_max", num(*cfg.t_max));
  std::string counts;
  for (std::size_t i = 0; i < cfg.scaling.atom_counts.size(); ++i) {
    if (i > 0) counts += ", ";
    counts += std::to_string(cfg.scaling.atom_counts[i]);
  }
  put("scaling.atoms", counts);
  put("scaling.min_fit_atoms", std::to_string(cfg.scaling.min_fit_atoms));
  put("map.x_min", num(cfg.map.grid.x_min));
  put("map.x_max", num(cfg.map.grid.x_max));
  put("map.nx", std::to_string(cfg.map.grid.nx));
  put("map.z_min", num(cfg.map.grid.z_min));
  put("map.z_max", num(cfg.map.grid.z_max));
  put("map.nz", std::to_string(cfg.map.grid.nz));
  put("map.corridor_lo", num(cfg.map.corridor_lo));
  put("map.corridor_hi", num(cfg.map.corridor_hi));
  put("output.directory", cfg.output_directory);
  return os.str();
}

}  // namespace pdicke
