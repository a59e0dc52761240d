#include "esst/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "esst/units.hpp"

namespace esst {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"rotor", {"A", "C"}},
      {"states", {"v1", "v2", "v3"}},
      {"dipoles", {"v2v1_z", "v3v1_x", "v3v1_y", "v3v2_x", "v3v2_y"}},
      {"field_12", {"helicity", "amplitude", "phase", "detuning"}},
      {"field_23", {"helicity", "amplitude", "phase", "detuning"}},
      {"field_13", {"helicity", "amplitude", "phase", "detuning"}},
      {"levels", {"omega1", "omega2", "omega3"}},
      {"simulation", {"model", "enantiomer", "t_start_us", "t_end_us", "points", "tolerance"}},
      {"protocol", {"mode", "n", "n_l", "n_r"}},
      {"verify", {"delta_ladder"}},
  };
  return s;
}

std::string field_name(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has_section(const std::string& section) const {
    return tree_.find(section) != tree_.not_found();
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return std::nullopt;
    const auto val = sec->second.find(key);
    if (val == sec->second.not_found()) return std::nullopt;
    return val->second.data();
  }

  std::string text(const std::string& section, const std::string& key) const {
    auto v = raw(section, key);
    if (!v) throw ConfigError(field_name(section, key), "missing required key");
    return *v;
  }

  double number(const std::string& section, const std::string& key) const {
    return to_number(section, key, text(section, key));
  }

  std::optional<double> optional_number(const std::string& section, const std::string& key) const {
    auto v = raw(section, key);
    if (!v) return std::nullopt;
    return to_number(section, key, *v);
  }

  long integer(const std::string& section, const std::string& key, long fallback) const {
    auto v = raw(section, key);
    if (!v) return fallback;
    long out = 0;
    const char* end = v->data() + v->size();
    const auto res = std::from_chars(v->data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ConfigError(field_name(section, key), "expected an integer, got '" + *v + "'");
    }
    return out;
  }

  static double to_number(const std::string& section, const std::string& key,
                          const std::string& s) {
    double out = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(out)) {
      throw ConfigError(field_name(section, key), "expected a finite number, got '" + s + "'");
    }
    return out;
  }

 private:
  const pt::ptree& tree_;
};

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (!body.data().empty()) throw ConfigError(section, "key outside of any section");
      throw ConfigError("[" + section + "]", "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(field_name(section, key), "unknown key");
      if (!value.empty()) throw ConfigError(field_name(section, key), "nested keys not allowed");
    }
  }
}

VibrationalLabel parse_label(const Reader& r, const std::string& key) {
  std::istringstream in(r.text("states", key));
  long m = -1, n = -1;
  std::string parity, extra;
  if (!(in >> m >> n >> parity) || (in >> extra)) {
    throw ConfigError(field_name("states", key),
                      "expected '<m_tilde> <n_tilde> <+|->', e.g. '0 0 +'");
  }
  if (m < 0 || n < 0) throw ConfigError(field_name("states", key), "quanta must be non-negative");
  if (parity != "+" && parity != "-") {
    throw ConfigError(field_name("states", key), "chi parity must be + or -");
  }
  VibrationalLabel v;
  v.m_tilde = static_cast<int>(m);
  v.n_tilde = static_cast<int>(n);
  v.chi_parity = parity == "+" ? ChiParity::Even : ChiParity::Odd;
  return v;
}

DriveField parse_field(const Reader& r, const std::string& section, int helicity,
                       bool amplitude_required) {
  if (!r.has_section(section)) throw ConfigError("[" + section + "]", "missing section");
  if (auto h = r.optional_number(section, "helicity"); h && *h != helicity) {
    throw ConfigError(field_name(section, "helicity"),
                      "helicity of this field is fixed to " + std::to_string(helicity));
  }
  DriveField f;
  f.sigma = helicity;
  if (amplitude_required) {
    f.amplitude = units::from_mhz(r.number(section, "amplitude"));
    f.phase = r.optional_number(section, "phase").value_or(0.0);
  }
  if (f.amplitude < 0.0) throw ConfigError(field_name(section, "amplitude"), "must be >= 0");
  return f;
}

}  // namespace

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Effective:
      return "effective";
    case ModelKind::Full:
      return "full";
    case ModelKind::Lab:
      return "lab";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "effective") return ModelKind::Effective;
  if (s == "full") return ModelKind::Full;
  if (s == "lab") return ModelKind::Lab;
  throw std::domain_error("model must be effective, full or lab; got '" + s + "'");
}

std::string to_string(EnantiomerSelection e) {
  switch (e) {
    case EnantiomerSelection::L:
      return "L";
    case EnantiomerSelection::R:
      return "R";
    case EnantiomerSelection::Both:
      return "both";
  }
  return "?";
}

EnantiomerSelection parse_enantiomer_selection(const std::string& s) {
  if (s == "L") return EnantiomerSelection::L;
  if (s == "R") return EnantiomerSelection::R;
  if (s == "both") return EnantiomerSelection::Both;
  throw std::domain_error("enantiomer must be L, R or both; got '" + s + "'");
}

LevelFrequencies RunConfig::lab_levels() const {
  if (levels) return *levels;
  return {rotational_energy(rotor, {0, 0, 0}), rotational_energy(rotor, {1, 0, -1}),
          rotational_energy(rotor, {1, 1, 0})};
}

CarrierFrequencies RunConfig::carriers() const {
  const LevelFrequencies l = lab_levels();
  CarrierFrequencies c;
  c.omega12 = (l.omega2 - l.omega1) - delta12;
  c.omega23 = (l.omega3 - l.omega2) - delta23;
  c.omega13 = c.omega12 + c.omega23;
  return c;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()), e.message());
  }
  check_schema(tree);
  const Reader r(tree);

  RunConfig cfg;
  cfg.source = source;

  try {
    cfg.rotor = RotorConstants::prolate(units::from_ghz(r.number("rotor", "A")),
                                        units::from_ghz(r.number("rotor", "C")));
  } catch (const std::domain_error& e) {
    throw ConfigError("[rotor]", e.what());
  }

  const std::array<VibrationalLabel, 3> labels{parse_label(r, "v1"), parse_label(r, "v2"),
                                               parse_label(r, "v3")};
  cfg.dipoles = DipoleModel(labels);
  const WorkingSetReport ws = validate_working_set(labels[0], labels[1], labels[2]);
  if (!ws.all_passed()) throw ConfigError("[states]", "working set rejected: " + ws.failures());

  struct DipoleKey {
    const char* key;
    int upper;
    int lower;
    DipoleAxis axis;
  };
  for (const DipoleKey& k : {DipoleKey{"v2v1_z", 2, 1, DipoleAxis::Z},
                             DipoleKey{"v3v1_x", 3, 1, DipoleAxis::X},
                             DipoleKey{"v3v1_y", 3, 1, DipoleAxis::Y},
                             DipoleKey{"v3v2_x", 3, 2, DipoleAxis::X},
                             DipoleKey{"v3v2_y", 3, 2, DipoleAxis::Y}}) {
    const double value = r.number("dipoles", k.key);
    if (value == 0.0) {
      throw ConfigError(field_name("dipoles", k.key), "symmetry-allowed dipole must be nonzero");
    }
    cfg.dipoles.set(k.upper, k.lower, k.axis, value);
  }

  std::optional<ProtocolMode> mode;
  if (auto m = r.raw("protocol", "mode"); m && *m != "none") {
    try {
      mode = parse_protocol_mode(*m);
    } catch (const std::domain_error& e) {
      throw ConfigError(field_name("protocol", "mode"), e.what());
    }
  }
  const bool has_amp12 = r.raw("field_12", "amplitude").has_value();
  const bool has_phase12 = r.raw("field_12", "phase").has_value();
  if (mode && (has_amp12 || has_phase12)) {
    throw ConfigError(field_name("field_12", has_amp12 ? "amplitude" : "phase"),
                      "set by the protocol designer when [protocol] mode is active; remove it");
  }
  cfg.field12_specified = !mode;
  cfg.fields.f12 = parse_field(r, "field_12", -1, !mode);
  cfg.fields.f23 = parse_field(r, "field_23", +1, true);
  cfg.fields.f13 = parse_field(r, "field_13", 0, true);

  cfg.delta12 = units::from_mhz(r.optional_number("field_12", "detuning").value_or(0.0));
  cfg.delta23 = units::from_mhz(r.number("field_23", "detuning"));
  const double d13_mhz = r.optional_number("field_13", "detuning")
                             .value_or(units::to_mhz(cfg.delta12 + cfg.delta23));
  cfg.delta13 = units::from_mhz(d13_mhz);
  try {
    (void)cfg.detunings();
  } catch (const std::domain_error& e) {
    throw ConfigError(field_name("field_13", "detuning"), e.what());
  }

  if (r.has_section("levels")) {
    LevelFrequencies lv{units::from_mhz(r.number("levels", "omega1")),
                        units::from_mhz(r.number("levels", "omega2")),
                        units::from_mhz(r.number("levels", "omega3"))};
    try {
      lv.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError("[levels]", e.what());
    }
    cfg.levels = lv;
  }

  SimulationSettings& sim = cfg.simulation;
  try {
    if (auto m = r.raw("simulation", "model")) sim.model = parse_model_kind(*m);
  } catch (const std::domain_error& e) {
    throw ConfigError(field_name("simulation", "model"), e.what());
  }
  try {
    if (auto e = r.raw("simulation", "enantiomer")) sim.enantiomer = parse_enantiomer_selection(*e);
  } catch (const std::domain_error& e) {
    throw ConfigError(field_name("simulation", "enantiomer"), e.what());
  }
  sim.t_start = units::from_us(r.optional_number("simulation", "t_start_us").value_or(0.0));
  sim.t_end = units::from_us(r.number("simulation", "t_end_us"));
  if (!(sim.t_end > sim.t_start)) {
    throw ConfigError(field_name("simulation", "t_end_us"), "must exceed t_start_us");
  }
  const long points = r.integer("simulation", "points", 1001);
  if (points < 2) throw ConfigError(field_name("simulation", "points"), "need at least 2 points");
  sim.points = static_cast<std::size_t>(points);
  sim.tolerance = r.optional_number("simulation", "tolerance").value_or(1e-10);
  if (!(sim.tolerance > 0.0)) {
    throw ConfigError(field_name("simulation", "tolerance"), "must be positive");
  }

  cfg.protocol.mode = mode;
  cfg.protocol.n = static_cast<int>(r.integer("protocol", "n", 0));
  cfg.protocol.n_l = static_cast<int>(r.integer("protocol", "n_l", 0));
  cfg.protocol.n_r = static_cast<int>(r.integer("protocol", "n_r", 0));
  if (cfg.protocol.n < 0 || cfg.protocol.n_l < 0 || cfg.protocol.n_r < 0) {
    throw ConfigError("[protocol]", "cycle counts must be natural numbers");
  }

  if (auto ladder = r.raw("verify", "delta_ladder")) {
    std::istringstream in_ladder(*ladder);
    std::string tok;
    while (in_ladder >> tok) {
      const double d = Reader::to_number("verify", "delta_ladder", tok);
      if (d == 0.0) throw ConfigError(field_name("verify", "delta_ladder"), "zero detuning");
      cfg.verify_ladder.push_back(units::from_mhz(d));
    }
    if (cfg.verify_ladder.size() < 2) {
      throw ConfigError(field_name("verify", "delta_ladder"), "need at least two detunings");
    }
  } else {
    for (double d : {5.0, 10.0, 20.0, 40.0}) cfg.verify_ladder.push_back(units::from_mhz(d));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  return parse_config(in, path.filename().string());
}

}  // namespace esst
