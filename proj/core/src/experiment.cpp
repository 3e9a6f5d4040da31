// SPDX-License-Identifier: Apache-2.0
//
// ddfb: limited-feedback sparse channel estimation for massive MIMO
// Copyright (C) 2026 The ddfb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "ddfb/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ddfb {

namespace {

// --- scalar codecs ------------------------------------------------------------

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  const long long v = parse_integer(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument("integer out of range: '" + s + "'");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class E>
struct EnumTable {
  std::vector<std::pair<E, std::string>> entries;

  std::string name(E e) const {
    for (const auto& [k, n] : entries)
      if (k == e) return n;
    throw std::logic_error("enum value without a name");
  }
  E parse(const std::string& s) const {
    for (const auto& [k, n] : entries)
      if (n == s) return k;
    std::string valid;
    for (const auto& [k, n] : entries) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("invalid value '" + s + "' (expected one of: " + valid + ")");
  }
};

const EnumTable<GridConstruction> kGrid{{{GridConstruction::Uniform, "uniform"},
                                         {GridConstruction::Companded, "companded"}}};
const EnumTable<AngleMode> kAngleMode{{{AngleMode::OnGrid, "on-grid"}, {AngleMode::OffGrid, "off-grid"}}};
const EnumTable<RadiusMode> kRadius{{{RadiusMode::Fixed, "fixed"},
                                     {RadiusMode::PathPower, "path-power"},
                                     {RadiusMode::GainPower, "gain-power"}}};
const EnumTable<ZetaRule::Kind> kZeta{{{ZetaRule::Kind::Absolute, "absolute"},
                                       {ZetaRule::Kind::RelativeToGradZero, "relative"}}};
const EnumTable<SweepAxis> kAxis{{{SweepAxis::SnrDb, "snr_db"},
                                  {SweepAxis::Mtx, "m_tx"},
                                  {SweepAxis::G, "g"},
                                  {SweepAxis::MaxAtoms, "max_atoms"},
                                  {SweepAxis::TxPower, "tx_power"}}};

// --- field bindings -------------------------------------------------------------

struct Field {
  std::string section;
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

template <class T>
Field num(std::string section, std::string key, T& ref) {
  Field f{std::move(section), std::move(key), {}, {}};
  if constexpr (std::is_same_v<T, double>) {
    f.get = [&ref] { return fmt_double(ref); };
    f.set = [&ref](const std::string& s) { ref = parse_double(s); };
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    f.get = [&ref] { return std::to_string(ref); };
    f.set = [&ref](const std::string& s) { ref = parse_u64(s); };
  } else {
    f.get = [&ref] { return std::to_string(ref); };
    f.set = [&ref](const std::string& s) { ref = parse_int(s); };
  }
  return f;
}

template <class E>
Field enumerated(std::string section, std::string key, E& ref, const EnumTable<E>& table) {
  return {std::move(section), std::move(key), [&ref, &table] { return table.name(ref); },
          [&ref, &table](const std::string& s) { ref = table.parse(s); }};
}

void antenna_fields(std::vector<Field>& out, const std::string& sec, Antenna& a) {
  out.push_back(num(sec, "element_spacing", a.array.element_spacing_wavelengths));
  out.push_back({sec, "pattern",
                 [&a] {
                   if (std::holds_alternative<IsotropicPattern>(a.pattern)) return std::string("isotropic");
                   if (std::holds_alternative<SectorPattern>(a.pattern)) return std::string("sector");
                   return std::string("3gpp");
                 },
                 [&a](const std::string& s) {
                   if (s == "isotropic") {
                     a.pattern = IsotropicPattern{};
                   } else if (s == "sector") {
                     if (!std::holds_alternative<SectorPattern>(a.pattern)) a.pattern = SectorPattern{};
                   } else if (s == "3gpp") {
                     if (!std::holds_alternative<ThreeGppPattern>(a.pattern)) a.pattern = ThreeGppPattern{};
                   } else {
                     throw std::invalid_argument("invalid pattern '" + s + "' (expected isotropic, sector, 3gpp)");
                   }
                 }});
  // Parameters of the active pattern only; setters require that pattern.
  auto param = [&out, &sec, &a](const std::string& key, auto member_of) {
    out.push_back({sec, key,
                   [&a, member_of]() -> std::string {
                     const double* p = member_of(a.pattern);
                     return p ? fmt_double(*p) : std::string();
                   },
                   [&a, member_of, key](const std::string& s) {
                     double* p = member_of(a.pattern);
                     if (!p) throw std::invalid_argument("key '" + key + "' does not apply to the selected pattern");
                     *p = parse_double(s);
                   }});
  };
  param("sector_lower", [](auto& p) { auto* s = std::get_if<SectorPattern>(&p); return s ? &s->lower : nullptr; });
  param("sector_upper", [](auto& p) { auto* s = std::get_if<SectorPattern>(&p); return s ? &s->upper : nullptr; });
  param("phi_3db", [](auto& p) { auto* s = std::get_if<ThreeGppPattern>(&p); return s ? &s->phi_3db : nullptr; });
  param("front_back_db",
        [](auto& p) { auto* s = std::get_if<ThreeGppPattern>(&p); return s ? &s->front_back_db : nullptr; });
  param("max_gain_dbi",
        [](auto& p) { auto* s = std::get_if<ThreeGppPattern>(&p); return s ? &s->max_gain_dbi : nullptr; });
}

void scheme_fields(std::vector<Field>& out, SchemeConfig& s) {
  const std::string sec = "scheme:" + s.id;
  out.push_back({sec, "kind", [&s] { return std::string(to_string(s.kind)); },
                 [&s](const std::string& v) { s.kind = scheme_kind_from_string(v); }});
  out.push_back(num(sec, "max_atoms", s.max_atoms));
  out.push_back(num(sec, "q_bits", s.q_bits));
  out.push_back(num(sec, "n_fb", s.n_fb));
  out.push_back(num(sec, "eps_factor", s.eps_factor));
  out.push_back(enumerated(sec, "zeta_mode", s.zeta.kind, kZeta));
  out.push_back(num(sec, "zeta", s.zeta.value));
  out.push_back(num(sec, "max_iters", s.max_iters));
  out.push_back(num(sec, "rel_tol", s.rel_tol));
  out.push_back(enumerated(sec, "r2_mode", s.r2_mode, kRadius));
  out.push_back(num(sec, "r2", s.r2));
  out.push_back({sec, "tx_construction",
                 [&s] { return s.tx_construction ? kGrid.name(*s.tx_construction) : std::string("default"); },
                 [&s](const std::string& v) {
                   if (v == "default")
                     s.tx_construction.reset();
                   else
                     s.tx_construction = kGrid.parse(v);
                 }});
}

std::vector<Field> bind_fields(ExperimentSpec& spec) {
  std::vector<Field> f;
  f.push_back({"experiment", "name", [&spec] { return spec.name; }, [&spec](const std::string& v) { spec.name = v; }});
  f.push_back(num("experiment", "trials", spec.trials));
  f.push_back(num("experiment", "master_seed", spec.master_seed));

  auto& sys = spec.system;
  f.push_back(num("system", "m_tx", sys.m_tx));
  f.push_back(num("system", "m_rx", sys.m_rx));
  f.push_back(num("system", "n_tr", sys.n_tr));
  f.push_back(num("system", "n_fb", sys.n_fb));
  f.push_back(num("system", "users", sys.users));
  f.push_back(num("system", "coherence_symbols", sys.coherence_symbols));
  f.push_back({"system", "snr_db", [&spec] { return spec.snr_db ? fmt_double(*spec.snr_db) : std::string("none"); },
               [&spec](const std::string& v) {
                 if (v == "none")
                   spec.snr_db.reset();
                 else
                   spec.snr_db = parse_double(v);
               }});

  auto& sc = spec.scenario;
  f.push_back(num("scenario", "paths_min", sc.paths_min));
  f.push_back(num("scenario", "paths_max", sc.paths_max));
  f.push_back(num("scenario", "angle_min", sc.angle_min));
  f.push_back(num("scenario", "angle_max", sc.angle_max));
  f.push_back(enumerated("scenario", "angle_mode", sc.angle_mode, kAngleMode));
  f.push_back(num("scenario", "rician_k_min", sc.rician_k_min));
  f.push_back(num("scenario", "rician_k_max", sc.rician_k_max));
  f.push_back(num("scenario", "tx_power", sc.tx_power_w));
  f.push_back(num("scenario", "noise_power", sc.noise_power_w));
  f.push_back({"scenario", "pathloss",
               [&sc] { return std::holds_alternative<NoPathloss>(sc.pathloss) ? std::string("none") : std::string("3gpp"); },
               [&sc](const std::string& v) {
                 if (v == "none")
                   sc.pathloss = NoPathloss{};
                 else if (v == "3gpp") {
                   if (!std::holds_alternative<ThreeGppPathloss>(sc.pathloss)) sc.pathloss = ThreeGppPathloss{};
                 } else
                   throw std::invalid_argument("invalid pathloss '" + v + "' (expected none, 3gpp)");
               }});
  auto pl = [&f, &sc](const std::string& key, double ThreeGppPathloss::*member) {
    f.push_back({"scenario", key,
                 [&sc, member]() -> std::string {
                   const auto* p = std::get_if<ThreeGppPathloss>(&sc.pathloss);
                   return p ? fmt_double(p->*member) : std::string();
                 },
                 [&sc, member, key](const std::string& v) {
                   auto* p = std::get_if<ThreeGppPathloss>(&sc.pathloss);
                   if (!p) throw std::invalid_argument("key '" + key + "' requires pathloss = 3gpp");
                   p->*member = parse_double(v);
                 }});
  };
  pl("distance_min_m", &ThreeGppPathloss::distance_min_m);
  pl("distance_max_m", &ThreeGppPathloss::distance_max_m);
  pl("exponent_mean", &ThreeGppPathloss::exponent_mean);
  pl("exponent_std", &ThreeGppPathloss::exponent_std);
  pl("shadowing_std_db", &ThreeGppPathloss::shadowing_std_db);
  pl("carrier_hz", &ThreeGppPathloss::carrier_hz);

  antenna_fields(f, "tx_antenna", spec.tx);
  antenna_fields(f, "rx_antenna", spec.rx);

  auto& d = spec.dictionary;
  f.push_back(num("dictionary", "g_tx", d.g_tx));
  f.push_back(num("dictionary", "g_rx", d.g_rx));
  f.push_back(enumerated("dictionary", "tx_construction", d.tx_construction, kGrid));
  f.push_back(enumerated("dictionary", "rx_construction", d.rx_construction, kGrid));
  f.push_back(num("dictionary", "lower", d.lower));
  f.push_back(num("dictionary", "upper", d.upper));

  f.push_back(enumerated("sweep", "axis", spec.sweep.axis, kAxis));
  f.push_back({"sweep", "values",
               [&spec] {
                 std::string s;
                 for (double v : spec.sweep.values) s += (s.empty() ? "" : ", ") + fmt_double(v);
                 return s;
               },
               [&spec](const std::string& v) {
                 spec.sweep.values.clear();
                 std::stringstream ss(v);
                 std::string item;
                 while (std::getline(ss, item, ',')) spec.sweep.values.push_back(parse_double(trim(item)));
               }});

  for (auto& s : spec.schemes) scheme_fields(f, s);
  return f;
}

Field* find_field(std::vector<Field>& fields, const std::string& section, const std::string& key) {
  for (auto& f : fields)
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

void add_scheme_if_new(ExperimentSpec& spec, const std::string& section) {
  const std::string id = section.substr(7);
  if (id.empty()) throw std::invalid_argument("scheme section without an id");
  for (const auto& s : spec.schemes)
    if (s.id == id) return;
  SchemeConfig s;
  s.id = id;
  spec.schemes.push_back(s);
}

void set_value(ExperimentSpec& spec, const std::string& section, const std::string& key, const std::string& value) {
  if (section.rfind("scheme:", 0) == 0) add_scheme_if_new(spec, section);
  auto fields = bind_fields(spec);
  Field* f = find_field(fields, section, key);
  if (!f) throw std::invalid_argument("unknown key '" + key + "' in section [" + section + "]");
  try {
    f->set(value);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("[" + section + "] " + key + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::Mtx: return "m_tx";
    case SweepAxis::G: return "g";
    case SweepAxis::MaxAtoms: return "max_atoms";
    case SweepAxis::TxPower: return "tx_power";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(std::string_view name) { return kAxis.parse(std::string(name)); }

std::vector<std::string> validation_errors(const ExperimentSpec& spec) {
  std::vector<std::string> err;
  auto check = [&err](bool ok, std::string msg) {
    if (!ok) err.push_back(std::move(msg));
  };
  check(spec.trials >= 1, "experiment.trials must be >= 1");
  const auto& s = spec.system;
  check(s.m_tx >= 1, "system.m_tx must be >= 1");
  check(s.m_rx >= 1, "system.m_rx must be >= 1");
  check(s.n_tr >= 1, "system.n_tr must be >= 1");
  check(s.n_fb >= 1 && s.n_fb <= s.m_rx * s.n_tr, "system.n_fb must be in [1, m_rx * n_tr]");
  check(s.users >= 1 && s.users <= s.m_tx, "system.users must be in [1, m_tx]");
  check(s.users == 1 || s.m_rx == 1, "multiuser runs require m_rx = 1");
  check(s.coherence_symbols > s.n_tr, "system.coherence_symbols must exceed n_tr");
  check(!spec.snr_db || std::isfinite(*spec.snr_db), "system.snr_db must be finite");
  try {
    validate(spec.scenario);
  } catch (const std::invalid_argument& e) {
    err.push_back(e.what());
  }
  for (const auto* a : {&spec.tx, &spec.rx}) {
    try {
      validate(a->pattern);
      if (!(a->array.element_spacing_wavelengths > 0.0)) throw std::invalid_argument("element spacing must be > 0");
    } catch (const std::invalid_argument& e) {
      err.push_back(std::string(a == &spec.tx ? "tx_antenna: " : "rx_antenna: ") + e.what());
    }
  }
  const auto& d = spec.dictionary;
  check(d.g_tx >= 1 && d.g_rx >= 1, "dictionary sizes must be >= 1");
  check(d.lower < d.upper, "dictionary.lower must be < dictionary.upper");
  const long long g = static_cast<long long>(d.g_tx) * d.g_rx;
  check(spec.scenario.paths_max <= g, "scenario.paths_max must not exceed the dictionary size G");
  check(!spec.sweep.values.empty(), "sweep.values must not be empty");
  for (double v : spec.sweep.values) {
    switch (spec.sweep.axis) {
      case SweepAxis::SnrDb: check(std::isfinite(v), "sweep snr_db values must be finite"); break;
      case SweepAxis::TxPower: check(v > 0.0, "sweep tx_power values must be > 0"); break;
      default: check(v >= 1.0 && v == std::floor(v), "sweep values on an integer axis must be integers >= 1");
    }
  }
  check(!spec.schemes.empty(), "at least one scheme is required");
  std::map<std::string, int> ids;
  for (const auto& sc : spec.schemes) {
    const std::string p = "scheme:" + sc.id + ": ";
    check(++ids[sc.id] == 1, p + "duplicate scheme id");
    check(sc.max_atoms >= 1, p + "max_atoms must be >= 1");
    const bool quantized = sc.kind == SchemeKind::OmpSq || sc.kind == SchemeKind::LsSq || sc.kind == SchemeKind::LsVq;
    check(!quantized || (sc.q_bits >= 1 && sc.q_bits <= 16), p + "q_bits must be in [1, 16]");
    check(sc.n_fb >= 0 && sc.n_fb <= s.m_rx * s.n_tr, p + "n_fb must be in [0, m_rx * n_tr] (0 = system value)");
    check(sc.eps_factor >= 0.0, p + "eps_factor must be >= 0");
    check(sc.zeta.value >= 0.0, p + "zeta must be >= 0");
    check(sc.max_iters >= 1, p + "max_iters must be >= 1");
    check(sc.rel_tol >= 0.0, p + "rel_tol must be >= 0");
    check(sc.r2 > 0.0, p + "r2 must be > 0");
    check(sc.kind != SchemeKind::LsVq || s.m_rx == 1, p + "ls-vq requires m_rx = 1");
    check(sc.kind != SchemeKind::LsVq || s.m_tx >= 2, p + "ls-vq requires m_tx >= 2");
  }
  return err;
}

void validate(const ExperimentSpec& spec) {
  const auto err = validation_errors(spec);
  if (err.empty()) return;
  std::string msg = "invalid experiment spec:";
  for (const auto& e : err) msg += "\n  - " + e;
  throw std::invalid_argument(msg);
}

ExperimentSpec at_sweep_value(const ExperimentSpec& spec, double value) {
  ExperimentSpec out = spec;
  switch (spec.sweep.axis) {
    case SweepAxis::SnrDb: out.snr_db = value; break;
    case SweepAxis::Mtx: out.system.m_tx = static_cast<int>(value); break;
    case SweepAxis::G:
      out.dictionary.g_tx = static_cast<int>(value);
      out.dictionary.g_rx = static_cast<int>(value);
      break;
    case SweepAxis::MaxAtoms:
      for (auto& s : out.schemes) s.max_atoms = static_cast<int>(value);
      break;
    case SweepAxis::TxPower: out.scenario.tx_power_w = value; break;
  }
  out.sweep.values = {value};
  return out;
}

double noise_power(const ExperimentSpec& spec) {
  if (spec.snr_db) return spec.scenario.tx_power_w / std::pow(10.0, *spec.snr_db / 10.0);
  return spec.scenario.noise_power_w;
}

void write_spec(std::ostream& os, const ExperimentSpec& spec) {
  ExperimentSpec copy = spec;
  const auto fields = bind_fields(copy);
  std::string section;
  for (const auto& f : fields) {
    const std::string value = f.get();
    if (value.empty()) continue;  // parameter of an inactive variant
    if (f.section != section) {
      os << (section.empty() ? "" : "\n") << '[' << f.section << "]\n";
      section = f.section;
    }
    os << f.key << " = " << value << '\n';
  }
}

std::string spec_to_string(const ExperimentSpec& spec) {
  std::ostringstream os;
  write_spec(os, spec);
  return os.str();
}

ExperimentSpec read_spec(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  ExperimentSpec spec;
  spec.schemes.clear();
  static const std::vector<std::string> kSections{"experiment", "system",     "scenario", "tx_antenna",
                                                  "rx_antenna", "dictionary", "sweep"};
  // Variant selectors first so that their parameters bind to the right alternative.
  static const std::vector<std::string> kSelectors{"pattern", "pathloss", "kind"};
  for (const auto& [section, body] : tree) {
    const bool known = std::find(kSections.begin(), kSections.end(), section) != kSections.end();
    if (!known && section.rfind("scheme:", 0) != 0)
      throw std::invalid_argument("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty())
      throw std::invalid_argument("key '" + section + "' outside of any section");
    for (const auto& sel : kSelectors)
      if (auto v = body.get_optional<std::string>(sel)) set_value(spec, section, sel, trim(*v));
    if (section.rfind("scheme:", 0) == 0) add_scheme_if_new(spec, section);
    for (const auto& [key, value] : body) {
      if (std::find(kSelectors.begin(), kSelectors.end(), key) != kSelectors.end()) continue;
      set_value(spec, section, key, trim(value.data()));
    }
  }
  return spec;
}

ExperimentSpec spec_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_spec(is);
}

void apply_override(ExperimentSpec& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must be section.key=value: '" + assignment + "'");
  const std::string lhs = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = lhs.find('.');
  if (dot == std::string::npos) throw std::invalid_argument("override must be section.key=value: '" + assignment + "'");
  const std::string section = lhs.substr(0, dot);
  if (section.rfind("scheme:", 0) == 0) {
    const std::string id = section.substr(7);
    const bool exists = std::any_of(spec.schemes.begin(), spec.schemes.end(), [&](const auto& s) { return s.id == id; });
    if (!exists) throw std::invalid_argument("override refers to unknown scheme '" + id + "'");
  }
  set_value(spec, section, lhs.substr(dot + 1), value);
}

}  // namespace ddfb
