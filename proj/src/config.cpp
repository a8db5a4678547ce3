#include "fht/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fht/errors.hpp"

namespace fht {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text,
                              const std::string& origin) {
  IniFile ini;
  ini.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty section name");
      ini.sections_[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = lower(trim(t.substr(0, eq)));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    auto& sec = ini.sections_[section];
    if (sec.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    sec[key] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

bool IniFile::has_section(const std::string& section) const {
  return sections_.count(lower(section)) != 0;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(lower(section));
  return it != sections_.end() && it->second.count(lower(key)) != 0;
}

std::string IniFile::get_string(const std::string& section,
                                const std::string& key) const {
  auto it = sections_.find(lower(section));
  if (it == sections_.end())
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  auto kv = it->second.find(lower(key));
  if (kv == it->second.end())
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section +
                      "]");
  return kv->second;
}

std::string IniFile::get_string_or(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double IniFile::get_double(const std::string& section,
                           const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not a number: '" + v + "'");
  }
}

double IniFile::get_double_or(const std::string& section,
                              const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t IniFile::get_int(const std::string& section,
                              const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not an integer: '" + v + "'");
  }
}

std::int64_t IniFile::get_int_or(const std::string& section,
                                 const std::string& key,
                                 std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool IniFile::get_bool_or(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = lower(get_string(section, key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                    "] is not a boolean: '" + v + "'");
}

std::vector<double> IniFile::get_double_list(const std::string& section,
                                             const std::string& key) const {
  const std::string v = get_string(section, key);
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(t, &pos));
      if (pos != t.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                        "] has a non-numeric entry: '" + t + "'");
    }
  }
  if (out.empty())
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is an empty list");
  return out;
}

namespace {

Process parse_process(const IniFile& ini) {
  const std::string kind = lower(ini.get_string("process", "kind"));
  const double x0 = ini.get_double("process", "x0");
  const double t0 = ini.get_double_or("process", "t0", 0.0);
  try {
    if (kind == "standard_brownian") return Process::standard(x0, t0);
    if (kind == "scaled_brownian")
      return Process::scaled(ini.get_double("process", "sigma"), x0, t0);
    if (kind == "geometric_brownian")
      return Process::geometric(ini.get_double("process", "sigma"), x0, t0);
    if (kind == "ornstein_uhlenbeck")
      return Process::ou(ini.get_double("process", "theta"),
                         ini.get_double_or("process", "mu", 0.0),
                         ini.get_double("process", "sigma"), x0, t0);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid process: ") + e.what());
  }
  throw ConfigError("config: unknown process kind '" + kind + "'");
}

Boundary parse_boundary(const IniFile& ini, const std::string& section) {
  const std::string kind = lower(ini.get_string(section, "kind"));
  try {
    if (kind == "constant")
      return Boundary::constant(ini.get_double(section, "level"));
    if (kind == "cosine")
      return Boundary::cosine(ini.get_double(section, "center"),
                              ini.get_double(section, "amplitude"),
                              ini.get_double(section, "angular_frequency"),
                              ini.get_double_or(section, "phase", 0.0));
    if (kind == "tabulated")
      return Boundary::from_csv(ini.get_string(section, "file"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config: invalid boundary [" + section + "]: " + e.what());
  }
  throw ConfigError("config: unknown boundary kind '" + kind + "' in [" +
                    section + "]");
}

StripConfiguration infer_configuration(const Process& p, const Boundary& lo,
                                       const Boundary& up) {
  // Position of x0 relative to the strip at t0 decides the case; exact
  // coincidence with a boundary is rejected later by validate_strip.
  const double a0 = lo.eval(p.t0);
  const double b0 = up.eval(p.t0);
  if (p.x0 < a0) return StripConfiguration::outside_below;
  if (p.x0 > b0) return StripConfiguration::outside_above;
  return StripConfiguration::inside;
}

}  // namespace

RunConfig RunConfig::from_ini(const IniFile& ini) {
  RunConfig rc;
  rc.strip.process = parse_process(ini);
  rc.strip.lower = parse_boundary(ini, "lower_boundary");
  rc.strip.upper = parse_boundary(ini, "upper_boundary");
  try {
    rc.strip.configuration =
        infer_configuration(rc.strip.process, rc.strip.lower, rc.strip.upper);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: cannot evaluate boundaries at t0: ") +
                      e.what());
  }

  const double h = ini.get_double("grid", "h");
  const double horizon = ini.get_double("grid", "horizon");
  if (!(h > 0.0)) throw ConfigError("config: grid h must be positive");
  if (!(horizon > rc.strip.process.t0))
    throw ConfigError("config: grid horizon must exceed t0");
  try {
    rc.grid = TimeGrid::over(rc.strip.process.t0, horizon, h);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad grid: ") + e.what());
  }

  const std::string method =
      lower(ini.get_string_or("solve", "method", "volterra"));
  if (method == "volterra")
    rc.method = SolveMethod::volterra;
  else if (method == "laplace")
    rc.method = SolveMethod::laplace;
  else if (method == "closed_form")
    rc.method = SolveMethod::closed_form;
  else
    throw ConfigError("config: unknown solve method '" + method + "'");

  const std::string rep =
      lower(ini.get_string_or("solve", "representation", "ito_mckean"));
  if (rep == "ito_mckean")
    rc.representation = LaplaceRep::ito_mckean;
  else if (rep == "fortet")
    rc.representation = LaplaceRep::fortet;
  else if (rep == "density_ratio")
    rc.representation = LaplaceRep::density_ratio;
  else
    throw ConfigError("config: unknown representation '" + rep + "'");

  rc.inversion.terms =
      static_cast<int>(ini.get_int_or("solve", "terms", rc.inversion.terms));
  rc.inversion.precision_decimals = static_cast<int>(ini.get_int_or(
      "solve", "precision_decimals", rc.inversion.precision_decimals));
  rc.series.max_terms = static_cast<int>(
      ini.get_int_or("solve", "max_terms", rc.series.max_terms));
  rc.series.tail_tolerance =
      ini.get_double_or("solve", "tail_tolerance", rc.series.tail_tolerance);
  if (rc.inversion.terms < 10)
    throw ConfigError("config: solve terms must be at least 10");
  if (rc.inversion.precision_decimals < 1)
    throw ConfigError("config: precision_decimals must be at least 1");
  if (rc.series.max_terms < 1)
    throw ConfigError("config: max_terms must be positive");
  if (!(rc.series.tail_tolerance > 0.0))
    throw ConfigError("config: tail_tolerance must be positive");

  rc.joint.surface_h = ini.get_double_or("joint", "surface_h", 0.0);
  rc.joint.surface_horizon = ini.get_double_or("joint", "surface_horizon", 0.0);
  rc.joint.use_closed_form =
      ini.get_bool_or("joint", "use_closed_form", true);
  const std::string jout = lower(ini.get_string_or("joint", "output", "long"));
  if (jout == "long") {
    rc.joint.write_long = true;
    rc.joint.write_matrix = false;
  } else if (jout == "matrix") {
    rc.joint.write_long = false;
    rc.joint.write_matrix = true;
  } else if (jout == "both") {
    rc.joint.write_long = true;
    rc.joint.write_matrix = true;
  } else {
    throw ConfigError("config: joint output must be long, matrix, or both");
  }
  if (rc.joint.surface_h < 0.0 || rc.joint.surface_horizon < 0.0)
    throw ConfigError("config: joint surface grid values must be positive");

  rc.copula.m = static_cast<int>(ini.get_int_or("copula", "m", rc.copula.m));
  rc.copula.marginal_horizon =
      ini.get_double_or("copula", "marginal_horizon", 0.0);
  if (rc.copula.m < 1) throw ConfigError("config: copula m must be positive");

  if (ini.has("converge", "h_list"))
    rc.converge.h_list = ini.get_double_list("converge", "h_list");
  const std::string ref =
      lower(ini.get_string_or("converge", "reference", "closed_form"));
  if (ref == "closed_form")
    rc.converge.reference = ConvergenceReference::closed_form;
  else if (ref == "finest_grid")
    rc.converge.reference = ConvergenceReference::finest_grid;
  else
    throw ConfigError("config: unknown convergence reference '" + ref + "'");
  rc.converge.horizon = ini.get_double_or("converge", "horizon", 0.0);

  rc.simulate.n_paths =
      ini.get_int_or("simulate", "n_paths", rc.simulate.n_paths);
  rc.simulate.dt = ini.get_double_or("simulate", "dt", rc.simulate.dt);
  rc.simulate.horizon = ini.get_double_or("simulate", "horizon", 0.0);
  rc.simulate.seed = static_cast<std::uint64_t>(
      ini.get_int_or("simulate", "seed", static_cast<std::int64_t>(1)));
  if (rc.simulate.n_paths < 1)
    throw ConfigError("config: n_paths must be positive");
  if (!(rc.simulate.dt > 0.0)) throw ConfigError("config: dt must be positive");

  return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_ini(IniFile::parse_file(path));
}

}  // namespace fht
