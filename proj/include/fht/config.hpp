#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fht/boundary.hpp"
#include "fht/joint.hpp"
#include "fht/laplace.hpp"
#include "fht/process.hpp"
#include "fht/volterra.hpp"

namespace fht {

// Parsed INI-style file: [section] headers, key = value lines, # or ;
// comments. Keys are unique per section.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text,
                              const std::string& origin = "<string>");

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  // get<> variants throw ConfigError with the section/key in the message.
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

enum class SolveMethod { volterra, laplace, closed_form };

struct JointOptions {
  double surface_h{0.0};        // 0: inherit grid h
  double surface_horizon{0.0};  // 0: inherit grid horizon
  bool use_closed_form{true};
  bool write_long{true};
  bool write_matrix{false};
};

struct CopulaOptions {
  int m{25};
  double marginal_horizon{0.0};  // 0: inherit surface horizon
};

struct ConvergeOptions {
  std::vector<double> h_list;
  ConvergenceReference reference{ConvergenceReference::closed_form};
  double horizon{0.0};  // 0: inherit grid horizon
};

struct SimulateOptions {
  std::int64_t n_paths{100000};
  double dt{1e-4};
  double horizon{0.0};  // 0: inherit grid horizon
  std::uint64_t seed{1};
};

// Everything a CLI run needs, assembled from one config file.
struct RunConfig {
  StripProblem strip;
  TimeGrid grid;
  SolveMethod method{SolveMethod::volterra};
  LaplaceRep representation{LaplaceRep::ito_mckean};
  InversionControl inversion;
  SeriesControl series;
  JointOptions joint;
  CopulaOptions copula;
  ConvergeOptions converge;
  SimulateOptions simulate;

  // Throws ConfigError on malformed input. Strip geometry is NOT validated
  // here; commands run validate_strip and map failures to their own exit
  // code.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_ini(const IniFile& ini);
};

}  // namespace fht
