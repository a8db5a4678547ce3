#include "fht/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "fht/errors.hpp"

namespace fht {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw ConfigError("csv: cannot open " + path + " for writing");
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw ConfigError("csv: failed writing " + path_);
}

void write_sub_densities_csv(const std::string& path,
                             const SubDensityPair& sub) {
  CsvWriter w(path);
  w.row({"t", "g_lower", "g_upper", "clamped"});
  for (int k = 0; k < sub.grid.n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    w.row({format_double(sub.grid.knot(k)), format_double(sub.g_lower[i]),
           format_double(sub.g_upper[i]), sub.clamped[i] ? "1" : "0"});
  }
  w.close();
}

void write_laplace_csv(const std::string& path, const TimeGrid& grid,
                       const std::vector<double>& g_lower,
                       const std::vector<double>& g_upper) {
  CsvWriter w(path);
  w.row({"t", "g_lower", "g_upper", "method"});
  for (int k = 0; k < grid.n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    w.row({format_double(grid.knot(k)), format_double(g_lower[i]),
           format_double(g_upper[i]), "laplace"});
  }
  w.close();
}

void write_joint_long_csv(const std::string& path,
                          const JointDensitySurface& surf) {
  CsvWriter w(path);
  w.row({"t", "s", "value"});
  const int n = surf.grid.n;
  for (int it = 0; it < n; ++it) {
    const std::string ts = format_double(surf.grid.knot(it));
    for (int is = 0; is < n; ++is)
      w.row({ts, format_double(surf.grid.knot(is)),
             format_double(surf.value(it, is))});
  }
  w.close();
}

void write_joint_matrix_csv(const std::string& path,
                            const JointDensitySurface& surf) {
  CsvWriter w(path);
  w.comment("rows=t cols=s h=" + format_double(surf.grid.h));
  const int n = surf.grid.n;
  std::vector<std::string> fields(static_cast<std::size_t>(n));
  for (int it = 0; it < n; ++it) {
    for (int is = 0; is < n; ++is)
      fields[static_cast<std::size_t>(is)] = format_double(surf.value(it, is));
    w.row(fields);
  }
  w.close();
}

void write_copula_csv(const std::string& path, const CopulaSurface& cop) {
  CsvWriter w(path);
  w.row({"u", "v", "density"});
  const double nan = std::nan("");
  for (int i = 0; i < cop.m; ++i) {
    const std::string us = format_double(cop.u[static_cast<std::size_t>(i)]);
    for (int j = 0; j < cop.m; ++j)
      w.row({us, format_double(cop.u[static_cast<std::size_t>(j)]),
             format_double(cop.is_covered(i, j) ? cop.value(i, j) : nan)});
  }
  w.close();
}

void write_copula_quantiles_csv(const std::string& path,
                                const CopulaSurface& cop) {
  CsvWriter w(path);
  w.row({"u", "q_lower", "q_upper"});
  for (int i = 0; i < cop.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.row({format_double(cop.u[k]), format_double(cop.q_lower[k]),
           format_double(cop.q_upper[k])});
  }
  w.close();
}

void write_samples_csv(const std::string& path,
                       const std::vector<HittingTimeSample>& samples) {
  CsvWriter w(path);
  w.row({"t_lower", "t_upper", "first_hit", "censored_lower",
         "censored_upper"});
  for (const auto& s : samples) {
    w.row({format_double(s.t_lower), format_double(s.t_upper),
           to_string(s.first_hit), s.censored_lower ? "1" : "0",
           s.censored_upper ? "1" : "0"});
  }
  w.close();
}

void write_convergence_csv(const std::string& path,
                           const ConvergenceReport& rep) {
  CsvWriter w(path);
  w.row({"h", "max_error", "mse"});
  for (std::size_t k = 0; k < rep.steps.size(); ++k)
    w.row({format_double(rep.steps[k]), format_double(rep.max_errors[k]),
           format_double(rep.mse[k])});
  w.close();
}

void write_marginal_cdf_csv(const std::string& path, const TimeGrid& grid,
                            const std::vector<double>& cdf) {
  CsvWriter w(path);
  w.row({"t", "value"});
  for (int k = 0; k < grid.n; ++k)
    w.row({format_double(grid.knot(k)),
           format_double(cdf[static_cast<std::size_t>(k)])});
  w.close();
}

}  // namespace fht
