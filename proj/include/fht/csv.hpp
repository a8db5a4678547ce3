#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "fht/joint.hpp"
#include "fht/mc.hpp"
#include "fht/volterra.hpp"

namespace fht {

// Shortest decimal string that round-trips the double exactly. NaN prints as
// "nan". Identical inputs always produce identical bytes.
std::string format_double(double v);

// Minimal row-oriented CSV writer; fields are pre-formatted strings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& text);  // "# ..." line
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

// Artifact writers. Every file starts with a header row; floating-point
// fields use format_double.

// t,g_lower,g_upper,clamped
void write_sub_densities_csv(const std::string& path, const SubDensityPair& sub);

// t,g_lower,g_upper,method with constant method tag "laplace"
void write_laplace_csv(const std::string& path, const TimeGrid& grid,
                       const std::vector<double>& g_lower,
                       const std::vector<double>& g_upper);

// long format: t,s,value
void write_joint_long_csv(const std::string& path,
                          const JointDensitySurface& surf);

// dense matrix with a comment line "# rows=t cols=s h=<h>"
void write_joint_matrix_csv(const std::string& path,
                            const JointDensitySurface& surf);

// u,v,density (uncovered cells print nan)
void write_copula_csv(const std::string& path, const CopulaSurface& cop);

// u,q_lower,q_upper (quantile table used for the copula transform)
void write_copula_quantiles_csv(const std::string& path,
                                const CopulaSurface& cop);

// t_lower,t_upper,first_hit,censored_lower,censored_upper
void write_samples_csv(const std::string& path,
                       const std::vector<HittingTimeSample>& samples);

// h,max_error,mse
void write_convergence_csv(const std::string& path,
                           const ConvergenceReport& rep);

// t,value
void write_marginal_cdf_csv(const std::string& path, const TimeGrid& grid,
                            const std::vector<double>& cdf);

}  // namespace fht
