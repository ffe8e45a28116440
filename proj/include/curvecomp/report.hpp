#pragma once

#include "curvecomp/criterion.hpp"
#include "curvecomp/simulate.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace curvecomp {

/// A delimited text table: one header row of column names, then numeric rows.
/// Numbers are written with 12 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// `x` rounded to 12 significant digits.
double round12(double x);
std::string format12(double x);

std::string write_table(const Table& table);
/// Inverse of write_table. Throws InvalidArgument on ragged or non-numeric rows.
Table parse_table(std::string_view text);

/// "t,phi_n,lower_bound"
Table criterion_curve_table(const CriterionReport& report);
/// "t,center,lower,upper,true_diff"
Table band_table(const CoverageResult& result);
/// "coverage,mean_maxwidth,replications,alpha,seed"
Table summary_table(const CoverageResult& result, double alpha, std::uint64_t seed);

}  // namespace curvecomp
