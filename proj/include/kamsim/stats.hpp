#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kamsim {

// Survival function Q(x) = 1 - K(x) of the asymptotic Kolmogorov
// distribution.  Two series are used, switching at x ~ 1.18 so both
// converge in a handful of terms.
double kolmogorov_sf(double x);

// One-sample Kolmogorov-Smirnov statistic against the unit exponential,
// D_n = sup |F_n(x) - (1 - e^-x)|.
double ks_statistic_exp1(std::vector<double> samples);

// Asymptotic one-sample p-value with the usual finite-n correction
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D.
double ks_pvalue_exp1(std::vector<double> samples);

// Two-sample Kolmogorov-Smirnov statistic and p-value.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
double ks_pvalue_two_sample(std::vector<double> a, std::vector<double> b);

double mean(std::span<const double> xs);

// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> xs);

}  // namespace kamsim
