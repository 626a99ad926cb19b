#pragma once

#include <cstddef>
#include <vector>

namespace fairdag {
namespace stats {

/// Upper tail of the chi-squared distribution with k degrees of freedom.
double chi2_sf(double x, double k);

/// Two-sided standard-normal tail probability for |z|.
double normal_two_sided_p(double z);

struct TestStat {
    double stat = 0.0;
    double dof = 0.0;
};

/// Likelihood-ratio (G) statistic for an r x c contingency table of counts.
TestStat g_test(const std::vector<std::vector<double>>& counts);

/// Kruskal-Wallis H statistic (tie-corrected) across groups of real values.
TestStat kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Pooled two-proportion z-test, two-sided p-value.
double two_proportion_p(double x1, double n1, double x2, double n2);

/// One-sample proportion z-test against a fixed p0, two-sided p-value.
double one_proportion_p(double x, double n, double p0);

/// Fisher's method: combine independent p-values into one.
double fisher_combine(const std::vector<double>& pvalues);

/// Equal-frequency bin edges (bin count effective <= bins); returns the bin
/// index per value.
std::vector<int> equal_frequency_bins(const std::vector<double>& values, int bins);

}  // namespace stats
}  // namespace fairdag
