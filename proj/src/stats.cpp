#include "fairdag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fairdag {
namespace stats {

namespace {

// Regularized upper incomplete gamma Q(a, x), series/continued-fraction split.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P.
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        double lnp = -x + a * std::log(x) - std::lgamma(a);
        return 1.0 - sum * std::exp(lnp);
    }
    // Q(a,x) by Lentz continued fraction.
    double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    double lnp = -x + a * std::log(x) - std::lgamma(a);
    return std::exp(lnp) * h;
}

}  // namespace

double chi2_sf(double x, double k) {
    if (k <= 0.0) return 1.0;
    if (x <= 0.0) return 1.0;
    return gamma_q(k / 2.0, x / 2.0);
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

TestStat g_test(const std::vector<std::vector<double>>& counts) {
    std::size_t r = counts.size();
    std::size_t c = r ? counts[0].size() : 0;
    std::vector<double> row(r, 0.0), col(c, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            row[i] += counts[i][j];
            col[j] += counts[i][j];
            total += counts[i][j];
        }
    TestStat out;
    if (total <= 0.0) return out;
    std::size_t r_eff = 0, c_eff = 0;
    for (double v : row) r_eff += v > 0.0;
    for (double v : col) c_eff += v > 0.0;
    if (r_eff < 2 || c_eff < 2) return out;
    double g = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            if (counts[i][j] <= 0.0) continue;
            double expected = row[i] * col[j] / total;
            g += counts[i][j] * std::log(counts[i][j] / expected);
        }
    out.stat = 2.0 * g;
    out.dof = static_cast<double>((r_eff - 1) * (c_eff - 1));
    return out;
}

TestStat kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    struct Tagged {
        double value;
        std::size_t group;
    };
    std::vector<Tagged> all;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (double v : groups[g]) all.push_back({v, g});
    TestStat out;
    std::size_t n = all.size();
    std::size_t k = 0;
    for (auto& g : groups) k += !g.empty();
    if (n < 2 || k < 2) return out;

    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.value < b.value; });
    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && all[j].value == all[i].value) ++j;
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t m = i; m < j; ++m) rank_sum[all[m].group] += avg_rank;
        i = j;
    }
    double h = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) continue;
        double ng = static_cast<double>(groups[g].size());
        h += rank_sum[g] * rank_sum[g] / ng;
    }
    double dn = static_cast<double>(n);
    h = 12.0 / (dn * (dn + 1.0)) * h - 3.0 * (dn + 1.0);
    double correction = 1.0 - tie_term / (dn * dn * dn - dn);
    if (correction <= 0.0) return out;  // all values tied
    out.stat = h / correction;
    out.dof = static_cast<double>(k - 1);
    return out;
}

double two_proportion_p(double x1, double n1, double x2, double n2) {
    if (n1 <= 0.0 || n2 <= 0.0) return 1.0;
    double p1 = x1 / n1, p2 = x2 / n2;
    double pooled = (x1 + x2) / (n1 + n2);
    double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    if (se <= 0.0) return p1 == p2 ? 1.0 : 0.0;
    return normal_two_sided_p((p1 - p2) / se);
}

double one_proportion_p(double x, double n, double p0) {
    if (n <= 0.0) return 1.0;
    double se = std::sqrt(p0 * (1.0 - p0) / n);
    double phat = x / n;
    if (se <= 0.0) return phat == p0 ? 1.0 : 0.0;
    return normal_two_sided_p((phat - p0) / se);
}

double fisher_combine(const std::vector<double>& pvalues) {
    if (pvalues.empty()) return 1.0;
    double stat = 0.0;
    for (double p : pvalues)
        stat += -2.0 * std::log(std::max(p, std::numeric_limits<double>::min()));
    return chi2_sf(stat, 2.0 * static_cast<double>(pvalues.size()));
}

std::vector<int> equal_frequency_bins(const std::vector<double>& values, int bins) {
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<int> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int b = static_cast<int>((static_cast<unsigned long long>(i) * bins) / std::max<std::size_t>(n, 1));
        out[order[i]] = std::min(b, bins - 1);
    }
    // Keep tied values in one bin so strata are well defined.
    for (std::size_t i = 1; i < n; ++i)
        if (values[order[i]] == values[order[i - 1]])
            out[order[i]] = out[order[i - 1]];
    return out;
}

}  // namespace stats
}  // namespace fairdag
