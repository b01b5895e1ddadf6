#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace raas::analytics {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for a binomial proportion. trials must be positive.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Ranks starting at 1, ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

struct Correlation {
    double rho = 0.0;
    double p_value = 1.0;  // two-sided
    std::size_t n = 0;
};

/// Pearson correlation of the average ranks, with the t-approximation
/// p-value on n - 2 degrees of freedom. Fewer than 3 points or a constant
/// input give rho 0 and p 1.
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// Upper-tail p-value of Pearson's chi-square statistic on k - 1 degrees
/// of freedom. Bins with zero expectation are skipped.
double chi_square_p(std::span<const double> observed, std::span<const double> expected);

}  // namespace raas::analytics
