#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace micromap::stats {

// ─── Location quotient ──────────────────────────────────────────────────────

struct LQInput {
    double emp_cat_area = 0.0;
    double emp_total_area = 0.0;
    double emp_cat_nat = 0.0;
    double emp_total_nat = 0.0;
};

/// (area category share) / (national category share).
/// Throws std::invalid_argument for negative counts, non-positive totals or a category
/// exceeding its total, and std::domain_error when national category employment is zero.
double location_quotient(const LQInput& in);

// ─── Change and intervals ───────────────────────────────────────────────────

/// out[t] = 100 (x[t] - x[t-lag]) / x[t-lag]; entries before `lag`, after a missing input,
/// or over a zero base are missing.
std::vector<double> over_year_pct_change(std::span<const double> series, int lag);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Two-sided standard normal quantile: z such that P(|Z| <= z) = level.
double normal_two_sided_quantile(double level);

/// Interval mean +/- z(level) * (prse / 100) * |mean|, reading prse as a percent
/// relative standard error.
Interval ci_from_prse(double mean, double prse, double level = 0.90);

// ─── Published wage percentiles ─────────────────────────────────────────────

struct WageStatRow {
    double mean = 0.0;
    double prse = 0.0;
    double p10 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p90 = 0.0;
};

bool percentiles_ordered(const WageStatRow& r);

// ─── Lowess ─────────────────────────────────────────────────────────────────

struct LowessParams {
    double span = 2.0 / 3.0;
    int robust_iters = 3;
};

/// Neighborhood size r = ceil(span * n), clamped to [2, n].
std::size_t lowess_neighborhood_size(double span, std::size_t n);

/// (1 - |u|^3)^3 inside the unit interval, zero at and beyond |u| = 1.
double tricube(double u);

/// (1 - u^2)^2 inside the unit interval, zero beyond.
double bisquare(double u);

/// Cleveland's locally weighted linear regression, evaluated at every input abscissa.
///
/// Each fit uses the r nearest neighbors in x (ties by input order) with tricube weights
/// scaled by the largest distance in that neighborhood. Each robustness pass reweights
/// points by bisquare(residual / (6 * median |residual|)). Output follows input order.
///
/// Throws std::invalid_argument for n < 3, mismatched lengths, non-finite inputs,
/// a span outside (0, 1], negative iterations, or identical abscissas ("degenerate abscissa").
std::vector<double> lowess_fit(std::span<const double> x, std::span<const double> y, const LowessParams& params = {});

/// y - lowess_fit(x, y).
std::vector<double> lowess_residuals(std::span<const double> x, std::span<const double> y, const LowessParams& params = {});

// ─── PCA ────────────────────────────────────────────────────────────────────

/// Scores on the k-th (1-based) principal component of the correlation matrix.
///
/// `columns` holds one vector per candidate variable, all of equal length (rows = regions).
/// Columns are centered and scaled to unit sample variance first. The eigenvector sign is
/// fixed so its first non-negligible loading is positive.
///
/// Throws std::invalid_argument for fewer than two rows, k outside [1, columns], missing
/// values, or a zero-variance column (message names the column).
std::vector<double> pca_scores(const std::vector<std::vector<double>>& columns,
                               int component,
                               std::span<const std::string> names = {});

}  // namespace micromap::stats
