#include "micromap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "micromap/model.hpp"

namespace micromap::stats {

double location_quotient(const LQInput& in)
{
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(in.emp_cat_area) || !finite(in.emp_total_area) || !finite(in.emp_cat_nat) || !finite(in.emp_total_nat))
        throw std::invalid_argument("location quotient inputs must be finite");
    if (in.emp_cat_area < 0 || in.emp_cat_nat < 0)
        throw std::invalid_argument("category employment must be non-negative");
    if (in.emp_total_area <= 0 || in.emp_total_nat <= 0)
        throw std::invalid_argument("total employment must be positive");
    if (in.emp_cat_area > in.emp_total_area || in.emp_cat_nat > in.emp_total_nat)
        throw std::invalid_argument("category employment exceeds total employment");
    if (in.emp_cat_nat == 0)
        throw std::domain_error("undefined LQ (national concentration zero)");

    const double local = in.emp_cat_area / in.emp_total_area;
    const double national = in.emp_cat_nat / in.emp_total_nat;
    return local / national;
}

std::vector<double> over_year_pct_change(std::span<const double> series, int lag)
{
    if (lag < 1)
        throw std::invalid_argument("lag must be at least 1");
    if (series.size() <= static_cast<std::size_t>(lag))
        throw std::invalid_argument("series must be longer than the lag");

    std::vector<double> out(series.size(), kMissing);
    for (std::size_t t = static_cast<std::size_t>(lag); t < series.size(); ++t) {
        const double base = series[t - static_cast<std::size_t>(lag)];
        const double now = series[t];
        if (is_missing(base) || is_missing(now) || base == 0.0)
            continue;
        out[t] = 100.0 * (now - base) / base;
    }
    return out;
}

double normal_two_sided_quantile(double level)
{
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    const boost::math::normal_distribution<double> z;
    return boost::math::quantile(z, 0.5 + level / 2.0);
}

Interval ci_from_prse(double mean, double prse, double level)
{
    if (!(prse >= 0.0))
        throw std::invalid_argument("prse must be non-negative");
    const double half = normal_two_sided_quantile(level) * (prse / 100.0) * std::abs(mean);
    return {mean - half, mean + half};
}

bool percentiles_ordered(const WageStatRow& r)
{
    return r.p10 <= r.p25 && r.p25 <= r.p50 && r.p50 <= r.p75 && r.p75 <= r.p90;
}

// ─── Lowess ─────────────────────────────────────────────────────────────────

std::size_t lowess_neighborhood_size(double span, std::size_t n)
{
    // The epsilon keeps spans like 2/3 of 9 points at 6 rather than 7.
    const double raw = std::ceil(span * static_cast<double>(n) - 1e-9);
    const auto r = static_cast<std::size_t>(std::max(raw, 2.0));
    return std::min(r, n);
}

double tricube(double u)
{
    const double a = std::abs(u);
    if (a >= 1.0)
        return 0.0;
    const double t = 1.0 - a * a * a;
    return t * t * t;
}

double bisquare(double u)
{
    const double a = std::abs(u);
    if (a >= 1.0)
        return 0.0;
    const double t = 1.0 - a * a;
    return t * t;
}

namespace {

double median_of(std::vector<double> v)
{
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (n % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

// One local fit at xs[i] over the sorted window [left, left + r).
double local_fit(std::span<const double> xs,
                 std::span<const double> ys,
                 std::span<const double> robustness,
                 std::size_t i,
                 std::size_t left,
                 std::size_t r,
                 double x_range)
{
    const double xi = xs[i];
    const double h = std::max(xi - xs[left], xs[left + r - 1] - xi);

    double sw = 0.0, swx = 0.0, swy = 0.0;
    std::vector<double> w(r);
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t j = left + k;
        const double dist = std::abs(xs[j] - xi);
        const double kernel = h > 0.0 ? tricube(dist / h) : 1.0;
        w[k] = kernel * robustness[j];
        sw += w[k];
        swx += w[k] * xs[j];
        swy += w[k] * ys[j];
    }
    if (!(sw > 0.0))
        return ys[i];

    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t j = left + k;
        const double dx = xs[j] - xbar;
        sxx += w[k] * dx * dx;
        sxy += w[k] * dx * (ys[j] - ybar);
    }
    // Weighted abscissas with (numerically) no spread: fall back to a local constant.
    if (sxx <= 1e-14 * sw * x_range * x_range)
        return ybar;
    return ybar + (sxy / sxx) * (xi - xbar);
}

}  // namespace

std::vector<double> lowess_fit(std::span<const double> x, std::span<const double> y, const LowessParams& params)
{
    const std::size_t n = x.size();
    if (y.size() != n)
        throw std::invalid_argument("lowess: x and y lengths differ");
    if (n < 3)
        throw std::invalid_argument("lowess: need at least 3 points");
    if (!(params.span > 0.0 && params.span <= 1.0))
        throw std::invalid_argument("lowess: span must lie in (0, 1]");
    if (params.robust_iters < 0)
        throw std::invalid_argument("lowess: robust_iters must be non-negative");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("lowess: inputs must be finite");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = x[order[k]];
        ys[k] = y[order[k]];
    }
    const double x_range = xs.back() - xs.front();
    if (x_range == 0.0)
        throw std::invalid_argument("lowess: degenerate abscissa");
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    const double y_range = *ymax - *ymin;

    const std::size_t r = lowess_neighborhood_size(params.span, n);
    std::vector<double> robustness(n, 1.0);
    std::vector<double> fitted(n);
    std::vector<double> abs_resid(n);

    for (int iter = 0; iter <= params.robust_iters; ++iter) {
        std::size_t left = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // Slide while the window's far-right neighbor is strictly closer than its left end.
            while (left + r < n && xs[i] - xs[left] > xs[left + r] - xs[i])
                ++left;
            fitted[i] = local_fit(xs, ys, robustness, i, left, r, x_range);
        }
        if (iter == params.robust_iters)
            break;

        for (std::size_t i = 0; i < n; ++i)
            abs_resid[i] = std::abs(ys[i] - fitted[i]);
        const double cmad = 6.0 * median_of(abs_resid);
        if (cmad <= 1e-12 * y_range || y_range == 0.0)
            break;
        for (std::size_t i = 0; i < n; ++i)
            robustness[i] = bisquare(abs_resid[i] / cmad);
    }

    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[order[k]] = fitted[k];
    return out;
}

std::vector<double> lowess_residuals(std::span<const double> x, std::span<const double> y, const LowessParams& params)
{
    std::vector<double> fit = lowess_fit(x, y, params);
    for (std::size_t i = 0; i < fit.size(); ++i)
        fit[i] = y[i] - fit[i];
    return fit;
}

// ─── PCA ────────────────────────────────────────────────────────────────────

std::vector<double> pca_scores(const std::vector<std::vector<double>>& columns,
                               int component,
                               std::span<const std::string> names)
{
    const auto p = static_cast<Eigen::Index>(columns.size());
    if (p == 0)
        throw std::invalid_argument("pca: no columns");
    if (component < 1 || component > p)
        throw std::invalid_argument("pca: component must lie in [1, number of columns]");
    const auto n = static_cast<Eigen::Index>(columns.front().size());
    if (n < 2)
        throw std::invalid_argument("pca: need at least 2 rows");

    const auto column_name = [&](Eigen::Index j) {
        return j < static_cast<Eigen::Index>(names.size()) ? names[static_cast<std::size_t>(j)]
                                                            : "#" + std::to_string(j + 1);
    };

    Eigen::MatrixXd z(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto& col = columns[static_cast<std::size_t>(j)];
        if (static_cast<Eigen::Index>(col.size()) != n)
            throw std::invalid_argument("pca: columns differ in length");
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = col[static_cast<std::size_t>(i)];
            if (!std::isfinite(v))
                throw std::invalid_argument("pca: missing or non-finite value in column " + column_name(j));
            z(i, j) = v;
        }
        const bool constant = (z.col(j).array() == z(0, j)).all();
        const double mean = z.col(j).mean();
        z.col(j).array() -= mean;
        const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n - 1));
        if (constant || !(sd > 0.0))
            throw std::invalid_argument("pca: zero-variance column " + column_name(j));
        z.col(j) /= sd;
    }

    const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n - 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("pca: eigen-decomposition failed");

    // Eigenvalues come back ascending.
    Eigen::VectorXd loading = eig.eigenvectors().col(p - component);
    for (Eigen::Index j = 0; j < p; ++j) {
        if (std::abs(loading(j)) > 1e-12) {
            if (loading(j) < 0)
                loading = -loading;
            break;
        }
    }

    const Eigen::VectorXd scores = z * loading;
    return {scores.data(), scores.data() + scores.size()};
}

}  // namespace micromap::stats
