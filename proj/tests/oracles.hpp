#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::filesystem::path data_dir() { return MICROMAP_TEST_DATA_DIR; }
inline std::filesystem::path figures_dir() { return MICROMAP_TEST_FIGURES_DIR; }

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// ─── Lowess by brute force ──────────────────────────────────────────────────
//
// For every point: rank all points by (distance, input index), keep the r nearest, weight
// them by tricube(d / dmax) times the robustness weight, and solve the 2x2 weighted normal
// equations with Cramer's rule. Robustness passes use bisquare(res / (6 * median |res|)).

inline double tricube(double u)
{
    u = std::abs(u);
    if (u >= 1.0)
        return 0.0;
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

inline double bisquare(double u)
{
    u = std::abs(u);
    if (u >= 1.0)
        return 0.0;
    const double t = 1.0 - u * u;
    return t * t;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::vector<double> lowess(const std::vector<double>& x, const std::vector<double>& y, double span, int iters)
{
    const std::size_t n = x.size();
    std::size_t r = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n) - 1e-9));
    r = std::clamp<std::size_t>(r, 2, n);
    const double xr = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
    const double yr = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());

    std::vector<double> rob(n, 1.0), fit(n);
    for (int it = 0; it <= iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<double, std::size_t>> by_dist;
            for (std::size_t j = 0; j < n; ++j)
                by_dist.push_back({std::abs(x[j] - x[i]), j});
            std::sort(by_dist.begin(), by_dist.end());
            by_dist.resize(r);
            const double h = by_dist.back().first;

            double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
            for (const auto& [d, j] : by_dist) {
                const double w = (h > 0 ? tricube(d / h) : 1.0) * rob[j];
                s0 += w;
                s1 += w * x[j];
                s2 += w * x[j] * x[j];
                t0 += w * y[j];
                t1 += w * x[j] * y[j];
            }
            if (!(s0 > 0)) {
                fit[i] = y[i];
                continue;
            }
            const double det = s0 * s2 - s1 * s1;
            if (det <= 1e-14 * s0 * s0 * xr * xr) {
                fit[i] = t0 / s0;
                continue;
            }
            const double a = (t0 * s2 - s1 * t1) / det;
            const double b = (s0 * t1 - s1 * t0) / det;
            fit[i] = a + b * x[i];
        }
        if (it == iters)
            break;
        std::vector<double> res(n);
        for (std::size_t i = 0; i < n; ++i)
            res[i] = std::abs(y[i] - fit[i]);
        const double cmad = 6.0 * median(res);
        if (cmad <= 1e-12 * yr || yr == 0.0)
            break;
        for (std::size_t i = 0; i < n; ++i)
            rob[i] = bisquare(res[i] / cmad);
    }
    return fit;
}

// ─── PCA through a cyclic Jacobi eigensolver ────────────────────────────────

using Matrix = std::vector<std::vector<double>>;

// Eigenpairs of a symmetric matrix, eigenvalues descending; vectors are columns of `vecs`.
inline void jacobi(Matrix a, std::vector<double>& vals, Matrix& vecs)
{
    const std::size_t p = a.size();
    vecs.assign(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i)
        vecs[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j)
                off += a[i][j] * a[i][j];
        if (off < 1e-30)
            break;
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = k + 1; l < p; ++l) {
                if (std::abs(a[k][l]) < 1e-300)
                    continue;
                const double theta = (a[l][l] - a[k][k]) / (2.0 * a[k][l]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t m = 0; m < p; ++m) {
                    const double akm = a[k][m], alm = a[l][m];
                    a[k][m] = c * akm - s * alm;
                    a[l][m] = s * akm + c * alm;
                }
                for (std::size_t m = 0; m < p; ++m) {
                    const double amk = a[m][k], aml = a[m][l];
                    a[m][k] = c * amk - s * aml;
                    a[m][l] = s * amk + c * aml;
                }
                for (std::size_t m = 0; m < p; ++m) {
                    const double vmk = vecs[m][k], vml = vecs[m][l];
                    vecs[m][k] = c * vmk - s * vml;
                    vecs[m][l] = s * vmk + c * vml;
                }
            }
    }
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
    Matrix sorted(p, std::vector<double>(p));
    vals.clear();
    for (std::size_t c = 0; c < p; ++c) {
        vals.push_back(a[idx[c]][idx[c]]);
        for (std::size_t m = 0; m < p; ++m)
            sorted[m][c] = vecs[m][idx[c]];
    }
    vecs = sorted;
}

// `columns[j][i]` is variable j of row i.
inline std::vector<double> pca_scores(const Matrix& columns, int k)
{
    const std::size_t p = columns.size(), n = columns[0].size();
    Matrix z = columns;
    for (auto& col : z) {
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0;
        for (double& v : col) {
            v -= mean;
            ss += v * v;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        for (double& v : col)
            v /= sd;
    }
    Matrix corr(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            for (std::size_t i = 0; i < n; ++i)
                corr[a][b] += z[a][i] * z[b][i];
            corr[a][b] /= static_cast<double>(n - 1);
        }
    std::vector<double> vals;
    Matrix vecs;
    jacobi(corr, vals, vecs);
    std::vector<double> v(p);
    for (std::size_t m = 0; m < p; ++m)
        v[m] = vecs[m][static_cast<std::size_t>(k - 1)];
    for (double e : v)
        if (std::abs(e) > 1e-12) {
            if (e < 0)
                for (double& q : v)
                    q = -q;
            break;
        }
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < p; ++m)
            scores[i] += z[m][i] * v[m];
    return scores;
}

// ─── SVG structure check ────────────────────────────────────────────────────

// Returns an error description, or nothing when the document is well-formed XML that uses
// only the expected SVG elements.
inline std::optional<std::string> check_svg(const std::string& doc)
{
    static const std::set<std::string> known = {"svg", "g", "rect", "line", "polyline", "polygon", "circle", "path", "text"};
    std::vector<std::string> stack;
    std::size_t i = 0;
    if (doc.rfind("<?xml", 0) == 0) {
        i = doc.find("?>");
        if (i == std::string::npos)
            return "unterminated declaration";
        i += 2;
    }
    bool seen_root = false;
    const auto check_text = [](const std::string& t) -> std::optional<std::string> {
        for (std::size_t k = 0; k < t.size(); ++k)
            if (t[k] == '&') {
                const auto semi = t.find(';', k);
                const std::string ent = semi == std::string::npos ? "" : t.substr(k, semi - k + 1);
                if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
                    return "bad entity near " + t.substr(k, 10);
            }
        return std::nullopt;
    };
    while (i < doc.size()) {
        const auto lt = doc.find('<', i);
        const std::string text = doc.substr(i, lt == std::string::npos ? std::string::npos : lt - i);
        if (auto e = check_text(text))
            return e;
        if (text.find('>') != std::string::npos)
            return "stray '>'";
        if (stack.empty() && text.find_first_not_of(" \t\r\n") != std::string::npos)
            return "text outside root";
        if (lt == std::string::npos)
            break;
        const auto gt = doc.find('>', lt);
        if (gt == std::string::npos)
            return "unterminated tag";
        std::string tag = doc.substr(lt + 1, gt - lt - 1);
        i = gt + 1;
        if (tag.rfind("!--", 0) == 0)
            continue;
        if (!tag.empty() && tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name)
                return "mismatched close " + name;
            stack.pop_back();
            continue;
        }
        const bool self_close = !tag.empty() && tag.back() == '/';
        if (self_close)
            tag.pop_back();
        const auto sp = tag.find_first_of(" \t\n");
        const std::string name = tag.substr(0, sp);
        if (!known.contains(name))
            return "unknown element " + name;
        if (stack.empty()) {
            if (seen_root)
                return "second root element";
            if (name != "svg")
                return "root is not svg";
            seen_root = true;
        }
        // attributes: name="value" pairs, unique names
        std::set<std::string> attrs;
        std::size_t a = sp == std::string::npos ? tag.size() : sp;
        while (a < tag.size()) {
            while (a < tag.size() && std::isspace(static_cast<unsigned char>(tag[a])))
                ++a;
            if (a >= tag.size())
                break;
            const auto eq = tag.find('=', a);
            if (eq == std::string::npos || eq + 1 >= tag.size() || tag[eq + 1] != '"')
                return "malformed attribute in " + name;
            const std::string an = tag.substr(a, eq - a);
            if (!attrs.insert(an).second)
                return "duplicate attribute " + an;
            const auto close = tag.find('"', eq + 2);
            if (close == std::string::npos)
                return "unterminated attribute in " + name;
            const std::string value = tag.substr(eq + 2, close - eq - 2);
            if (value.find('<') != std::string::npos)
                return "'<' inside attribute";
            if (auto e = check_text(value))
                return e;
            a = close + 1;
        }
        if (!self_close)
            stack.push_back(name);
    }
    if (!stack.empty())
        return "unclosed " + stack.back();
    if (!seen_root)
        return "no root";
    return std::nullopt;
}

// ─── Random data ────────────────────────────────────────────────────────────

struct Dataset {
    std::vector<double> x, y;
};

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> ux(0.0, 10.0), noise(-1.0, 1.0);
    std::bernoulli_distribution outlier(0.05);
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ux(rng);
        double y = std::sin(x) + 0.3 * x + 0.4 * noise(rng);
        if (outlier(rng))
            y += 5.0 * noise(rng);
        d.x.push_back(x);
        d.y.push_back(y);
    }
    return d;
}

}  // namespace oracle
