#include "akbeam/pck.hpp"

#include <cmath>
#include <functional>

#include "akbeam/errors.hpp"

namespace akbeam {

double legendre_orthonormal(int k, double u) {
    // P_{j+1} = ((2j+1) u P_j - j P_{j-1}) / (j+1)
    double prev = 1.0;
    if (k == 0) return 1.0;
    double curr = u;
    for (int j = 1; j < k; ++j) {
        const double next = ((2 * j + 1) * u * curr - j * prev) / (j + 1);
        prev = curr;
        curr = next;
    }
    return std::sqrt(2.0 * k + 1.0) * curr;
}

std::vector<std::vector<int>> multi_index_set(int m, int p) {
    if (m < 1) throw ConfigError("multi_index_set: m must be >= 1");
    if (p < 0) throw ConfigError("multi_index_set: p must be >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> alpha(m, 0);
    for (int total = 0; total <= p; ++total) {
        // enumerate all alpha with |alpha| = total, lexicographic descending
        // in the first component
        std::function<void(int, int)> rec = [&](int k, int remaining) {
            if (k == m - 1) {
                alpha[k] = remaining;
                out.push_back(alpha);
                return;
            }
            for (int v = remaining; v >= 0; --v) {
                alpha[k] = v;
                rec(k + 1, remaining - v);
            }
        };
        rec(0, total);
    }
    return out;
}

Eigen::VectorXd pck_trend(const Eigen::VectorXd& x, const DesignSpace& space,
                          const std::vector<std::vector<int>>& indices) {
    const int m = space.dimension();
    if (x.size() != m) throw ConfigError("pck_trend: dimension mismatch");
    Eigen::VectorXd f(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        double v = 1.0;
        for (int k = 0; k < m; ++k) {
            const double a = space.variables[k].lower;
            const double b = space.variables[k].upper;
            const double u = 2.0 * (x[k] - a) / (b - a) - 1.0;
            v *= legendre_orthonormal(indices[j][k], u);
        }
        f[j] = v;
    }
    return f;
}

PCKModel fit_pck(const DesignOfExperiments& doe, const DesignSpace& space,
                 int p, const CorrelationSpec& corr) {
    const int n = doe.size();
    if (n < 2) throw RankDeficientTrend("fit_pck needs at least 2 points");

    TrendSpec trend;
    trend.kind = TrendKind::pce_legendre;
    trend.degree = p;
    trend.pce_indices = multi_index_set(doe.dimension(), p);

    PCKModel pck;
    if (static_cast<int>(trend.pce_indices.size()) > n - 1) {
        trend.pce_indices.resize(n - 1);  // keep the lowest graded-lex terms
        trend.truncated = true;
        pck.truncated = true;
    }
    pck.model = fit(doe, space, trend, corr);
    return pck;
}

}  // namespace akbeam
