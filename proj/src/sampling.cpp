#include "akbeam/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "akbeam/csv.hpp"
#include "akbeam/errors.hpp"
#include "akbeam/stats.hpp"

namespace akbeam {

void DesignSpace::validate() const {
    if (variables.empty())
        throw ConfigError("space.variables: at least one variable required");
    for (const auto& v : variables) {
        if (!(v.lower < v.upper))
            throw ConfigError("space.variables." + v.name +
                              ": lower must be < upper");
    }
}

bool DesignSpace::contains(const Eigen::VectorXd& x) const {
    if (x.size() != dimension()) return false;
    for (int k = 0; k < dimension(); ++k) {
        if (x[k] < variables[k].lower || x[k] > variables[k].upper)
            return false;
    }
    return true;
}

SampleSet lhs(int n, const DesignSpace& space, std::uint64_t seed) {
    space.validate();
    if (n < 1) throw ConfigError("lhs: n must be >= 1");
    const int m = space.dimension();
    SampleSet set;
    set.seed = seed;
    set.scheme = SampleScheme::lhs;
    set.points.resize(n, m);

    for (int k = 0; k < m; ++k) {
        // Independent per-dimension stream so dimensions can be generated
        // in any order (or in parallel) without changing the result.
        Rng rng(Rng::derive(seed, 0x4c4853 /* "LHS" */, k));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_index(i + 1));
            std::swap(perm[i], perm[j]);
        }
        const double a = space.variables[k].lower;
        const double width = space.variables[k].upper - a;
        for (int i = 0; i < n; ++i) {
            const double quantile = (perm[i] + rng.uniform()) / n;
            set.points(i, k) = a + width * quantile;
        }
    }
    return set;
}

SampleSet grid(const DesignSpace& space, const std::vector<int>& resolution) {
    space.validate();
    const int m = space.dimension();
    if (static_cast<int>(resolution.size()) != m)
        throw ConfigError("grid: resolution size must match dimension");
    long total = 1;
    for (int r : resolution) {
        if (r < 2) throw ConfigError("grid: each resolution must be >= 2");
        total *= r;
    }

    SampleSet set;
    set.scheme = SampleScheme::grid;
    set.points.resize(total, m);
    std::vector<int> idx(m, 0);
    for (long row = 0; row < total; ++row) {
        for (int k = 0; k < m; ++k) {
            const double a = space.variables[k].lower;
            const double b = space.variables[k].upper;
            set.points(row, k) =
                a + (b - a) * idx[k] / static_cast<double>(resolution[k] - 1);
        }
        // last dimension varies fastest
        for (int k = m - 1; k >= 0; --k) {
            if (++idx[k] < resolution[k]) break;
            idx[k] = 0;
        }
    }
    return set;
}

Eigen::VectorXd to_standard_normal(const Eigen::VectorXd& x,
                                   const DesignSpace& space, bool* clamped) {
    const int m = space.dimension();
    if (x.size() != m) throw ConfigError("to_standard_normal: dimension mismatch");
    constexpr double eps_cdf = 1e-12;
    if (clamped) *clamped = false;
    Eigen::VectorXd u(m);
    for (int k = 0; k < m; ++k) {
        const double a = space.variables[k].lower;
        const double b = space.variables[k].upper;
        double p = (x[k] - a) / (b - a);
        if (p < eps_cdf || p > 1.0 - eps_cdf) {
            p = std::clamp(p, eps_cdf, 1.0 - eps_cdf);
            if (clamped) *clamped = true;
        }
        u[k] = norm_ppf(p);
    }
    return u;
}

Eigen::VectorXd from_standard_normal(const Eigen::VectorXd& u,
                                     const DesignSpace& space) {
    const int m = space.dimension();
    if (u.size() != m)
        throw ConfigError("from_standard_normal: dimension mismatch");
    Eigen::VectorXd x(m);
    for (int k = 0; k < m; ++k) {
        const double a = space.variables[k].lower;
        const double b = space.variables[k].upper;
        x[k] = a + (b - a) * norm_cdf(u[k]);
    }
    return x;
}

void save_sample_csv(const SampleSet& set, const DesignSpace& space,
                     const std::string& path) {
    std::vector<std::string> header;
    for (const auto& v : space.variables) header.push_back(v.name);
    CsvWriter csv(header);
    for (int i = 0; i < set.size(); ++i) {
        std::vector<double> row(set.points.cols());
        for (int k = 0; k < set.points.cols(); ++k) row[k] = set.points(i, k);
        csv.add_row(row);
    }
    csv.write(path);
}

SampleSet load_sample_csv(const std::string& path, const DesignSpace& space) {
    CsvTable table = read_csv(path);
    const int m = space.dimension();
    if (static_cast<int>(table.header.size()) != m)
        throw ConfigError("sample CSV header does not match design space");
    SampleSet set;
    set.scheme = SampleScheme::mc;
    set.points.resize(table.rows.size(), m);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (int k = 0; k < m; ++k)
            set.points(i, k) = std::stod(table.rows[i][k]);
    return set;
}

}  // namespace akbeam
