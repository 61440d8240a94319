#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace akbeam {

/// One uniformly distributed input variable.
struct DesignVariable {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
};

/// Rectangular design space of independent uniform variables.
struct DesignSpace {
    std::vector<DesignVariable> variables;

    int dimension() const { return static_cast<int>(variables.size()); }

    /// Throws ConfigError unless lower < upper for every variable and m >= 1.
    void validate() const;

    bool contains(const Eigen::VectorXd& x) const;
};

enum class SampleScheme { lhs, grid, mc };

/// A batch of sample points in physical coordinates (one row per point).
struct SampleSet {
    Eigen::MatrixXd points;  // n x m
    std::uint64_t seed = 0;
    SampleScheme scheme = SampleScheme::lhs;

    int size() const { return static_cast<int>(points.rows()); }
    Eigen::VectorXd row(int i) const { return points.row(i).transpose(); }
};

/// Latin Hypercube sample of n points: per dimension, exactly one point in
/// each of the n equal-probability strata, placed uniformly at random within
/// its stratum. Strata are paired across dimensions by independent random
/// permutations (Stein 1987). Deterministic given (n, space, seed).
SampleSet lhs(int n, const DesignSpace& space, std::uint64_t seed);

/// Full tensor grid including bound endpoints. Row-major ordering: the last
/// dimension varies fastest.
SampleSet grid(const DesignSpace& space, const std::vector<int>& resolution);

/// Isoprobabilistic transform u_k = Phi^-1((x_k - a_k)/(b_k - a_k)).
///
/// Coordinates with (x-a)/(b-a) outside (eps, 1-eps), eps = 1e-12, are
/// clamped to the boundary of that interval; *clamped (if given) is set when
/// any coordinate was clamped.
Eigen::VectorXd to_standard_normal(const Eigen::VectorXd& x,
                                   const DesignSpace& space,
                                   bool* clamped = nullptr);

/// Inverse map x_k = a_k + (b_k - a_k) * Phi(u_k).
Eigen::VectorXd from_standard_normal(const Eigen::VectorXd& u,
                                     const DesignSpace& space);

/// CSV export with a header row of variable names; import expects the same.
void save_sample_csv(const SampleSet& set, const DesignSpace& space,
                     const std::string& path);
SampleSet load_sample_csv(const std::string& path, const DesignSpace& space);

}  // namespace akbeam
