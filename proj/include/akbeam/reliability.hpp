#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "akbeam/beam.hpp"
#include "akbeam/sampling.hpp"

namespace akbeam {

enum class ReliabilityMethod { mc, subset };

struct ReliabilityEstimate {
    double pf = 0.0;
    double cov = 0.0;  // coefficient of variation; infinity when pf == 0
    long n_evals = 0;
    ReliabilityMethod method = ReliabilityMethod::mc;
    int levels = 1;              // subset only
    std::uint64_t seed = 0;
    bool hit_max_levels = false;  // pf is the p0^max_levels resolution bound
};

struct SubsetConfig {
    double p0 = 0.1;
    int n_per_level = 1000;
    int max_levels = 8;
    double proposal_std = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Crude Monte Carlo over an LHS design: pf = #{g <= 0} / n.
ReliabilityEstimate mc_pf(const LimitStateFn& evaluator,
                          const DesignSpace& space, int n, std::uint64_t seed,
                          int threads = 1);

/// One classified sample of the reference study.
struct ReferenceRow {
    Eigen::VectorXd x;
    double q = 0.0;
    double g = 0.0;
    bool failed = false;
};

struct ReferenceStudy {
    ReliabilityEstimate estimate;
    std::vector<ReferenceRow> rows;
};

/// Reference failure probability from n full-simulator runs over an LHS
/// design, keeping the whole classified table for map rendering.
ReferenceStudy build_reference(const SimulatorFn& simulator,
                               const DesignSpace& space, int n,
                               std::uint64_t seed, int threads = 1);

/// Per-level diagnostics of one subset-simulation run.
struct SubsetLevel {
    double threshold = 0.0;
    double p_level = 0.0;
    double gamma = 0.0;  // chain-correlation factor in the cov estimate
};

struct SubsetResult {
    ReliabilityEstimate estimate;
    std::vector<SubsetLevel> level_info;
};

/// Subset simulation (Au & Beck 2001) in standard-normal space with
/// componentwise modified-Metropolis chains. Level thresholds sit at the
/// p0-quantile of g; terminates when the threshold reaches 0 or max_levels.
SubsetResult subset_pf(const LimitStateFn& evaluator, const DesignSpace& space,
                       const SubsetConfig& cfg);

/// E_Pf = |pf_ref - pf| / pf_ref; throws ZeroReference when pf_ref == 0.
double relative_error(double pf, double pf_ref);

}  // namespace akbeam
