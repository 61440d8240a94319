#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "akbeam/beam.hpp"
#include "akbeam/kriging.hpp"
#include "akbeam/reliability.hpp"
#include "akbeam/sampling.hpp"

namespace akbeam {

enum class SurrogateKind { kriging, pck };

/// Surrogate settings shared by the learning loop and the static study.
struct SurrogateConfig {
    SurrogateKind kind = SurrogateKind::kriging;
    TrendSpec trend;           // kriging trends; ignored for pck
    int pck_degree = 4;        // pck total degree
    CorrelationSpec correlation;
};

struct ALConfig {
    SurrogateConfig surrogate;
    double eps_pf = 0.005;
    int consecutive_required = 3;
    int max_calls = 90;
    int pool_size = 10000;
    int batch = 1;
    SubsetConfig subset;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class ALStatus { converged, budget_exhausted };

struct IterationRecord {
    int iteration = 0;
    int n_calls = 0;
    double pf = 0.0;
    double rel_change = std::numeric_limits<double>::quiet_NaN();
    std::optional<Eigen::VectorXd> x_next;  // absent on the final iteration
    double u_next = std::numeric_limits<double>::quiet_NaN();
};

struct LearningTrace {
    std::vector<IterationRecord> iterations;
    ALStatus status = ALStatus::budget_exhausted;
};

struct ALResult {
    KrigingModel model;  // trend kind identifies kriging vs pck
    ReliabilityEstimate pf;
    LearningTrace trace;
    DesignOfExperiments doe;
    bool pck_truncated = false;
};

/// Initial design size n = max(2m, 10).
int initial_doe_size(int dimension);

/// Deviation number U = |mean| / std. Points whose predictive std collapsed
/// below 1e-12 * sqrt(process_variance) return +infinity (already resolved).
double u_function(const Prediction& pred, double process_variance);

/// Pool argmin of U, skipping points within 1e-9 of an existing DoE point;
/// ties break to the lowest pool index. Throws PoolExhausted.
struct Selection {
    int pool_index = -1;
    Eigen::VectorXd x;
    double u = 0.0;
};
Selection select_next(const KrigingModel& model, const SampleSet& pool,
                      const Eigen::MatrixXd& exclusions);

/// Stability stopping rule: true iff the last k relative changes
/// |pf_i - pf_{i-1}| / pf_i are all <= eps. A zero pf_i counts as satisfied
/// only when pf_{i-1} is zero too.
bool converged(const std::vector<double>& pf_history, double eps_pf, int k);

/// Runs the enrichment loop: LHS initial DoE, surrogate fit, subset
/// simulation on the surrogate mean, argmin-U enrichment, stability stop.
ALResult run_active_learning(const SimulatorFn& simulator,
                             const DesignSpace& space, const ALConfig& cfg);

struct StaticStudyRow {
    int n = 0;
    double pf = 0.0;
    double e_pf = 0.0;
    int calls = 0;
    std::string error;  // empty when the fit succeeded
};

/// Static sweep: one independent LHS design per size (seed offset by the
/// size index), fit, subset pf, E_Pf against the supplied reference.
std::vector<StaticStudyRow> static_study(const SimulatorFn& simulator,
                                         const DesignSpace& space,
                                         const std::vector<int>& sizes,
                                         const SurrogateConfig& surrogate,
                                         const SubsetConfig& subset,
                                         double pf_ref, std::uint64_t seed);

/// Fits the configured surrogate on a DoE (shared by run/static_study).
KrigingModel fit_surrogate(const DesignOfExperiments& doe,
                           const DesignSpace& space,
                           const SurrogateConfig& cfg, bool* pck_truncated);

}  // namespace akbeam
