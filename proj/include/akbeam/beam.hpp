#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace akbeam {

enum class BeamTheory { timoshenko, euler_bernoulli };

struct PointLoad {
    double position = 0.0;   // meters from the left end
    double magnitude = 0.0;  // newtons, downward positive
};

/// Geometry, supports, loads and section of the continuous beam.
struct BeamConfig {
    double total_length = 40.0;
    std::vector<double> fixed_supports = {0.0, 20.0, 40.0};
    int movable_support_count = 2;
    std::vector<PointLoad> loads = {{5.0, 5.0e5},
                                    {15.0, 5.0e5},
                                    {25.0, 5.0e5},
                                    {35.0, 5.0e5}};
    double elastic_modulus = 30.0e9;   // Pa
    double shear_modulus = 12.5e9;     // Pa
    double area = 0.6;                 // m^2
    double inertia = 0.05;             // m^4
    double shear_correction = 5.0 / 6.0;
    int elements_per_span_min = 32;
    BeamTheory theory = BeamTheory::timoshenko;

    /// Minimum admissible gap between any two supports, meters.
    static constexpr double min_support_gap = 0.05;

    void validate() const;
};

enum class LimitRule { first_span_over_400, fixed_value, span_max_over_400 };

struct LimitStateConfig {
    LimitRule rule = LimitRule::first_span_over_400;
    double fixed_value = 0.025;  // meters, used only when rule == fixed_value
};

/// Immutable meshed beam for one realization of the pier positions.
///
/// Every support and load position coincides exactly with a mesh node. The
/// node layout is a continuous function of the pier positions: each span is
/// cut at the load positions inside it, and every resulting segment is
/// divided uniformly into a number of elements that depends only on how many
/// segments the span contains, never on their lengths.
struct BeamSystem {
    BeamConfig config;
    std::vector<double> support_positions;  // sorted, fixed + movable
    std::vector<double> nodes;              // sorted mesh coordinates
    std::vector<int> support_nodes;         // node index of each support
    std::vector<std::pair<int, double>> node_loads;  // (node index, force)

    int node_count() const { return static_cast<int>(nodes.size()); }
};

/// Builds the meshed system; throws PierTooClose / PositionOutOfDomain.
BeamSystem build_system(const BeamConfig& config,
                        const std::vector<double>& pier_positions);

/// Solves K w = f with pinned supports eliminated; returns nodal deflections
/// (meters, downward positive), one per mesh node. Relative residual of the
/// reduced system is verified to be <= 1e-10.
Eigen::VectorXd solve(const BeamSystem& system);

/// Largest downward nodal deflection, >= 0.
double max_deflection(const BeamSystem& system);

/// Deflection limit L(x) for the given rule.
double deflection_limit(const LimitStateConfig& lsc, const BeamSystem& system,
                        const std::vector<double>& pier_positions);

struct SimResult {
    double q = 0.0;  // max deflection, meters
    double g = 0.0;  // limit state, meters; g <= 0 means failure
};

/// g(x) = L(x) - q(x) for one design point.
SimResult evaluate_design(const BeamConfig& config, const LimitStateConfig& lsc,
                          const std::vector<double>& x);

double limit_state(const BeamConfig& config, const LimitStateConfig& lsc,
                   const std::vector<double>& x);

/// Limit-state evaluator signature shared by the simulator and surrogates.
using LimitStateFn = std::function<double(const Eigen::VectorXd&)>;

/// Full-result simulator signature (deflection and limit state).
using SimulatorFn = std::function<SimResult(const Eigen::VectorXd&)>;

/// Bundles a beam configuration and limit-state rule into the pluggable
/// simulator interface used by the reliability and learning modules.
class BeamSimulator {
public:
    BeamSimulator(BeamConfig config, LimitStateConfig lsc)
        : config_(std::move(config)), lsc_(lsc) {
        config_.validate();
    }

    SimResult evaluate(const Eigen::VectorXd& x) const;

    SimulatorFn simulator() const;
    LimitStateFn limit_state_fn() const;

    const BeamConfig& config() const { return config_; }
    const LimitStateConfig& limit_config() const { return lsc_; }

private:
    BeamConfig config_;
    LimitStateConfig lsc_;
};

}  // namespace akbeam
