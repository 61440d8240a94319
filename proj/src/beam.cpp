#include "akbeam/beam.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "akbeam/errors.hpp"

namespace akbeam {

namespace {

// Loads closer than this to a support or another load act at that anchor
// node; keeps element lengths bounded away from zero.
constexpr double anchor_merge_tol = 1e-4;
constexpr double min_element_length = 1e-4;

std::string describe_position(double x) {
    std::ostringstream ss;
    ss << x << " m";
    return ss.str();
}

}  // namespace

void BeamConfig::validate() const {
    if (total_length <= 0.0)
        throw ConfigError("beam.total_length must be > 0");
    if (fixed_supports.size() < 2)
        throw ConfigError("beam.fixed_supports: need at least the two ends");
    for (double s : fixed_supports)
        if (s < 0.0 || s > total_length)
            throw PositionOutOfDomain("fixed support at " +
                                      describe_position(s));
    const double lo = *std::min_element(fixed_supports.begin(),
                                        fixed_supports.end());
    const double hi = *std::max_element(fixed_supports.begin(),
                                        fixed_supports.end());
    if (lo != 0.0 || hi != total_length)
        throw ConfigError("beam.fixed_supports must include 0 and total_length");
    if (movable_support_count < 0)
        throw ConfigError("beam.movable_support_count must be >= 0");
    for (const auto& load : loads)
        if (load.position < 0.0 || load.position > total_length)
            throw PositionOutOfDomain("load at " +
                                      describe_position(load.position));
    if (elastic_modulus <= 0.0 || shear_modulus <= 0.0 || area <= 0.0 ||
        inertia <= 0.0 || shear_correction <= 0.0)
        throw ConfigError("beam stiffness parameters must be > 0");
    if (elements_per_span_min < 4)
        throw ConfigError("beam.elements_per_span_min must be >= 4");
}

BeamSystem build_system(const BeamConfig& config,
                        const std::vector<double>& pier_positions) {
    config.validate();
    if (static_cast<int>(pier_positions.size()) != config.movable_support_count)
        throw ConfigError("pier position count does not match "
                          "beam.movable_support_count");

    for (double p : pier_positions)
        if (!(p > 0.0 && p < config.total_length))
            throw PositionOutOfDomain("pier at " + describe_position(p));

    std::vector<double> supports = config.fixed_supports;
    supports.insert(supports.end(), pier_positions.begin(),
                    pier_positions.end());
    std::sort(supports.begin(), supports.end());
    for (std::size_t i = 1; i < supports.size(); ++i) {
        if (supports[i] - supports[i - 1] < BeamConfig::min_support_gap)
            throw PierTooClose("supports at " +
                               describe_position(supports[i - 1]) + " and " +
                               describe_position(supports[i]) +
                               " are closer than the 0.05 m minimum gap");
    }

    BeamSystem sys;
    sys.config = config;
    sys.support_positions = supports;

    // Anchor points: supports (kept exact) plus load positions that are not
    // within the merge tolerance of an existing anchor.
    std::vector<double> anchors = supports;
    for (const auto& load : config.loads) {
        bool merged = false;
        for (double a : anchors)
            if (std::abs(a - load.position) <= anchor_merge_tol) {
                merged = true;
                break;
            }
        if (!merged) anchors.push_back(load.position);
    }
    std::sort(anchors.begin(), anchors.end());

    // Elements per anchor segment: each span's budget is split evenly over
    // however many segments the span contains, so the element count depends
    // only on the anchor structure, never on the segment lengths. Node
    // positions therefore vary continuously with the pier positions.
    std::vector<double> nodes;
    std::size_t ai = 0;
    for (std::size_t s = 0; s + 1 < supports.size(); ++s) {
        const double span_end = supports[s + 1];
        std::size_t a_begin = ai;
        while (ai + 1 < anchors.size() && anchors[ai + 1] <= span_end) ++ai;
        const int segments = static_cast<int>(ai - a_begin);
        const int per_segment =
            (config.elements_per_span_min + segments - 1) / segments;
        for (std::size_t a = a_begin; a < ai; ++a) {
            const double x0 = anchors[a];
            const double x1 = anchors[a + 1];
            const int n_e = std::clamp(
                static_cast<int>((x1 - x0) / min_element_length), 1,
                per_segment);
            for (int e = 0; e < n_e; ++e)
                nodes.push_back(x0 + (x1 - x0) * e / n_e);
        }
    }
    nodes.push_back(config.total_length);
    sys.nodes = std::move(nodes);

    auto node_at = [&](double x) {
        auto it = std::lower_bound(sys.nodes.begin(), sys.nodes.end(), x);
        int best = -1;
        double best_dist = anchor_merge_tol * (1.0 + 1e-9);
        for (auto probe : {it, it == sys.nodes.begin() ? it : std::prev(it)}) {
            if (probe == sys.nodes.end()) continue;
            const double dist = std::abs(*probe - x);
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(probe - sys.nodes.begin());
            }
        }
        if (best < 0)
            throw Error("internal meshing error: no node at " +
                        describe_position(x));
        return best;
    };
    for (double s : supports) sys.support_nodes.push_back(node_at(s));
    for (const auto& load : config.loads)
        sys.node_loads.emplace_back(node_at(load.position), load.magnitude);
    return sys;
}

Eigen::VectorXd solve(const BeamSystem& system) {
    const int n_nodes = system.node_count();
    if (system.support_nodes.size() < 2)
        throw ConfigError("beam needs at least two supports");

    const BeamConfig& c = system.config;
    const double EI = c.elastic_modulus * c.inertia;
    const double GAs = c.shear_modulus * c.shear_correction * c.area;

    // DOF map: (w, theta) per node, with w eliminated at supports.
    std::vector<int> w_dof(n_nodes), t_dof(n_nodes);
    std::vector<bool> pinned(n_nodes, false);
    for (int sn : system.support_nodes) pinned[sn] = true;
    int n_dof = 0;
    for (int i = 0; i < n_nodes; ++i) {
        w_dof[i] = pinned[i] ? -1 : n_dof++;
        t_dof[i] = n_dof++;
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(16 * (n_nodes - 1));
    for (int e = 0; e + 1 < n_nodes; ++e) {
        const double L = system.nodes[e + 1] - system.nodes[e];
        const double phi = (c.theory == BeamTheory::euler_bernoulli)
                               ? 0.0
                               : 12.0 * EI / (GAs * L * L);
        const double k0 = EI / ((1.0 + phi) * L * L * L);
        const double L2 = L * L;
        // Exact (shear-locking-free) 2-node stiffness; phi = 0 recovers the
        // Euler-Bernoulli element.
        double ke[4][4] = {
            {12.0 * k0, 6.0 * L * k0, -12.0 * k0, 6.0 * L * k0},
            {6.0 * L * k0, (4.0 + phi) * L2 * k0, -6.0 * L * k0,
             (2.0 - phi) * L2 * k0},
            {-12.0 * k0, -6.0 * L * k0, 12.0 * k0, -6.0 * L * k0},
            {6.0 * L * k0, (2.0 - phi) * L2 * k0, -6.0 * L * k0,
             (4.0 + phi) * L2 * k0}};
        const int dofs[4] = {w_dof[e], t_dof[e], w_dof[e + 1], t_dof[e + 1]};
        for (int a = 0; a < 4; ++a) {
            if (dofs[a] < 0) continue;
            for (int b = 0; b < 4; ++b) {
                if (dofs[b] < 0) continue;
                triplets.emplace_back(dofs[a], dofs[b], ke[a][b]);
            }
        }
    }

    Eigen::SparseMatrix<double> K(n_dof, n_dof);
    K.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dof);
    for (const auto& [node, magnitude] : system.node_loads) {
        if (w_dof[node] >= 0) f[w_dof[node]] += magnitude;
        // a load exactly on a support goes straight into the reaction
    }

    Eigen::VectorXd result = Eigen::VectorXd::Zero(n_nodes);
    if (f.isZero(0.0)) return result;

    // Symmetric Jacobi scaling equalizes the w/theta scales before
    // factorizing.
    Eigen::VectorXd d = K.diagonal();
    if ((d.array() <= 0.0).any())
        throw SingularStiffness("non-positive stiffness diagonal");
    Eigen::VectorXd s = d.array().sqrt().inverse();
    Eigen::SparseMatrix<double> Ks = s.asDiagonal() * K * s.asDiagonal();

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Ks);
    if (llt.info() != Eigen::Success)
        throw SingularStiffness("stiffness factorization failed");

    Eigen::VectorXd bs = s.asDiagonal() * f;
    Eigen::VectorXd xs = llt.solve(bs);
    for (int iter = 0; iter < 2; ++iter)
        xs += llt.solve(bs - Ks * xs);
    Eigen::VectorXd x = s.asDiagonal() * xs;

    // Normwise backward error of the reduced system.
    const double residual =
        (K * x - f).norm() / (K.norm() * x.norm() + f.norm());
    if (!(residual <= 1e-10))
        throw SingularStiffness("stiffness solve residual " +
                                std::to_string(residual) + " exceeds 1e-10");

    for (int i = 0; i < n_nodes; ++i)
        if (w_dof[i] >= 0) result[i] = x[w_dof[i]];
    return result;
}

double max_deflection(const BeamSystem& system) {
    const Eigen::VectorXd w = solve(system);
    return std::max(0.0, w.maxCoeff());
}

double deflection_limit(const LimitStateConfig& lsc, const BeamSystem& system,
                        const std::vector<double>& pier_positions) {
    switch (lsc.rule) {
        case LimitRule::fixed_value:
            return lsc.fixed_value;
        case LimitRule::first_span_over_400:
            if (pier_positions.empty())
                throw ConfigError("first_span_over_400 needs a movable pier");
            return pier_positions.front() / 400.0;
        case LimitRule::span_max_over_400: {
            double longest = 0.0;
            const auto& sup = system.support_positions;
            for (std::size_t i = 1; i < sup.size(); ++i)
                longest = std::max(longest, sup[i] - sup[i - 1]);
            return longest / 400.0;
        }
    }
    throw ConfigError("unknown limit rule");
}

SimResult evaluate_design(const BeamConfig& config, const LimitStateConfig& lsc,
                          const std::vector<double>& x) {
    BeamSystem sys = build_system(config, x);
    SimResult r;
    r.q = max_deflection(sys);
    r.g = deflection_limit(lsc, sys, x) - r.q;
    return r;
}

double limit_state(const BeamConfig& config, const LimitStateConfig& lsc,
                   const std::vector<double>& x) {
    return evaluate_design(config, lsc, x).g;
}

SimResult BeamSimulator::evaluate(const Eigen::VectorXd& x) const {
    std::vector<double> piers(x.data(), x.data() + x.size());
    return evaluate_design(config_, lsc_, piers);
}

SimulatorFn BeamSimulator::simulator() const {
    return [*this](const Eigen::VectorXd& x) { return evaluate(x); };
}

LimitStateFn BeamSimulator::limit_state_fn() const {
    return [*this](const Eigen::VectorXd& x) { return evaluate(x).g; };
}

}  // namespace akbeam
