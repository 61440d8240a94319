#include "akbeam/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "akbeam/errors.hpp"
#include "akbeam/pck.hpp"
#include "akbeam/stats.hpp"

namespace akbeam {

namespace {

constexpr double kExclusionTol = 1e-9;
constexpr std::uint64_t kPoolTag = 0x504f4f4cULL;    // pool LHS stream
constexpr std::uint64_t kDoeTag = 0x444f45ULL;       // initial DoE stream
constexpr std::uint64_t kStaticTag = 0x535441ULL;    // static-study designs
constexpr std::uint64_t kLoopSubsetTag = 0x414c5353ULL;  // in-loop subset seed

}  // namespace

void ALConfig::validate() const {
    if (!(eps_pf > 0.0)) throw ConfigError("al.eps_pf must be > 0");
    if (consecutive_required < 1)
        throw ConfigError("al.consecutive_required must be >= 1");
    if (batch < 1) throw ConfigError("al.batch must be >= 1");
    if (pool_size < 1) throw ConfigError("al.pool_size must be >= 1");
    subset.validate();
}

int initial_doe_size(int dimension) {
    if (dimension < 1) throw ConfigError("dimension must be >= 1");
    return std::max(2 * dimension, 10);
}

double u_function(const Prediction& pred, double process_variance) {
    const double std_dev = std::sqrt(std::max(0.0, pred.variance));
    if (std_dev < 1e-12 * std::sqrt(std::max(0.0, process_variance)))
        return std::numeric_limits<double>::infinity();
    return std::abs(pred.mean) / std_dev;
}

Selection select_next(const KrigingModel& model, const SampleSet& pool,
                      const Eigen::MatrixXd& exclusions) {
    Eigen::VectorXd means, variances;
    model.predict_batch(pool.points, means, variances);

    Selection best;
    double best_u = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pool.size(); ++i) {
        bool excluded = false;
        for (int e = 0; e < exclusions.rows() && !excluded; ++e)
            excluded = (pool.points.row(i) - exclusions.row(e))
                           .cwiseAbs()
                           .maxCoeff() < kExclusionTol;
        if (excluded) continue;
        const double u =
            u_function({means[i], variances[i], false}, model.sigma2());
        if (u < best_u) {
            best_u = u;
            best.pool_index = i;
            best.x = pool.row(i);
            best.u = u;
        }
    }
    if (best.pool_index < 0)
        throw PoolExhausted("no pool candidate left after exclusions");
    return best;
}

bool converged(const std::vector<double>& pf_history, double eps_pf, int k) {
    const int n = static_cast<int>(pf_history.size());
    if (n < k + 1) return false;
    for (int i = n - k; i < n; ++i) {
        const double curr = pf_history[i];
        const double prev = pf_history[i - 1];
        if (curr == 0.0) {
            if (prev != 0.0) return false;
            continue;  // 0 -> 0 counts as stable
        }
        if (std::abs(curr - prev) / curr > eps_pf) return false;
    }
    return true;
}

KrigingModel fit_surrogate(const DesignOfExperiments& doe,
                           const DesignSpace& space, const SurrogateConfig& cfg,
                           bool* pck_truncated) {
    if (pck_truncated) *pck_truncated = false;
    if (cfg.kind == SurrogateKind::pck) {
        PCKModel pck = fit_pck(doe, space, cfg.pck_degree, cfg.correlation);
        if (pck_truncated) *pck_truncated = pck.truncated;
        return pck.model;
    }
    return fit(doe, space, cfg.trend, cfg.correlation);
}

ALResult run_active_learning(const SimulatorFn& simulator,
                             const DesignSpace& space, const ALConfig& cfg) {
    cfg.validate();
    const int m = space.dimension();
    const int n_init = initial_doe_size(m);
    if (cfg.max_calls < n_init)
        throw ConfigError("al.max_calls must cover the initial DoE of " +
                          std::to_string(n_init) + " points");

    const SampleSet init = lhs(n_init, space, Rng::derive(cfg.seed, kDoeTag));
    DesignOfExperiments doe;
    doe.inputs = init.points;
    doe.outputs.resize(n_init);
    for (int i = 0; i < n_init; ++i)
        doe.outputs[i] = simulator(init.row(i)).g;
    int n_calls = n_init;

    // Fixed pool and a fixed subset seed across iterations, so the stability
    // criterion measures surrogate change rather than sampling noise.
    const SampleSet pool =
        lhs(cfg.pool_size, space, Rng::derive(cfg.seed, kPoolTag));
    SubsetConfig subset_cfg = cfg.subset;
    subset_cfg.seed = Rng::derive(cfg.seed, kLoopSubsetTag);

    ALResult result;
    std::vector<double> pf_history;

    for (int iteration = 1;; ++iteration) {
        bool truncated = false;
        result.model = fit_surrogate(doe, space, cfg.surrogate, &truncated);
        result.pck_truncated = truncated;

        const KrigingModel& model = result.model;
        SubsetResult sub = subset_pf(
            [&](const Eigen::VectorXd& x) { return model.predict(x).mean; },
            space, subset_cfg);
        pf_history.push_back(sub.estimate.pf);
        result.pf = sub.estimate;

        IterationRecord rec;
        rec.iteration = iteration;
        rec.n_calls = n_calls;
        rec.pf = sub.estimate.pf;
        if (iteration > 1) {
            const double curr = pf_history[iteration - 1];
            const double prev = pf_history[iteration - 2];
            rec.rel_change = curr != 0.0
                                 ? std::abs(curr - prev) / curr
                                 : (prev == 0.0 ? 0.0
                                                : std::numeric_limits<
                                                      double>::infinity());
        }

        if (converged(pf_history, cfg.eps_pf, cfg.consecutive_required)) {
            result.trace.iterations.push_back(rec);
            result.trace.status = ALStatus::converged;
            break;
        }
        if (n_calls + cfg.batch > cfg.max_calls) {
            result.trace.iterations.push_back(rec);
            result.trace.status = ALStatus::budget_exhausted;
            break;
        }

        for (int b = 0; b < cfg.batch; ++b) {
            const Selection sel = select_next(result.model, pool, doe.inputs);
            if (b == 0) {
                rec.x_next = sel.x;
                rec.u_next = sel.u;
            }
            doe.append(sel.x, simulator(sel.x).g);
            ++n_calls;
        }
        result.trace.iterations.push_back(rec);
    }

    result.doe = doe;
    return result;
}

std::vector<StaticStudyRow> static_study(const SimulatorFn& simulator,
                                         const DesignSpace& space,
                                         const std::vector<int>& sizes,
                                         const SurrogateConfig& surrogate,
                                         const SubsetConfig& subset,
                                         double pf_ref, std::uint64_t seed) {
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] < sizes[i - 1])
            throw ConfigError("static_study: sizes must be ascending");

    std::vector<StaticStudyRow> rows;
    for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
        const int n = sizes[idx];
        StaticStudyRow row;
        row.n = n;
        row.calls = n;
        // independent design per size: stream keyed by the size index
        const SampleSet design =
            lhs(n, space, Rng::derive(seed, kStaticTag, idx));
        DesignOfExperiments doe;
        doe.inputs = design.points;
        doe.outputs.resize(n);
        for (int i = 0; i < n; ++i)
            doe.outputs[i] = simulator(design.row(i)).g;
        try {
            const KrigingModel model =
                fit_surrogate(doe, space, surrogate, nullptr);
            SubsetConfig sub_cfg = subset;
            sub_cfg.seed = Rng::derive(seed, kStaticTag, idx, 1);
            const SubsetResult sub = subset_pf(
                [&](const Eigen::VectorXd& x) {
                    return model.predict(x).mean;
                },
                space, sub_cfg);
            row.pf = sub.estimate.pf;
            row.e_pf = relative_error(row.pf, pf_ref);
        } catch (const RankDeficientTrend&) {
            row.error = "RankDeficientTrend";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace akbeam
