#include "akbeam/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "akbeam/errors.hpp"
#include "akbeam/parallel.hpp"
#include "akbeam/stats.hpp"

namespace akbeam {

namespace {

constexpr std::uint64_t kSubsetTag = 0x535542534554ULL;

std::string point_to_string(const Eigen::VectorXd& x) {
    std::ostringstream ss;
    ss << "(";
    for (int k = 0; k < x.size(); ++k) ss << (k ? ", " : "") << x[k];
    ss << ")";
    return ss.str();
}

double mc_cov(double pf, long n) {
    if (pf <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt((1.0 - pf) / (static_cast<double>(n) * pf));
}

// Chain-correlation factor gamma of the Au-Beck cov estimate: indicator
// autocorrelation summed over lags within each chain.
double chain_gamma(const std::vector<char>& indicator,
                   const std::vector<int>& chain_len, double p) {
    if (chain_len.empty() || p <= 0.0 || p >= 1.0) return 0.0;
    const double r0 = p * (1.0 - p);
    const long n_total = static_cast<long>(indicator.size());
    const int t_max = *std::max_element(chain_len.begin(), chain_len.end());
    double gamma = 0.0;
    for (int lag = 1; lag < t_max; ++lag) {
        double sum = 0.0;
        long pairs = 0;
        std::size_t offset = 0;
        for (int len : chain_len) {
            for (int t = 0; t + lag < len; ++t) {
                sum += static_cast<double>(indicator[offset + t]) *
                       static_cast<double>(indicator[offset + t + lag]);
                ++pairs;
            }
            offset += len;
        }
        if (pairs == 0) break;
        const double r_lag = sum / pairs - p * p;
        gamma += 2.0 * (1.0 - static_cast<double>(lag) * chain_len.size() /
                                  n_total) *
                 (r_lag / r0);
    }
    return std::max(0.0, gamma);
}

}  // namespace

void SubsetConfig::validate() const {
    if (!(p0 > 0.0 && p0 < 1.0))
        throw ConfigError("subset.p0 must be in (0,1)");
    if (n_per_level * p0 < 10.0)
        throw ConfigError("subset.n_per_level * p0 must be >= 10");
    if (max_levels < 1) throw ConfigError("subset.max_levels must be >= 1");
    if (!(proposal_std > 0.0))
        throw ConfigError("subset.proposal_std must be > 0");
}

ReliabilityEstimate mc_pf(const LimitStateFn& evaluator,
                          const DesignSpace& space, int n, std::uint64_t seed,
                          int threads) {
    if (n < 1) throw ConfigError("mc_pf: n must be >= 1");
    const SampleSet samples = lhs(n, space, seed);
    std::vector<double> g(n);
    parallel_for(n, threads,
                 [&](long i) { g[i] = evaluator(samples.row(static_cast<int>(i))); });
    long failures = 0;
    for (double v : g)
        if (v <= 0.0) ++failures;

    ReliabilityEstimate est;
    est.pf = static_cast<double>(failures) / n;
    est.cov = mc_cov(est.pf, n);
    est.n_evals = n;
    est.method = ReliabilityMethod::mc;
    est.levels = 1;
    est.seed = seed;
    return est;
}

ReferenceStudy build_reference(const SimulatorFn& simulator,
                               const DesignSpace& space, int n,
                               std::uint64_t seed, int threads) {
    if (n < 1) throw ConfigError("build_reference: n must be >= 1");
    const SampleSet samples = lhs(n, space, seed);
    ReferenceStudy study;
    study.rows.resize(n);
    parallel_for(n, threads, [&](long i) {
        const Eigen::VectorXd x = samples.row(static_cast<int>(i));
        SimResult r;
        try {
            r = simulator(x);
        } catch (const Error& e) {
            throw Error("simulator failed at x = " + point_to_string(x) +
                        ": " + e.what());
        }
        study.rows[i] = {x, r.q, r.g, r.g <= 0.0};
    });

    long failures = 0;
    for (const auto& row : study.rows)
        if (row.failed) ++failures;
    study.estimate.pf = static_cast<double>(failures) / n;
    study.estimate.cov = mc_cov(study.estimate.pf, n);
    study.estimate.n_evals = n;
    study.estimate.method = ReliabilityMethod::mc;
    study.estimate.levels = 1;
    study.estimate.seed = seed;
    return study;
}

SubsetResult subset_pf(const LimitStateFn& evaluator, const DesignSpace& space,
                       const SubsetConfig& cfg) {
    cfg.validate();
    const int m = space.dimension();
    const int N = cfg.n_per_level;
    const int Ns = static_cast<int>(cfg.p0 * N);
    const double p_cond = static_cast<double>(Ns) / N;

    SubsetResult result;
    ReliabilityEstimate& est = result.estimate;
    est.method = ReliabilityMethod::subset;
    est.seed = cfg.seed;

    auto eval_physical = [&](const Eigen::VectorXd& u) {
        return evaluator(from_standard_normal(u, space));
    };

    // level 1: independent standard-normal samples
    Eigen::MatrixXd U(N, m);
    {
        Rng rng(Rng::derive(cfg.seed, kSubsetTag, 0, 0));
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < m; ++k) U(i, k) = rng.normal();
    }
    Eigen::VectorXd g(N);
    for (int i = 0; i < N; ++i) g[i] = eval_physical(U.row(i).transpose());
    est.n_evals = N;

    std::vector<int> chain_len;  // empty on the i.i.d. level
    double var_sum = 0.0;        // sum of per-level squared cov terms

    for (int level = 1;; ++level) {
        std::vector<int> order(N);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return g[a] < g[b]; });
        const double b = g[order[Ns - 1]];
        const bool final_level = b <= 0.0 || level == cfg.max_levels;
        const double threshold = b <= 0.0 ? 0.0 : b;

        long below = 0;
        for (int i = 0; i < N; ++i)
            if (g[i] <= threshold) ++below;
        const double p_level =
            b <= 0.0 ? static_cast<double>(below) / N : p_cond;

        std::vector<char> indicator(N);
        for (int i = 0; i < N; ++i) indicator[i] = g[i] <= threshold ? 1 : 0;
        const double gamma = chain_gamma(indicator, chain_len, p_level);

        SubsetLevel info;
        info.threshold = b;
        info.p_level = p_level;
        info.gamma = gamma;
        result.level_info.push_back(info);
        if (p_level > 0.0 && p_level < 1.0)
            var_sum += (1.0 - p_level) / (p_level * N) * (1.0 + gamma);

        if (b <= 0.0) {
            est.levels = level;
            est.pf = std::pow(p_cond, level - 1) * p_level;
            est.cov = est.pf > 0.0 ? std::sqrt(var_sum)
                                   : std::numeric_limits<double>::infinity();
            return result;
        }
        if (level == cfg.max_levels) {
            est.levels = level;
            est.pf = std::pow(p_cond, cfg.max_levels);
            est.cov = std::sqrt(var_sum);
            est.hit_max_levels = true;
            return result;
        }

        // seeds: the Ns smallest-g states; chains partition the next N
        // samples (seed included) as evenly as possible
        const int base_len = N / Ns;
        const int extra = N % Ns;
        Eigen::MatrixXd U_next(N, m);
        Eigen::VectorXd g_next(N);
        chain_len.assign(Ns, base_len);
        for (int j = 0; j < extra; ++j) ++chain_len[j];

        int cursor = 0;
        for (int j = 0; j < Ns; ++j) {
            Rng rng(Rng::derive(cfg.seed, kSubsetTag, level, j));
            Eigen::VectorXd state = U.row(order[j]).transpose();
            double g_state = g[order[j]];
            U_next.row(cursor) = state.transpose();
            g_next[cursor] = g_state;
            ++cursor;
            for (int t = 1; t < chain_len[j]; ++t) {
                Eigen::VectorXd candidate = state;
                bool changed = false;
                for (int k = 0; k < m; ++k) {
                    const double prop =
                        state[k] + cfg.proposal_std * rng.normal();
                    const double ratio =
                        std::exp(0.5 * (state[k] * state[k] - prop * prop));
                    if (rng.uniform() < std::min(1.0, ratio)) {
                        candidate[k] = prop;
                        changed = true;
                    }
                }
                if (changed) {
                    const double g_cand = eval_physical(candidate);
                    ++est.n_evals;
                    if (g_cand <= b) {  // accepted into the level
                        state = candidate;
                        g_state = g_cand;
                    }
                }
                U_next.row(cursor) = state.transpose();
                g_next[cursor] = g_state;
                ++cursor;
            }
        }
        U = std::move(U_next);
        g = std::move(g_next);
    }
}

double relative_error(double pf, double pf_ref) {
    if (!(pf_ref > 0.0))
        throw ZeroReference("relative_error: reference pf must be > 0");
    return std::abs(pf_ref - pf) / pf_ref;
}

}  // namespace akbeam
