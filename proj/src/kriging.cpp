#include "akbeam/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "akbeam/errors.hpp"
#include "akbeam/pck.hpp"
#include "akbeam/stats.hpp"

namespace akbeam {

namespace {

constexpr double kLoglikCap = 1e300;       // degenerate zero-variance data
constexpr double kFailedObjective = 1e308; // theta rejected by factorization
constexpr double kCondLimit = 1e12;

const double kNuggetLadder[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4};

Eigen::MatrixXd normalize_inputs(const Eigen::MatrixXd& X,
                                 const DesignSpace& space) {
    Eigen::MatrixXd S = X;
    for (int k = 0; k < space.dimension(); ++k) {
        const double a = space.variables[k].lower;
        const double w = space.variables[k].upper - a;
        S.col(k) = (S.col(k).array() - a) / w;
    }
    return S;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& S,
                                   const Eigen::VectorXd& theta, MaternNu nu) {
    const int n = static_cast<int>(S.rows());
    const int m = static_cast<int>(S.cols());
    Eigen::MatrixXd R = Eigen::MatrixXd::Ones(n, n);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = j + 1; i < n; ++i) {
                const double t = std::abs(S(i, k) - S(j, k)) / theta[k];
                R(i, j) *= matern1d(t, nu);
            }
        }
    }
    R.triangularView<Eigen::StrictlyUpper>() =
        R.triangularView<Eigen::StrictlyLower>().transpose();
    return R;
}

Eigen::MatrixXd trend_matrix(const Eigen::MatrixXd& S, const TrendSpec& trend) {
    const int n = static_cast<int>(S.rows());
    const int p = trend.basis_size(static_cast<int>(S.cols()));
    Eigen::MatrixXd F(n, p);
    for (int i = 0; i < n; ++i)
        F.row(i) = trend_basis(S.row(i).transpose(), trend).transpose();
    return F;
}

struct ThetaEval {
    bool ok = false;
    double loglik = -std::numeric_limits<double>::infinity();
    double sigma2 = 0.0;
    double nugget_used = 0.0;
    Eigen::VectorXd beta;
    Eigen::MatrixXd L;   // Cholesky factor of R + nugget I
    Eigen::MatrixXd Ft;  // L^-1 F
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

std::vector<double> nugget_ladder(double requested) {
    std::vector<double> ladder{requested};
    for (double v : kNuggetLadder)
        if (v > requested) ladder.push_back(v);
    return ladder;
}

// One profile-likelihood evaluation at fixed theta, with nugget escalation.
ThetaEval evaluate_theta(const Eigen::MatrixXd& S, const Eigen::VectorXd& G,
                         const Eigen::MatrixXd& F, const Eigen::VectorXd& theta,
                         const CorrelationSpec& corr, bool throw_rank,
                         double forced_nugget = -1.0) {
    const int n = static_cast<int>(S.rows());
    const int p = static_cast<int>(F.cols());
    ThetaEval ev;

    const Eigen::MatrixXd R0 = correlation_matrix(S, theta, corr.nu);
    std::vector<double> ladder = forced_nugget >= 0.0
                                     ? std::vector<double>{forced_nugget}
                                     : nugget_ladder(corr.nugget);
    for (double nugget : ladder) {
        Eigen::MatrixXd Rn = R0;
        Rn.diagonal().array() += nugget;
        Eigen::LLT<Eigen::MatrixXd> llt(Rn);
        if (llt.info() != Eigen::Success) continue;
        Eigen::MatrixXd L = llt.matrixL();
        const double dmax = L.diagonal().maxCoeff();
        const double dmin = L.diagonal().minCoeff();
        if (!(dmin > 0.0) || (dmax / dmin) * (dmax / dmin) > kCondLimit)
            continue;
        ev.L = std::move(L);
        ev.nugget_used = nugget;
        ev.ok = true;
        break;
    }
    if (!ev.ok) return ev;

    ev.Ft = ev.L.triangularView<Eigen::Lower>().solve(F);
    const Eigen::VectorXd Gt = ev.L.triangularView<Eigen::Lower>().solve(G);
    ev.qr.compute(ev.Ft);
    if (ev.qr.rank() < p) {
        ev.ok = false;
        if (throw_rank)
            throw RankDeficientTrend(
                "trend matrix is rank deficient after whitening (rank " +
                std::to_string(ev.qr.rank()) + " < " + std::to_string(p) + ")");
        return ev;
    }
    ev.beta = ev.qr.solve(Gt);
    const Eigen::VectorXd resid = Gt - ev.Ft * ev.beta;
    ev.sigma2 = resid.squaredNorm() / n;
    // zero-variance degeneracy guard (scale-aware: roundoff keeps the exact
    // zero slightly positive)
    const double degenerate =
        1e-30 * std::max(1.0, G.squaredNorm() / n);
    if (!(ev.sigma2 > degenerate) || !std::isfinite(ev.sigma2)) {
        ev.sigma2 = std::max(ev.sigma2, 0.0);
        ev.loglik = kLoglikCap;
        return ev;
    }
    ev.loglik = -0.5 * n * std::log(ev.sigma2) -
                ev.L.diagonal().array().log().sum();
    if (!std::isfinite(ev.loglik)) {
        ev.ok = false;
        ev.loglik = -std::numeric_limits<double>::infinity();
    }
    return ev;
}

// Nelder-Mead on log-theta with componentwise clamping to the bounds.
struct SimplexResult {
    Eigen::VectorXd z;
    double value = std::numeric_limits<double>::infinity();
};

template <typename F>
SimplexResult nelder_mead(F&& objective, const Eigen::VectorXd& z0, double step,
                          double lo, double hi, int max_evals) {
    const int m = static_cast<int>(z0.size());
    auto clamp = [&](Eigen::VectorXd z) {
        for (int k = 0; k < m; ++k) z[k] = std::clamp(z[k], lo, hi);
        return z;
    };
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& z) {
        ++evals;
        return objective(z);
    };

    std::vector<Eigen::VectorXd> verts;
    std::vector<double> vals;
    verts.push_back(clamp(z0));
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXd z = z0;
        z[k] += step;
        verts.push_back(clamp(z));
    }
    for (const auto& v : verts) vals.push_back(eval(v));

    auto order = [&]() {
        std::vector<int> idx(verts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return vals[a] < vals[b]; });
        std::vector<Eigen::VectorXd> v2;
        std::vector<double> f2;
        for (int i : idx) {
            v2.push_back(verts[i]);
            f2.push_back(vals[i]);
        }
        verts = std::move(v2);
        vals = std::move(f2);
    };

    while (evals < max_evals) {
        order();
        if (vals.back() - vals.front() < 1e-9 * (1.0 + std::abs(vals.front())))
            break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
        for (std::size_t i = 0; i + 1 < verts.size(); ++i) centroid += verts[i];
        centroid /= m;

        const Eigen::VectorXd reflected =
            clamp(centroid + (centroid - verts.back()));
        const double fr = eval(reflected);
        if (fr < vals.front()) {
            const Eigen::VectorXd expanded =
                clamp(centroid + 2.0 * (centroid - verts.back()));
            const double fe = eval(expanded);
            if (fe < fr) {
                verts.back() = expanded;
                vals.back() = fe;
            } else {
                verts.back() = reflected;
                vals.back() = fr;
            }
        } else if (fr < vals[vals.size() - 2]) {
            verts.back() = reflected;
            vals.back() = fr;
        } else {
            const Eigen::VectorXd contracted =
                clamp(centroid + 0.5 * (verts.back() - centroid));
            const double fc = eval(contracted);
            if (fc < vals.back()) {
                verts.back() = contracted;
                vals.back() = fc;
            } else {
                for (std::size_t i = 1; i < verts.size(); ++i) {
                    verts[i] = clamp(verts.front() +
                                     0.5 * (verts[i] - verts.front()));
                    vals[i] = eval(verts[i]);
                    if (evals >= max_evals) break;
                }
            }
        }
    }
    order();
    SimplexResult result;
    result.z = verts.front();
    result.value = vals.front();
    return result;
}

}  // namespace

int TrendSpec::basis_size(int dimension) const {
    switch (kind) {
        case TrendKind::polynomial_additive:
            return 1 + dimension * degree;
        case TrendKind::polynomial_total_degree: {
            // C(m + d, d)
            long size = 1;
            for (int i = 1; i <= degree; ++i)
                size = size * (dimension + i) / i;
            return static_cast<int>(size);
        }
        case TrendKind::pce_legendre:
            return static_cast<int>(pce_indices.size());
    }
    return 0;
}

double matern_nu_value(MaternNu nu) {
    switch (nu) {
        case MaternNu::nu_1_2: return 0.5;
        case MaternNu::nu_3_2: return 1.5;
        case MaternNu::nu_5_2: return 2.5;
    }
    return 2.5;
}

MaternNu matern_nu_from_string(const std::string& s) {
    if (s == "1/2" || s == "0.5") return MaternNu::nu_1_2;
    if (s == "3/2" || s == "1.5") return MaternNu::nu_3_2;
    if (s == "5/2" || s == "2.5") return MaternNu::nu_5_2;
    throw ConfigError("correlation.nu must be one of 1/2, 3/2, 5/2");
}

std::string matern_nu_to_string(MaternNu nu) {
    switch (nu) {
        case MaternNu::nu_1_2: return "1/2";
        case MaternNu::nu_3_2: return "3/2";
        case MaternNu::nu_5_2: return "5/2";
    }
    return "5/2";
}

void DesignOfExperiments::append(const Eigen::VectorXd& x, double g) {
    if (inputs.rows() == 0) {
        inputs.resize(1, x.size());
        inputs.row(0) = x.transpose();
        outputs.resize(1);
        outputs[0] = g;
        return;
    }
    inputs.conservativeResize(inputs.rows() + 1, Eigen::NoChange);
    inputs.row(inputs.rows() - 1) = x.transpose();
    outputs.conservativeResize(outputs.size() + 1);
    outputs[outputs.size() - 1] = g;
}

double matern1d(double t, MaternNu nu) {
    switch (nu) {
        case MaternNu::nu_1_2:
            return std::exp(-t);
        case MaternNu::nu_3_2: {
            const double s = std::sqrt(3.0) * t;
            return (1.0 + s) * std::exp(-s);
        }
        case MaternNu::nu_5_2: {
            const double s = std::sqrt(5.0) * t;
            return (1.0 + s + s * s / 3.0) * std::exp(-s);
        }
    }
    return 0.0;
}

double matern_correlation(const Eigen::VectorXd& h,
                          const CorrelationSpec& corr) {
    double r = 1.0;
    for (int k = 0; k < h.size(); ++k)
        r *= matern1d(h[k] / corr.theta[k], corr.nu);
    return r;
}

Eigen::VectorXd trend_basis(const Eigen::VectorXd& x, const TrendSpec& spec) {
    const int m = static_cast<int>(x.size());
    switch (spec.kind) {
        case TrendKind::polynomial_additive: {
            Eigen::VectorXd f(1 + m * spec.degree);
            f[0] = 1.0;
            int j = 1;
            for (int k = 0; k < m; ++k) {
                double power = 1.0;
                for (int d = 1; d <= spec.degree; ++d) {
                    power *= x[k];
                    f[j++] = power;
                }
            }
            return f;
        }
        case TrendKind::polynomial_total_degree: {
            const auto indices = multi_index_set(m, spec.degree);
            Eigen::VectorXd f(indices.size());
            for (std::size_t j = 0; j < indices.size(); ++j) {
                double v = 1.0;
                for (int k = 0; k < m; ++k)
                    v *= std::pow(x[k], indices[j][k]);
                f[j] = v;
            }
            return f;
        }
        case TrendKind::pce_legendre: {
            Eigen::VectorXd f(spec.pce_indices.size());
            for (std::size_t j = 0; j < spec.pce_indices.size(); ++j) {
                double v = 1.0;
                for (int k = 0; k < m; ++k) {
                    const double u = 2.0 * x[k] - 1.0;  // [0,1] -> [-1,1]
                    v *= legendre_orthonormal(spec.pce_indices[j][k], u);
                }
                f[j] = v;
            }
            return f;
        }
    }
    throw ConfigError("unknown trend kind");
}

Eigen::MatrixXd theta_multistart_grid(int dimension, double theta_lower,
                                      double theta_upper) {
    // per-dimension stratified log grid with fixed permutations, so the fit
    // is a pure function of the data
    constexpr int n_starts = 8;
    const double z_lo = std::log(theta_lower);
    const double z_hi = std::log(theta_upper);
    Eigen::MatrixXd starts(n_starts, dimension);
    for (int k = 0; k < dimension; ++k) {
        Rng rng(Rng::derive(0xA11CE5EEDULL, k));
        std::vector<int> perm(n_starts);
        for (int j = 0; j < n_starts; ++j) perm[j] = j;
        for (int j = n_starts - 1; j > 0; --j)
            std::swap(perm[j], perm[rng.uniform_index(j + 1)]);
        for (int j = 0; j < n_starts; ++j)
            starts(j, k) = std::exp(z_lo + (z_hi - z_lo) * (perm[j] + 0.5) /
                                               n_starts);
    }
    return starts;
}

double profile_loglik(const Eigen::VectorXd& theta,
                      const DesignOfExperiments& doe, const DesignSpace& space,
                      const TrendSpec& trend, const CorrelationSpec& corr) {
    const Eigen::MatrixXd S = normalize_inputs(doe.inputs, space);
    const Eigen::MatrixXd F = trend_matrix(S, trend);
    if (doe.size() <= static_cast<int>(F.cols()))
        throw RankDeficientTrend("need n > basis size for the GLS trend");
    ThetaEval ev = evaluate_theta(S, doe.outputs, F, theta, corr, true);
    if (!ev.ok)
        throw IllConditioned("correlation matrix not factorizable at theta");
    return ev.loglik;
}

KrigingModel fit(const DesignOfExperiments& doe, const DesignSpace& space,
                 const TrendSpec& trend, const CorrelationSpec& corr) {
    space.validate();
    const int n = doe.size();
    const int m = doe.dimension();
    if (m != space.dimension())
        throw ConfigError("DoE dimension does not match design space");
    const int p = trend.basis_size(m);
    if (n < p + 1)
        throw RankDeficientTrend("rank guard: n = " + std::to_string(n) +
                                 " must exceed basis size " +
                                 std::to_string(p));

    const Eigen::MatrixXd S = normalize_inputs(doe.inputs, space);
    const Eigen::MatrixXd F = trend_matrix(S, trend);
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(F).rank() < p)
        throw RankDeficientTrend("trend basis is rank deficient on the DoE");

    const double z_lo = std::log(corr.theta_lower);
    const double z_hi = std::log(corr.theta_upper);

    auto objective = [&](const Eigen::VectorXd& z) {
        const Eigen::VectorXd theta = z.array().exp();
        ThetaEval ev = evaluate_theta(S, doe.outputs, F, theta, corr, false);
        return ev.ok ? -ev.loglik : kFailedObjective;
    };

    const Eigen::MatrixXd starts =
        theta_multistart_grid(m, corr.theta_lower, corr.theta_upper);

    SimplexResult best;
    for (int j = 0; j < starts.rows(); ++j) {
        SimplexResult r = nelder_mead(
            objective, starts.row(j).transpose().array().log().matrix(),
            0.35 * (z_hi - z_lo) / starts.rows(), z_lo, z_hi, 200);
        if (r.value < best.value) best = r;
    }
    if (best.value >= kFailedObjective)
        throw IllConditioned(
            "no admissible correlation length: R not factorizable anywhere "
            "within the bounds");

    KrigingModel model;
    model.trend_ = trend;
    model.corr_ = corr;
    model.corr_.theta = best.z.array().exp();
    model.space_ = space;
    model.inputs_ = doe.inputs;
    model.S_ = S;
    model.outputs_ = doe.outputs;
    model.finalize(-1.0);
    return model;
}

void KrigingModel::finalize(double forced_nugget) {
    const Eigen::MatrixXd F = trend_matrix(S_, trend_);
    ThetaEval ev = evaluate_theta(S_, outputs_, F, corr_.theta, corr_, true,
                                  forced_nugget);
    if (!ev.ok)
        throw IllConditioned("correlation matrix not factorizable at the "
                             "selected theta");
    beta_ = ev.beta;
    sigma2_ = ev.sigma2;
    nugget_used_ = ev.nugget_used;
    loglik_ = ev.loglik;
    L_ = std::move(ev.L);
    Ft_ = std::move(ev.Ft);
    Rtrend_ = ev.qr.matrixR()
                  .topLeftCorner(F.cols(), F.cols())
                  .triangularView<Eigen::Upper>();
    Ptrend_ = ev.qr.colsPermutation();
    const Eigen::VectorXd Gt = L_.triangularView<Eigen::Lower>().solve(outputs_);
    alpha_ = L_.transpose().triangularView<Eigen::Upper>().solve(Gt -
                                                                 Ft_ * beta_);
}

Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd X(1, x.size());
    X.row(0) = x.transpose();
    Eigen::VectorXd mean(1), var(1);
    predict_batch(X, mean, var);
    Prediction pred;
    pred.mean = mean[0];
    pred.variance = var[0];
    const Eigen::VectorXd xn =
        normalize_inputs(X, space_).row(0).transpose();
    pred.extrapolated = (xn.array() < -1e-12).any() ||
                        (xn.array() > 1.0 + 1e-12).any();
    return pred;
}

void KrigingModel::predict_batch(const Eigen::MatrixXd& X,
                                 Eigen::VectorXd& means,
                                 Eigen::VectorXd& variances) const {
    const int n = static_cast<int>(S_.rows());
    const int m = static_cast<int>(S_.cols());
    const long total = X.rows();
    means.resize(total);
    variances.resize(total);

    const Eigen::MatrixXd Xn = normalize_inputs(X, space_);
    constexpr long chunk = 4096;
    for (long begin = 0; begin < total; begin += chunk) {
        const long count = std::min(chunk, total - begin);
        Eigen::MatrixXd Rcross = Eigen::MatrixXd::Ones(n, count);
        for (long c = 0; c < count; ++c)
            for (int k = 0; k < m; ++k) {
                const double xk = Xn(begin + c, k);
                for (int i = 0; i < n; ++i)
                    Rcross(i, c) *= matern1d(std::abs(S_(i, k) - xk) /
                                                 corr_.theta[k],
                                             corr_.nu);
            }
        Eigen::MatrixXd Fx(count, beta_.size());
        for (long c = 0; c < count; ++c)
            Fx.row(c) =
                trend_basis(Xn.row(begin + c).transpose(), trend_).transpose();

        const Eigen::MatrixXd Rt =
            L_.triangularView<Eigen::Lower>().solve(Rcross);  // n x count
        // u = Ft^T rt - f;   var = sigma2 (1 - |rt|^2 + |R^-T P^T u|^2)
        Eigen::MatrixXd U = Ft_.transpose() * Rt - Fx.transpose();
        U = Ptrend_.transpose() * U;
        const Eigen::MatrixXd W =
            Rtrend_.transpose().triangularView<Eigen::Lower>().solve(U);

        means.segment(begin, count) = Fx * beta_ + Rcross.transpose() * alpha_;
        for (long c = 0; c < count; ++c) {
            const double v = sigma2_ * (1.0 - Rt.col(c).squaredNorm() +
                                        W.col(c).squaredNorm());
            variances[begin + c] = std::max(0.0, v);
        }
    }
}

std::string KrigingModel::to_json() const {
    nlohmann::json j;
    j["type"] = trend_.kind == TrendKind::pce_legendre ? "pck" : "kriging";
    nlohmann::json trend;
    trend["kind"] = trend_.kind == TrendKind::polynomial_additive
                        ? "polynomial_additive"
                        : (trend_.kind == TrendKind::polynomial_total_degree
                               ? "polynomial_total_degree"
                               : "pce_legendre");
    trend["degree"] = trend_.degree;
    if (trend_.kind == TrendKind::pce_legendre) {
        trend["indices"] = trend_.pce_indices;
        trend["truncated"] = trend_.truncated;
    }
    j["trend"] = trend;
    j["correlation"] = {{"nu", matern_nu_to_string(corr_.nu)},
                        {"theta", std::vector<double>(
                                      corr_.theta.data(),
                                      corr_.theta.data() + corr_.theta.size())},
                        {"theta_bounds", {corr_.theta_lower, corr_.theta_upper}},
                        {"nugget", corr_.nugget},
                        {"nugget_used", nugget_used_}};
    j["sigma2"] = sigma2_;
    j["loglik"] = loglik_;
    j["beta"] =
        std::vector<double>(beta_.data(), beta_.data() + beta_.size());
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : space_.variables)
        vars.push_back({{"name", v.name}, {"lower", v.lower}, {"upper", v.upper}});
    j["space"] = {{"variables", vars}};
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < inputs_.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < inputs_.cols(); ++k) row.push_back(inputs_(i, k));
        rows.push_back(row);
    }
    j["inputs"] = rows;
    j["outputs"] = std::vector<double>(outputs_.data(),
                                       outputs_.data() + outputs_.size());
    return j.dump(2);
}

KrigingModel KrigingModel::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    KrigingModel model;

    const std::string kind = j.at("trend").at("kind");
    if (kind == "polynomial_additive")
        model.trend_.kind = TrendKind::polynomial_additive;
    else if (kind == "polynomial_total_degree")
        model.trend_.kind = TrendKind::polynomial_total_degree;
    else if (kind == "pce_legendre")
        model.trend_.kind = TrendKind::pce_legendre;
    else
        throw ConfigError("model JSON: unknown trend kind " + kind);
    model.trend_.degree = j.at("trend").at("degree");
    if (model.trend_.kind == TrendKind::pce_legendre) {
        model.trend_.pce_indices =
            j.at("trend").at("indices").get<std::vector<std::vector<int>>>();
        model.trend_.truncated = j.at("trend").value("truncated", false);
    }

    const auto& jc = j.at("correlation");
    model.corr_.nu = matern_nu_from_string(jc.at("nu"));
    const auto theta = jc.at("theta").get<std::vector<double>>();
    model.corr_.theta =
        Eigen::Map<const Eigen::VectorXd>(theta.data(), theta.size());
    model.corr_.theta_lower = jc.at("theta_bounds")[0];
    model.corr_.theta_upper = jc.at("theta_bounds")[1];
    model.corr_.nugget = jc.at("nugget");

    for (const auto& v : j.at("space").at("variables"))
        model.space_.variables.push_back(
            {v.at("name"), v.at("lower"), v.at("upper")});

    const auto& rows = j.at("inputs");
    model.inputs_.resize(rows.size(), model.space_.dimension());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < model.space_.dimension(); ++k)
            model.inputs_(i, k) = rows[i][k];
    const auto outputs = j.at("outputs").get<std::vector<double>>();
    model.outputs_ =
        Eigen::Map<const Eigen::VectorXd>(outputs.data(), outputs.size());

    model.S_ = normalize_inputs(model.inputs_, model.space_);
    model.finalize(jc.at("nugget_used").get<double>());
    return model;
}

}  // namespace akbeam
