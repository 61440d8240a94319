#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "akbeam/sampling.hpp"

namespace akbeam {

enum class TrendKind { polynomial_additive, polynomial_total_degree, pce_legendre };

/// Regression basis of the universal-Kriging trend.
///
/// polynomial_additive: [1, x1..x1^d, ..., xm..xm^d], size 1 + m*d.
/// polynomial_total_degree: all monomials with total degree <= d.
/// pce_legendre: orthonormal Legendre products over the multi-indices.
struct TrendSpec {
    TrendKind kind = TrendKind::polynomial_additive;
    int degree = 4;
    std::vector<std::vector<int>> pce_indices;  // pce_legendre only
    bool truncated = false;  // pce basis was shrunk by the rank guard

    int basis_size(int dimension) const;
};

enum class MaternNu { nu_1_2, nu_3_2, nu_5_2 };

double matern_nu_value(MaternNu nu);
MaternNu matern_nu_from_string(const std::string& s);
std::string matern_nu_to_string(MaternNu nu);

struct CorrelationSpec {
    MaternNu nu = MaternNu::nu_5_2;
    Eigen::VectorXd theta;  // per-dimension lengths in normalized space
    double theta_lower = 1e-2;
    double theta_upper = 1e2;
    double nugget = 0.0;  // requested floor; fit may escalate
};

/// Paired inputs (physical coordinates, one row per point) and responses.
struct DesignOfExperiments {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd outputs;

    int size() const { return static_cast<int>(inputs.rows()); }
    int dimension() const { return static_cast<int>(inputs.cols()); }
    void append(const Eigen::VectorXd& x, double g);
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    bool extrapolated = false;
};

/// One-dimensional Matern correlation at scaled distance t = h / theta.
double matern1d(double t, MaternNu nu);

/// Separable product correlation for per-dimension distances h (>= 0).
double matern_correlation(const Eigen::VectorXd& h, const CorrelationSpec& corr);

/// Trend basis evaluated at a point in normalized [0,1]^m coordinates.
Eigen::VectorXd trend_basis(const Eigen::VectorXd& x_norm, const TrendSpec& spec);

/// Universal-Kriging profile log-likelihood of theta (Sacks et al. closed
/// forms): -(n/2) ln sigma2_hat(theta) - (1/2) ln det R(theta) with the GLS
/// beta_hat. Degenerate zero-variance data returns a large finite cap.
double profile_loglik(const Eigen::VectorXd& theta,
                      const DesignOfExperiments& doe, const DesignSpace& space,
                      const TrendSpec& trend, const CorrelationSpec& corr);

/// Fitted universal-Kriging model. Immutable after fit; safe to share.
class KrigingModel {
public:
    Prediction predict(const Eigen::VectorXd& x_physical) const;

    /// Batch prediction; rows of X are query points. Returns (mean, variance)
    /// pairs in input order.
    void predict_batch(const Eigen::MatrixXd& X, Eigen::VectorXd& means,
                       Eigen::VectorXd& variances) const;

    const TrendSpec& trend() const { return trend_; }
    const CorrelationSpec& correlation() const { return corr_; }
    const Eigen::VectorXd& beta() const { return beta_; }
    double sigma2() const { return sigma2_; }
    double nugget_used() const { return nugget_used_; }
    double loglik() const { return loglik_; }
    const DesignSpace& space() const { return space_; }
    const Eigen::MatrixXd& training_inputs() const { return inputs_; }
    const Eigen::VectorXd& training_outputs() const { return outputs_; }

    std::string to_json() const;
    static KrigingModel from_json(const std::string& text);

private:
    friend KrigingModel fit(const DesignOfExperiments&, const DesignSpace&,
                            const TrendSpec&, const CorrelationSpec&);

    void finalize(double nugget_used);  // builds factorizations from theta

    TrendSpec trend_;
    CorrelationSpec corr_;
    DesignSpace space_;
    Eigen::MatrixXd inputs_;   // physical
    Eigen::MatrixXd S_;        // normalized to [0,1]^m
    Eigen::VectorXd outputs_;
    Eigen::VectorXd beta_;
    double sigma2_ = 0.0;
    double nugget_used_ = 0.0;
    double loglik_ = 0.0;

    Eigen::MatrixXd L_;        // Cholesky factor of R + nugget I
    Eigen::MatrixXd Ft_;       // L^-1 F
    Eigen::MatrixXd Rtrend_;   // triangular factor of Ft (thin QR)
    Eigen::PermutationMatrix<Eigen::Dynamic> Ptrend_;
    Eigen::VectorXd alpha_;    // R^-1 (G - F beta)
};

/// The fixed multi-start seed grid used by fit: 8 points, log-stratified per
/// dimension with deterministic cross-dimension pairing.
Eigen::MatrixXd theta_multistart_grid(int dimension, double theta_lower,
                                      double theta_upper);

/// Maximum-likelihood fit: multi-start Nelder-Mead over log-theta within the
/// bounds, nugget escalation ladder 0, 1e-12, ..., 1e-4.
KrigingModel fit(const DesignOfExperiments& doe, const DesignSpace& space,
                 const TrendSpec& trend, const CorrelationSpec& corr);

}  // namespace akbeam
