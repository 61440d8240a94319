#pragma once

#include <vector>

#include "akbeam/kriging.hpp"

namespace akbeam {

/// Orthonormal Legendre polynomial psi_k(u) = sqrt(2k+1) P_k(u), u in [-1,1],
/// via the three-term recurrence; orthonormal w.r.t. the U(-1,1) density 1/2.
double legendre_orthonormal(int k, double u);

/// All multi-indices alpha in N^m with |alpha|_1 <= p, graded-lexicographic
/// order (by total degree, then lexicographic with the first dimension most
/// significant). Size C(m+p, p); the zero index comes first.
std::vector<std::vector<int>> multi_index_set(int m, int p);

/// PCE trend basis at a physical point: each variable is rescaled onto
/// [-1,1] from the design-space bounds, then the Legendre products of the
/// multi-index set are evaluated.
Eigen::VectorXd pck_trend(const Eigen::VectorXd& x, const DesignSpace& space,
                          const std::vector<std::vector<int>>& indices);

/// PC-Kriging: universal Kriging whose trend is the orthonormal Legendre
/// PCE basis. The PCE coefficients are the GLS trend coefficients.
struct PCKModel {
    KrigingModel model;
    bool truncated = false;  // basis shrunk to n-1 terms by the rank guard

    const std::vector<std::vector<int>>& indices() const {
        return model.trend().pce_indices;
    }
    const Eigen::VectorXd& coefficients() const { return model.beta(); }
};

/// Fits a PC-Kriging model of total degree p. When C(m+p,p) > n-1 the basis
/// is truncated to the n-1 lowest graded-lex indices.
PCKModel fit_pck(const DesignOfExperiments& doe, const DesignSpace& space,
                 int p, const CorrelationSpec& corr);

}  // namespace akbeam
