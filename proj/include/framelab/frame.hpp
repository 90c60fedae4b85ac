#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "framelab/combinatorics.hpp"
#include "framelab/errors.hpp"

namespace framelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class ScalarField { Real, Complex };

inline std::string to_string(ScalarField f) {
    return f == ScalarField::Real ? "real" : "complex";
}

/// An N x M matrix whose columns are the frame vectors. Scalars are stored as
/// (re, im) pairs for both fields; a Real-tagged frame holds exactly zero
/// imaginary parts, so every operation runs through one code path.
/// Immutable after construction.
class Frame {
public:
    Frame(ScalarField field, Matrix entries)
        : field_(field), entries_(std::move(entries)) {
        if (entries_.rows() < 1 || entries_.cols() < 1) {
            throw InvalidShape("Frame: need positive dimensions, got " +
                               std::to_string(entries_.rows()) + "x" +
                               std::to_string(entries_.cols()));
        }
        for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
            for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
                const Complex z = entries_(i, j);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    throw ParseError("Frame: non-finite entry at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
                }
                if (field_ == ScalarField::Real && z.imag() != 0.0) {
                    throw InvalidShape("Frame: real field with nonzero imaginary part");
                }
            }
        }
    }

    static Frame real(const Eigen::MatrixXd& entries) {
        return Frame(ScalarField::Real, entries.cast<Complex>());
    }

    static Frame complex(Matrix entries) {
        return Frame(ScalarField::Complex, std::move(entries));
    }

    ScalarField field() const { return field_; }
    /// N, the ambient dimension.
    int n_dim() const { return static_cast<int>(entries_.rows()); }
    /// M, the number of vectors.
    int n_vecs() const { return static_cast<int>(entries_.cols()); }
    const Matrix& entries() const { return entries_; }

private:
    ScalarField field_;
    Matrix entries_;
};

/// Hermitian PSD matrix wrapper used for Gram matrices and frame operators.
/// Construction symmetrizes and validates Hermitian-ness (1e-12 entrywise)
/// and positive semidefiniteness (smallest eigenvalue >= -1e-10).
class GramMatrix {
public:
    explicit GramMatrix(const Matrix& g) {
        if (g.rows() != g.cols()) {
            throw InvalidShape("GramMatrix: not square");
        }
        const double asym = (g - g.adjoint()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
            throw NumericalFailure("GramMatrix: not Hermitian, asymmetry " +
                                   std::to_string(asym));
        }
        entries_ = (g + g.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("GramMatrix: eigendecomposition failed");
        }
        if (es.eigenvalues().minCoeff() < -1e-10) {
            throw NumericalFailure("GramMatrix: not PSD, min eigenvalue " +
                                   std::to_string(es.eigenvalues().minCoeff()));
        }
    }

    int size() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

/// Phi* Phi, symmetrized, without the PSD validation pass. Internal hot path.
inline Matrix gram_raw(const Frame& frame) {
    const Matrix g = frame.entries().adjoint() * frame.entries();
    return (g + g.adjoint()) / 2.0;
}

/// Phi Phi*, symmetrized.
inline Matrix frame_operator_raw(const Frame& frame) {
    const Matrix s = frame.entries() * frame.entries().adjoint();
    return (s + s.adjoint()) / 2.0;
}

/// The Gram matrix Phi* Phi (M x M, validated Hermitian PSD).
inline GramMatrix gram(const Frame& frame) { return GramMatrix(gram_raw(frame)); }

/// The frame operator Phi Phi* (N x N), stored via the same type at size N.
inline GramMatrix frame_operator(const Frame& frame) {
    return GramMatrix(frame_operator_raw(frame));
}

/// Phi_K: the columns of Phi indexed by K, in index order.
inline Frame partial_frame(const Frame& frame, const SubsetSelector& k_set) {
    if (k_set.m != frame.n_vecs()) {
        throw InvalidShape("partial_frame: selector over {1.." + std::to_string(k_set.m) +
                           "} does not match M=" + std::to_string(frame.n_vecs()));
    }
    Matrix sub(frame.n_dim(), k_set.k());
    for (int j = 0; j < k_set.k(); ++j) {
        const int col = k_set.indices[static_cast<std::size_t>(j)];
        if (col < 1 || col > frame.n_vecs()) {
            throw IndexOutOfRange("partial_frame: index " + std::to_string(col));
        }
        sub.col(j) = frame.entries().col(col - 1);
    }
    return Frame(frame.field(), std::move(sub));
}

/// Submatrix of the raw entries for a selector (no Frame wrapper).
inline Matrix columns(const Matrix& entries, const SubsetSelector& k_set) {
    Matrix sub(entries.rows(), k_set.k());
    for (int j = 0; j < k_set.k(); ++j) {
        sub.col(j) = entries.col(k_set.indices[static_cast<std::size_t>(j)] - 1);
    }
    return sub;
}

/// Singular values in decreasing order, each in [0, inf).
inline Eigen::VectorXd singular_values(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    if (svd.info() != Eigen::Success) {
        throw NumericalFailure("singular_values: SVD did not converge");
    }
    return svd.singularValues();
}

inline Eigen::VectorXd singular_values(const Frame& frame) {
    return singular_values(frame.entries());
}

/// S with S A S = I for Hermitian PSD A, via eigendecomposition.
inline Matrix inv_sqrt_psd(const Matrix& a, double eps_rank = 1e-12) {
    if (a.rows() != a.cols()) {
        throw InvalidShape("inv_sqrt_psd: not square");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("inv_sqrt_psd: eigendecomposition failed");
    }
    const Eigen::VectorXd& evals = es.eigenvalues();
    if (evals.minCoeff() <= eps_rank) {
        throw SingularMatrix("inv_sqrt_psd: eigenvalue " +
                             std::to_string(evals.minCoeff()) + " <= " +
                             std::to_string(eps_rank));
    }
    const Eigen::VectorXd inv_sqrt = evals.array().rsqrt();
    Matrix s = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    return (s + s.adjoint()) / 2.0;
}

struct PredicateTolerances {
    double parseval = 1e-10;
    double norm = 1e-10;
    double angle = 1e-10;
    double rank_rel = 1e-12; // numerical rank: sigma > rank_rel * sigma_max
};

struct FramePredicates {
    bool is_frame = false;
    bool is_parseval = false;
    bool is_equal_norm = false;
    bool is_equiangular = false;
    std::map<std::string, double> residuals;
};

/// Evaluates the structural predicates. Equal norm is measured against the
/// Parseval normalization ||phi_i||^2 = N/M; equiangular additionally needs
/// Parseval, equal norm, and all off-diagonal Gram magnitudes within
/// tol.angle of c_{M,N}.
inline FramePredicates predicates(const Frame& frame,
                                  const PredicateTolerances& tol = {}) {
    FramePredicates out;
    const int n = frame.n_dim();
    const int m = frame.n_vecs();
    const Matrix g = gram_raw(frame);

    const Eigen::VectorXd sv = singular_values(frame);
    const double sv_max = sv.size() > 0 ? sv(0) : 0.0;
    const double sv_min_needed =
        (n <= static_cast<int>(sv.size())) ? sv(n - 1) : 0.0;
    out.is_frame = m >= n && sv_min_needed > tol.rank_rel * sv_max && sv_max > 0.0;
    out.residuals["rank_sigma_min"] = sv_min_needed;

    Matrix op = frame_operator_raw(frame);
    const double parseval_res =
        (op - Matrix::Identity(n, n)).norm();
    out.residuals["parseval"] = parseval_res;
    out.is_parseval = parseval_res <= tol.parseval;

    const double target = static_cast<double>(n) / static_cast<double>(m);
    double norm_res = 0.0;
    for (int i = 0; i < m; ++i) {
        norm_res = std::max(norm_res, std::abs(g(i, i).real() - target));
    }
    out.residuals["equal_norm"] = norm_res;
    out.is_equal_norm = norm_res <= tol.norm;

    if (n < m) {
        const double c_mn = std::sqrt(static_cast<double>(n) * (m - n) /
                                      (static_cast<double>(m) * m * (m - 1)));
        double angle_res = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                angle_res = std::max(angle_res, std::abs(std::abs(g(i, j)) - c_mn));
            }
        }
        out.residuals["equiangular"] = angle_res;
        out.is_equiangular = out.is_parseval && out.is_equal_norm &&
                             angle_res <= tol.angle;
    } else {
        out.is_equiangular = false;
    }
    return out;
}

} // namespace framelab
