#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "framelab/errors.hpp"
#include "framelab/frame.hpp"
#include "framelab/rng.hpp"

namespace framelab {

/// Standard basis of F^N padded with m - n zero columns. Parseval; attains
/// the lower bound C(N,k) of the total k-volume.
inline Frame onb_padded(int m, int n, ScalarField field = ScalarField::Real) {
    if (n < 1 || n > m) {
        throw InvalidShape("onb_padded: need 1 <= n <= m");
    }
    Matrix entries = Matrix::Zero(n, m);
    for (int i = 0; i < n; ++i) entries(i, i) = 1.0;
    return Frame(field, std::move(entries));
}

namespace detail {

/// Rows of Psi are the eigenvectors of q (an orthogonal projection of rank r,
/// eigenvalues near 0/1 split at 1/2), with a deterministic phase convention:
/// the largest-magnitude entry of each row is made real positive.
inline Matrix projection_factor(const Matrix& q, int r) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(q);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("projection_factor: eigendecomposition failed");
    }
    const int m = static_cast<int>(q.rows());
    int count = 0;
    for (int i = 0; i < m; ++i) {
        if (es.eigenvalues()(i) > 0.5) ++count;
    }
    if (count != r) {
        throw RankMismatch("projection_factor: eigenspace above 1/2 has dimension " +
                           std::to_string(count) + ", expected " + std::to_string(r));
    }
    Matrix psi(r, m);
    int row = 0;
    for (int i = 0; i < m; ++i) {
        if (es.eigenvalues()(i) <= 0.5) continue;
        Vector v = es.eigenvectors().col(i);
        int arg_max = 0;
        double best = -1.0;
        for (int t = 0; t < m; ++t) {
            if (std::abs(v(t)) > best) {
                best = std::abs(v(t));
                arg_max = t;
            }
        }
        const Complex pivot = v(arg_max);
        if (std::abs(pivot) > 0.0) {
            v *= std::conj(pivot) / std::abs(pivot);
        }
        psi.row(row++) = v.transpose();
    }
    return psi;
}

inline Matrix clean_real(Matrix m, const std::string& who) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            worst = std::max(worst, std::abs(m(i, j).imag()));
            m(i, j) = Complex(m(i, j).real(), 0.0);
        }
    }
    if (worst > 1e-9) {
        throw NumericalFailure(who + ": real output has imaginary residue " +
                               std::to_string(worst));
    }
    return m;
}

} // namespace detail

/// Canonical Naimark complement: the (M-N) x M frame Psi with
/// Psi* Psi = I - Phi* Phi, rows chosen as the unit eigenvectors of
/// I - Phi* Phi with a fixed sign/phase convention.
inline Frame naimark_complement(const Frame& frame, double tol_parseval = 1e-10) {
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    if (n >= m) {
        throw InvalidShape("naimark_complement: need N < M");
    }
    const Matrix op = frame_operator_raw(frame);
    const double res = (op - Matrix::Identity(n, n)).norm();
    if (res > tol_parseval) {
        throw NotParseval("naimark_complement: ||Phi Phi* - I|| = " +
                          std::to_string(res));
    }
    const Matrix q = Matrix::Identity(m, m) - gram_raw(frame);
    Matrix psi = detail::projection_factor((q + q.adjoint()) / 2.0, m - n);
    const double defect = (psi.adjoint() * psi - q).norm();
    if (defect > 1e-9) {
        throw NumericalFailure("naimark_complement: ||Psi* Psi - (I - Phi* Phi)|| = " +
                               std::to_string(defect));
    }
    if (frame.field() == ScalarField::Real) {
        psi = detail::clean_real(std::move(psi), "naimark_complement");
    }
    return Frame(frame.field(), std::move(psi));
}

/// The M = N+1 simplex frame: Naimark complement of the all-ones Parseval
/// frame in P(N+1, 1). Real, equiangular, |<phi_i, phi_j>| = c_{N+1,N}.
inline Frame simplex_etf(int n) {
    if (n < 1) {
        throw InvalidShape("simplex_etf: need n >= 1");
    }
    const int m = n + 1;
    Matrix ones(1, m);
    ones.setConstant(Complex(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
    return naimark_complement(Frame(ScalarField::Real, std::move(ones)));
}

/// Harmonic frame: phi_j[t] = exp(2 pi i s_t j / m) / sqrt(m) for the chosen
/// frequencies s_t in {0..m-1}, j = 0..m-1. Always an equal-norm Parseval
/// frame; equiangular exactly when the frequencies form a difference set.
inline Frame harmonic_frame(int m, const std::vector<int>& rows) {
    if (m < 1 || rows.empty() || static_cast<int>(rows.size()) > m) {
        throw InvalidShape("harmonic_frame: need 1 <= |rows| <= m");
    }
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t] < 0 || rows[t] >= m) {
            throw InvalidShape("harmonic_frame: frequency " + std::to_string(rows[t]) +
                               " outside {0.." + std::to_string(m - 1) + "}");
        }
        for (std::size_t u = 0; u < t; ++u) {
            if (rows[u] == rows[t]) {
                throw InvalidShape("harmonic_frame: duplicate frequency " +
                                   std::to_string(rows[t]));
            }
        }
    }
    const int n = static_cast<int>(rows.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Matrix entries(n, m);
    for (int t = 0; t < n; ++t) {
        for (int j = 0; j < m; ++j) {
            const double angle = 2.0 * M_PI * static_cast<double>(rows[static_cast<std::size_t>(t)]) *
                                 static_cast<double>(j) / static_cast<double>(m);
            entries(t, j) = scale * Complex(std::cos(angle), std::sin(angle));
        }
    }
    return Frame(ScalarField::Complex, std::move(entries));
}

/// The real (4,2) Parseval frame built from two scaled orthonormal bases of
/// R^2 offset by 45 degrees; maximizes the total 2-volume over P(4,2) with
/// Plucker coordinates (sqrt2/4, 1/2, sqrt2/4, sqrt2/4, 1/2, sqrt2/4).
inline Frame optimal_4_2() {
    const double h = 0.5;
    const double s = std::sqrt(2.0) / 2.0;
    Eigen::MatrixXd entries(2, 4);
    entries << h, 0.0, -h, -s,
               h, s,    h, 0.0;
    return Frame::real(entries);
}

/// Uniform random Parseval frame: Gaussian N x M draw retracted to the
/// Parseval manifold via (G G*)^{-1/2} G. Rotation invariance of the Gaussian
/// makes the row space uniform on the Grassmannian.
inline Frame random_parseval(int m, int n, ScalarField field, std::uint64_t seed) {
    if (n < 1 || n > m) {
        throw InvalidShape("random_parseval: need 1 <= n <= m");
    }
    for (int attempt = 0; attempt < 3; ++attempt) {
        GaussianSampler gauss(mix_seed(seed, 0x52504152ULL + static_cast<std::uint64_t>(attempt)));
        Matrix g(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                g(i, j) = field == ScalarField::Real ? Complex(gauss.next(), 0.0)
                                                     : gauss.next_complex();
            }
        }
        try {
            Matrix entries = inv_sqrt_psd(g * g.adjoint()) * g;
            if (field == ScalarField::Real) {
                entries = detail::clean_real(std::move(entries), "random_parseval");
            }
            return Frame(field, std::move(entries));
        } catch (const SingularMatrix&) {
            // rank-deficient draw; retry with a fresh substream
        }
    }
    throw NumericalFailure("random_parseval: rank-deficient Gaussian draws (3 attempts)");
}

/// Columns i.i.d. uniform on the sphere of radius sqrt(N/M).
inline Frame random_equal_norm(int m, int n, ScalarField field, std::uint64_t seed) {
    if (n < 1 || m < 1) {
        throw InvalidShape("random_equal_norm: need m, n >= 1");
    }
    const double radius = std::sqrt(static_cast<double>(n) / m);
    GaussianSampler gauss(mix_seed(seed, 0x454E524DULL));
    Matrix entries(n, m);
    for (int j = 0; j < m; ++j) {
        Vector col(n);
        double norm_sq = 0.0;
        do {
            for (int i = 0; i < n; ++i) {
                col(i) = field == ScalarField::Real ? Complex(gauss.next(), 0.0)
                                                    : gauss.next_complex();
            }
            norm_sq = col.squaredNorm();
        } while (norm_sq == 0.0);
        entries.col(j) = col * (radius / std::sqrt(norm_sq));
    }
    return Frame(field, std::move(entries));
}

/// Splits the last nonzero vector over a trailing zero slot: with psi the
/// (M-1)th vector and a zero Mth vector, both slots become psi / sqrt2.
/// Preserves the frame operator and strictly increases total coherence by
/// ||psi||^2 + (2 sqrt2 - 2) sum_i |<psi, phi_i>|.
inline Frame split_zero(const Frame& frame, double tol = 1e-10) {
    const int m = frame.n_vecs();
    if (m < 2) {
        throw PreconditionFailed("split_zero: need at least two vectors");
    }
    const Matrix op = frame_operator_raw(frame);
    const double res = (op - Matrix::Identity(frame.n_dim(), frame.n_dim())).norm();
    if (res > tol) {
        throw NotParseval("split_zero: ||Phi Phi* - I|| = " + std::to_string(res));
    }
    if (frame.entries().col(m - 1).norm() > tol) {
        throw PreconditionFailed("split_zero: last column is not zero (callers permute first)");
    }
    if (frame.entries().col(m - 2).norm() <= tol) {
        throw PreconditionFailed("split_zero: column M-1 is zero, nothing to split");
    }
    Matrix entries = frame.entries();
    const Vector half = entries.col(m - 2) / std::sqrt(2.0);
    entries.col(m - 2) = half;
    entries.col(m - 1) = half;
    return Frame(frame.field(), std::move(entries));
}

} // namespace framelab
