#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "framelab/combinatorics.hpp"
#include "framelab/errors.hpp"
#include "framelab/frame.hpp"

namespace framelab {

// Determinants smaller than this in magnitude are treated as roundoff zeros;
// more negative values are reported as numerical failures.
inline constexpr double kDetClamp = 1e-12;

/// c_{M,N} = sqrt(N(M-N) / (M^2 (M-1))), the common off-diagonal Gram
/// magnitude of an equiangular Parseval frame.
inline double welch_constant(int m, int n) {
    if (!(0 < n && n < m)) {
        throw InvalidShape("welch_constant: need 0 < N < M");
    }
    return std::sqrt(static_cast<double>(n) * (m - n) /
                     (static_cast<double>(m) * m * (m - 1)));
}

/// c_{M,N,k} = sqrt(C(M,k)^{-1} C(N,k)), the common k-volume when all
/// k-dimensional parallelotopes of a Parseval frame agree. Computed as a
/// product of ratios to avoid factorial overflow.
inline double equal_volume_constant(int m, int n, int k) {
    if (!(0 < n && n < m)) {
        throw InvalidShape("equal_volume_constant: need 0 < N < M");
    }
    if (!(0 < k && k <= n)) {
        throw InvalidShape("equal_volume_constant: need 0 < k <= N");
    }
    double prod = 1.0;
    for (int j = 0; j < k; ++j) {
        prod *= static_cast<double>(n - j) / static_cast<double>(m - j);
    }
    return std::sqrt(prod);
}

struct PerKConstants {
    std::optional<double> c_mnk;     // k <= N
    std::optional<double> vk_upper;  // k <= N
    std::optional<double> vk_lower;  // k <= N
    std::optional<double> cvk_upper; // k >= N
    double ne_sum_sq = 0.0;          // N * C(M-1, k-1), any 1 <= k <= M
};

struct EquiangularConstants {
    int m = 0;
    int n = 0;
    double c_mn = 0.0;
    double tc_upper = 0.0; // sqrt(N (M-N) (M-1))
    double tc_lower = 0.0; // max{N, M-N}
    std::map<int, PerKConstants> per_k;
};

inline EquiangularConstants equiangular_constants(int m, int n,
                                                  const std::vector<int>& k_list) {
    if (!(0 < n && n < m)) {
        throw InvalidShape("equiangular_constants: need 0 < N < M");
    }
    EquiangularConstants out;
    out.m = m;
    out.n = n;
    out.c_mn = welch_constant(m, n);
    out.tc_upper = std::sqrt(static_cast<double>(n) * (m - n) * (m - 1));
    out.tc_lower = static_cast<double>(std::max(n, m - n));
    for (int k : k_list) {
        if (k < 1 || k > m) continue;
        PerKConstants pk;
        if (k <= n) {
            pk.c_mnk = equal_volume_constant(m, n, k);
            pk.vk_upper = std::sqrt(binomial_d(m, k) * binomial_d(n, k));
            pk.vk_lower = binomial_d(n, k);
        }
        if (k >= n) {
            pk.cvk_upper = std::sqrt(binomial_d(m, k) * binomial_d(m - n, m - k));
        }
        pk.ne_sum_sq = static_cast<double>(n) * binomial_d(m - 1, k - 1);
        out.per_k[k] = pk;
    }
    return out;
}

/// TC(Phi) = sum over ordered pairs i != j of |<phi_i, phi_j>|.
inline double total_coherence(const Frame& frame) {
    const Matrix g = gram_raw(frame);
    const int m = frame.n_vecs();
    double tc = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) tc += std::abs(g(i, j));
        }
    }
    return tc;
}

/// EAD(Phi): squared Frobenius distance from the Gram matrix to the Gram
/// matrix of a (possibly nonexistent) equiangular Parseval frame.
inline double equiangular_distance(const Frame& frame) {
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    const double c = welch_constant(m, n); // throws InvalidShape when N >= M
    const Matrix g = gram_raw(frame);
    const double target = static_cast<double>(n) / m;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double d = g(i, i).real() - target;
        sum += d * d;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = std::abs(g(i, j)) - c;
            sum += d * d;
        }
    }
    return sum;
}

struct GramVariance {
    double v = 0.0;
    double c_phi = 0.0; // mean off-diagonal magnitude, TC / (M(M-1))
};

/// V(Phi): variance of the diagonal around N/M plus variance of the
/// off-diagonal magnitudes around their own mean c_Phi.
inline GramVariance gram_variance(const Frame& frame) {
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    const Matrix g = gram_raw(frame);
    GramVariance out;
    out.c_phi = m > 1 ? total_coherence(frame) /
                            (static_cast<double>(m) * (m - 1))
                      : 0.0;
    const double target = static_cast<double>(n) / m;
    for (int i = 0; i < m; ++i) {
        const double d = g(i, i).real() - target;
        out.v += d * d;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = std::abs(g(i, j)) - out.c_phi;
            out.v += d * d;
        }
    }
    return out;
}

/// AD(Phi) = sum_{i != j} (|<phi_i, phi_j>| - c_{M,N})^2.
inline double angular_deviation(const Frame& frame) {
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    const double c = welch_constant(m, n);
    const Matrix g = gram_raw(frame);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = std::abs(g(i, j)) - c;
            sum += d * d;
        }
    }
    return sum;
}

namespace detail {

/// det(Phi_K* Phi_K) with the roundoff clamp; throws below -kDetClamp.
inline double volume_sq(const Matrix& sub) {
    const Matrix g = sub.adjoint() * sub;
    const Complex det = ((g + g.adjoint()) / 2.0).determinant();
    const double d = det.real();
    if (d < -kDetClamp) {
        throw NumericalFailure("volume: Gram determinant " + std::to_string(d) +
                               " below -1e-12");
    }
    return std::max(d, 0.0);
}

/// det(Phi_K Phi_K*) with the same clamp.
inline double comp_volume_sq(const Matrix& sub) {
    const Matrix s = sub * sub.adjoint();
    const Complex det = ((s + s.adjoint()) / 2.0).determinant();
    const double d = det.real();
    if (d < -kDetClamp) {
        throw NumericalFailure("comp_volume: determinant " + std::to_string(d) +
                               " below -1e-12");
    }
    return std::max(d, 0.0);
}

} // namespace detail

/// v_k(Phi_K) = sqrt(det(Phi_K* Phi_K)), the volume of the parallelotope
/// spanned by the selected columns.
inline double volume(const Frame& frame, const SubsetSelector& k_set) {
    if (k_set.k() > frame.n_dim()) {
        throw InvalidShape("volume: |K| > N always gives zero volume; use comp_volume");
    }
    return std::sqrt(detail::volume_sq(columns(frame.entries(), k_set)));
}

namespace detail {

template <typename Fn>
void for_each_column_subset(const Frame& frame, int k, Fn&& fn, std::uint64_t cap) {
    for_each_subset(frame.n_vecs(), k,
                    [&](const SubsetSelector& s) { fn(columns(frame.entries(), s), s); },
                    cap);
}

} // namespace detail

/// V_k(Phi) = sum over |K| = k of v_k(Phi_K).
inline double total_volume(const Frame& frame, int k,
                           std::uint64_t cap = subset_cap()) {
    if (k > frame.n_dim()) {
        throw InvalidShape("total_volume: need k <= N");
    }
    double sum = 0.0;
    detail::for_each_column_subset(
        frame, k, [&](const Matrix& sub, const SubsetSelector&) {
            sum += std::sqrt(detail::volume_sq(sub));
        },
        cap);
    return sum;
}

/// sum over |K| = k of v_k^2(Phi_K); equals C(N,k) for Parseval frames.
inline double sum_sq_volume(const Frame& frame, int k,
                            std::uint64_t cap = subset_cap()) {
    if (k > frame.n_dim()) {
        throw InvalidShape("sum_sq_volume: need k <= N");
    }
    double sum = 0.0;
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) { sum += detail::volume_sq(sub); },
        cap);
    return sum;
}

/// Var_k(Phi) = sum over K of (v_k(Phi_K) - mean)^2, mean = V_k / C(M,k).
inline double volume_variance(const Frame& frame, int k,
                              std::uint64_t cap = subset_cap()) {
    if (k > frame.n_dim()) {
        throw InvalidShape("volume_variance: need k <= N");
    }
    std::vector<double> vols;
    vols.reserve(static_cast<std::size_t>(binomial(frame.n_vecs(), k)));
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            vols.push_back(std::sqrt(detail::volume_sq(sub)));
        },
        cap);
    double mean = 0.0;
    for (double v : vols) mean += v;
    mean /= static_cast<double>(vols.size());
    double var = 0.0;
    for (double v : vols) var += (v - mean) * (v - mean);
    return var;
}

inline double min_volume(const Frame& frame, int k,
                         std::uint64_t cap = subset_cap()) {
    if (k > frame.n_dim()) {
        throw InvalidShape("min_volume: need k <= N");
    }
    double best = std::numeric_limits<double>::infinity();
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            best = std::min(best, std::sqrt(detail::volume_sq(sub)));
        },
        cap);
    return best;
}

/// cv_k(Phi_K) = sqrt(det(Phi_K Phi_K*)) for subsets with |K| >= N.
inline double comp_volume(const Frame& frame, const SubsetSelector& k_set) {
    if (k_set.k() < frame.n_dim()) {
        throw InvalidShape("comp_volume: |K| < N always gives zero; use volume");
    }
    return std::sqrt(detail::comp_volume_sq(columns(frame.entries(), k_set)));
}

/// CV_k(Phi) = sum over |K| = k of cv_k(Phi_K), k >= N.
inline double total_comp_volume(const Frame& frame, int k,
                                std::uint64_t cap = subset_cap()) {
    if (k < frame.n_dim()) {
        throw InvalidShape("total_comp_volume: need k >= N");
    }
    double sum = 0.0;
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            sum += std::sqrt(detail::comp_volume_sq(sub));
        },
        cap);
    return sum;
}

/// NE_k(Phi) = sum over |K| = k of the nuclear norm of Phi_K.
inline double nuclear_energy(const Frame& frame, int k,
                             std::uint64_t cap = subset_cap()) {
    if (k < 1 || k > frame.n_vecs()) {
        throw InvalidShape("nuclear_energy: need 1 <= k <= M");
    }
    double sum = 0.0;
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            sum += singular_values(sub).sum();
        },
        cap);
    return sum;
}

struct NuclearVariance {
    double nvar = 0.0;    // sum over K, i of (sigma_i(Phi_K) - n_phi_k)^2
    double n_phi_k = 0.0; // mean singular value, NE_k / (min(N,k) C(M,k))
    double d_phi_k = 0.0; // mean nuclear norm, NE_k / C(M,k)
};

inline NuclearVariance nuclear_variance(const Frame& frame, int k,
                                        std::uint64_t cap = subset_cap()) {
    if (k < 1 || k > frame.n_vecs()) {
        throw InvalidShape("nuclear_variance: need 1 <= k <= M");
    }
    std::vector<double> sigmas;
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            const Eigen::VectorXd sv = singular_values(sub);
            for (Eigen::Index i = 0; i < sv.size(); ++i) sigmas.push_back(sv(i));
        },
        cap);
    const double count_k = binomial_d(frame.n_vecs(), k);
    const double ne = [&] {
        double s = 0.0;
        for (double x : sigmas) s += x;
        return s;
    }();
    NuclearVariance out;
    out.d_phi_k = ne / count_k;
    out.n_phi_k = ne / (static_cast<double>(std::min(frame.n_dim(), k)) * count_k);
    for (double x : sigmas) out.nvar += (x - out.n_phi_k) * (x - out.n_phi_k);
    return out;
}

/// sum over |K| = k of sum_i sigma_i^2(Phi_K); equals N C(M-1,k-1) for
/// Parseval frames and (kN/M) C(M,k) for equal norm frames.
inline double sum_sq_singular(const Frame& frame, int k,
                              std::uint64_t cap = subset_cap()) {
    if (k < 1 || k > frame.n_vecs()) {
        throw InvalidShape("sum_sq_singular: need 1 <= k <= M");
    }
    double sum = 0.0;
    detail::for_each_column_subset(
        frame, k,
        [&](const Matrix& sub, const SubsetSelector&) {
            sum += singular_values(sub).squaredNorm();
        },
        cap);
    return sum;
}

/// Size of the smallest linearly dependent subset; M+1 when every subset is
/// independent. Rank decisions use the relative threshold
/// sigma_min <= eps_rank * sigma_max.
inline int spark(const Frame& frame, int m_cap = 20, double eps_rank = 1e-12) {
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    if (m > m_cap) {
        throw CapExceeded("spark: M = " + std::to_string(m) + " exceeds cap " +
                              std::to_string(m_cap),
                          static_cast<std::uint64_t>(m));
    }
    for (int k = 1; k <= m; ++k) {
        if (k > n) return k; // k vectors in N dimensions are always dependent
        bool dependent = false;
        for_each_subset(m, k, [&](const SubsetSelector& s) {
            if (dependent) return;
            const Eigen::VectorXd sv = singular_values(columns(frame.entries(), s));
            if (sv(sv.size() - 1) <= eps_rank * sv(0)) dependent = true;
        });
        if (dependent) return k;
    }
    return m + 1;
}

/// Plucker coordinates: det(Phi_K) for every |K| = N in lexicographic order.
inline std::vector<Complex> plucker(const Frame& frame,
                                    std::uint64_t cap = subset_cap()) {
    const int n = frame.n_dim();
    const int m = frame.n_vecs();
    if (n > m) {
        throw InvalidShape("plucker: need N <= M");
    }
    std::vector<Complex> coords;
    coords.reserve(static_cast<std::size_t>(binomial(m, n)));
    for_each_subset(m, n,
                    [&](const SubsetSelector& s) {
                        coords.push_back(columns(frame.entries(), s).determinant());
                    },
                    cap);
    return coords;
}

/// Residual of the single Gr(4,2) relation x12 x34 - x13 x24 + x14 x23 on
/// coordinates in lexicographic order (x12, x13, x14, x23, x24, x34).
inline Complex plucker_relation_42(const std::vector<Complex>& coords) {
    if (coords.size() != 6) {
        throw InvalidShape("plucker_relation_42: need 6 coordinates, got " +
                           std::to_string(coords.size()));
    }
    return coords[0] * coords[5] - coords[1] * coords[4] + coords[2] * coords[3];
}

/// max_{i != j} |<phi_i/||phi_i||, phi_j/||phi_j||>|.
inline double coherence(const Frame& frame, double zero_tol = 1e-14) {
    const int m = frame.n_vecs();
    Matrix normalized = frame.entries();
    for (int i = 0; i < m; ++i) {
        const double norm = normalized.col(i).norm();
        if (norm <= zero_tol) {
            throw ZeroVector("coherence: column " + std::to_string(i + 1) +
                             " has norm " + std::to_string(norm));
        }
        normalized.col(i) /= norm;
    }
    const Matrix g = normalized.adjoint() * normalized;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) best = std::max(best, std::abs(g(i, j)));
        }
    }
    return best;
}

} // namespace framelab
