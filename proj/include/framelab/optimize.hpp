#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "framelab/errors.hpp"
#include "framelab/frame.hpp"
#include "framelab/measures.hpp"

namespace framelab {

enum class ObjectiveKind {
    TotalCoherence,
    TotalVolume,
    TotalCompVolume,
    NuclearEnergy,
    NegEquiangularDistance,
    NegGramVariance,
};

inline std::string to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::TotalCoherence: return "tc";
        case ObjectiveKind::TotalVolume: return "vk";
        case ObjectiveKind::TotalCompVolume: return "cvk";
        case ObjectiveKind::NuclearEnergy: return "ne";
        case ObjectiveKind::NegEquiangularDistance: return "negead";
        case ObjectiveKind::NegGramVariance: return "neggramvar";
    }
    return "unknown";
}

/// A functional to maximize, with the smoothing width used to regularize the
/// nonsmooth pieces (|z|, sqrt(det), singular values).
struct Objective {
    ObjectiveKind kind = ObjectiveKind::TotalCoherence;
    int k = 2;                  // subset size, used by vk / cvk / ne
    double smoothing_eps = 1e-3;
};

struct SmoothAbsResult {
    double value;        // sqrt(|z|^2 + eps^2) - eps
    Complex derivative;  // conj(z) / sqrt(|z|^2 + eps^2)
};

/// Smooth surrogate for |z|; value -> |z| and derivative -> phase as eps -> 0.
inline SmoothAbsResult smooth_abs(Complex z, double eps) {
    const double r = std::sqrt(std::norm(z) + eps * eps);
    return {r - eps, std::conj(z) / r};
}

namespace detail {

inline void check_objective_shape(const Frame& frame, const Objective& obj) {
    if (obj.smoothing_eps <= 0.0) {
        throw InvalidShape("objective: smoothing_eps must be positive");
    }
    switch (obj.kind) {
        case ObjectiveKind::TotalVolume:
            if (obj.k < 1 || obj.k > frame.n_dim()) {
                throw InvalidShape("objective vk: need 1 <= k <= N");
            }
            break;
        case ObjectiveKind::TotalCompVolume:
            if (obj.k < frame.n_dim() || obj.k > frame.n_vecs()) {
                throw InvalidShape("objective cvk: need N <= k <= M");
            }
            break;
        case ObjectiveKind::NuclearEnergy:
            if (obj.k < 1 || obj.k > frame.n_vecs()) {
                throw InvalidShape("objective ne: need 1 <= k <= M");
            }
            break;
        case ObjectiveKind::NegEquiangularDistance:
            if (frame.n_dim() >= frame.n_vecs()) {
                throw InvalidShape("objective negead: need N < M");
            }
            break;
        default:
            break;
    }
}

/// Smoothed off-diagonal magnitudes s_ij and their common radius r_ij.
struct SmoothedGram {
    Matrix g;            // Hermitian Gram
    Eigen::MatrixXd s;   // s_ij = sqrt(|g_ij|^2 + eps^2) - eps, diag 0
    Eigen::MatrixXd r;   // r_ij = sqrt(|g_ij|^2 + eps^2)
};

inline SmoothedGram smoothed_gram(const Frame& frame, double eps) {
    SmoothedGram out;
    out.g = gram_raw(frame);
    const int m = frame.n_vecs();
    out.s.setZero(m, m);
    out.r.setOnes(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double r = std::sqrt(std::norm(out.g(i, j)) + eps * eps);
            out.r(i, j) = r;
            out.s(i, j) = r - eps;
        }
    }
    return out;
}

} // namespace detail

/// Smoothed objective value only (hot path for line searches).
inline double objective_smoothed(const Frame& frame, const Objective& obj) {
    detail::check_objective_shape(frame, obj);
    const double eps = obj.smoothing_eps;
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    switch (obj.kind) {
        case ObjectiveKind::TotalCoherence: {
            const auto sg = detail::smoothed_gram(frame, eps);
            return sg.s.sum();
        }
        case ObjectiveKind::TotalVolume: {
            double sum = 0.0;
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector&) {
                    const Matrix gk = sub.adjoint() * sub +
                                      eps * Matrix::Identity(obj.k, obj.k);
                    sum += std::sqrt(std::max(gk.determinant().real(), 0.0));
                },
                subset_cap());
            return sum;
        }
        case ObjectiveKind::TotalCompVolume: {
            double sum = 0.0;
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector&) {
                    const Matrix sk = sub * sub.adjoint() +
                                      eps * Matrix::Identity(n, n);
                    sum += std::sqrt(std::max(sk.determinant().real(), 0.0));
                },
                subset_cap());
            return sum;
        }
        case ObjectiveKind::NuclearEnergy: {
            double sum = 0.0;
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector&) {
                    const Eigen::VectorXd sv = singular_values(sub);
                    for (Eigen::Index i = 0; i < sv.size(); ++i) {
                        sum += std::sqrt(sv(i) * sv(i) + eps * eps);
                    }
                },
                subset_cap());
            return sum;
        }
        case ObjectiveKind::NegEquiangularDistance: {
            const auto sg = detail::smoothed_gram(frame, eps);
            const double c = welch_constant(m, n);
            const double target = static_cast<double>(n) / m;
            double sum = 0.0;
            for (int i = 0; i < m; ++i) {
                const double d = sg.g(i, i).real() - target;
                sum += d * d;
            }
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    if (i == j) continue;
                    const double d = sg.s(i, j) - c;
                    sum += d * d;
                }
            }
            return -sum;
        }
        case ObjectiveKind::NegGramVariance: {
            const auto sg = detail::smoothed_gram(frame, eps);
            const double target = static_cast<double>(n) / m;
            const double c_phi = m > 1 ? sg.s.sum() / (static_cast<double>(m) * (m - 1)) : 0.0;
            double sum = 0.0;
            for (int i = 0; i < m; ++i) {
                const double d = sg.g(i, i).real() - target;
                sum += d * d;
            }
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    if (i == j) continue;
                    const double d = sg.s(i, j) - c_phi;
                    sum += d * d;
                }
            }
            return -sum;
        }
    }
    throw Error("objective_smoothed: unreachable");
}

/// The exact (unsmoothed) functional from the measures module.
inline double objective_true(const Frame& frame, const Objective& obj) {
    detail::check_objective_shape(frame, obj);
    switch (obj.kind) {
        case ObjectiveKind::TotalCoherence: return total_coherence(frame);
        case ObjectiveKind::TotalVolume: return total_volume(frame, obj.k);
        case ObjectiveKind::TotalCompVolume: return total_comp_volume(frame, obj.k);
        case ObjectiveKind::NuclearEnergy: return nuclear_energy(frame, obj.k);
        case ObjectiveKind::NegEquiangularDistance: return -equiangular_distance(frame);
        case ObjectiveKind::NegGramVariance: return -gram_variance(frame).v;
    }
    throw Error("objective_true: unreachable");
}

struct ObjectiveValue {
    double smoothed;
    double true_value;
};

inline ObjectiveValue objective_eval(const Frame& frame, const Objective& obj) {
    return {objective_smoothed(frame, obj), objective_true(frame, obj)};
}

/// Euclidean gradient of the smoothed objective with respect to the frame
/// entries. Complex convention: grad = 2 d f / d conj(Phi), so the real and
/// imaginary parts of each entry are the partial derivatives of f with
/// respect to the real and imaginary parts of that entry (Wirtinger).
inline Matrix objective_grad(const Frame& frame, const Objective& obj) {
    detail::check_objective_shape(frame, obj);
    const double eps = obj.smoothing_eps;
    const int m = frame.n_vecs();
    const int n = frame.n_dim();
    const Matrix& phi = frame.entries();

    // Gram-based objectives reduce to grad = 4 Phi A with A_ij the Wirtinger
    // derivative of the (i,j) summand with respect to conj(G_ij).
    switch (obj.kind) {
        case ObjectiveKind::TotalCoherence: {
            const auto sg = detail::smoothed_gram(frame, eps);
            Matrix a = Matrix::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    if (i != j) a(i, j) = sg.g(i, j) / (2.0 * sg.r(i, j));
                }
            }
            return 4.0 * (phi * a);
        }
        case ObjectiveKind::NegEquiangularDistance:
        case ObjectiveKind::NegGramVariance: {
            const auto sg = detail::smoothed_gram(frame, eps);
            const double target = static_cast<double>(n) / m;
            double c = 0.0;
            if (obj.kind == ObjectiveKind::NegEquiangularDistance) {
                c = welch_constant(m, n);
            } else if (m > 1) {
                // the mean cancels in the gradient: sum of (s_ij - mean) is 0
                c = sg.s.sum() / (static_cast<double>(m) * (m - 1));
            }
            Matrix a = Matrix::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                a(i, i) = sg.g(i, i).real() - target;
                for (int j = 0; j < m; ++j) {
                    if (i == j) continue;
                    a(i, j) = (sg.s(i, j) - c) * sg.g(i, j) / sg.r(i, j);
                }
            }
            return -4.0 * (phi * a);
        }
        case ObjectiveKind::TotalVolume: {
            Matrix grad = Matrix::Zero(n, m);
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector& s) {
                    const Matrix gk = sub.adjoint() * sub +
                                      eps * Matrix::Identity(obj.k, obj.k);
                    const double u = std::sqrt(std::max(gk.determinant().real(), 0.0));
                    const Matrix contrib = u * (sub * gk.inverse());
                    for (int j = 0; j < obj.k; ++j) {
                        grad.col(s.indices[static_cast<std::size_t>(j)] - 1) +=
                            contrib.col(j);
                    }
                },
                subset_cap());
            return grad;
        }
        case ObjectiveKind::TotalCompVolume: {
            Matrix grad = Matrix::Zero(n, m);
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector& s) {
                    const Matrix sk = sub * sub.adjoint() +
                                      eps * Matrix::Identity(n, n);
                    const double u = std::sqrt(std::max(sk.determinant().real(), 0.0));
                    const Matrix contrib = u * (sk.inverse() * sub);
                    for (int j = 0; j < obj.k; ++j) {
                        grad.col(s.indices[static_cast<std::size_t>(j)] - 1) +=
                            contrib.col(j);
                    }
                },
                subset_cap());
            return grad;
        }
        case ObjectiveKind::NuclearEnergy: {
            Matrix grad = Matrix::Zero(n, m);
            detail::for_each_column_subset(
                frame, obj.k,
                [&](const Matrix& sub, const SubsetSelector& s) {
                    Eigen::JacobiSVD<Matrix> svd(sub,
                                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
                    if (svd.info() != Eigen::Success) {
                        throw NumericalFailure("objective_grad ne: SVD failed");
                    }
                    Eigen::VectorXd w = svd.singularValues();
                    for (Eigen::Index i = 0; i < w.size(); ++i) {
                        w(i) = w(i) / std::sqrt(w(i) * w(i) + eps * eps);
                    }
                    const Matrix contrib =
                        svd.matrixU() * w.asDiagonal() * svd.matrixV().adjoint();
                    for (int j = 0; j < obj.k; ++j) {
                        grad.col(s.indices[static_cast<std::size_t>(j)] - 1) +=
                            contrib.col(j);
                    }
                },
                subset_cap());
            return grad;
        }
    }
    throw Error("objective_grad: unreachable");
}

enum class Manifold { Parseval, EqualNorm };

inline std::string to_string(Manifold m) {
    return m == Manifold::Parseval ? "parseval" : "equalnorm";
}

/// Maps a matrix to the constraint manifold: polar factor (Phi Phi*)^{-1/2} Phi
/// for Parseval, per-column rescale to sqrt(N/M) for equal norm.
inline Frame retract(const Frame& frame, Manifold manifold) {
    if (manifold == Manifold::Parseval) {
        Matrix entries = inv_sqrt_psd(frame_operator_raw(frame)) * frame.entries();
        if (frame.field() == ScalarField::Real) {
            entries = detail::clean_real(std::move(entries), "retract");
        }
        return Frame(frame.field(), std::move(entries));
    }
    const double radius =
        std::sqrt(static_cast<double>(frame.n_dim()) / frame.n_vecs());
    Matrix entries = frame.entries();
    for (int j = 0; j < frame.n_vecs(); ++j) {
        const double norm = entries.col(j).norm();
        if (norm <= 1e-14) {
            throw ZeroVector("retract equal-norm: column " + std::to_string(j + 1) +
                             " is zero");
        }
        entries.col(j) *= radius / norm;
    }
    return Frame(frame.field(), std::move(entries));
}

/// Projects a Euclidean gradient onto the tangent space of the manifold at a
/// feasible point (the Riemannian gradient of an embedded submanifold).
inline Matrix tangent_project(const Matrix& grad, const Frame& at, Manifold manifold) {
    if (manifold == Manifold::Parseval) {
        const Matrix gp = grad * at.entries().adjoint();
        const Matrix sym = (gp + gp.adjoint()) / 2.0;
        return grad - sym * at.entries();
    }
    Matrix out = grad;
    for (int j = 0; j < at.n_vecs(); ++j) {
        const Vector col = at.entries().col(j);
        const double norm_sq = col.squaredNorm();
        if (norm_sq <= 0.0) continue;
        const double radial = (col.adjoint() * grad.col(j))(0).real();
        out.col(j) -= (radial / norm_sq) * col;
    }
    return out;
}

struct OptimizerConfig {
    Manifold manifold = Manifold::Parseval;
    int max_iters = 400; // per smoothing stage
    double step_init = 1.0;
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
    double grad_tol = 1e-9;
    std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    std::uint64_t seed = 0;
    bool deterministic = false;
    int max_backtracks = 60;
};

enum class OptStatus { Converged, MaxIters, LineSearchFailed };

inline std::string to_string(OptStatus s) {
    switch (s) {
        case OptStatus::Converged: return "converged";
        case OptStatus::MaxIters: return "max_iters";
        case OptStatus::LineSearchFailed: return "line_search_failed";
    }
    return "unknown";
}

struct TraceRow {
    int iter;
    double f_smooth;
    double f_true;
    double grad_norm;
    double step;
};

struct Trace {
    std::vector<TraceRow> rows;
    Frame final_frame;
    OptStatus status;
    double best_true;
};

/// Projected gradient ascent with polar / column retraction and Armijo
/// backtracking on the smoothed objective, annealing the smoothing width
/// through config.eps_schedule. The smoothed objective is nondecreasing
/// across accepted steps within each stage.
inline Trace maximize(const Frame& start, Objective objective,
                      const OptimizerConfig& config) {
    if (config.eps_schedule.empty()) {
        throw InvalidShape("maximize: empty eps schedule");
    }
    Frame current = retract(start, config.manifold);
    std::vector<TraceRow> rows;
    OptStatus status = OptStatus::MaxIters;
    int iter = 0;

    for (double eps : config.eps_schedule) {
        objective.smoothing_eps = eps;
        double f_cur = objective_smoothed(current, objective);
        double step = config.step_init;
        status = OptStatus::MaxIters;

        for (int it = 0; it < config.max_iters; ++it) {
            Matrix grad = objective_grad(current, objective);
            if (current.field() == ScalarField::Real) {
                grad = grad.real().cast<Complex>();
            }
            const Matrix dir = tangent_project(grad, current, config.manifold);
            const double grad_norm = dir.norm();
            rows.push_back({iter, f_cur, objective_true(current, objective),
                            grad_norm, step});
            if (grad_norm <= config.grad_tol) {
                status = OptStatus::Converged;
                break;
            }

            double alpha = step;
            bool accepted = false;
            for (int bt = 0; bt < config.max_backtracks; ++bt) {
                try {
                    Frame candidate = retract(
                        Frame(current.field(), current.entries() + alpha * dir),
                        config.manifold);
                    const double f_cand = objective_smoothed(candidate, objective);
                    if (f_cand >= f_cur + config.armijo_c * alpha * grad_norm * grad_norm -
                                      1e-15) {
                        current = std::move(candidate);
                        f_cur = f_cand;
                        accepted = true;
                        break;
                    }
                } catch (const SingularMatrix&) {
                    // overshot into a rank-deficient point; shrink
                } catch (const ZeroVector&) {
                }
                alpha *= config.backtrack_factor;
            }
            if (!accepted) {
                status = OptStatus::LineSearchFailed;
                break;
            }
            step = std::min(alpha * 2.0, config.step_init * 1024.0);
            ++iter;
        }
    }

    const double best_true = objective_true(current, objective);
    rows.push_back({iter, objective_smoothed(current, objective), best_true, 0.0, 0.0});
    return Trace{std::move(rows), std::move(current), status, best_true};
}

/// Max relative deviation between the analytic gradient of the smoothed
/// objective and central finite differences over every real (and, for
/// complex frames, imaginary) coordinate. Relative error uses the floor
/// max(|analytic|, |fd|, 1e-3) so noise on near-zero entries is not amplified.
inline double gradcheck(const Frame& frame, const Objective& obj, double h = 1e-6) {
    if (h <= 0.0) {
        throw InvalidShape("gradcheck: need h > 0");
    }
    const Matrix analytic = objective_grad(frame, obj);
    const int parts = frame.field() == ScalarField::Real ? 1 : 2;
    double max_err = 0.0;
    for (int i = 0; i < frame.n_dim(); ++i) {
        for (int j = 0; j < frame.n_vecs(); ++j) {
            for (int part = 0; part < parts; ++part) {
                const Complex delta = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
                Matrix up = frame.entries();
                up(i, j) += delta;
                Matrix dn = frame.entries();
                dn(i, j) -= delta;
                const double f_up =
                    objective_smoothed(Frame(frame.field(), std::move(up)), obj);
                const double f_dn =
                    objective_smoothed(Frame(frame.field(), std::move(dn)), obj);
                const double fd = (f_up - f_dn) / (2.0 * h);
                const double an =
                    part == 0 ? analytic(i, j).real() : analytic(i, j).imag();
                const double denom = std::max({std::abs(an), std::abs(fd), 1e-3});
                max_err = std::max(max_err, std::abs(fd - an) / denom);
            }
        }
    }
    return max_err;
}

} // namespace framelab
