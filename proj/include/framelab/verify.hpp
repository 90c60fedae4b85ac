#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "framelab/constructors.hpp"
#include "framelab/errors.hpp"
#include "framelab/frame.hpp"
#include "framelab/measures.hpp"
#include "framelab/rng.hpp"

namespace framelab {

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string context;
    bool skipped = false;
    std::string skip_reason;
};

struct CheckParams {
    int k = 2;
    std::string context; // free-form input description for the report
};

namespace detail {

inline CheckResult result(const std::string& name, const std::string& context,
                          double residual, double tolerance) {
    CheckResult r;
    r.name = name;
    r.context = context;
    r.residual = residual;
    r.tolerance = tolerance;
    r.passed = residual <= tolerance;
    return r;
}

inline CheckResult skipped(const std::string& name, const std::string& context,
                           const std::string& reason) {
    CheckResult r;
    r.name = name;
    r.context = context;
    r.skipped = true;
    r.skip_reason = reason;
    r.passed = true; // skipped checks do not count as failures
    return r;
}

inline std::string frame_label(const Frame& f) {
    return to_string(f.field()) + " " + std::to_string(f.n_dim()) + "x" +
           std::to_string(f.n_vecs());
}

/// All k-volumes; empty optional when they are not within tol of their mean.
inline std::optional<std::vector<double>> equal_volumes(const Frame& f, int k,
                                                        double tol) {
    std::vector<double> vols;
    for_each_subset(f.n_vecs(), k, [&](const SubsetSelector& s) {
        vols.push_back(volume(f, s));
    });
    double mean = 0.0;
    for (double v : vols) mean += v;
    mean /= static_cast<double>(vols.size());
    for (double v : vols) {
        if (std::abs(v - mean) > tol) return std::nullopt;
    }
    return vols;
}

/// Sorted-descending singular values padded with trailing 1s to `size`.
inline std::vector<double> padded_sigma(const Eigen::VectorXd& sv, int size) {
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    while (static_cast<int>(out.size()) < size) out.push_back(1.0);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace detail

/// What kind of input a check expects; the suite uses this to route frames,
/// and each check re-validates and reports a skip when the hypothesis fails.
enum class CheckInput { Parseval, EqualNorm, Any };

struct CheckInfo {
    std::string name;
    std::string statement;
    CheckInput input;
    bool uses_k;
    std::function<CheckResult(const Frame&, const CheckParams&)> fn;
};

namespace detail {

inline bool require_parseval(const Frame& f, const std::string& name,
                             const std::string& ctx, CheckResult& out) {
    if (!predicates(f).is_parseval) {
        out = skipped(name, ctx, "input is not Parseval within 1e-10");
        return false;
    }
    return true;
}

inline bool require_equal_norm(const Frame& f, const std::string& name,
                               const std::string& ctx, CheckResult& out) {
    if (!predicates(f).is_equal_norm) {
        out = skipped(name, ctx, "input is not equal norm within 1e-10");
        return false;
    }
    return true;
}

inline bool require_thin(const Frame& f, const std::string& name,
                         const std::string& ctx, CheckResult& out) {
    if (f.n_dim() >= f.n_vecs()) {
        out = skipped(name, ctx, "needs N < M");
        return false;
    }
    return true;
}

} // namespace detail

inline const std::vector<CheckInfo>& check_registry() {
    using detail::frame_label;
    using detail::result;
    using detail::skipped;
    static const std::vector<CheckInfo> registry = [] {
        std::vector<CheckInfo> reg;
        auto ctx = [](const Frame& f, const CheckParams& p) {
            return p.context.empty() ? frame_label(f) : p.context;
        };

        reg.push_back({"prop_tcnaimark",
                       "total coherence is invariant under Naimark complementation",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (!detail::require_thin(f, "prop_tcnaimark", c, out)) return out;
                           if (!detail::require_parseval(f, "prop_tcnaimark", c, out)) return out;
                           const Frame psi = naimark_complement(f);
                           return result("prop_tcnaimark", c,
                                         std::abs(total_coherence(f) - total_coherence(psi)),
                                         1e-9);
                       }});

        reg.push_back({"thm_main_bound",
                       "TC <= sqrt(N(M-N)(M-1)) on Parseval frames",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (!detail::require_thin(f, "thm_main_bound", c, out)) return out;
                           if (!detail::require_parseval(f, "thm_main_bound", c, out)) return out;
                           const double bound =
                               std::sqrt(static_cast<double>(f.n_dim()) *
                                         (f.n_vecs() - f.n_dim()) * (f.n_vecs() - 1));
                           return result("thm_main_bound", c,
                                         std::max(0.0, total_coherence(f) - bound), 1e-9);
                       }});

        reg.push_back({"prop_tcbound_lower",
                       "TC >= max{N, M-N} on equal-norm Parseval frames",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (!detail::require_thin(f, "prop_tcbound_lower", c, out)) return out;
                           if (!detail::require_parseval(f, "prop_tcbound_lower", c, out)) return out;
                           if (!detail::require_equal_norm(f, "prop_tcbound_lower", c, out)) return out;
                           const double lower =
                               static_cast<double>(std::max(f.n_dim(), f.n_vecs() - f.n_dim()));
                           return result("prop_tcbound_lower", c,
                                         std::max(0.0, lower - total_coherence(f)), 1e-9);
                       }});

        reg.push_back({"split_zero_increases_tc",
                       "splitting a vector over a zero slot raises TC by "
                       "||psi||^2 + (2 sqrt2 - 2) sum_i |<psi, phi_i>|",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (!detail::require_parseval(f, "split_zero_increases_tc", c, out))
                               return out;
                           // stage the input: nonzero columns first, then one zero slot
                           std::vector<int> nonzero;
                           for (int j = 0; j < f.n_vecs(); ++j) {
                               if (f.entries().col(j).norm() > 1e-10) nonzero.push_back(j);
                           }
                           if (nonzero.empty()) {
                               return skipped("split_zero_increases_tc", c,
                                              "no nonzero column to split");
                           }
                           const int m2 = static_cast<int>(nonzero.size()) + 1;
                           Matrix staged = Matrix::Zero(f.n_dim(), m2);
                           for (std::size_t j = 0; j < nonzero.size(); ++j) {
                               staged.col(static_cast<Eigen::Index>(j)) =
                                   f.entries().col(nonzero[j]);
                           }
                           const Frame before(f.field(), staged);
                           const Frame after = split_zero(before);
                           const double delta =
                               total_coherence(after) - total_coherence(before);
                           const Matrix g = gram_raw(before);
                           double cross = 0.0;
                           for (int i = 0; i < m2 - 2; ++i) {
                               cross += std::abs(g(m2 - 2, i));
                           }
                           const double expected =
                               g(m2 - 2, m2 - 2).real() +
                               (2.0 * std::sqrt(2.0) - 2.0) * cross;
                           double residual = std::abs(delta - expected);
                           if (delta <= 0.0) residual = std::max(residual, 1.0);
                           return result("split_zero_increases_tc", c, residual, 1e-10);
                       }});

        reg.push_back({"ead_identity",
                       "EAD = N - N^2/M + M(M-1) c^2 - 2 c TC on Parseval frames",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (!detail::require_thin(f, "ead_identity", c, out)) return out;
                           if (!detail::require_parseval(f, "ead_identity", c, out)) return out;
                           const double m = f.n_vecs();
                           const double n = f.n_dim();
                           const double cw = welch_constant(f.n_vecs(), f.n_dim());
                           const double closed = n - n * n / m + m * (m - 1) * cw * cw -
                                                 2.0 * cw * total_coherence(f);
                           return result("ead_identity", c,
                                         std::abs(equiangular_distance(f) - closed), 1e-8);
                       }});

        reg.push_back({"v_identity",
                       "V = N(M-N)/M - TC^2/(M(M-1)) on Parseval frames",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (f.n_vecs() < 2) {
                               return skipped("v_identity", c, "needs M >= 2");
                           }
                           if (!detail::require_parseval(f, "v_identity", c, out)) return out;
                           const double m = f.n_vecs();
                           const double n = f.n_dim();
                           const double tc = total_coherence(f);
                           const double closed =
                               n * (m - n) / m - tc * tc / (m * (m - 1));
                           return result("v_identity", c,
                                         std::abs(gram_variance(f).v - closed), 1e-8);
                       }});

        reg.push_back({"prop_prodcos",
                       "sum of squared k-volumes equals C(N,k) on Parseval frames",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim()) {
                               return skipped("prop_prodcos", c, "needs 1 <= k <= N");
                           }
                           if (!detail::require_parseval(f, "prop_prodcos", c, out)) return out;
                           return result("prop_prodcos", c,
                                         std::abs(sum_sq_volume(f, p.k) -
                                                  binomial_d(f.n_dim(), p.k)),
                                         1e-9);
                       }});

        reg.push_back({"prop_volbound",
                       "C(N,k) <= V_k <= sqrt(C(M,k) C(N,k)) on Parseval frames",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim()) {
                               return skipped("prop_volbound", c, "needs 1 <= k <= N");
                           }
                           if (!detail::require_parseval(f, "prop_volbound", c, out)) return out;
                           const double vk = total_volume(f, p.k);
                           const double lower = binomial_d(f.n_dim(), p.k);
                           const double upper = std::sqrt(binomial_d(f.n_vecs(), p.k) *
                                                          binomial_d(f.n_dim(), p.k));
                           const double residual =
                               std::max({0.0, lower - vk, vk - upper});
                           return result("prop_volbound", c, residual, 1e-9);
                       }});

        reg.push_back({"thm_equalvol",
                       "equal k-volumes force equal (k-1)-volumes of value c_{M,N,k-1}",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 2 || p.k > f.n_dim() || f.n_dim() >= f.n_vecs()) {
                               return skipped("thm_equalvol", c, "needs 2 <= k <= N < M");
                           }
                           if (!detail::require_parseval(f, "thm_equalvol", c, out)) return out;
                           if (!detail::equal_volumes(f, p.k, 1e-8)) {
                               return skipped("thm_equalvol", c,
                                              "hypothesis not satisfied: k-volumes not equal");
                           }
                           const double target =
                               equal_volume_constant(f.n_vecs(), f.n_dim(), p.k - 1);
                           double residual = 0.0;
                           for_each_subset(f.n_vecs(), p.k - 1, [&](const SubsetSelector& s) {
                               residual = std::max(residual,
                                                   std::abs(volume(f, s) - target));
                           });
                           return result("thm_equalvol", c, residual, 1e-6);
                       }});

        reg.push_back({"cor_equal_2vol_equiangular",
                       "equal 2-volumes plus Parseval imply equiangular",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (f.n_dim() < 2 || f.n_dim() >= f.n_vecs()) {
                               return skipped("cor_equal_2vol_equiangular", c,
                                              "needs 2 <= N < M");
                           }
                           if (!detail::require_parseval(f, "cor_equal_2vol_equiangular", c, out))
                               return out;
                           if (!detail::equal_volumes(f, 2, 1e-8)) {
                               return skipped("cor_equal_2vol_equiangular", c,
                                              "hypothesis not satisfied: 2-volumes not equal");
                           }
                           const auto pred = predicates(f);
                           const double residual =
                               std::max(pred.residuals.at("equal_norm"),
                                        pred.residuals.at("equiangular"));
                           return result("cor_equal_2vol_equiangular", c, residual, 1e-6);
                       }});

        reg.push_back({"prop_naimarkvol",
                       "equal k-volumes carry to the Naimark complement with "
                       "constant c_{M,M-N,k}",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           const int limit = std::min(f.n_dim(), f.n_vecs() - f.n_dim());
                           if (p.k < 1 || p.k > limit) {
                               return skipped("prop_naimarkvol", c,
                                              "needs 1 <= k <= min(N, M-N)");
                           }
                           if (!detail::require_parseval(f, "prop_naimarkvol", c, out)) return out;
                           if (!detail::equal_volumes(f, p.k, 1e-8)) {
                               return skipped("prop_naimarkvol", c,
                                              "hypothesis not satisfied: k-volumes not equal");
                           }
                           const Frame psi = naimark_complement(f);
                           const double target = equal_volume_constant(
                               f.n_vecs(), f.n_vecs() - f.n_dim(), p.k);
                           double residual = 0.0;
                           for_each_subset(f.n_vecs(), p.k, [&](const SubsetSelector& s) {
                               residual = std::max(residual,
                                                   std::abs(volume(psi, s) - target));
                           });
                           return result("prop_naimarkvol", c, residual, 1e-8);
                       }});

        reg.push_back({"prop_svn",
                       "singular values of Phi_K and Psi_{K^c} agree after padding "
                       "with ones",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim() || f.n_dim() >= f.n_vecs()) {
                               return skipped("prop_svn", c, "needs 1 <= k <= N < M");
                           }
                           if (p.k >= f.n_vecs()) {
                               return skipped("prop_svn", c, "needs k < M");
                           }
                           if (!detail::require_parseval(f, "prop_svn", c, out)) return out;
                           const Frame psi = naimark_complement(f);
                           double residual = 0.0;
                           for_each_subset(f.n_vecs(), p.k, [&](const SubsetSelector& s) {
                               const auto sv_phi =
                                   singular_values(columns(f.entries(), s));
                               const SubsetSelector sc(f.n_vecs(), s.complement());
                               const auto sv_psi =
                                   singular_values(columns(psi.entries(), sc));
                               const int size = std::max(static_cast<int>(sv_phi.size()),
                                                         static_cast<int>(sv_psi.size()));
                               const auto a = detail::padded_sigma(sv_phi, size);
                               const auto b = detail::padded_sigma(sv_psi, size);
                               for (int i = 0; i < size; ++i) {
                                   residual = std::max(residual, std::abs(a[static_cast<std::size_t>(i)] -
                                                                          b[static_cast<std::size_t>(i)]));
                               }
                           });
                           return result("prop_svn", c, residual, 1e-9);
                       }});

        reg.push_back({"prop_vcv",
                       "V_k(Phi) = CV_{M-k}(Psi) for Naimark complements",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim() || f.n_dim() >= f.n_vecs() ||
                               p.k >= f.n_vecs()) {
                               return skipped("prop_vcv", c, "needs 1 <= k <= N < M");
                           }
                           if (!detail::require_parseval(f, "prop_vcv", c, out)) return out;
                           const Frame psi = naimark_complement(f);
                           const double vk = total_volume(f, p.k);
                           const double cv = total_comp_volume(psi, f.n_vecs() - p.k);
                           return result("prop_vcv", c, std::abs(vk - cv), 1e-8);
                       }});

        reg.push_back({"plucker_relation_42",
                       "Plucker coordinates of a real (4,2) Parseval frame satisfy "
                       "x12 x34 - x13 x24 + x14 x23 = 0",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (f.n_dim() != 2 || f.n_vecs() != 4 ||
                               f.field() != ScalarField::Real) {
                               return skipped("plucker_relation_42", c,
                                              "needs a real (4,2) frame");
                           }
                           if (!detail::require_parseval(f, "plucker_relation_42", c, out))
                               return out;
                           return result("plucker_relation_42", c,
                                         std::abs(plucker_relation_42(plucker(f))), 1e-10);
                       }});

        reg.push_back({"nukebound_identity",
                       "sum of squared singular values over k-subsets equals "
                       "N C(M-1,k-1) on Parseval frames",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_vecs()) {
                               return skipped("nukebound_identity", c, "needs 1 <= k <= M");
                           }
                           if (!detail::require_parseval(f, "nukebound_identity", c, out))
                               return out;
                           const double expected =
                               static_cast<double>(f.n_dim()) *
                               binomial_d(f.n_vecs() - 1, p.k - 1);
                           return result("nukebound_identity", c,
                                         std::abs(sum_sq_singular(f, p.k) - expected), 1e-9);
                       }});

        reg.push_back({"thm_eanuke_saturation",
                       "equiangular frames have equal 2-nuclear norms and NE_2 attains "
                       "sqrt(MN(M-1)^2/2 + M(M-1)V_2)",
                       CheckInput::Parseval, false,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           if (f.n_dim() < 2 || !predicates(f).is_equiangular) {
                               return skipped("thm_eanuke_saturation", c,
                                              "input is not equiangular");
                           }
                           double lo = std::numeric_limits<double>::infinity();
                           double hi = 0.0;
                           double ne2 = 0.0;
                           for_each_subset(f.n_vecs(), 2, [&](const SubsetSelector& s) {
                               const double nn =
                                   singular_values(columns(f.entries(), s)).sum();
                               lo = std::min(lo, nn);
                               hi = std::max(hi, nn);
                               ne2 += nn;
                           });
                           const double m = f.n_vecs();
                           const double n = f.n_dim();
                           const double bound =
                               std::sqrt(0.5 * m * n * (m - 1) * (m - 1) +
                                         m * (m - 1) * total_volume(f, 2));
                           const double residual =
                               std::max(hi - lo, std::abs(ne2 - bound));
                           return detail::result("thm_eanuke_saturation", c, residual, 1e-9);
                       }});

        reg.push_back({"ne_naimark_offset",
                       "NE_{M-k}(Psi) - NE_k(Phi) = (M-N-k) C(M,k) for Naimark "
                       "complements",
                       CheckInput::Parseval, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           const int limit = std::min(f.n_dim(), f.n_vecs() - f.n_dim());
                           if (p.k < 1 || p.k > limit || p.k >= f.n_vecs()) {
                               return skipped("ne_naimark_offset", c,
                                              "needs 1 <= k <= min(N, M-N)");
                           }
                           if (!detail::require_parseval(f, "ne_naimark_offset", c, out))
                               return out;
                           const Frame psi = naimark_complement(f);
                           const double offset =
                               static_cast<double>(f.n_vecs() - f.n_dim() - p.k) *
                               binomial_d(f.n_vecs(), p.k);
                           const double residual =
                               std::abs(nuclear_energy(psi, f.n_vecs() - p.k) -
                                        nuclear_energy(f, p.k) - offset);
                           return result("ne_naimark_offset", c, residual, 1e-7);
                       }});

        reg.push_back({"thm_fp",
                       "sum of squared k-volumes <= C(N,k) on equal-norm frames, "
                       "with equality iff Parseval",
                       CheckInput::EqualNorm, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim()) {
                               return skipped("thm_fp", c, "needs 1 <= k <= N");
                           }
                           if (!detail::require_equal_norm(f, "thm_fp", c, out)) return out;
                           const double sum_sq = sum_sq_volume(f, p.k);
                           const double cnk = binomial_d(f.n_dim(), p.k);
                           if (predicates(f).is_parseval) {
                               out = result("thm_fp", c, std::abs(sum_sq - cnk), 1e-9);
                               out.context += " [equality branch]";
                           } else {
                               out = result("thm_fp", c,
                                            std::max(0.0, sum_sq - (cnk - 1e-12)), 0.0);
                               out.context += " [strict branch]";
                           }
                           return out;
                       }});

        reg.push_back({"volwelch",
                       "min_K v_k <= c_{M,N,k} on equal-norm frames",
                       CheckInput::EqualNorm, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_dim() || f.n_dim() >= f.n_vecs()) {
                               return skipped("volwelch", c, "needs 1 <= k <= N < M");
                           }
                           if (!detail::require_equal_norm(f, "volwelch", c, out)) return out;
                           const double target =
                               equal_volume_constant(f.n_vecs(), f.n_dim(), p.k);
                           return result("volwelch", c,
                                         std::max(0.0, min_volume(f, p.k) - target), 1e-9);
                       }});

        reg.push_back({"cv_cauchy_binet",
                       "CV_k <= sqrt(C(M,k) C(M-N,M-k)) on equal-norm frames",
                       CheckInput::EqualNorm, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < f.n_dim() || p.k > f.n_vecs() ||
                               f.n_dim() >= f.n_vecs()) {
                               return skipped("cv_cauchy_binet", c, "needs N <= k <= M, N < M");
                           }
                           if (!detail::require_equal_norm(f, "cv_cauchy_binet", c, out))
                               return out;
                           const double bound =
                               std::sqrt(binomial_d(f.n_vecs(), p.k) *
                                         binomial_d(f.n_vecs() - f.n_dim(),
                                                    f.n_vecs() - p.k));
                           return result("cv_cauchy_binet", c,
                                         std::max(0.0, total_comp_volume(f, p.k) - bound),
                                         1e-9);
                       }});

        reg.push_back({"en_ne_sumsq",
                       "sum of squared singular values over k-subsets equals "
                       "(kN/M) C(M,k) on equal-norm frames",
                       CheckInput::EqualNorm, true,
                       [ctx](const Frame& f, const CheckParams& p) {
                           const std::string c = ctx(f, p);
                           CheckResult out;
                           if (p.k < 1 || p.k > f.n_vecs()) {
                               return skipped("en_ne_sumsq", c, "needs 1 <= k <= M");
                           }
                           if (!detail::require_equal_norm(f, "en_ne_sumsq", c, out)) return out;
                           const double expected = static_cast<double>(p.k) * f.n_dim() /
                                                   f.n_vecs() *
                                                   binomial_d(f.n_vecs(), p.k);
                           return result("en_ne_sumsq", c,
                                         std::abs(sum_sq_singular(f, p.k) - expected), 1e-9);
                       }});

        return reg;
    }();
    return registry;
}

inline const CheckInfo& find_check(const std::string& name) {
    for (const auto& info : check_registry()) {
        if (info.name == name) return info;
    }
    throw UnknownCheck("run_check: no check named '" + name + "'");
}

inline CheckResult run_check(const std::string& name, const Frame& frame,
                             const CheckParams& params = {}) {
    return find_check(name).fn(frame, params);
}

struct SuiteConfig {
    std::vector<int> m_list{4, 5, 6, 7, 8};
    std::vector<int> n_list{2, 3, 4};
    std::vector<int> k_list{1, 2, 3};
    int trials = 50;
    std::uint64_t seed = 1;
    ScalarField field = ScalarField::Real;
};

struct VerifyReport {
    std::vector<CheckResult> results;
    int n_passed = 0;
    int n_failed = 0;
    int n_skipped = 0;
    std::uint64_t seed = 0;
    int trials = 0;
};

namespace detail {

/// Aggregates one check over a batch of same-family instances into a single
/// result carrying the worst residual.
inline CheckResult aggregate_check(const CheckInfo& info,
                                   const std::vector<Frame>& frames,
                                   const CheckParams& params) {
    CheckResult agg;
    bool any_run = false;
    std::string first_skip;
    for (const auto& f : frames) {
        CheckResult r = info.fn(f, params);
        if (r.skipped) {
            if (first_skip.empty()) first_skip = r.skip_reason;
            continue;
        }
        if (!any_run || r.residual > agg.residual || (!r.passed && agg.passed)) {
            const std::string keep_ctx = params.context;
            agg = r;
            agg.context = keep_ctx;
        }
        if (!r.passed) agg.passed = false;
        any_run = true;
    }
    if (!any_run) {
        return skipped(info.name, params.context, first_skip.empty()
                                                      ? "no applicable instance"
                                                      : first_skip);
    }
    return agg;
}

} // namespace detail

/// Runs every registered check over constructed reference frames and batches
/// of seeded random Parseval / equal-norm frames for each (m, n) shape.
/// Deterministic for a fixed config.
inline VerifyReport run_suite(const SuiteConfig& config) {
    VerifyReport report;
    report.seed = config.seed;
    report.trials = config.trials;
    std::uint64_t instance_counter = 0;

    auto record = [&report](CheckResult r) {
        if (r.skipped) {
            ++report.n_skipped;
        } else if (r.passed) {
            ++report.n_passed;
        } else {
            ++report.n_failed;
        }
        report.results.push_back(std::move(r));
    };

    auto run_all = [&](const Frame& frame, const std::string& label,
                       CheckInput family) {
        for (const auto& info : check_registry()) {
            if (info.input != CheckInput::Any && info.input != family) continue;
            if (info.uses_k) {
                for (int k : config.k_list) {
                    CheckParams params;
                    params.k = k;
                    params.context = label + " k=" + std::to_string(k);
                    record(info.fn(frame, params));
                }
            } else {
                CheckParams params;
                params.context = label;
                record(info.fn(frame, params));
            }
        }
    };

    auto run_batch = [&](const std::vector<Frame>& frames, const std::string& label,
                         CheckInput family) {
        for (const auto& info : check_registry()) {
            if (info.input != CheckInput::Any && info.input != family) continue;
            if (info.uses_k) {
                for (int k : config.k_list) {
                    CheckParams params;
                    params.k = k;
                    params.context = label + " k=" + std::to_string(k);
                    record(detail::aggregate_check(info, frames, params));
                }
            } else {
                CheckParams params;
                params.context = label;
                record(detail::aggregate_check(info, frames, params));
            }
        }
    };

    for (int m : config.m_list) {
        for (int n : config.n_list) {
            if (n < 1 || n >= m) continue;
            const std::string shape =
                "(" + std::to_string(m) + "," + std::to_string(n) + ")";

            run_all(onb_padded(m, n, config.field), "onb_padded" + shape,
                    CheckInput::Parseval);
            if (m == n + 1) {
                run_all(simplex_etf(n), "simplex" + shape, CheckInput::Parseval);
                run_all(simplex_etf(n), "simplex" + shape, CheckInput::EqualNorm);
            }
            if (m == 7 && n == 3) {
                const Frame h = harmonic_frame(7, {1, 2, 4});
                run_all(h, "harmonic" + shape, CheckInput::Parseval);
                run_all(h, "harmonic" + shape, CheckInput::EqualNorm);
            }
            if (m == 4 && n == 2 && config.field == ScalarField::Real) {
                run_all(optimal_4_2(), "optimal_4_2", CheckInput::Parseval);
            }

            std::vector<Frame> parseval_batch;
            std::vector<Frame> equal_norm_batch;
            parseval_batch.reserve(static_cast<std::size_t>(config.trials));
            equal_norm_batch.reserve(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) {
                parseval_batch.push_back(random_parseval(
                    m, n, config.field, mix_seed(config.seed, instance_counter++)));
                equal_norm_batch.push_back(random_equal_norm(
                    m, n, config.field, mix_seed(config.seed, instance_counter++)));
            }
            run_batch(parseval_batch,
                      "random_parseval" + shape + " x" + std::to_string(config.trials),
                      CheckInput::Parseval);
            run_batch(equal_norm_batch,
                      "random_equal_norm" + shape + " x" +
                          std::to_string(config.trials),
                      CheckInput::EqualNorm);
        }
    }
    return report;
}

} // namespace framelab
