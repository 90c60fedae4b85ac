#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "framelab/constructors.hpp"
#include "framelab/io.hpp"
#include "framelab/measures.hpp"
#include "framelab/optimize.hpp"
#include "framelab/verify.hpp"

namespace framelab {

inline constexpr int kReportSchema = 1;

struct AnalysisOptions {
    std::vector<int> k_list{1, 2};
    int spark_cap = 20;
    PredicateTolerances tolerances{};
};

namespace detail {

inline Json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

} // namespace detail

/// Full measurement report for one frame: every scalar functional, the per-k
/// volume / complementary-volume / nuclear statistics, the equiangular
/// constants and bounds, spark, and structural predicates. Off-diagonal sums
/// count ordered pairs (i, j) and (j, i) separately.
inline Json analyze(const Frame& frame, const AnalysisOptions& options = {}) {
    const int n = frame.n_dim();
    const int m = frame.n_vecs();
    Json j;
    j["schema"] = kReportSchema;
    j["field"] = to_string(frame.field());
    j["n"] = n;
    j["m"] = m;

    const FramePredicates pred = predicates(frame, options.tolerances);
    Json pj;
    pj["is_frame"] = pred.is_frame;
    pj["is_parseval"] = pred.is_parseval;
    pj["is_equal_norm"] = pred.is_equal_norm;
    pj["is_equiangular"] = pred.is_equiangular;
    Json res;
    for (const auto& [key, value] : pred.residuals) res[key] = value;
    pj["residuals"] = std::move(res);
    j["predicates"] = std::move(pj);

    j["tc"] = total_coherence(frame);
    const GramVariance gv = gram_variance(frame);
    j["gram_variance_v"] = gv.v;
    j["c_phi"] = gv.c_phi;
    if (n < m) {
        j["ead"] = equiangular_distance(frame);
        j["ad"] = angular_deviation(frame);
    } else {
        j["ead"] = nullptr;
        j["ad"] = nullptr;
    }
    try {
        j["coherence"] = coherence(frame);
    } catch (const ZeroVector&) {
        j["coherence"] = nullptr;
    }

    double norm_min = std::numeric_limits<double>::infinity();
    double norm_max = 0.0;
    for (int i = 0; i < m; ++i) {
        const double norm = frame.entries().col(i).norm();
        norm_min = std::min(norm_min, norm);
        norm_max = std::max(norm_max, norm);
    }
    j["column_norm_min"] = norm_min;
    j["column_norm_max"] = norm_max;

    if (m <= options.spark_cap) {
        j["spark"] = spark(frame, options.spark_cap);
    } else {
        j["spark"] = "exceeds cap";
    }

    if (n < m) {
        const EquiangularConstants constants =
            equiangular_constants(m, n, options.k_list);
        Json cj;
        cj["c_mn"] = constants.c_mn;
        cj["tc_upper"] = constants.tc_upper;
        cj["tc_lower"] = constants.tc_lower;
        Json per_k;
        for (const auto& [k, pk] : constants.per_k) {
            Json e;
            e["c_mnk"] = detail::opt_json(pk.c_mnk);
            e["vk_upper"] = detail::opt_json(pk.vk_upper);
            e["vk_lower"] = detail::opt_json(pk.vk_lower);
            e["cvk_upper"] = detail::opt_json(pk.cvk_upper);
            e["ne_sum_sq"] = pk.ne_sum_sq;
            per_k[std::to_string(k)] = std::move(e);
        }
        cj["per_k"] = std::move(per_k);
        j["constants"] = std::move(cj);
    } else {
        j["constants"] = nullptr;
    }

    Json per_k;
    for (int k : options.k_list) {
        if (k < 1 || k > m) continue;
        Json e;
        if (k <= n) {
            e["total_volume"] = total_volume(frame, k);
            e["volume_variance"] = volume_variance(frame, k);
            e["min_volume"] = min_volume(frame, k);
            e["sum_sq_volume"] = sum_sq_volume(frame, k);
        } else {
            e["total_volume"] = nullptr;
            e["volume_variance"] = nullptr;
            e["min_volume"] = nullptr;
            e["sum_sq_volume"] = nullptr;
        }
        if (k >= n) {
            e["total_comp_volume"] = total_comp_volume(frame, k);
        } else {
            e["total_comp_volume"] = nullptr;
        }
        e["nuclear_energy"] = nuclear_energy(frame, k);
        const NuclearVariance nv = nuclear_variance(frame, k);
        e["nuclear_variance"] = nv.nvar;
        e["mean_nuclear"] = nv.d_phi_k;
        e["mean_singular"] = nv.n_phi_k;
        per_k[std::to_string(k)] = std::move(e);
    }
    j["per_k"] = std::move(per_k);
    return j;
}

/// Flat CSV rendering of an analysis report:
/// measure,k,value,bound_lower,bound_upper (bounds blank when not defined).
inline std::string analysis_csv(const Json& report) {
    std::ostringstream out;
    out.precision(17);
    out << "measure,k,value,bound_lower,bound_upper\n";
    auto cell = [&](const Json& v) -> std::string {
        if (v.is_null()) return "";
        std::ostringstream s;
        s.precision(17);
        s << v.get<double>();
        return s.str();
    };
    const Json& constants = report.at("constants");
    auto bound = [&](int k, const char* key) -> Json {
        if (constants.is_null()) return nullptr;
        const Json& per_k = constants.at("per_k");
        const std::string ks = std::to_string(k);
        if (!per_k.contains(ks)) return nullptr;
        return per_k.at(ks).at(key);
    };

    out << "tc,," << cell(report.at("tc")) << ","
        << (constants.is_null() ? "" : cell(constants.at("tc_lower"))) << ","
        << (constants.is_null() ? "" : cell(constants.at("tc_upper"))) << "\n";
    out << "ead,," << cell(report.at("ead")) << ",0,\n";
    out << "gram_variance_v,," << cell(report.at("gram_variance_v")) << ",0,\n";
    out << "ad,," << cell(report.at("ad")) << ",0,\n";
    out << "c_phi,," << cell(report.at("c_phi")) << ",,\n";
    out << "coherence,," << cell(report.at("coherence")) << ",,\n";
    for (const auto& [ks, entry] : report.at("per_k").items()) {
        const int k = std::stoi(ks);
        out << "total_volume," << ks << "," << cell(entry.at("total_volume")) << ","
            << cell(bound(k, "vk_lower")) << "," << cell(bound(k, "vk_upper")) << "\n";
        out << "volume_variance," << ks << "," << cell(entry.at("volume_variance"))
            << ",0,\n";
        out << "min_volume," << ks << "," << cell(entry.at("min_volume")) << ",,"
            << cell(bound(k, "c_mnk")) << "\n";
        out << "total_comp_volume," << ks << ","
            << cell(entry.at("total_comp_volume")) << ",,"
            << cell(bound(k, "cvk_upper")) << "\n";
        out << "nuclear_energy," << ks << "," << cell(entry.at("nuclear_energy"))
            << ",,\n";
        out << "nuclear_variance," << ks << "," << cell(entry.at("nuclear_variance"))
            << ",0,\n";
    }
    return out.str();
}

inline Json check_result_to_json(const CheckResult& r) {
    Json j;
    j["name"] = r.name;
    j["context"] = r.context;
    if (r.skipped) {
        j["status"] = "skipped";
        j["reason"] = r.skip_reason;
    } else {
        j["status"] = r.passed ? "passed" : "failed";
        j["residual"] = r.residual;
        j["tolerance"] = r.tolerance;
    }
    return j;
}

inline Json verify_report_to_json(const VerifyReport& report) {
    Json j;
    j["schema"] = kReportSchema;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    Json summary;
    summary["passed"] = report.n_passed;
    summary["failed"] = report.n_failed;
    summary["skipped"] = report.n_skipped;
    j["summary"] = std::move(summary);
    Json checks = Json::array();
    for (const auto& r : report.results) checks.push_back(check_result_to_json(r));
    j["checks"] = std::move(checks);
    return j;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// JUnit-style XML rendering of a verify report for CI consumption.
inline std::string verify_report_to_junit(const VerifyReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<testsuite name=\"framelab-verify\" tests=\""
        << report.results.size() << "\" failures=\"" << report.n_failed
        << "\" skipped=\"" << report.n_skipped << "\">\n";
    for (const auto& r : report.results) {
        out << "  <testcase classname=\"" << detail::xml_escape(r.name)
            << "\" name=\"" << detail::xml_escape(r.context) << "\"";
        if (r.skipped) {
            out << ">\n    <skipped message=\"" << detail::xml_escape(r.skip_reason)
                << "\"/>\n  </testcase>\n";
        } else if (!r.passed) {
            out << ">\n    <failure message=\"residual " << r.residual
                << " exceeds tolerance " << r.tolerance << "\"/>\n  </testcase>\n";
        } else {
            out << "/>\n";
        }
    }
    out << "</testsuite>\n";
    return out.str();
}

/// Trace CSV: one row per recorded iteration.
inline std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "iter,f_smooth,f_true,grad_norm,step\n";
    for (const auto& row : trace.rows) {
        out << row.iter << "," << row.f_smooth << "," << row.f_true << ","
            << row.grad_norm << "," << row.step << "\n";
    }
    return out.str();
}

} // namespace framelab
