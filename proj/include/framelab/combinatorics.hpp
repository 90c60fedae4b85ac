#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "framelab/errors.hpp"

namespace framelab {

/// C(n, k) as uint64, saturating at UINT64_MAX on overflow.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int j = 1; j <= k; ++j) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + j);
        // result * num / j is exact at every step; guard the multiply.
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = result * num / static_cast<std::uint64_t>(j);
    }
    return result;
}

inline double binomial_d(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (int j = 1; j <= k; ++j) {
        result *= static_cast<double>(n - k + j) / static_cast<double>(j);
    }
    return result;
}

/// Default cap on enumerated subsets; FRAMELAB_SUBSET_CAP overrides it.
inline std::uint64_t subset_cap() {
    static const std::uint64_t cap = [] {
        if (const char* env = std::getenv("FRAMELAB_SUBSET_CAP")) {
            const unsigned long long v = std::strtoull(env, nullptr, 10);
            if (v > 0) return static_cast<std::uint64_t>(v);
        }
        return std::uint64_t{2'000'000};
    }();
    return cap;
}

/// An ordered k-subset K of {1..m}, 1-based, strictly increasing.
struct SubsetSelector {
    int m = 0;
    std::vector<int> indices;

    SubsetSelector() = default;
    SubsetSelector(int m_, std::vector<int> idx) : m(m_), indices(std::move(idx)) {
        if (m < 1 || indices.empty() || static_cast<int>(indices.size()) > m) {
            throw InvalidShape("SubsetSelector: need 1 <= k <= m");
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 1 || indices[i] > m) {
                throw IndexOutOfRange("SubsetSelector: index " +
                                      std::to_string(indices[i]) + " outside {1.." +
                                      std::to_string(m) + "}");
            }
            if (i > 0 && indices[i] <= indices[i - 1]) {
                throw InvalidShape("SubsetSelector: indices must be strictly increasing");
            }
        }
    }

    int k() const { return static_cast<int>(indices.size()); }

    /// K^c, sorted increasing, size m - k.
    std::vector<int> complement() const {
        std::vector<int> comp;
        comp.reserve(static_cast<std::size_t>(m - k()));
        std::size_t pos = 0;
        for (int i = 1; i <= m; ++i) {
            if (pos < indices.size() && indices[pos] == i) {
                ++pos;
            } else {
                comp.push_back(i);
            }
        }
        return comp;
    }
};

/// Streams all C(m,k) subsets exactly once in lexicographic order.
class SubsetStream {
public:
    SubsetStream(int m, int k, std::uint64_t cap = subset_cap()) : m_(m), k_(k) {
        if (k <= 0 || k > m) {
            throw InvalidShape("subsets: need 0 < k <= m, got k=" +
                               std::to_string(k) + ", m=" + std::to_string(m));
        }
        const std::uint64_t count = binomial(m, k);
        if (count > cap) {
            throw CapExceeded("subsets: C(" + std::to_string(m) + "," +
                                  std::to_string(k) + ") = " + std::to_string(count) +
                                  " exceeds cap " + std::to_string(cap),
                              count);
        }
        current_.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) current_[static_cast<std::size_t>(i)] = i + 1;
    }

    std::optional<SubsetSelector> next() {
        if (done_) return std::nullopt;
        SubsetSelector out(m_, current_);
        // advance to the lexicographic successor
        int i = k_ - 1;
        while (i >= 0 && current_[static_cast<std::size_t>(i)] == m_ - k_ + 1 + i) --i;
        if (i < 0) {
            done_ = true;
        } else {
            ++current_[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k_; ++j) {
                current_[static_cast<std::size_t>(j)] =
                    current_[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
        return out;
    }

private:
    int m_;
    int k_;
    std::vector<int> current_;
    bool done_ = false;
};

template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn, std::uint64_t cap = subset_cap()) {
    SubsetStream stream(m, k, cap);
    while (auto s = stream.next()) {
        fn(*s);
    }
}

inline std::vector<SubsetSelector> all_subsets(int m, int k,
                                               std::uint64_t cap = subset_cap()) {
    std::vector<SubsetSelector> out;
    out.reserve(static_cast<std::size_t>(binomial(m, k)));
    for_each_subset(m, k, [&](const SubsetSelector& s) { out.push_back(s); }, cap);
    return out;
}

} // namespace framelab
