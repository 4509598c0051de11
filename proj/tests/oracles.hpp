#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's partition, approximation or threshold code.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<std::uint32_t>>;

inline bool indiscernible(const Rows& rows, std::size_t a, std::size_t b, const std::vector<std::size_t>& attrs) {
    for (std::size_t k : attrs) {
        if (rows[a][k] != rows[b][k]) return false;
    }
    return true;
}

/// Equivalence class of every element as an explicit member list, by pairwise comparison.
inline std::vector<std::vector<std::size_t>> classes_of(const Rows& rows, const std::vector<std::size_t>& attrs) {
    std::vector<std::vector<std::size_t>> out(rows.size());
    for (std::size_t x = 0; x < rows.size(); ++x) {
        for (std::size_t y = 0; y < rows.size(); ++y) {
            if (indiscernible(rows, x, y, attrs)) out[x].push_back(y);
        }
    }
    return out;
}

struct Approximation {
    std::vector<bool> lower;
    std::vector<bool> upper;
    std::vector<bool> boundary;
    double accuracy = 1.0;
    std::vector<double> membership;
};

inline Approximation approximate(const Rows& rows, const std::vector<std::size_t>& attrs,
                                 const std::vector<bool>& target) {
    const auto classes = classes_of(rows, attrs);
    Approximation out;
    std::size_t lower = 0;
    std::size_t upper = 0;
    for (std::size_t x = 0; x < rows.size(); ++x) {
        bool subset = true;
        bool meets = false;
        std::size_t hits = 0;
        for (std::size_t y : classes[x]) {
            subset = subset && target[y];
            meets = meets || target[y];
            hits += target[y];
        }
        out.lower.push_back(subset);
        out.upper.push_back(meets);
        out.boundary.push_back(meets && !subset);
        out.membership.push_back(static_cast<double>(hits) / static_cast<double>(classes[x].size()));
        lower += subset;
        upper += meets;
    }
    out.accuracy = upper == 0 ? 1.0 : static_cast<double>(lower) / static_cast<double>(upper);
    return out;
}

/// Plain between-class variance maximization, one cutoff at a time, directly from the samples.
/// Returns every cutoff t (upper class = {v >= t}) that attains the maximum.
inline std::vector<std::uint32_t> otsu_maximizers(const std::vector<std::uint32_t>& values) {
    std::vector<long double> scores(1531, -1.0L);
    long double best = -1.0L;
    for (std::uint32_t t = 1; t <= 1530; ++t) {
        long double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (std::uint32_t v : values) {
            if (v >= t) {
                n1 += 1;
                s1 += v;
            } else {
                n0 += 1;
                s0 += v;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const long double n = n0 + n1;
        const long double mu0 = s0 / n0;
        const long double mu1 = s1 / n1;
        scores[t] = (n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1);
        if (scores[t] > best) best = scores[t];
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 1; t <= 1530; ++t) {
        if (best > 0 && scores[t] >= best * (1 - 1e-12L)) out.push_back(t);
    }
    return out;
}

/// Best 2-means split of 1-D data by enumerating every cut of the sorted values.
/// Returns the smallest value assigned to the upper cluster.
inline double best_two_means_split(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double best = std::numeric_limits<double>::infinity();
    double split_value = values.back();
    for (std::size_t cut = 1; cut < values.size(); ++cut) {
        if (values[cut] == values[cut - 1]) continue;
        double sse = 0.0;
        for (int side = 0; side < 2; ++side) {
            const std::size_t lo = side == 0 ? 0 : cut;
            const std::size_t hi = side == 0 ? cut : values.size();
            double mean = 0.0;
            for (std::size_t i = lo; i < hi; ++i) mean += values[i];
            mean /= static_cast<double>(hi - lo);
            for (std::size_t i = lo; i < hi; ++i) sse += (values[i] - mean) * (values[i] - mean);
        }
        if (sse < best) {
            best = sse;
            split_value = values[cut];
        }
    }
    return split_value;
}

}  // namespace oracle
