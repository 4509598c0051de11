#include "roughchange/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughchange/errors.hpp"

namespace roughchange {

namespace {

// Clustering runs over the value histogram; pixels sharing a value share every
// per-point quantity, so weighting each level by its count is exact.
struct Levels {
    std::vector<double> value;
    std::vector<double> weight;
    std::vector<std::size_t> index_of;  // histogram level -> position in value/weight
};

Levels collect_levels(const ScalarField& diff) {
    std::vector<std::uint64_t> hist(kScalarLevels, 0);
    for (std::uint16_t v : diff.values()) ++hist[v];
    Levels levels;
    levels.index_of.assign(kScalarLevels, 0);
    for (std::uint32_t v = 0; v < kScalarLevels; ++v) {
        if (hist[v] == 0) continue;
        levels.index_of[v] = levels.value.size();
        levels.value.push_back(v);
        levels.weight.push_back(static_cast<double>(hist[v]));
    }
    return levels;
}

ClusterModel degenerate_model(const ScalarField& diff, double value, bool fuzzy) {
    ClusterModel model;
    model.centers = {value, value};
    model.assignment.assign(diff.size(), 0);
    if (fuzzy) model.memberships.assign(diff.size(), {1.0, 0.0});
    model.converged = true;
    model.degenerate = true;
    return model;
}

std::uint8_t nearest(double v, const std::vector<double>& centers) {
    return std::abs(v - centers[1]) < std::abs(v - centers[0]) ? 1 : 0;
}

std::array<double, 2> fuzzy_membership(double v, const std::vector<double>& centers, double exponent) {
    const double d0 = std::abs(v - centers[0]);
    const double d1 = std::abs(v - centers[1]);
    if (d0 == 0.0) return {1.0, 0.0};
    if (d1 == 0.0) return {0.0, 1.0};
    const double r = std::pow(d0 / d1, exponent);
    return {1.0 / (1.0 + r), r / (1.0 + r)};
}

void require_non_empty(const ScalarField& diff) {
    if (diff.size() == 0) throw InvalidArgument("clustering needs a non-empty difference field");
}

}  // namespace

void ClusterOptions::validate(bool fuzzy) const {
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (fuzzy && !(fuzzifier > 1.0 && std::isfinite(fuzzifier))) {
        throw InvalidArgument("fuzzifier m must be > 1, got " + std::to_string(fuzzifier));
    }
}

ChangeMask ClusterModel::to_mask(std::size_t width, std::size_t height) const {
    ChangeMask mask(width, height);
    if (degenerate || centers[0] == centers[1]) return mask;
    const std::uint8_t changed_cluster = centers[1] > centers[0] ? 1 : 0;
    for (std::size_t p = 0; p < assignment.size(); ++p) mask.set(p, assignment[p] == changed_cluster);
    return mask;
}

ClusterModel hcm_cluster(const ScalarField& diff, const ClusterOptions& options) {
    options.validate(false);
    require_non_empty(diff);
    const Levels levels = collect_levels(diff);
    const std::size_t k = levels.value.size();
    if (k == 1) return degenerate_model(diff, levels.value.front(), false);

    ClusterModel model;
    model.centers = {levels.value.front(), levels.value.back()};
    std::vector<std::uint8_t> label(k);

    auto assign = [&] {
        double wcss = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            label[i] = nearest(levels.value[i], model.centers);
            const double d = levels.value[i] - model.centers[label[i]];
            wcss += levels.weight[i] * d * d;
        }
        model.objective_history.push_back(wcss);
    };

    assign();
    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        std::array<double, 2> sum{0.0, 0.0};
        std::array<double, 2> weight{0.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) {
            sum[label[i]] += levels.weight[i] * levels.value[i];
            weight[label[i]] += levels.weight[i];
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < 2; ++c) {
            if (weight[c] == 0.0) continue;  // empty cluster keeps its center
            const double updated = sum[c] / weight[c];
            movement = std::max(movement, std::abs(updated - model.centers[c]));
            model.centers[c] = updated;
        }
        assign();
        model.iterations_run = iter;
        if (movement < options.tol) {
            model.converged = true;
            break;
        }
    }

    model.assignment.resize(diff.size());
    for (std::size_t p = 0; p < diff.size(); ++p) model.assignment[p] = label[levels.index_of[diff[p]]];
    return model;
}

ClusterModel fcm_cluster(const ScalarField& diff, const ClusterOptions& options) {
    options.validate(true);
    require_non_empty(diff);
    const Levels levels = collect_levels(diff);
    const std::size_t k = levels.value.size();
    if (k == 1) return degenerate_model(diff, levels.value.front(), true);

    const double m = options.fuzzifier;
    const double exponent = 2.0 / (m - 1.0);
    ClusterModel model;
    model.centers = {levels.value.front(), levels.value.back()};
    std::vector<std::array<double, 2>> u(k);

    auto update_memberships = [&] {
        double objective = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            u[i] = fuzzy_membership(levels.value[i], model.centers, exponent);
            for (std::size_t c = 0; c < 2; ++c) {
                const double d = levels.value[i] - model.centers[c];
                objective += levels.weight[i] * std::pow(u[i][c], m) * d * d;
            }
        }
        model.objective_history.push_back(objective);
    };

    update_memberships();
    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        double movement = 0.0;
        for (std::size_t c = 0; c < 2; ++c) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double w = levels.weight[i] * std::pow(u[i][c], m);
                num += w * levels.value[i];
                den += w;
            }
            if (den == 0.0) continue;
            const double updated = num / den;
            movement = std::max(movement, std::abs(updated - model.centers[c]));
            model.centers[c] = updated;
        }
        update_memberships();
        model.iterations_run = iter;
        if (movement < options.tol) {
            model.converged = true;
            break;
        }
    }

    model.memberships.resize(diff.size());
    model.assignment.resize(diff.size());
    for (std::size_t p = 0; p < diff.size(); ++p) {
        const auto& mu = u[levels.index_of[diff[p]]];
        model.memberships[p] = mu;
        model.assignment[p] = mu[1] > mu[0] ? 1 : 0;
    }
    return model;
}

ChangeMask hcm_detect(const ScalarField& diff, std::size_t max_iter, double tol) {
    ClusterOptions options;
    options.max_iter = max_iter;
    options.tol = tol;
    return hcm_cluster(diff, options).to_mask(diff.width(), diff.height());
}

ChangeMask fcm_detect(const ScalarField& diff, double fuzzifier_m, std::size_t max_iter, double tol) {
    ClusterOptions options;
    options.max_iter = max_iter;
    options.tol = tol;
    options.fuzzifier = fuzzifier_m;
    return fcm_cluster(diff, options).to_mask(diff.width(), diff.height());
}

ChangeMask threshold_diff_detect(const ScalarField& diff, std::uint32_t t0) {
    if (t0 > kScalarMax) throw InvalidArgument("differencing cutoff must be in [0, 1530]");
    ChangeMask mask(diff.width(), diff.height());
    for (std::size_t p = 0; p < diff.size(); ++p) mask.set(p, diff[p] >= t0);
    return mask;
}

}  // namespace roughchange
