#pragma once

// Two-cluster baselines on the scalar difference field: hard c-means,
// fuzzy c-means, and plain differencing with a fixed cutoff (a stand-in
// for the IOM detector, whose internals are not reproduced here).
//
// Clustering is deterministic: centers start at min(diff) and max(diff).
// The cluster with the higher center is the changed one.

#include <array>
#include <cstdint>
#include <vector>

#include "roughchange/image.hpp"
#include "roughchange/pipeline.hpp"

namespace roughchange {

struct ClusterOptions {
    std::size_t max_iter = 100;
    double tol = 1e-4;
    double fuzzifier = 2.0;  ///< FCM only

    void validate(bool fuzzy) const;
};

struct ClusterModel {
    std::vector<double> centers;               ///< size 2, centers[0] <= centers[1]
    std::vector<std::array<double, 2>> memberships;  ///< per pixel; FCM only, empty for HCM
    std::vector<std::uint8_t> assignment;      ///< per pixel center index
    std::size_t iterations_run = 0;
    bool converged = false;
    bool degenerate = false;                   ///< all values equal: nothing is changed
    /// Objective after each assignment/membership step (HCM: within-cluster SS, FCM: J_m).
    std::vector<double> objective_history;

    /// Changed = assigned to the higher center; degenerate or equal centers give an empty mask.
    ChangeMask to_mask(std::size_t width, std::size_t height) const;
};

ClusterModel hcm_cluster(const ScalarField& diff, const ClusterOptions& options = {});
ClusterModel fcm_cluster(const ScalarField& diff, const ClusterOptions& options = {});

ChangeMask hcm_detect(const ScalarField& diff, std::size_t max_iter = 100, double tol = 1e-4);
ChangeMask fcm_detect(const ScalarField& diff, double fuzzifier_m = 2.0, std::size_t max_iter = 100,
                      double tol = 1e-4);

/// Changed iff diff >= t0. InvalidArgument unless t0 <= 1530.
ChangeMask threshold_diff_detect(const ScalarField& diff, std::uint32_t t0);

}  // namespace roughchange
