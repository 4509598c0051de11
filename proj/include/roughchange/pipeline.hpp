#pragma once

// Rough-clustering change detection between two co-registered images.
//
//   1. Each pixel of both images is reduced to R + 2G + 3B.
//   2. Every pixel becomes an element with two attributes: the quantized
//      scalar in the first image and in the second.
//   3. Pixels with identical (before, after) codes are indiscernible. The
//      candidate changed set C holds the pixels whose scalar difference clears
//      a data-driven cutoff; C is approximated from below and above.
//   4. Pawlak accuracy of C is reported.
//   5. A pixel is marked changed when its rough membership in C reaches T.
//   6. The mask is written white = changed, black = unchanged.
//
// The lower approximation is the set of certainly-changed pixels and the
// boundary is possibly-changed, so T = 1 yields lower(C) and T -> 0+ yields upper(C).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roughchange/image.hpp"
#include "roughchange/rough_set.hpp"

namespace roughchange {

/// How the scalar cutoff t0 for the candidate set is chosen.
struct CandidateRule {
    enum class Kind { otsu, mean, fixed };
    Kind kind = Kind::otsu;
    std::uint32_t fixed_t0 = 0;  ///< only meaningful for Kind::fixed

    static CandidateRule otsu() { return {Kind::otsu, 0}; }
    static CandidateRule mean() { return {Kind::mean, 0}; }
    static CandidateRule fixed(std::uint32_t t0) { return {Kind::fixed, t0}; }

    /// Accepts "otsu", "mean" or "fixed:<t0>".
    static CandidateRule parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const CandidateRule&, const CandidateRule&) = default;
};

struct DetectionParams {
    double threshold = 0.5;
    std::uint32_t bins = 32;
    CandidateRule candidate_rule = CandidateRule::otsu();

    /// Throws InvalidArgument unless 0 <= threshold <= 1, 1 <= bins <= 1531, fixed t0 <= 1530.
    void validate() const;
};

class ChangeMask {
public:
    ChangeMask(std::size_t width, std::size_t height) : width_(width), height_(height), flags_(width * height) {}
    ChangeMask(std::size_t width, std::size_t height, ElementSet flags);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return flags_.size(); }
    bool changed(std::size_t pixel) const { return flags_.contains(pixel); }
    void set(std::size_t pixel, bool changed) { flags_.assign(pixel, changed); }
    std::size_t changed_count() const { return flags_.count(); }
    const ElementSet& flags() const { return flags_; }

    /// 1-channel raster, 255 = changed, 0 = unchanged.
    RasterImage to_image() const;
    /// Any sample >= 128 on any channel counts as changed.
    static ChangeMask from_image(const RasterImage& img);

    friend bool operator==(const ChangeMask&, const ChangeMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    ElementSet flags_;
};

struct CandidateSet {
    ElementSet members;
    std::uint32_t t0 = 0;  ///< resolved cutoff, members = { p : diff(p) >= t0 }
};

struct DetectionReport {
    double global_accuracy = 1.0;
    std::size_t changed_count = 0;
    std::size_t lower_count = 0;
    std::size_t upper_count = 0;
    std::uint32_t candidate_t0 = 0;
    DetectionParams params;
    std::vector<std::string> warnings;
};

struct DetectionResult {
    ChangeMask mask;
    DetectionReport report;
    /// Rough approximation of the candidate set under the (before, after) partition.
    RoughApproximation approximation;
    std::vector<double> membership;
};

/// Otsu cutoff over the 1531-level histogram of `diff`. Returns t0 such that
/// the upper class is { v >= t0 }. A constant field resolves to max(1, value).
std::uint32_t otsu_cutoff(const ScalarField& diff);

/// max(1, ceil(mean(diff))).
std::uint32_t mean_cutoff(const ScalarField& diff);

CandidateSet candidate_change_set(const ScalarField& diff, const CandidateRule& rule);

/// Two-attribute information system (quantized before, quantized after), one element per pixel.
InformationSystem build_information_system(const ScalarField& before, const ScalarField& after, std::uint32_t bins);

/// Full detection. DimensionMismatch for different grids, InvalidArgument for bad params.
DetectionResult detect_changes(const RasterImage& before, const RasterImage& after, const DetectionParams& params);

/// PNM for .pgm/.pnm, PNG otherwise; values are exactly 0 or 255.
void save_mask(const ChangeMask& mask, const std::filesystem::path& path);
ChangeMask load_mask(const std::filesystem::path& path);

}  // namespace roughchange
