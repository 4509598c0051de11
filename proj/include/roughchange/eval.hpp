#pragma once

#include <cstddef>
#include <cstdint>
#include <tuple>

#include "roughchange/image.hpp"
#include "roughchange/pipeline.hpp"

namespace roughchange {

/// Confusion matrix of a predicted mask against ground truth; "changed" is the positive class.
struct Metrics {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;  ///< false alarms
    std::size_t false_negatives = 0;  ///< missed alarms
    std::size_t true_negatives = 0;
    double total_error_rate = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    std::size_t total() const { return true_positives + false_positives + false_negatives + true_negatives; }
};

/// DimensionMismatch when the masks differ in size.
/// Precision (recall) is 0 when nothing is predicted (nothing is true).
Metrics compare_masks(const ChangeMask& predicted, const ChangeMask& truth);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    std::uint32_t scalar() const { return r + 2U * g + 3U * b; }
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Rect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
};

/// Synthetic before/after pair: flat background, one rectangular patch in the
/// second image, independent seeded uniform noise in [-noise, +noise] per channel.
struct SynthSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    Rect patch{16, 16, 16, 16};
    Rgb background{40, 60, 80};
    Rgb patch_color{200, 180, 160};
    std::uint32_t noise_amplitude = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthPair {
    RasterImage before;
    RasterImage after;
    ChangeMask truth;
};

SynthPair synth_pair(const SynthSpec& spec);

}  // namespace roughchange
