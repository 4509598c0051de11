#include "roughchange/eval.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "roughchange/errors.hpp"

namespace roughchange {

Metrics compare_masks(const ChangeMask& predicted, const ChangeMask& truth) {
    if (predicted.width() != truth.width() || predicted.height() != truth.height()) {
        throw DimensionMismatch("compare_masks: " + std::to_string(predicted.width()) + "x" +
                                std::to_string(predicted.height()) + " vs " + std::to_string(truth.width()) + "x" +
                                std::to_string(truth.height()));
    }
    Metrics m;
    for (std::size_t p = 0; p < truth.size(); ++p) {
        const bool pred = predicted.changed(p);
        const bool real = truth.changed(p);
        if (pred && real) ++m.true_positives;
        else if (pred) ++m.false_positives;
        else if (real) ++m.false_negatives;
        else ++m.true_negatives;
    }
    const auto tp = static_cast<double>(m.true_positives);
    const std::size_t predicted_pos = m.true_positives + m.false_positives;
    const std::size_t actual_pos = m.true_positives + m.false_negatives;
    m.total_error_rate = truth.size() == 0 ? 0.0
                         : static_cast<double>(m.false_positives + m.false_negatives) / static_cast<double>(truth.size());
    m.precision = predicted_pos == 0 ? 0.0 : tp / static_cast<double>(predicted_pos);
    m.recall = actual_pos == 0 ? 0.0 : tp / static_cast<double>(actual_pos);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

void SynthSpec::validate() const {
    if (width == 0 || height == 0) throw InvalidArgument("synthetic image must be at least 1x1");
    if (patch.x + patch.w > width || patch.y + patch.h > height) {
        throw InvalidArgument("patch rectangle does not fit inside the image");
    }
    if (noise_amplitude > 255) throw InvalidArgument("noise amplitude must be in [0, 255]");
}

namespace {

// Uniform integer in [-amplitude, amplitude] by rejection on the raw 64-bit
// stream; the engine output is fully specified by the standard, so the draw
// sequence is portable.
class NoiseSource {
public:
    NoiseSource(std::uint64_t seed, std::uint32_t amplitude) : engine_(seed), span_(2ULL * amplitude + 1) {
        limit_ = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span_;
        amplitude_ = amplitude;
    }

    int next() {
        if (amplitude_ == 0) return 0;
        std::uint64_t x = engine_();
        while (x >= limit_) x = engine_();
        return static_cast<int>(x % span_) - static_cast<int>(amplitude_);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t span_;
    std::uint64_t limit_ = 0;
    std::uint32_t amplitude_ = 0;
};

std::uint8_t clamp_sample(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void paint(RasterImage& img, std::size_t x, std::size_t y, const Rgb& color, NoiseSource& noise) {
    img.at(x, y, 0) = clamp_sample(color.r + noise.next());
    img.at(x, y, 1) = clamp_sample(color.g + noise.next());
    img.at(x, y, 2) = clamp_sample(color.b + noise.next());
}

}  // namespace

SynthPair synth_pair(const SynthSpec& spec) {
    spec.validate();
    NoiseSource noise(spec.seed, spec.noise_amplitude);
    RasterImage before(spec.width, spec.height, 3);
    RasterImage after(spec.width, spec.height, 3);
    ChangeMask truth(spec.width, spec.height);

    auto in_patch = [&](std::size_t x, std::size_t y) {
        return x >= spec.patch.x && x < spec.patch.x + spec.patch.w && y >= spec.patch.y &&
               y < spec.patch.y + spec.patch.h;
    };
    for (std::size_t y = 0; y < spec.height; ++y) {
        for (std::size_t x = 0; x < spec.width; ++x) paint(before, x, y, spec.background, noise);
    }
    for (std::size_t y = 0; y < spec.height; ++y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
            const bool patch = in_patch(x, y);
            paint(after, x, y, patch ? spec.patch_color : spec.background, noise);
            truth.set(y * spec.width + x, patch);
        }
    }
    return SynthPair{std::move(before), std::move(after), std::move(truth)};
}

}  // namespace roughchange
