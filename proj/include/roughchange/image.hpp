#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "roughchange/rough_set.hpp"

namespace roughchange {

/// 8-bit raster, row-major, channel-interleaved. channels is 1 (gray) or 3 (RGB).
class RasterImage {
public:
    RasterImage(std::size_t width, std::size_t height, std::size_t channels, std::vector<std::uint8_t> samples);
    /// Zero-filled image.
    RasterImage(std::size_t width, std::size_t height, std::size_t channels);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t channels() const { return channels_; }
    std::size_t pixel_count() const { return width_ * height_; }

    std::span<const std::uint8_t> samples() const { return samples_; }
    std::span<std::uint8_t> samples() { return samples_; }

    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
        return samples_[(y * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c = 0) {
        return samples_[(y * width_ + x) * channels_ + c];
    }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t channels_;
    std::vector<std::uint8_t> samples_;
};

/// Largest transformed value: 255 + 2*255 + 3*255.
inline constexpr std::uint32_t kScalarMax = 1530;
/// Number of distinct transformed values.
inline constexpr std::uint32_t kScalarLevels = kScalarMax + 1;

/// One integer per pixel in [0, kScalarMax].
class ScalarField {
public:
    ScalarField(std::size_t width, std::size_t height, std::vector<std::uint16_t> values);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return values_.size(); }
    std::span<const std::uint16_t> values() const { return values_; }
    std::uint16_t operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint16_t> values_;
};

/// Decodes PNG (8-bit gray/RGB/RGBA, alpha dropped), PGM (P2/P5) or PPM (P3/P6),
/// detected by content. Throws FormatError for anything else, including 16-bit data.
RasterImage decode_image(std::span<const std::uint8_t> bytes);

/// Reads and decodes a file. IoError if it cannot be read.
RasterImage load_image(const std::filesystem::path& path);

/// Binary PGM (1 channel) or PPM (3 channels), maxval 255.
std::vector<std::uint8_t> encode_pnm(const RasterImage& img);
std::vector<std::uint8_t> encode_png(const RasterImage& img);

/// Writes PNM for .pgm/.ppm/.pnm extensions, PNG otherwise.
void save_image(const RasterImage& img, const std::filesystem::path& path);

/// R + 2G + 3B per pixel; gray pixels count as R = G = B = v.
ScalarField transform_to_scalar(const RasterImage& img);

/// |a - b| per pixel. DimensionMismatch when the grids differ.
ScalarField abs_difference(const ScalarField& a, const ScalarField& b);

/// Equal-width binning of the full [0, kScalarMax] range: floor(v * bins / 1531).
std::vector<AttributeCode> quantize(const ScalarField& field, std::uint32_t bins);

}  // namespace roughchange
