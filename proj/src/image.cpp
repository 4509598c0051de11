#include "roughchange/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "roughchange/errors.hpp"

namespace roughchange {

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
    if (width_ == 0 || height_ == 0) throw InvalidArgument("image dimensions must be at least 1x1");
    if (channels_ != 1 && channels_ != 3) {
        throw InvalidArgument("image must have 1 or 3 channels, got " + std::to_string(channels_));
    }
    if (samples_.size() != width_ * height_ * channels_) {
        throw InvalidArgument("sample buffer holds " + std::to_string(samples_.size()) + " bytes, expected " +
                              std::to_string(width_ * height_ * channels_));
    }
}

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels)
    : RasterImage(width, height, channels, std::vector<std::uint8_t>(width * height * channels, 0)) {}

ScalarField::ScalarField(std::size_t width, std::size_t height, std::vector<std::uint16_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != width_ * height_) throw InvalidArgument("scalar field size does not match dimensions");
    for (std::uint16_t v : values_) {
        if (v > kScalarMax) throw InvalidArgument("scalar value " + std::to_string(v) + " exceeds 1530");
    }
}

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// Token reader for the PNM header: whitespace separated, '#' starts a comment to end of line.
class PnmCursor {
public:
    explicit PnmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t position() const { return pos_; }

    unsigned long next_number() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw FormatError("PNM: expected a decimal number at byte " + std::to_string(pos_));
        }
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFUL) throw FormatError("PNM: number too large");
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates the header from binary raster data.
    void consume_single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PNM: missing whitespace before raster data");
        }
        ++pos_;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

RasterImage decode_pnm(std::span<const std::uint8_t> bytes) {
    const char kind = static_cast<char>(bytes[1]);
    const bool ascii = kind == '2' || kind == '3';
    const std::size_t channels = (kind == '3' || kind == '6') ? 3 : 1;

    PnmCursor cur(bytes);
    const unsigned long width = cur.next_number();
    const unsigned long height = cur.next_number();
    const unsigned long maxval = cur.next_number();
    if (width == 0 || height == 0) throw FormatError("PNM: zero image dimension");
    if (maxval == 0 || maxval > 65535) throw FormatError("PNM: invalid maxval " + std::to_string(maxval));
    if (maxval > 255) throw FormatError("PNM: 16-bit samples are not supported");

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<std::uint8_t> samples(count);
    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned long v = cur.next_number();
            if (v > maxval) throw FormatError("PNM: sample exceeds maxval");
            samples[i] = static_cast<std::uint8_t>(v);
        }
    } else {
        cur.consume_single_whitespace();
        const std::size_t start = cur.position();
        if (bytes.size() - start < count) throw FormatError("PNM: truncated raster data");
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(start), count, samples.begin());
        for (std::uint8_t v : samples) {
            if (v > maxval) throw FormatError("PNM: sample exceeds maxval");
        }
    }
    return RasterImage(width, height, channels, std::move(samples));
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("PNG: " + msg);
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw FormatError("PNG: 16-bit samples are not supported");
    }
    const bool color = image.format & PNG_FORMAT_FLAG_COLOR;
    const bool alpha = image.format & PNG_FORMAT_FLAG_ALPHA;
    image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);

    const std::size_t width = image.width;
    const std::size_t height = image.height;
    std::vector<std::uint8_t> decoded(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, decoded.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("PNG: " + msg);
    }

    const std::size_t in_channels = (color ? 3 : 1) + (alpha ? 1 : 0);
    const std::size_t out_channels = color ? 3 : 1;
    if (!alpha) return RasterImage(width, height, out_channels, std::move(decoded));

    std::vector<std::uint8_t> samples(width * height * out_channels);
    for (std::size_t p = 0; p < width * height; ++p) {
        std::copy_n(decoded.begin() + static_cast<std::ptrdiff_t>(p * in_channels), out_channels,
                    samples.begin() + static_cast<std::ptrdiff_t>(p * out_channels));
    }
    return RasterImage(width, height, out_channels, std::move(samples));
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= sizeof kPngSignature && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '5' || bytes[1] == '6')) {
        return decode_pnm(bytes);
    }
    throw FormatError("unrecognized image format (expected PNG, PGM or PPM)");
}

RasterImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + path.string());
    try {
        return decode_image(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_pnm(const RasterImage& img) {
    const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" + std::to_string(img.width()) +
                               " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.samples().begin(), img.samples().end());
    return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.samples().data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.samples().data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    const bool pnm = ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
    const std::vector<std::uint8_t> bytes = pnm ? encode_pnm(img) : encode_png(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("error writing " + path.string());
}

ScalarField transform_to_scalar(const RasterImage& img) {
    std::vector<std::uint16_t> values(img.pixel_count());
    const auto samples = img.samples();
    if (img.channels() == 3) {
        for (std::size_t p = 0; p < values.size(); ++p) {
            values[p] = static_cast<std::uint16_t>(samples[3 * p] + 2 * samples[3 * p + 1] + 3 * samples[3 * p + 2]);
        }
    } else {
        for (std::size_t p = 0; p < values.size(); ++p) values[p] = static_cast<std::uint16_t>(6 * samples[p]);
    }
    return ScalarField(img.width(), img.height(), std::move(values));
}

ScalarField abs_difference(const ScalarField& a, const ScalarField& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionMismatch("abs_difference: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
    std::vector<std::uint16_t> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint16_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    }
    return ScalarField(a.width(), a.height(), std::move(out));
}

std::vector<AttributeCode> quantize(const ScalarField& field, std::uint32_t bins) {
    if (bins == 0 || bins > kScalarLevels) {
        throw InvalidArgument("quantize: bins must be in [1, 1531], got " + std::to_string(bins));
    }
    std::vector<AttributeCode> codes(field.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        codes[i] = static_cast<AttributeCode>(std::uint64_t{field[i]} * bins / kScalarLevels);
    }
    return codes;
}

}  // namespace roughchange
