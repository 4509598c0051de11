#include "roughchange/pipeline.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "roughchange/errors.hpp"

namespace roughchange {

CandidateRule CandidateRule::parse(std::string_view text) {
    if (text == "otsu") return otsu();
    if (text == "mean") return mean();
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string_view digits = text.substr(prefix.size());
        std::uint32_t t0 = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t0);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
            throw InvalidArgument("candidate rule: cannot parse cutoff in '" + std::string(text) + "'");
        }
        if (t0 > kScalarMax) throw InvalidArgument("candidate rule: fixed cutoff must be in [0, 1530]");
        return fixed(t0);
    }
    throw InvalidArgument("candidate rule must be otsu, mean or fixed:<t0>, got '" + std::string(text) + "'");
}

std::string CandidateRule::to_string() const {
    switch (kind) {
        case Kind::otsu: return "otsu";
        case Kind::mean: return "mean";
        case Kind::fixed: return "fixed:" + std::to_string(fixed_t0);
    }
    return "otsu";
}

void DetectionParams::validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("threshold T must be in [0, 1], got " + std::to_string(threshold));
    }
    if (bins < 1 || bins > kScalarLevels) {
        throw InvalidArgument("bins must be in [1, 1531], got " + std::to_string(bins));
    }
    if (candidate_rule.kind == CandidateRule::Kind::fixed && candidate_rule.fixed_t0 > kScalarMax) {
        throw InvalidArgument("fixed candidate cutoff must be in [0, 1530]");
    }
}

ChangeMask::ChangeMask(std::size_t width, std::size_t height, ElementSet flags)
    : width_(width), height_(height), flags_(std::move(flags)) {
    if (flags_.size() != width_ * height_) throw InvalidArgument("mask flags do not match dimensions");
}

RasterImage ChangeMask::to_image() const {
    std::vector<std::uint8_t> samples(size());
    for (std::size_t p = 0; p < samples.size(); ++p) samples[p] = changed(p) ? 255 : 0;
    return RasterImage(width_, height_, 1, std::move(samples));
}

ChangeMask ChangeMask::from_image(const RasterImage& img) {
    ChangeMask mask(img.width(), img.height());
    const auto samples = img.samples();
    for (std::size_t p = 0; p < mask.size(); ++p) {
        bool on = false;
        for (std::size_t c = 0; c < img.channels(); ++c) on = on || samples[p * img.channels() + c] >= 128;
        mask.set(p, on);
    }
    return mask;
}

std::uint32_t otsu_cutoff(const ScalarField& diff) {
    std::array<std::uint64_t, kScalarLevels> hist{};
    for (std::uint16_t v : diff.values()) ++hist[v];

    const std::uint64_t total = diff.size();
    std::uint64_t total_sum = 0;
    for (std::uint32_t v = 0; v < kScalarLevels; ++v) total_sum += std::uint64_t{v} * hist[v];

    // Between-class variance times N^2 for a split {<= k} | {> k}:
    //   (S0 * N - S * n0)^2 / (n0 * n1)
    // Maximizers in a histogram gap share one value; t0 is placed mid-gap.
    long double best = -1.0L;
    std::uint32_t first = 0;
    std::uint32_t last = 0;
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (std::uint32_t k = 0; k + 1 < kScalarLevels; ++k) {
        n0 += hist[k];
        s0 += std::uint64_t{k} * hist[k];
        const std::uint64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const long double d = static_cast<long double>(s0) * static_cast<long double>(total) -
                              static_cast<long double>(total_sum) * static_cast<long double>(n0);
        const long double score = d * d / (static_cast<long double>(n0) * static_cast<long double>(n1));
        if (score > best) {
            best = score;
            first = last = k;
        } else if (score == best && last + 1 == k) {
            last = k;
        }
    }
    if (best < 0.0L) {
        // Single-valued histogram.
        const std::uint32_t value = diff.size() == 0 ? 0 : diff[0];
        return std::max<std::uint32_t>(1, value);
    }
    return (first + last) / 2 + 1;
}

std::uint32_t mean_cutoff(const ScalarField& diff) {
    if (diff.size() == 0) return 1;
    std::uint64_t sum = 0;
    for (std::uint16_t v : diff.values()) sum += v;
    const std::uint64_t n = diff.size();
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(1, (sum + n - 1) / n));
}

CandidateSet candidate_change_set(const ScalarField& diff, const CandidateRule& rule) {
    CandidateSet out{ElementSet(diff.size()), 0};
    switch (rule.kind) {
        case CandidateRule::Kind::otsu: out.t0 = otsu_cutoff(diff); break;
        case CandidateRule::Kind::mean: out.t0 = mean_cutoff(diff); break;
        case CandidateRule::Kind::fixed:
            if (rule.fixed_t0 > kScalarMax) throw InvalidArgument("fixed candidate cutoff must be in [0, 1530]");
            out.t0 = rule.fixed_t0;
            break;
    }
    for (std::size_t p = 0; p < diff.size(); ++p) out.members.assign(p, diff[p] >= out.t0);
    return out;
}

InformationSystem build_information_system(const ScalarField& before, const ScalarField& after, std::uint32_t bins) {
    if (before.width() != after.width() || before.height() != after.height()) {
        throw DimensionMismatch("information system: scalar fields differ in size");
    }
    const std::vector<AttributeCode> c1 = quantize(before, bins);
    const std::vector<AttributeCode> c2 = quantize(after, bins);
    std::vector<AttributeCode> codes(2 * c1.size());
    for (std::size_t p = 0; p < c1.size(); ++p) {
        codes[2 * p] = c1[p];
        codes[2 * p + 1] = c2[p];
    }
    return InformationSystem(c1.size(), {bins, bins}, std::move(codes));
}

DetectionResult detect_changes(const RasterImage& before, const RasterImage& after, const DetectionParams& params) {
    params.validate();
    if (before.width() != after.width() || before.height() != after.height()) {
        throw DimensionMismatch("images differ in size: " + std::to_string(before.width()) + "x" +
                                std::to_string(before.height()) + " vs " + std::to_string(after.width()) + "x" +
                                std::to_string(after.height()));
    }

    const ScalarField s1 = transform_to_scalar(before);
    const ScalarField s2 = transform_to_scalar(after);
    const InformationSystem is = build_information_system(s1, s2, params.bins);
    constexpr std::array<std::size_t, 2> kBothAttributes{0, 1};
    const Partition partition = induce_partition(is, kBothAttributes);

    CandidateSet candidates = candidate_change_set(abs_difference(s1, s2), params.candidate_rule);
    RoughApproximation approx = approximate(partition, candidates.members);
    std::vector<double> membership = rough_memberships(partition, candidates.members);

    ChangeMask mask(before.width(), before.height());
    for (std::size_t p = 0; p < membership.size(); ++p) mask.set(p, membership[p] >= params.threshold);

    DetectionReport report;
    report.lower_count = approx.lower.count();
    report.upper_count = approx.upper.count();
    report.global_accuracy = approx.accuracy;
    report.changed_count = mask.changed_count();
    report.candidate_t0 = candidates.t0;
    report.params = params;
    if (params.threshold == 0.0) {
        report.warnings.emplace_back("threshold T = 0 marks every pixel as changed");
    }
    return DetectionResult{std::move(mask), std::move(report), std::move(approx), std::move(membership)};
}

void save_mask(const ChangeMask& mask, const std::filesystem::path& path) { save_image(mask.to_image(), path); }

ChangeMask load_mask(const std::filesystem::path& path) { return ChangeMask::from_image(load_image(path)); }

}  // namespace roughchange
