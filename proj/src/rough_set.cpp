#include "roughchange/rough_set.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "roughchange/errors.hpp"

namespace roughchange {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw InvalidArgument(std::string(what) + ": universe sizes differ (" + std::to_string(a) + " vs " +
                              std::to_string(b) + ")");
    }
}

}  // namespace

ElementSet ElementSet::from_indices(std::size_t universe_size, std::span<const std::size_t> indices) {
    ElementSet set(universe_size);
    for (std::size_t i : indices) {
        if (i >= universe_size) {
            throw InvalidArgument("element index " + std::to_string(i) + " outside universe of size " +
                                  std::to_string(universe_size));
        }
        set.insert(i);
    }
    return set;
}

std::size_t ElementSet::count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
    require_same_size(size(), other.size(), "is_subset_of");
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (flags_[i] && !other.flags_[i]) return false;
    }
    return true;
}

ElementSet ElementSet::minus(const ElementSet& other) const {
    require_same_size(size(), other.size(), "minus");
    ElementSet out(size());
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        out.flags_[i] = (flags_[i] && !other.flags_[i]) ? 1 : 0;
    }
    return out;
}

std::vector<std::size_t> ElementSet::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (flags_[i]) out.push_back(i);
    }
    return out;
}

InformationSystem::InformationSystem(std::size_t universe_size, std::vector<AttributeCode> domains,
                                     std::vector<AttributeCode> codes)
    : universe_size_(universe_size), domains_(std::move(domains)), codes_(std::move(codes)) {
    if (domains_.empty()) throw InvalidArgument("information system needs at least one attribute");
    if (codes_.size() != universe_size_ * domains_.size()) {
        throw InvalidArgument("code table has " + std::to_string(codes_.size()) + " entries, expected " +
                              std::to_string(universe_size_ * domains_.size()));
    }
    const std::size_t m = domains_.size();
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        if (codes_[i] >= domains_[i % m]) {
            throw InvalidArgument("code " + std::to_string(codes_[i]) + " of element " + std::to_string(i / m) +
                                  " exceeds domain of attribute " + std::to_string(i % m));
        }
    }
}

InformationSystem InformationSystem::from_rows(const std::vector<std::vector<AttributeCode>>& rows,
                                               std::vector<AttributeCode> domains) {
    std::vector<AttributeCode> codes;
    codes.reserve(rows.size() * domains.size());
    for (const auto& r : rows) {
        if (r.size() != domains.size()) throw InvalidArgument("row width does not match attribute count");
        codes.insert(codes.end(), r.begin(), r.end());
    }
    return InformationSystem(rows.size(), std::move(domains), std::move(codes));
}

Partition::Partition(std::vector<std::size_t> class_of) : class_of_(std::move(class_of)) {
    if (class_of_.empty()) {
        return;
    }
    const std::size_t n_classes = *std::max_element(class_of_.begin(), class_of_.end()) + 1;
    class_sizes_.assign(n_classes, 0);
    for (std::size_t c : class_of_) ++class_sizes_[c];
    if (std::find(class_sizes_.begin(), class_sizes_.end(), 0U) != class_sizes_.end()) {
        throw InvalidArgument("partition class ids must be dense: some class is empty");
    }
}

std::vector<std::size_t> Partition::intersection_counts(const ElementSet& target) const {
    require_same_size(universe_size(), target.size(), "intersection_counts");
    std::vector<std::size_t> hits(class_count(), 0);
    for (std::size_t i = 0; i < class_of_.size(); ++i) {
        if (target.contains(i)) ++hits[class_of_[i]];
    }
    return hits;
}

Partition induce_partition(const InformationSystem& is, std::span<const std::size_t> attrs) {
    if (attrs.empty()) throw InvalidArgument("induce_partition: attribute subset is empty");
    for (std::size_t a : attrs) {
        if (a >= is.attribute_count()) {
            throw InvalidArgument("induce_partition: attribute index " + std::to_string(a) + " out of range");
        }
    }
    if (is.universe_size() == 0) throw InvalidArgument("induce_partition: empty universe");

    const std::size_t n = is.universe_size();
    std::vector<std::size_t> class_of(n);

    // Mixed-radix key over the selected attributes when the joint domain fits in 64 bits.
    bool packable = true;
    std::uint64_t radix_product = 1;
    for (std::size_t a : attrs) {
        const std::uint64_t d = std::max<AttributeCode>(is.domains()[a], 1);
        if (radix_product > std::numeric_limits<std::uint64_t>::max() / d) {
            packable = false;
            break;
        }
        radix_product *= d;
    }

    if (packable) {
        std::unordered_map<std::uint64_t, std::size_t> ids;
        ids.reserve(std::min<std::uint64_t>(radix_product, n));
        for (std::size_t e = 0; e < n; ++e) {
            std::uint64_t key = 0;
            for (std::size_t a : attrs) key = key * std::max<AttributeCode>(is.domains()[a], 1) + is.code(e, a);
            auto [it, inserted] = ids.try_emplace(key, ids.size());
            class_of[e] = it->second;
        }
    } else {
        std::map<std::vector<AttributeCode>, std::size_t> ids;
        std::vector<AttributeCode> key(attrs.size());
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t k = 0; k < attrs.size(); ++k) key[k] = is.code(e, attrs[k]);
            auto [it, inserted] = ids.try_emplace(key, ids.size());
            class_of[e] = it->second;
        }
    }
    return Partition(std::move(class_of));
}

double pawlak_accuracy(std::size_t lower_size, std::size_t upper_size) {
    if (lower_size > upper_size) {
        throw InvariantViolation("pawlak_accuracy: lower approximation larger than upper (" +
                                 std::to_string(lower_size) + " > " + std::to_string(upper_size) + ")");
    }
    if (upper_size == 0) return 1.0;
    return static_cast<double>(lower_size) / static_cast<double>(upper_size);
}

RoughApproximation approximate(const Partition& partition, const ElementSet& target) {
    const std::vector<std::size_t> hits = partition.intersection_counts(target);
    const std::size_t n = partition.universe_size();

    RoughApproximation out{target, ElementSet(n), ElementSet(n), ElementSet(n), 1.0};
    std::size_t lower_size = 0;
    std::size_t upper_size = 0;
    for (std::size_t e = 0; e < n; ++e) {
        const std::size_t c = partition.class_of(e);
        const bool in_upper = hits[c] > 0;
        const bool in_lower = hits[c] == partition.class_size(c);
        out.lower.assign(e, in_lower);
        out.upper.assign(e, in_upper);
        out.boundary.assign(e, in_upper && !in_lower);
        lower_size += in_lower;
        upper_size += in_upper;
    }
    out.accuracy = pawlak_accuracy(lower_size, upper_size);
    return out;
}

double rough_membership(const Partition& partition, const ElementSet& target, std::size_t element) {
    require_same_size(partition.universe_size(), target.size(), "rough_membership");
    if (element >= partition.universe_size()) {
        throw InvalidArgument("rough_membership: element " + std::to_string(element) + " out of range");
    }
    const std::size_t c = partition.class_of(element);
    std::size_t hits = 0;
    for (std::size_t e = 0; e < partition.universe_size(); ++e) {
        if (partition.class_of(e) == c && target.contains(e)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(partition.class_size(c));
}

std::vector<double> rough_memberships(const Partition& partition, const ElementSet& target) {
    const std::vector<std::size_t> hits = partition.intersection_counts(target);
    std::vector<double> per_class(hits.size());
    for (std::size_t c = 0; c < hits.size(); ++c) {
        per_class[c] = static_cast<double>(hits[c]) / static_cast<double>(partition.class_size(c));
    }
    std::vector<double> out(partition.universe_size());
    for (std::size_t e = 0; e < out.size(); ++e) out[e] = per_class[partition.class_of(e)];
    return out;
}

}  // namespace roughchange
