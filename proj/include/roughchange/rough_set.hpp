#pragma once

// Rough-set engine over finite discrete information systems.
//
// An information system is a table of n elements by m attributes holding
// small non-negative integer codes. Choosing a subset P of the attributes
// induces the indiscernibility partition U/P; any target set X then has a
// lower approximation (classes inside X), an upper approximation (classes
// touching X) and a Pawlak accuracy |lower| / |upper|.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roughchange {

using AttributeCode = std::uint32_t;

/// Membership flags over a universe of `size()` elements.
class ElementSet {
public:
    ElementSet() = default;
    explicit ElementSet(std::size_t universe_size, bool value = false) : flags_(universe_size, value ? 1 : 0) {}

    static ElementSet from_indices(std::size_t universe_size, std::span<const std::size_t> indices);

    std::size_t size() const { return flags_.size(); }
    std::size_t count() const;
    bool empty_set() const { return count() == 0; }

    bool contains(std::size_t element) const { return flags_[element] != 0; }
    void insert(std::size_t element) { flags_[element] = 1; }
    void erase(std::size_t element) { flags_[element] = 0; }
    void assign(std::size_t element, bool value) { flags_[element] = value ? 1 : 0; }

    /// True when every member of *this is also in `other`. Sizes must match.
    bool is_subset_of(const ElementSet& other) const;
    /// Members of *this not in `other`. Sizes must match.
    ElementSet minus(const ElementSet& other) const;
    std::vector<std::size_t> indices() const;

    std::span<const std::uint8_t> flags() const { return flags_; }

    friend bool operator==(const ElementSet&, const ElementSet&) = default;

private:
    std::vector<std::uint8_t> flags_;
};

/// Universe of elements described by discrete attribute codes (row-major table).
class InformationSystem {
public:
    /// `codes` holds universe_size rows of domains.size() codes each; every code
    /// for attribute a must be < domains[a]. Throws InvalidArgument otherwise.
    InformationSystem(std::size_t universe_size, std::vector<AttributeCode> domains,
                      std::vector<AttributeCode> codes);

    /// Convenience for tests: one inner vector per element.
    static InformationSystem from_rows(const std::vector<std::vector<AttributeCode>>& rows,
                                       std::vector<AttributeCode> domains);

    std::size_t universe_size() const { return universe_size_; }
    std::size_t attribute_count() const { return domains_.size(); }
    const std::vector<AttributeCode>& domains() const { return domains_; }
    AttributeCode code(std::size_t element, std::size_t attribute) const {
        return codes_[element * domains_.size() + attribute];
    }
    std::span<const AttributeCode> row(std::size_t element) const {
        return std::span<const AttributeCode>(codes_).subspan(element * domains_.size(), domains_.size());
    }

private:
    std::size_t universe_size_;
    std::vector<AttributeCode> domains_;
    std::vector<AttributeCode> codes_;
};

/// Equivalence classes of a universe. Class ids are dense in [0, class_count()).
class Partition {
public:
    /// Validates that ids are dense, every class is non-empty.
    explicit Partition(std::vector<std::size_t> class_of);

    std::size_t universe_size() const { return class_of_.size(); }
    std::size_t class_count() const { return class_sizes_.size(); }
    std::size_t class_of(std::size_t element) const { return class_of_[element]; }
    std::size_t class_size(std::size_t class_id) const { return class_sizes_[class_id]; }
    const std::vector<std::size_t>& class_ids() const { return class_of_; }
    const std::vector<std::size_t>& class_sizes() const { return class_sizes_; }

    /// Number of members of each class that lie in `target`.
    std::vector<std::size_t> intersection_counts(const ElementSet& target) const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::size_t> class_of_;
    std::vector<std::size_t> class_sizes_;
};

struct RoughApproximation {
    ElementSet target;
    ElementSet lower;
    ElementSet upper;
    ElementSet boundary;
    double accuracy = 1.0;

    friend bool operator==(const RoughApproximation&, const RoughApproximation&) = default;
};

/// U/IND(attrs). Class ids follow first occurrence in element order.
/// Throws InvalidArgument on an empty or out-of-range attribute list or an empty universe.
Partition induce_partition(const InformationSystem& is, std::span<const std::size_t> attrs);

/// Lower/upper/boundary of `target` under `partition` plus Pawlak accuracy.
RoughApproximation approximate(const Partition& partition, const ElementSet& target);

/// |lower| / |upper|, defined as 1 for an empty upper approximation.
/// Throws InvariantViolation when lower_size > upper_size.
double pawlak_accuracy(std::size_t lower_size, std::size_t upper_size);

/// |[x] ∩ X| / |[x]| for one element.
double rough_membership(const Partition& partition, const ElementSet& target, std::size_t element);

/// rough_membership for every element at once, in O(n).
std::vector<double> rough_memberships(const Partition& partition, const ElementSet& target);

}  // namespace roughchange
