#pragma once

#include <compare>
#include <string>
#include <vector>

#include "uiobank/errors.hpp"

namespace uiobank {

// Sorted set of distinct 1-based channel indices over a fixed universe
// {1, ..., universe}. Used for sensor subsets, actuator subsets, and the
// isolated / active sets exchanged between estimator, isolator, and
// supervisor.
class IndexSet {
public:
    IndexSet() = default;

    // Sorts and validates; throws invalid_input on duplicates or
    // out-of-range indices.
    IndexSet(std::vector<int> indices, int universe);

    static IndexSet empty_set(int universe) { return IndexSet({}, universe); }
    static IndexSet full_set(int universe);

    // All subsets of the given cardinality in lexicographic order.
    static std::vector<IndexSet> subsets_of_size(int universe, int k);

    int universe() const { return universe_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(int index) const;
    bool subset_of(const IndexSet& other) const;
    IndexSet complement() const;
    const std::vector<int>& indices() const { return indices_; }

    // Semicolon-joined rendering, e.g. "1;3"; empty set renders as "".
    std::string to_string() const;

    bool operator==(const IndexSet& other) const { return indices_ == other.indices_; }
    // Lexicographic on the sorted index list (universe ignored), which is the
    // tie-break order used by the estimator's argmin.
    std::strong_ordering operator<=>(const IndexSet& other) const {
        return indices_ <=> other.indices_;
    }

private:
    std::vector<int> indices_;
    int universe_ = 0;
};

} // namespace uiobank
