#include "uiobank/index_set.hpp"

#include <algorithm>

namespace uiobank {

IndexSet::IndexSet(std::vector<int> indices, int universe) : indices_(std::move(indices)), universe_(universe) {
    if (universe_ < 0) fail(ErrorCode::invalid_input, "index set universe must be non-negative");
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        fail(ErrorCode::invalid_input, "index set contains duplicates");
    }
    for (int i : indices_) {
        if (i < 1 || i > universe_) {
            fail(ErrorCode::invalid_input,
                 "index " + std::to_string(i) + " outside universe 1.." + std::to_string(universe_));
        }
    }
}

IndexSet IndexSet::full_set(int universe) {
    std::vector<int> all(static_cast<std::size_t>(universe));
    for (int i = 0; i < universe; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    return IndexSet(std::move(all), universe);
}

std::vector<IndexSet> IndexSet::subsets_of_size(int universe, int k) {
    if (k < 0 || k > universe) return {};
    std::vector<IndexSet> out;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.emplace_back(pick, universe);
        // next combination in lexicographic order
        int pos = k - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == universe - (k - 1 - pos)) --pos;
        if (pos < 0) break;
        ++pick[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

bool IndexSet::contains(int index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool IndexSet::subset_of(const IndexSet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

IndexSet IndexSet::complement() const {
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(universe_ - size()));
    for (int i = 1; i <= universe_; ++i) {
        if (!contains(i)) rest.push_back(i);
    }
    return IndexSet(std::move(rest), universe_);
}

std::string IndexSet::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(indices_[i]);
    }
    return out;
}

} // namespace uiobank
