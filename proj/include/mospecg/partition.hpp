#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "mospecg/common.hpp"

namespace mospecg {

/// A vertex partition: labels[i] is the cluster id of vertex i.
/// In compacted form the labels cover [0, k) with every label used.
struct Partition {
    std::vector<int> labels;
    int k = 0;

    Partition() = default;
    Partition(std::vector<int> l, int k_) : labels(std::move(l)), k(k_) {}

    int n() const { return static_cast<int>(labels.size()); }
};

/// Renumber labels to contiguous 0-based ids in order of first appearance.
inline Partition compact_labels(const std::vector<int>& labels) {
    Partition out;
    out.labels.resize(labels.size());
    std::unordered_map<int, int> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
        out.labels[i] = it->second;
    }
    out.k = static_cast<int>(remap.size());
    return out;
}

/// Cluster sizes, largest first.
inline std::vector<int> cluster_sizes(const Partition& part) {
    std::vector<int> sizes(part.k, 0);
    for (int l : part.labels) sizes[l]++;
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    return sizes;
}

}  // namespace mospecg
