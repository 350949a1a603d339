#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqbench {

// RAID-0 address arithmetic. Logical space is carved into clusters dealt
// round-robin across targets; nothing here touches real devices.
struct StripeMap {
    int n_targets = 1;
    std::uint64_t cluster_bytes = 65536;

    void validate() const {
        if (n_targets < 1) throw std::invalid_argument("stripe needs at least one target");
        if (cluster_bytes == 0) throw std::invalid_argument("stripe cluster size must be positive");
    }
};

struct Placement {
    int target = 0;
    std::uint64_t offset = 0;  // physical byte offset within the target
};

inline Placement map_offset(const StripeMap& m, std::uint64_t logical) {
    m.validate();
    const std::uint64_t k = logical / m.cluster_bytes;
    Placement p;
    p.target = static_cast<int>(k % static_cast<std::uint64_t>(m.n_targets));
    p.offset = (k / static_cast<std::uint64_t>(m.n_targets)) * m.cluster_bytes +
               logical % m.cluster_bytes;
    return p;
}

inline std::uint64_t inverse_map(const StripeMap& m, const Placement& p) {
    m.validate();
    if (p.target < 0 || p.target >= m.n_targets)
        throw std::invalid_argument("placement target out of range");
    const std::uint64_t kp = p.offset / m.cluster_bytes;
    const std::uint64_t k = kp * static_cast<std::uint64_t>(m.n_targets) +
                            static_cast<std::uint64_t>(p.target);
    return k * m.cluster_bytes + p.offset % m.cluster_bytes;
}

// Split n disks into volumes of at most max_per_volume, as few volumes as
// possible, sizes as even as possible (largest first). 48 -> 24+24, 33 -> 17+16.
inline std::vector<int> plan_volumes(int n_disks, int max_per_volume = 32) {
    if (n_disks < 1) throw std::invalid_argument("need at least one disk");
    if (max_per_volume < 1) throw std::invalid_argument("volume size limit must be positive");
    const int n_volumes = (n_disks + max_per_volume - 1) / max_per_volume;
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(n_volumes));
    int left = n_disks;
    for (int v = n_volumes; v > 0; --v) {
        const int take = (left + v - 1) / v;
        sizes.push_back(take);
        left -= take;
    }
    return sizes;
}

// Deal disks into volumes round-robin, so hardware that enumerates disks
// controller-by-controller spreads every volume across all controllers.
inline std::vector<std::vector<int>> assign_volumes(int n_disks, int max_per_volume = 32) {
    const std::vector<int> sizes = plan_volumes(n_disks, max_per_volume);
    std::vector<std::vector<int>> groups(sizes.size());
    for (std::size_t v = 0; v < sizes.size(); ++v) groups[v].reserve(static_cast<std::size_t>(sizes[v]));
    for (int d = 0; d < n_disks; ++d)
        groups[static_cast<std::size_t>(d) % groups.size()].push_back(d);
    return groups;
}

class StripeGeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Per-target shape of one logical sequential request issued against a
// striped volume. Only geometries where every fragment is one contiguous
// run are supported; anything else is reported, not approximated.
struct FragmentSpec {
    std::uint64_t request_bytes = 0;   // contiguous bytes per fragment
    int targets_per_request = 1;       // distinct targets one logical request touches
    std::uint64_t fragments_per_target_request = 1;  // fragments landing on one touched target
};

inline FragmentSpec fragment_stream(const StripeMap& m, std::uint64_t block_bytes) {
    m.validate();
    if (block_bytes == 0) throw std::invalid_argument("block size must be positive");
    const std::uint64_t n = static_cast<std::uint64_t>(m.n_targets);
    FragmentSpec f;
    if (block_bytes >= m.cluster_bytes) {
        if (block_bytes % m.cluster_bytes != 0)
            throw StripeGeometryError("block size must be a multiple of the cluster size");
        const std::uint64_t clusters = block_bytes / m.cluster_bytes;
        if (clusters % n == 0) {
            // every target takes an equal contiguous slice
            f.request_bytes = block_bytes / n;
            f.targets_per_request = m.n_targets;
            f.fragments_per_target_request = 1;
        } else if (n % clusters == 0) {
            // request spans fewer targets than the stripe is wide
            f.request_bytes = m.cluster_bytes;
            f.targets_per_request = static_cast<int>(clusters);
            f.fragments_per_target_request = 1;
        } else {
            throw StripeGeometryError("block of " + std::to_string(clusters) +
                                      " clusters does not divide evenly across " +
                                      std::to_string(m.n_targets) + " targets");
        }
    } else {
        if (m.cluster_bytes % block_bytes != 0)
            throw StripeGeometryError("small blocks must divide the cluster size");
        f.request_bytes = block_bytes;
        f.targets_per_request = 1;
        f.fragments_per_target_request = 1;
    }
    return f;
}

}  // namespace seqbench
