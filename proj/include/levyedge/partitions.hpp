#ifndef LEVYEDGE_PARTITIONS_HPP
#define LEVYEDGE_PARTITIONS_HPP

#include <cstdint>
#include <memory>
#include <vector>

namespace levyedge {

// Maximum series order; p(60) = 966467 solutions is the largest set we enumerate.
inline constexpr int partition_max_nu = 60;

// One non-negative integer solution of k_1 + 2 k_2 + ... + nu k_nu = nu.
// multiplicities[m-1] holds k_m; l is the total number of parts.
struct PartitionSolution {
    int nu = 0;
    std::vector<int> multiplicities;
    int l = 0;
};

// All solutions for the given nu, each exactly once, ordered descending-lex
// on (k_nu, ..., k_1), i.e. partitions with largest parts first.
std::vector<PartitionSolution> enumerate_solutions(int nu);

// Shared immutable view of the same list; repeated calls reuse a cache.
std::shared_ptr<const std::vector<PartitionSolution>> partition_solutions(int nu);

// p(nu), by dynamic programming independent of the enumerator.
std::int64_t partition_count(int nu);

} // namespace levyedge

#endif
