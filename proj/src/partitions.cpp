#include "levyedge/partitions.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace levyedge {

namespace {

void check_nu(int nu) {
    if (nu < 1 || nu > partition_max_nu)
        throw std::invalid_argument("partitions: nu must be in [1, " +
                                    std::to_string(partition_max_nu) + "], got " +
                                    std::to_string(nu));
}

// Emit partitions of `remaining` with parts <= max_part, largest part first.
// counts carries the multiplicities accumulated so far.
void emit(int nu, int remaining, int max_part, std::vector<int>& counts,
          std::vector<PartitionSolution>& out) {
    if (remaining == 0) {
        PartitionSolution s;
        s.nu = nu;
        s.multiplicities = counts;
        s.l = std::accumulate(counts.begin(), counts.end(), 0);
        out.push_back(std::move(s));
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        ++counts[static_cast<std::size_t>(part) - 1];
        emit(nu, remaining - part, part, counts, out);
        --counts[static_cast<std::size_t>(part) - 1];
    }
}

} // namespace

std::vector<PartitionSolution> enumerate_solutions(int nu) {
    check_nu(nu);
    std::vector<PartitionSolution> out;
    std::vector<int> counts(static_cast<std::size_t>(nu), 0);
    emit(nu, nu, nu, counts, out);
    return out;
}

std::shared_ptr<const std::vector<PartitionSolution>> partition_solutions(int nu) {
    check_nu(nu);
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<PartitionSolution>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(nu);
    if (it != cache.end()) return it->second;
    auto entry = std::make_shared<const std::vector<PartitionSolution>>(enumerate_solutions(nu));
    cache.emplace(nu, entry);
    return entry;
}

std::int64_t partition_count(int nu) {
    check_nu(nu);
    // Classic coin-change table over part sizes; shares nothing with emit().
    std::vector<std::int64_t> table(static_cast<std::size_t>(nu) + 1, 0);
    table[0] = 1;
    for (int part = 1; part <= nu; ++part)
        for (int s = part; s <= nu; ++s)
            table[static_cast<std::size_t>(s)] += table[static_cast<std::size_t>(s - part)];
    return table[static_cast<std::size_t>(nu)];
}

} // namespace levyedge
