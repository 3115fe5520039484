#include "levyedge/partitions.hpp"

#include <doctest.h>

#include <numeric>
#include <set>
#include <stdexcept>

using namespace levyedge;

namespace {

// Brute-force count of solutions of k_1 + 2 k_2 + ... + nu k_nu = nu, by
// recursion over ASCENDING part sizes -- a different path than the enumerator.
long brute_count(int part, int remaining, int nu) {
    if (remaining == 0) return 1;
    if (part > nu) return 0;
    long total = 0;
    for (int k = 0; part * k <= remaining; ++k)
        total += brute_count(part + 1, remaining - part * k, nu);
    return total;
}

} // namespace

TEST_CASE("enumerate_solutions smallest cases") {
    const auto one = enumerate_solutions(1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].multiplicities == std::vector<int>{1});
    CHECK(one[0].l == 1);

    const auto two = enumerate_solutions(2);
    REQUIRE(two.size() == 2);
    // largest parts first: k_2 = 1 (l = 1) precedes k_1 = 2 (l = 2)
    CHECK(two[0].multiplicities == std::vector<int>{0, 1});
    CHECK(two[0].l == 1);
    CHECK(two[1].multiplicities == std::vector<int>{2, 0});
    CHECK(two[1].l == 2);

    CHECK(enumerate_solutions(5).size() == 7);
}

TEST_CASE("partition_count known values") {
    CHECK(partition_count(1) == 1);
    CHECK(partition_count(4) == 5);
    CHECK(partition_count(12) == 77);
    CHECK(partition_count(60) == 966467);
}

TEST_CASE("partition_count matches brute force") {
    for (int nu = 1; nu <= 12; ++nu) CHECK(partition_count(nu) == brute_count(1, nu, nu));
}

TEST_CASE("enumeration satisfies the defining equation, no duplicates") {
    for (int nu = 1; nu <= 20; ++nu) {
        const auto solutions = enumerate_solutions(nu);
        CHECK(static_cast<std::int64_t>(solutions.size()) == partition_count(nu));
        std::set<std::vector<int>> seen;
        for (const auto& sol : solutions) {
            REQUIRE(sol.multiplicities.size() == static_cast<std::size_t>(nu));
            int weighted = 0;
            for (int m = 1; m <= nu; ++m)
                weighted += m * sol.multiplicities[static_cast<std::size_t>(m) - 1];
            CHECK(weighted == nu);
            CHECK(sol.l == std::accumulate(sol.multiplicities.begin(), sol.multiplicities.end(), 0));
            CHECK(sol.l >= 1);
            CHECK(sol.l <= nu);
            seen.insert(sol.multiplicities);
        }
        CHECK(seen.size() == solutions.size());
    }
}

TEST_CASE("enumeration order is canonical and deterministic") {
    for (int nu : {3, 7, 13}) {
        const auto a = enumerate_solutions(nu);
        const auto b = enumerate_solutions(nu);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].multiplicities == b[i].multiplicities);
        // descending lexicographic on (k_nu, ..., k_1)
        for (std::size_t i = 1; i < a.size(); ++i) {
            std::vector<int> prev(a[i - 1].multiplicities.rbegin(), a[i - 1].multiplicities.rend());
            std::vector<int> cur(a[i].multiplicities.rbegin(), a[i].multiplicities.rend());
            CHECK(prev > cur);
        }
    }
}

TEST_CASE("shared cache returns the same content") {
    const auto cached = partition_solutions(9);
    const auto fresh = enumerate_solutions(9);
    REQUIRE(cached->size() == fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i)
        CHECK((*cached)[i].multiplicities == fresh[i].multiplicities);
    CHECK(partition_solutions(9).get() == cached.get());
}

TEST_CASE("nu bounds enforced") {
    CHECK_THROWS_AS(enumerate_solutions(0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_solutions(61), std::invalid_argument);
    CHECK_THROWS_AS(partition_count(0), std::invalid_argument);
}
