#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unistd.h>

#include "clawmark/fiber.hpp"
#include "test_support.hpp"

using namespace clawmark;
using testsupport::throws_kind;

TEST_CASE("fiber enumeration finds the documented tables") {
    Table t0 = testsupport::example_t0();
    FiberKey key = fiber_key_of(t0);
    std::vector<Table> fiber = enumerate_fiber(key);
    auto contains = [&](const Table& t) {
        for (const Table& member : fiber)
            if (member == t) return true;
        return false;
    };
    CHECK(contains(t0));
    CHECK(contains(testsupport::example_mid()));
    CHECK(contains(testsupport::example_t1()));
    CHECK(throws_kind([&] { enumerate_fiber(key, 1); }, ErrorKind::Capacity));
}

TEST_CASE("degenerate fibers") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table one_row(z2, 3, {{1, 1, 0}});
    CHECK(enumerate_fiber(fiber_key_of(one_row)).size() == 1);
    CHECK(min_connecting_degree(fiber_key_of(one_row), 5) == 2);

    Table locked(z2, 2, {{0, 0}, {1, 1}});
    std::vector<Table> fiber = enumerate_fiber(fiber_key_of(locked));
    CHECK(fiber.size() == 1);
    CHECK(fiber[0] == locked);
}

TEST_CASE("the documented fiber is connected in degree 2") {
    CHECK(min_connecting_degree(fiber_key_of(testsupport::example_t0()), 4) == 2);
}

TEST_CASE("markov widths at tiny sizes") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    // With three columns every Z2 fiber is a singleton (the column counts
    // pin down each flow's multiplicity), so the interesting case needs four.
    WidthReport r = markov_width(z2, 4, 2, 2);
    CHECK(r.width == 2);
    CHECK_FALSE(r.vacuous);
    CHECK_FALSE(r.exceeded);
    CHECK_FALSE(r.capped);

    WidthReport vac = markov_width(z2, 3, 2, 4);
    CHECK(vac.width == 2);
    CHECK(vac.vacuous);

    WidthReport z3 = markov_width(GroupSpec::parse("Z3"), 3, 3, 3);
    CHECK(z3.width <= 3);
    CHECK_FALSE(z3.exceeded);
    CHECK_FALSE(z3.capped);
}

TEST_CASE("fibers partition the degree-d tables") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    WidthReport r = markov_width(z2, 3, 2, 2);
    // 2-multisets of the 4 flows: C(5,2) = 10.
    CHECK(r.tables_examined == 10);
    std::uint64_t total = 0;
    for (const FiberResult& f : r.fibers) total += f.size;
    CHECK(total == 10);
}

TEST_CASE("connectivity degree is monotone and bounded by d") {
    Table t0 = testsupport::example_t0();
    FiberKey key = fiber_key_of(t0);
    auto at2 = min_connecting_degree(key, 2);
    auto at4 = min_connecting_degree(key, 4);
    REQUIRE(at2.has_value());
    REQUIRE(at4.has_value());
    CHECK(*at2 == *at4);
    CHECK(*at4 <= t0.degree());
}

TEST_CASE("union-find agrees with explicit reachability on a small fiber") {
    Table t0 = testsupport::example_t0();
    std::vector<Table> fiber = enumerate_fiber(fiber_key_of(t0));
    REQUIRE(fiber.size() >= 2);
    std::vector<int> comp = fiber_components(fiber, 2);

    // Brute-force reachability over explicit degree<=2 move edges.
    const int size = static_cast<int>(fiber.size());
    std::vector<std::vector<int>> adjacent(size);
    std::map<std::string, int> index;
    for (int i = 0; i < size; ++i) index[table_bytes(fiber[i])] = i;
    for (int i = 0; i < size; ++i)
        for_each_neighbor(fiber[i], 2, [&](const Table& nt, const Move&) {
            auto it = index.find(table_bytes(nt));
            REQUIRE(it != index.end());
            adjacent[i].push_back(it->second);
            return true;
        });
    std::vector<int> oracle(size, -1);
    int next = 0;
    for (int s = 0; s < size; ++s) {
        if (oracle[s] != -1) continue;
        std::vector<int> stack{s};
        oracle[s] = next;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adjacent[v])
                if (oracle[w] == -1) {
                    oracle[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    CHECK(comp == oracle);
}

TEST_CASE("result cache replays and skips corrupt lines") {
    std::string path = std::string("cache_test_") + std::to_string(::getpid()) + ".log";
    {
        std::ofstream out(path);
        out << "Z2 3 2 00000000deadbeef 2\n";
        out << "this line is garbage\n";
        out << "Z3 4 3 0000000000000abc 3\n";
        out << "Z3 4 3 0000000000000abc -7\n";  // invalid min_k
    }
    ResultCache cache(path);
    CHECK(cache.size() == 2);
    CHECK(cache.skipped_lines() == 2);
    CHECK(cache.lookup("Z2", 3, 2, 0xdeadbeefull) == 2);
    CHECK(cache.lookup("Z3", 4, 3, 0xabcull) == 3);
    CHECK_FALSE(cache.lookup("Z2", 3, 3, 0xdeadbeefull).has_value());

    cache.store("Z4", 5, 2, 0x1234ull, 2);
    ResultCache reread(path);
    CHECK(reread.lookup("Z4", 5, 2, 0x1234ull) == 2);
    std::remove(path.c_str());
}

TEST_CASE("cached widths match fresh widths") {
    std::string path = std::string("cache_width_") + std::to_string(::getpid()) + ".log";
    std::remove(path.c_str());
    GroupSpec z2 = GroupSpec::parse("Z2");
    WidthReport fresh = markov_width(z2, 4, 3, 2);
    {
        ResultCache cache(path);
        WidthOptions options;
        options.cache = &cache;
        WidthReport first = markov_width(z2, 4, 3, 2, options);
        CHECK(first.width == fresh.width);
        CHECK(cache.size() > 0);
    }
    {
        ResultCache cache(path);
        WidthOptions options;
        options.cache = &cache;
        WidthReport second = markov_width(z2, 4, 3, 2, options);
        CHECK(second.width == fresh.width);
        CHECK(second.fibers_examined == fresh.fibers_examined);
    }
    std::remove(path.c_str());
}

TEST_CASE("parallel width equals sequential width") {
    GroupSpec z3 = GroupSpec::parse("Z3");
    WidthReport seq = markov_width(z3, 3, 2, 3);
    WidthOptions options;
    options.threads = 2;
    WidthReport par = markov_width(z3, 3, 2, 3, options);
    CHECK(par.width == seq.width);
    CHECK(par.fibers_examined == seq.fibers_examined);
    CHECK(par.tables_examined == seq.tables_examined);
}

TEST_CASE("symmetry actions map fibers to fibers preserving connectivity") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table t0 = testsupport::example_t0();

    SymmetryAction action;
    action.perm = {5, 0, 1, 2, 3, 4};
    action.shifts = {1, 1, 0, 0, 0, 0};  // sums to zero in Z2
    Table image = apply_symmetry(t0, action);
    CHECK(compatible(image, image));

    std::vector<Table> fiber = enumerate_fiber(fiber_key_of(t0));
    std::set<std::string> image_fiber_bytes;
    for (const Table& member : enumerate_fiber(fiber_key_of(image)))
        image_fiber_bytes.insert(table_bytes(member));
    std::set<std::string> mapped;
    for (const Table& member : fiber) mapped.insert(table_bytes(apply_symmetry(member, action)));
    CHECK(mapped == image_fiber_bytes);

    CHECK(min_connecting_degree_over(fiber, 4) ==
          min_connecting_degree_over(enumerate_fiber(fiber_key_of(image)), 4));

    SymmetryAction bad;
    bad.perm = {0, 0, 1, 2, 3, 4};
    bad.shifts = {0, 0, 0, 0, 0, 0};
    CHECK(throws_kind([&] { apply_symmetry(t0, bad); }, ErrorKind::Precondition));
    SymmetryAction bad_shift;
    bad_shift.perm = {0, 1, 2, 3, 4, 5};
    bad_shift.shifts = {1, 0, 0, 0, 0, 0};
    CHECK(throws_kind([&] { apply_symmetry(t0, bad_shift); }, ErrorKind::Precondition));
}

TEST_CASE("symmetry pruning does not change reported widths") {
    GroupSpec z22 = GroupSpec::parse("Z2xZ2");
    WidthReport plain = markov_width(z22, 3, 2, 4);
    WidthOptions options;
    options.use_symmetry = true;
    WidthReport pruned = markov_width(z22, 3, 2, 4, options);
    CHECK(pruned.width == plain.width);
    CHECK(pruned.exceeded == plain.exceeded);
}

TEST_CASE("phi evidence aggregates over degrees") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    PhiReport floor = phi_evidence(z2, 3, 1, 4);
    CHECK(floor.width == 2);
    CHECK(floor.vacuous);
    CHECK(!floor.caveat.empty());

    PhiReport z2n4 = phi_evidence(z2, 4, 3, 4);
    CHECK(z2n4.width == 2);
    CHECK_FALSE(z2n4.vacuous);
    CHECK_FALSE(z2n4.exceeded);
    CHECK(z2n4.per_degree.size() == 3);  // d = 1..3
}

TEST_CASE("width reports carry a witness pair from a common fiber") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    WidthReport r = markov_width(z2, 4, 2, 2);
    REQUIRE(r.witness.has_value());
    CHECK(compatible(r.witness->first, r.witness->second));
    CHECK_FALSE(r.witness->first == r.witness->second);
}
