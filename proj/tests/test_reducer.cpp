#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "clawmark/random.hpp"
#include "clawmark/reducer.hpp"
#include "test_support.hpp"

using namespace clawmark;
using testsupport::throws_kind;

namespace {

std::map<std::pair<ElemIdx, ElemIdx>, int> pairs_at(const Table& t, int j) {
    std::map<std::pair<ElemIdx, ElemIdx>, int> counts;
    for (const Flow& row : t.rows) ++counts[{row[j], row[j + 1]}];
    return counts;
}

Table replay(const Table& start, const std::vector<Move>& moves) {
    Table current = canonicalize(start);
    for (const Move& m : moves) current = apply_move(current, m);
    return current;
}

}  // namespace

TEST_CASE("frequency profiles classify dots") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table zeros(z2, 4, {{0, 0, 0, 0}, {0, 0, 0, 0}});
    FrequencyProfile p = frequency_profile(zeros, 2);
    CHECK(p.frequent == std::vector<ElemIdx>{0});
    for (const auto& row : p.dots)
        for (bool dot : row) CHECK_FALSE(dot);

    Table t0 = testsupport::example_t0();
    FrequencyProfile p1 = frequency_profile(t0, 1);
    CHECK(p1.counts[0] == 10);
    CHECK(p1.counts[1] == 8);
    CHECK(p1.frequent == std::vector<ElemIdx>{0, 1});  // both counts exceed 1*3

    FrequencyProfile p6 = frequency_profile(t0, 6);  // F >= n forces no frequent elements
    CHECK(p6.frequent.empty());
    for (const auto& row : p6.dots)
        for (bool dot : row) CHECK(dot);

    CHECK(throws_kind([&] { frequency_profile(t0, 0); }, ErrorKind::Precondition));
}

TEST_CASE("default threshold sits in the paper regime") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    CHECK(default_frequency_threshold(z2) == 11);
    Table t0 = testsupport::example_t0();
    CHECK(frequency_profile(t0, 11).paper_regime);
    CHECK_FALSE(frequency_profile(t0, 10).paper_regime);
}

TEST_CASE("columns where an element is most frequent") {
    Table t0 = testsupport::example_t0();
    CHECK(restrict_to_frequent_columns(t0, 0) == std::vector<int>{2, 3, 4, 5});
    CHECK(restrict_to_frequent_columns(t0, 1) == std::vector<int>{0, 1});

    GroupSpec z2 = GroupSpec::parse("Z2");
    Table zero_row(z2, 3, {{0, 0, 0}});
    CHECK(restrict_to_frequent_columns(zero_row, 0) == std::vector<int>{0, 1, 2});

    // Pigeonhole: the best element covers at least ceil(n/|G|) columns.
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        Table t = random_table(z2, 6, 3, rng);
        std::size_t best = 0;
        for (int g = 0; g < z2.order(); ++g)
            best = std::max(best,
                            restrict_to_frequent_columns(t, static_cast<ElemIdx>(g)).size());
        CHECK(best >= 3);
    }
}

TEST_CASE("row with many zeros exists under the counting hypothesis") {
    std::vector<std::vector<bool>> all_zero(2, std::vector<bool>(4, true));
    CHECK(find_row_with_zeros(all_zero, 4, Rational{1, 2}) == 0);
    CHECK(find_row_with_zeros(all_zero, 0, Rational{1, 2}) == 0);

    std::vector<std::vector<bool>> alternating{{true, false, true, false},
                                               {false, true, false, true}};
    CHECK(find_row_with_zeros(alternating, 2, Rational{1, 2}) == 0);

    std::vector<std::vector<bool>> sparse{{true, false, false, false},
                                          {false, true, false, false}};
    CHECK(throws_kind([&] { find_row_with_zeros(sparse, 2, Rational{1, 2}); },
                      ErrorKind::Precondition));
}

TEST_CASE("dot normalization caps the per-row dot count") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    const int F = 5;  // bound |G|(F+1) = 12, dots allowed while count <= 15

    SUBCASE("already under the bound: no moves") {
        Table t0 = testsupport::example_t0();
        auto [result, moves] = normalize_row_dots(t0, 1);
        CHECK(moves.empty());
        CHECK(result == canonicalize(t0));
    }

    SUBCASE("a loaded row sheds dots") {
        std::vector<Flow> rows(3, Flow(20, 0));
        for (int c = 0; c < 14; ++c) rows[0][c] = 1;
        Table t(z2, 20, rows);
        FrequencyProfile before = frequency_profile(t, F);
        int max_before = 0;
        for (const auto& row : before.dots)
            max_before = std::max(max_before,
                                  static_cast<int>(std::count(row.begin(), row.end(), true)));
        CHECK(max_before == 14);

        auto [result, moves] = normalize_row_dots(t, F);
        CHECK(!moves.empty());
        CHECK(column_signature(result) == column_signature(t));
        CHECK(replay(t, moves) == result);

        FrequencyProfile after = frequency_profile(result, F);
        int max_after = 0;
        for (const auto& row : after.dots)
            max_after = std::max(max_after,
                                 static_cast<int>(std::count(row.begin(), row.end(), true)));
        CHECK(max_after < max_before);
        CHECK(max_after <= z2.order() * (F + 1));
    }

    SUBCASE("F >= n is vacuous") {
        Table t0 = testsupport::example_t0();
        auto [result, moves] = normalize_row_dots(t0, 7);
        CHECK(moves.empty());
        CHECK(result == canonicalize(t0));
    }
}

TEST_CASE("two-column alignment") {
    Table t0 = testsupport::example_t0();
    Table t1 = testsupport::example_t1();

    SUBCASE("identical tables align trivially") {
        AlignResult r = align_two_columns(t0, t0);
        CHECK(r.ok);
        CHECK(r.moves0.empty());
        CHECK(r.moves1.empty());
    }

    SUBCASE("the documented pair aligns within budget") {
        AlignResult r = align_two_columns(t0, t1);
        REQUIRE(r.ok);
        REQUIRE(r.t0.has_value());
        REQUIRE(r.t1.has_value());
        CHECK(replay(t0, r.moves0) == *r.t0);
        CHECK(replay(t1, r.moves1) == *r.t1);
        CHECK(pairs_at(*r.t0, r.j) == pairs_at(*r.t1, r.j));
        for (const Move& m : r.moves0) CHECK(m.degree() == 2);
    }

    SUBCASE("incompatible input is a precondition error") {
        GroupSpec z2 = GroupSpec::parse("Z2");
        Table other(z2, 6, {{0, 0, 0, 0, 0, 0}});
        CHECK(throws_kind([&] { align_two_columns(t0, other); }, ErrorKind::Precondition));
    }
}

TEST_CASE("column merging sums adjacent columns") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table ones(z2, 6, {{1, 1, 1, 1, 1, 1}});
    Table merged = merge_columns(ones, 0);
    CHECK(merged.n == 5);
    CHECK(merged.rows[0] == Flow{0, 1, 1, 1, 1});

    GroupSpec z3 = GroupSpec::parse("Z3");
    Table z3row(z3, 3, {{1, 2, 0}});
    CHECK(merge_columns(z3row, 0).rows[0] == Flow{0, 0});

    // Merging the worked example keeps all rows flows (the constructor
    // revalidates) and preserves the row count.
    Table t0 = testsupport::example_t0();
    for (int j = 0; j + 1 < t0.n; ++j) CHECK(merge_columns(t0, j).degree() == t0.degree());

    CHECK(throws_kind([&] { merge_columns(t0, 5); }, ErrorKind::Structural));
}

TEST_CASE("aligned pairs merge to compatible tables") {
    Table t0 = testsupport::example_t0();
    Table t1 = testsupport::example_t1();
    AlignResult r = align_two_columns(t0, t1);
    REQUIRE(r.ok);
    CHECK(compatible(merge_columns(*r.t0, r.j), merge_columns(*r.t1, r.j)));
}

TEST_CASE("lifting merged moves") {
    GroupSpec z2 = GroupSpec::parse("Z2");

    SUBCASE("identity moves lift to identities") {
        Table original(z2, 3, {{1, 1, 0}, {0, 0, 0}});
        Move merged_identity;
        merged_identity.removed = {{0, 0}, {0, 0}};
        merged_identity.added = {{0, 0}, {0, 0}};
        Move lifted = lift_move(original, 0, merged_identity);
        std::vector<Flow> rem = lifted.removed, add = lifted.added;
        std::sort(rem.begin(), rem.end());
        std::sort(add.begin(), add.end());
        CHECK(rem == add);
        CHECK(rem == std::vector<Flow>{{0, 0, 0}, {1, 1, 0}});
    }

    SUBCASE("lift then merge reproduces the merged move") {
        // Merging columns 1 and 2 yields {0011, 1100, 0101, 1010}, whose
        // fiber supports genuine quadratic moves.
        Table original(z2, 5,
                       {{0, 0, 0, 1, 1}, {1, 1, 0, 0, 0}, {0, 1, 0, 0, 1}, {1, 0, 0, 1, 0}});
        const int j = 1;
        Table merged = merge_columns(original, j);
        int tested = 0;
        for (const Move& mm : enumerate_moves(merged, 2)) {
            Move lifted = lift_move(original, j, mm);
            Table after = apply_move(original, lifted);  // validates applicability
            CHECK(merge_columns(after, j) == apply_move(merged, mm));
            if (++tested == 8) break;
        }
        CHECK(tested > 0);
    }
}

TEST_CASE("pair fixup after merging") {
    GroupSpec z2 = GroupSpec::parse("Z2");

    SUBCASE("equal tables need no fixup") {
        Table t = testsupport::example_t0();
        CHECK(fixup_merged_columns(t, t, 0).empty());
    }

    SUBCASE("transposed pairs across two rows take one move") {
        Table t0(z2, 4, {{0, 1, 0, 1}, {1, 0, 1, 0}});
        Table t1(z2, 4, {{1, 0, 0, 1}, {0, 1, 1, 0}});
        std::vector<Move> moves = fixup_merged_columns(t0, t1, 0);
        CHECK(moves.size() == 1);
        CHECK(replay(t0, moves) == canonicalize(t1));
    }

    SUBCASE("a three-cycle of pairs takes at most two moves") {
        GroupSpec z3 = GroupSpec::parse("Z3");
        Table t0(z3, 4, {{0, 0, 0, 0}, {1, 2, 1, 2}, {2, 1, 2, 1}});
        Table t1(z3, 4, {{1, 2, 0, 0}, {2, 1, 1, 2}, {0, 0, 2, 1}});
        std::vector<Move> moves = fixup_merged_columns(t0, t1, 0);
        CHECK(moves.size() <= 2);
        CHECK(replay(t0, moves) == canonicalize(t1));
    }

    SUBCASE("precondition violations are reported") {
        Table t0(z2, 4, {{0, 1, 0, 1}, {1, 0, 1, 0}});
        Table other(z2, 4, {{0, 0, 0, 0}, {1, 1, 1, 1}});
        CHECK(throws_kind([&] { fixup_merged_columns(t0, other, 0); },
                          ErrorKind::Precondition));
    }
}

TEST_CASE("connect_tables produces verifiable certificates") {
    Table t0 = testsupport::example_t0();
    Table t1 = testsupport::example_t1();

    SUBCASE("the documented pair connects in degree 2") {
        ReductionTrace trace;
        Certificate cert = connect_tables(t0, t1, {}, &trace);
        CHECK(cert.k == 2);
        CHECK(cert.steps.size() >= 2);
        CHECK(verify_certificate(cert).accepted);
        CHECK(trace.max_degree == 2);
        CHECK(!trace.entries.empty());
    }

    SUBCASE("self-pairs yield empty certificates") {
        Certificate cert = connect_tables(t0, t0);
        CHECK(cert.steps.empty());
        CHECK(verify_certificate(cert).accepted);
    }

    SUBCASE("random compatible pairs, small scale") {
        GroupSpec z2 = GroupSpec::parse("Z2");
        Rng rng(4242);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 2 + static_cast<int>(rng.below(5));
            int d = 1 + static_cast<int>(rng.below(3));
            Table a = random_table(z2, n, d, rng);
            Table b = shuffled_compatible_mate(a, rng);
            Certificate cert = connect_tables(a, b);
            CHECK(cert.k == 2);
            CHECK(verify_certificate(cert).accepted);
        }
    }

    SUBCASE("a Z3 pair stays within degree 3") {
        GroupSpec z3 = GroupSpec::parse("Z3");
        Rng rng(777);
        Table a = random_table(z3, 5, 3, rng);
        Table b = shuffled_compatible_mate(a, rng);
        Certificate cert = connect_tables(a, b);
        CHECK(cert.k <= 3);
        CHECK(verify_certificate(cert).accepted);
    }

    SUBCASE("incompatible input is rejected up front") {
        GroupSpec z2 = GroupSpec::parse("Z2");
        Table other(z2, 6, {{0, 0, 0, 0, 0, 0}});
        CHECK(throws_kind([&] { connect_tables(t0, other); }, ErrorKind::Precondition));
    }

    SUBCASE("trace phases are labeled") {
        std::ostringstream log;
        ConnectConfig config;
        config.trace = &log;
        ReductionTrace trace;
        connect_tables(t0, t1, config, &trace);
        std::set<std::string> phases;
        for (const TraceEntry& e : trace.entries) phases.insert(e.phase);
        for (const std::string& phase : phases) {
            bool known = phase == "bfs" || phase == "align" || phase == "fixup" ||
                         phase.rfind("merge-level", 0) == 0;
            CHECK(known);
        }
    }
}
