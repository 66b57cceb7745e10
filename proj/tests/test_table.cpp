#include "doctest.h"

#include <algorithm>
#include <random>

#include "clawmark/table.hpp"
#include "test_support.hpp"

using namespace clawmark;
using testsupport::throws_kind;

TEST_CASE("table construction validates rows") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    CHECK(throws_kind([&] { Table(z2, 6, {{1, 0, 0, 0, 0, 0}}); }, ErrorKind::Validation));
    CHECK(throws_kind([&] { Table(z2, 6, {{1, 1}}); }, ErrorKind::Structural));
    try {
        Table(z2, 6, {{0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    Table empty(z2, 6, {});
    CHECK(empty.degree() == 0);
}

TEST_CASE("canonical form sorts rows and drives equality") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table t(z2, 3, {{1, 1, 0}, {0, 0, 0}});
    Table c = canonicalize(t);
    CHECK(c.rows[0] == Flow{0, 0, 0});
    CHECK(c.rows[1] == Flow{1, 1, 0});
    CHECK(canonicalize(c) == c);

    Table t1 = testsupport::example_t1();
    std::vector<Flow> rows = t1.rows;
    std::mt19937 gen(7);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(rows.begin(), rows.end(), gen);
        CHECK(Table(z2, 6, rows) == t1);
        CHECK(table_bytes(Table(z2, 6, rows)) == table_bytes(t1));
    }
}

TEST_CASE("column signatures count elements per column") {
    Table t0 = testsupport::example_t0();
    ColumnSignature sig = column_signature(t0);
    REQUIRE(sig.counts.size() == 6);
    CHECK(sig.counts[0] == std::vector<int>{1, 2});  // column (1,0,1)
    CHECK(sig.counts[2] == std::vector<int>{2, 1});

    GroupSpec z2 = GroupSpec::parse("Z2");
    Table single(z2, 3, {{1, 1, 0}});
    for (const auto& col : column_signature(single).counts) {
        int total = 0;
        for (int c : col) total += c;
        CHECK(total == 1);
    }

    Table empty(z2, 4, {});
    for (const auto& col : column_signature(empty).counts)
        CHECK(col == std::vector<int>{0, 0});

    CHECK(column_signature(canonicalize(t0)) == sig);
}

TEST_CASE("compatibility is the equal-multiset criterion") {
    Table t0 = testsupport::example_t0();
    Table t1 = testsupport::example_t1();
    CHECK(compatible(t0, t1));
    CHECK(compatible(t0, t0));

    // Flipping entries 5 and 6 of the third row changes columns 5 and 6.
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table flipped(z2, 6, {{1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 1, 1}});
    CHECK_FALSE(compatible(flipped, t1));

    Table short_table(z2, 5, {{1, 1, 1, 1, 0}});
    CHECK(throws_kind([&] { compatible(t0, short_table); }, ErrorKind::Structural));
    Table z3_table(GroupSpec::parse("Z3"), 6, {{0, 0, 0, 0, 0, 0}});
    CHECK(throws_kind([&] { compatible(t0, z3_table); }, ErrorKind::Structural));
}

TEST_CASE("compatibility is an equivalence relation") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    Table a = testsupport::example_t0();
    Table b = testsupport::example_mid();
    Table c = testsupport::example_t1();
    CHECK(compatible(a, b));
    CHECK(compatible(b, a));
    CHECK(compatible(b, c));
    CHECK(compatible(a, c));  // transitivity instance
    (void)z2;
}

TEST_CASE("table text format round-trips") {
    Table t0 = testsupport::example_t0();
    Table parsed = parse_table(serialize_table(t0));
    CHECK(parsed == t0);

    std::string text =
        "# comment\n"
        "group: Z2\n"
        "n: 6\n"
        "rows:\n"
        "1 1 1 1 1 1\n"
        "0 0 0 0 0 0\n"
        "1 1 0 0 0 0\n";
    CHECK(parse_table(text) == t0);

    std::string empty_rows = "group: Z2\nn: 4\nrows:\n";
    CHECK(parse_table(empty_rows).degree() == 0);

    CHECK(throws_kind([] { parse_table("group: Z2\nn: 6\nrows:\n1 0 0 0 0 0\n"); },
                      ErrorKind::Validation));
    CHECK(throws_kind([] { parse_table("group: Z2\nn: 3\nrows:\n1 x 0\n"); },
                      ErrorKind::Parse));
    CHECK(throws_kind([] { parse_table("group: Z2\nn: 3\n1 1 0\n"); }, ErrorKind::Parse));
    try {
        parse_table("group: Z2\nn: 3\nrows:\n0 0 0\n1 x 0\n");
    } catch (const Error& e) {
        std::string message = e.what();
        CHECK(message.find("line") != std::string::npos);
        CHECK(message.find("entry 2") != std::string::npos);
    }
}

TEST_CASE("pair files split on the separator") {
    Table t0 = testsupport::example_t0();
    Table t1 = testsupport::example_t1();
    auto [a, b] = parse_pair_file(serialize_pair(t0, t1));
    CHECK(a == t0);
    CHECK(b == t1);
    CHECK(throws_kind([&] { parse_pair_file(serialize_table(t0)); }, ErrorKind::Parse));
}

TEST_CASE("multi-factor element literals in tables") {
    GroupSpec z22 = GroupSpec::parse("Z2xZ2");
    std::string text =
        "group: Z2xZ2\n"
        "n: 3\n"
        "rows:\n"
        "0,1 1,0 1,1\n"
        "0,0 0,0 0,0\n";
    Table t = parse_table(text);
    CHECK(t.spec == z22);
    CHECK(t.rows.size() == 2);
    CHECK(parse_table(serialize_table(t)) == t);
}
