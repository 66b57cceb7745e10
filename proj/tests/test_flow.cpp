#include "doctest.h"

#include <set>

#include "clawmark/flow.hpp"

using namespace clawmark;

TEST_CASE("flow counts follow |G|^(n-1)") {
    CHECK(flow_count(GroupSpec::parse("Z2"), 3) == 4);
    CHECK(flow_count(GroupSpec::parse("Z3"), 3) == 9);
    CHECK(flow_count(GroupSpec::parse("Z2"), 1) == 1);
    CHECK(flow_count(GroupSpec::parse("Z2xZ2"), 3) == 16);
    CHECK_THROWS_AS(flow_count(GroupSpec::parse("Z2"), 30, 1000), Error);
    try {
        flow_count(GroupSpec::parse("Z2"), 30, 1000);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
}

TEST_CASE("flows of Z2^3 come out in the documented order") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    std::vector<Flow> flows = enumerate_flows(z2, 3);
    REQUIRE(flows.size() == 4);
    CHECK(flows[0] == Flow{0, 0, 0});
    CHECK(flows[1] == Flow{0, 1, 1});
    CHECK(flows[2] == Flow{1, 0, 1});
    CHECK(flows[3] == Flow{1, 1, 0});
}

TEST_CASE("every enumerated flow sums to zero and flows are distinct") {
    for (const char* literal : {"Z2", "Z3", "Z4", "Z2xZ2"}) {
        GroupSpec spec = GroupSpec::parse(literal);
        for (int n = 1; n <= 4; ++n) {
            std::vector<Flow> flows = enumerate_flows(spec, n);
            CHECK(flows.size() == flow_count(spec, n));
            std::set<Flow> seen;
            for (const Flow& f : flows) {
                CHECK(is_flow(spec, f));
                seen.insert(f);
            }
            CHECK(seen.size() == flows.size());
        }
    }
}

TEST_CASE("flow_to_vertex places the block indicators") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    CHECK(flow_to_vertex(z2, Flow{0, 0, 0}) == std::vector<int>{1, 0, 1, 0, 1, 0});
    CHECK(flow_to_vertex(z2, Flow{1, 1, 0}) == std::vector<int>{0, 1, 0, 1, 1, 0});
    GroupSpec z3 = GroupSpec::parse("Z3");
    CHECK(flow_to_vertex(z3, Flow{0, 0, 0}) ==
          std::vector<int>{1, 0, 0, 1, 0, 0, 1, 0, 0});
}

TEST_CASE("polytope vertex matrices") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    auto m2 = polytope_vertices(z2, 2);
    REQUIRE(m2.size() == 2);
    CHECK(m2[0] == std::vector<int>{1, 0, 1, 0});
    CHECK(m2[1] == std::vector<int>{0, 1, 0, 1});

    auto m3 = polytope_vertices(z2, 3);
    REQUIRE(m3.size() == 4);
    CHECK(m3[0] == std::vector<int>{1, 0, 1, 0, 1, 0});
    CHECK(m3[1] == std::vector<int>{1, 0, 0, 1, 0, 1});
    CHECK(m3[2] == std::vector<int>{0, 1, 1, 0, 0, 1});
    CHECK(m3[3] == std::vector<int>{0, 1, 0, 1, 1, 0});

    // One indicator per block: every row sums to n; rows pairwise distinct.
    GroupSpec z3 = GroupSpec::parse("Z3");
    auto m = polytope_vertices(z3, 3);
    std::set<std::vector<int>> rows;
    for (const auto& row : m) {
        int sum = 0;
        for (int v : row) sum += v;
        CHECK(sum == 3);
        rows.insert(row);
    }
    CHECK(rows.size() == m.size());
}

TEST_CASE("matrix text format has a dimension header") {
    GroupSpec z2 = GroupSpec::parse("Z2");
    CHECK(format_matrix(polytope_vertices(z2, 2)) == "2 4\n1 0 1 0\n0 1 0 1\n");
}

TEST_CASE("adding a fixed flow entrywise permutes the flow set") {
    GroupSpec z3 = GroupSpec::parse("Z3");
    std::vector<Flow> flows = enumerate_flows(z3, 3);
    std::set<Flow> all(flows.begin(), flows.end());
    for (const Flow& shift : flows) {
        std::set<Flow> image;
        for (const Flow& f : flows) {
            Flow g(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) g[i] = z3.add(f[i], shift[i]);
            image.insert(g);
        }
        CHECK(image == all);
    }
}

TEST_CASE("format_flow spells element literals") {
    GroupSpec z22 = GroupSpec::parse("Z2xZ2");
    Flow f{0, 3, 3};  // (0,0) + (1,1) + (1,1) = 0
    CHECK(is_flow(z22, f));
    CHECK(format_flow(z22, f) == "0,0 1,1 1,1");
}
