#include "clawmark/flow.hpp"

#include <sstream>

namespace clawmark {

ElemIdx flow_sum(const GroupSpec& spec, const Flow& f) {
    ElemIdx s = GroupSpec::kZero;
    for (ElemIdx e : f) s = spec.add(s, e);
    return s;
}

bool is_flow(const GroupSpec& spec, const Flow& f) {
    if (f.empty()) return false;
    for (ElemIdx e : f)
        if (e >= spec.order()) return false;
    return flow_sum(spec, f) == GroupSpec::kZero;
}

std::uint64_t flow_count(const GroupSpec& spec, int n, std::uint64_t cap) {
    if (n < 1) fail(ErrorKind::Structural, "flows need n >= 1");
    std::uint64_t count = 1;
    for (int i = 0; i < n - 1; ++i) {
        count *= static_cast<std::uint64_t>(spec.order());
        if (count > cap)
            fail(ErrorKind::Capacity,
                 "flow enumeration for " + spec.literal() + ", n=" + std::to_string(n) +
                     " exceeds the cap of " + std::to_string(cap));
    }
    return count;
}

std::vector<Flow> enumerate_flows(const GroupSpec& spec, int n, std::uint64_t cap) {
    std::uint64_t count = flow_count(spec, n, cap);
    std::vector<Flow> flows;
    flows.reserve(count);
    Flow f(n, GroupSpec::kZero);
    // Odometer over the first n-1 entries, most significant first; the last
    // entry is forced to the negated sum.
    std::vector<int> free(n - 1, 0);
    const int order = spec.order();
    while (true) {
        ElemIdx sum = GroupSpec::kZero;
        for (int i = 0; i < n - 1; ++i) {
            f[i] = static_cast<ElemIdx>(free[i]);
            sum = spec.add(sum, f[i]);
        }
        f[n - 1] = spec.neg(sum);
        flows.push_back(f);
        int pos = n - 2;
        while (pos >= 0 && free[pos] == order - 1) {
            free[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++free[pos];
    }
    return flows;
}

std::vector<int> flow_to_vertex(const GroupSpec& spec, const Flow& f) {
    const int order = spec.order();
    std::vector<int> v(f.size() * static_cast<std::size_t>(order), 0);
    for (std::size_t i = 0; i < f.size(); ++i)
        v[i * order + f[i]] = 1;
    return v;
}

std::vector<std::vector<int>> polytope_vertices(const GroupSpec& spec, int n,
                                                std::uint64_t cap) {
    std::vector<std::vector<int>> rows;
    for (const Flow& f : enumerate_flows(spec, n, cap))
        rows.push_back(flow_to_vertex(spec, f));
    return rows;
}

std::string format_matrix(const std::vector<std::vector<int>>& m) {
    std::ostringstream out;
    out << m.size() << ' ' << (m.empty() ? 0 : m.front().size()) << '\n';
    for (const auto& row : m) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string format_flow(const GroupSpec& spec, const Flow& f) {
    std::ostringstream out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out << ' ';
        out << spec.format_element(f[i]);
    }
    return out.str();
}

}  // namespace clawmark
