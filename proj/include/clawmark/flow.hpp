#ifndef CLAWMARK_FLOW_HPP
#define CLAWMARK_FLOW_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clawmark/group.hpp"

namespace clawmark {

/// A flow: n group elements (stored as indices) summing to zero.
using Flow = std::vector<ElemIdx>;

inline constexpr std::uint64_t kDefaultFlowCap = 10'000'000;

/// Sum of the entries under the group law.
ElemIdx flow_sum(const GroupSpec& spec, const Flow& f);

bool is_flow(const GroupSpec& spec, const Flow& f);

/// Number of flows |G|^(n-1); capacity error if it exceeds cap.
std::uint64_t flow_count(const GroupSpec& spec, int n, std::uint64_t cap = kDefaultFlowCap);

/**
 * All flows of length n in lexicographic order by entry indices: the first
 * n-1 entries run through G^(n-1) in odometer order, the last entry is the
 * negated sum.
 */
std::vector<Flow> enumerate_flows(const GroupSpec& spec, int n,
                                  std::uint64_t cap = kDefaultFlowCap);

/// 0/1 lattice point of length n*|G|: block i carries a single 1 at the
/// index of the i-th entry.
std::vector<int> flow_to_vertex(const GroupSpec& spec, const Flow& f);

/// Vertex matrix of the polytope P_{G,n}: one row per flow, in
/// enumerate_flows order.
std::vector<std::vector<int>> polytope_vertices(const GroupSpec& spec, int n,
                                                std::uint64_t cap = kDefaultFlowCap);

/// Matrix text format: first line "<rows> <cols>", then space-separated rows.
std::string format_matrix(const std::vector<std::vector<int>>& m);

/// One flow as space-separated element literals, e.g. "0 1 1" or "1,0 0,1".
std::string format_flow(const GroupSpec& spec, const Flow& f);

}  // namespace clawmark

#endif
