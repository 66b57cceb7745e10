#ifndef CLAWMARK_FIBER_HPP
#define CLAWMARK_FIBER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clawmark/move.hpp"
#include "clawmark/table.hpp"

namespace clawmark {

inline constexpr std::uint64_t kDefaultFiberCap = 1'000'000;
inline constexpr std::uint64_t kDefaultTableCap = 10'000'000;

/// Identifies a fiber: all degree-d tables over (spec, n) sharing a column
/// signature.
struct FiberKey {
    GroupSpec spec;
    int n;
    int d;
    ColumnSignature sig;
};

FiberKey fiber_key_of(const Table& t);

/// All distinct canonical tables in the fiber, in deterministic
/// (lexicographic) order.
std::vector<Table> enumerate_fiber(const FiberKey& key, std::uint64_t cap = kDefaultFiberCap);

/// Visits every table reachable from t by one valid move of degree <= k,
/// together with the move. Return false to stop.
void for_each_neighbor(const Table& t, int k,
                       const std::function<bool(const Table&, const Move&)>& visit,
                       std::uint64_t cap = kDefaultCompletionCap);

/**
 * Smallest k <= k_max such that degree-<=k moves connect the fiber, via
 * union-find with edges added in increasing k. Fibers of size <= 1 report 2.
 * nullopt when still disconnected at k_max.
 */
std::optional<int> min_connecting_degree(const FiberKey& key, int k_max,
                                         std::uint64_t cap = kDefaultFiberCap);

/// Same, operating on a pre-enumerated fiber (canonical tables).
std::optional<int> min_connecting_degree_over(const std::vector<Table>& fiber, int k_max,
                                              std::uint64_t completion_cap = kDefaultCompletionCap);

/// Union-find components of the fiber graph under degree-<=k moves, one
/// component id per fiber position, numbered by first occurrence.
std::vector<int> fiber_components(const std::vector<Table>& fiber, int k,
                                  std::uint64_t completion_cap = kDefaultCompletionCap);

/// Append-only cache of fiber results: (group, n, d, signature hash) -> min
/// connecting degree. Corrupt lines are skipped with a warning on stderr.
class ResultCache {
public:
    /// Empty path keeps the cache in memory only.
    explicit ResultCache(std::string path = "");

    std::optional<int> lookup(const std::string& group, int n, int d,
                              std::uint64_t sig_hash) const;
    void store(const std::string& group, int n, int d, std::uint64_t sig_hash, int min_k);

    int skipped_lines() const { return skipped_; }
    std::size_t size() const;

private:
    std::string path_;
    std::map<std::string, int> entries_;
    mutable std::mutex mutex_;
    int skipped_ = 0;
};

struct FiberResult {
    std::uint64_t sig_hash = 0;
    int size = 0;
    std::optional<int> min_k;  // nullopt: exceeded k_max or capped
    bool capped = false;
};

struct WidthReport {
    std::string group;
    int n = 0;
    int d = 0;
    int k_max = 0;
    int width = 2;
    bool vacuous = true;   // no fiber with >= 2 tables
    bool exceeded = false; // some fiber disconnected at k_max
    bool capped = false;   // some fiber skipped due to a capacity cap
    std::uint64_t fibers_examined = 0;
    std::uint64_t tables_examined = 0;
    std::vector<FiberResult> fibers;
    std::optional<ColumnSignature> witness_signature;
    /// Two tables of the width-attaining fiber; for an exceeded fiber, two
    /// tables from different components at k_max.
    std::optional<std::pair<Table, Table>> witness;
};

struct WidthOptions {
    std::uint64_t flow_cap = kDefaultFlowCap;
    std::uint64_t table_cap = kDefaultTableCap;
    std::uint64_t completion_cap = kDefaultCompletionCap;
    int threads = 1;
    bool use_symmetry = false;  // prune fibers equal up to column permutation
    ResultCache* cache = nullptr;
};

/**
 * Truncated Markov width at degree d: enumerates every d-multiset of flows,
 * groups them into fibers by signature, and takes the maximum of
 * min_connecting_degree over all fibers of size >= 2 (floor 2).
 */
WidthReport markov_width(const GroupSpec& spec, int n, int d, int k_max,
                         const WidthOptions& options = {});

struct PhiReport {
    std::string group;
    int n = 0;
    int d_max = 0;
    int k_max = 0;
    int width = 2;
    bool vacuous = true;
    bool exceeded = false;
    bool capped = false;
    std::uint64_t fibers_examined = 0;
    std::vector<WidthReport> per_degree;
    int witness_d = 0;
    std::optional<ColumnSignature> witness_signature;
    std::optional<std::pair<Table, Table>> witness;
    /// The reported width lower-bounds phi(G,n); generation is verified only
    /// up to the degree-d_max truncation.
    std::string caveat;
};

/// Aggregates markov_width over all d <= d_max.
PhiReport phi_evidence(const GroupSpec& spec, int n, int d_max, int k_max,
                       const WidthOptions& options = {});

/// Column permutation combined with per-column translations summing to zero;
/// maps fibers to fibers and preserves connectivity degrees.
struct SymmetryAction {
    std::vector<int> perm;        // result column i takes source column perm[i]
    std::vector<ElemIdx> shifts;  // added to result column i; must sum to zero
};

Table apply_symmetry(const Table& t, const SymmetryAction& a);

}  // namespace clawmark

#endif
