#ifndef CLAWMARK_REDUCER_HPP
#define CLAWMARK_REDUCER_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "clawmark/certificate.hpp"
#include "clawmark/fiber.hpp"
#include "clawmark/move.hpp"
#include "clawmark/table.hpp"

namespace clawmark {

/// Frequency classification of table entries: an element is frequent when it
/// occurs more than F*d times in the table; all other entries are dots.
struct FrequencyProfile {
    int F = 1;
    std::vector<int> counts;               // per element, whole table
    std::vector<ElemIdx> frequent;         // elements with count > F*d
    std::vector<std::vector<bool>> dots;   // d x n, true = dot
    bool paper_regime = false;             // F > |G|^2 + 3|G|
};

FrequencyProfile frequency_profile(const Table& t, int F);

/// Default F putting the profile into the paper regime.
int default_frequency_threshold(const GroupSpec& spec);

/// Columns (0-based) where g ties or beats every other element's count.
std::vector<int> restrict_to_frequent_columns(const Table& t, ElemIdx g);

struct Rational {
    long long num = 0;
    long long den = 1;
};

/// First row (0-based) of the mask with at least z true entries;
/// precondition error when none exists (the double-counting guarantee of the
/// epsilon/n hypothesis did not hold for this mask).
int find_row_with_zeros(const std::vector<std::vector<bool>>& zero_mask, int z,
                        Rational epsilon);

/**
 * Rebalances dots so that every row carries at most |G|*(F+1) of them, by
 * quadratic exchanges between the row with the most dots and the row with the
 * fewest. Returns the resulting table and the moves applied; signature
 * preserved. Progress-failure error if an exchange cannot be found.
 */
std::pair<Table, std::vector<Move>> normalize_row_dots(const Table& t, int F);

struct AlignBudget {
    int k = 2;                        // maximal move degree in the search
    std::uint64_t max_states = 20000; // expanded search states per column choice
};

struct AlignResult {
    bool ok = false;
    int j = -1;  // aligned columns j, j+1 (0-based)
    std::vector<Move> moves0, moves1;
    std::optional<Table> t0, t1;  // tables after the moves
    std::string diagnostics;
};

/**
 * Searches for a column index j and moves after which the (j, j+1) entry
 * pairs of the two tables agree as multisets (so the tables agree entrywise
 * on those columns under a suitable row order). Precondition: compatible.
 */
AlignResult align_two_columns(const Table& t0, const Table& t1, const AlignBudget& budget = {});

/// Replaces columns j, j+1 by their groupwise sum; rows stay flows, row
/// order is preserved.
Table merge_columns(const Table& t, int j);

/**
 * Lifts a move on merge_columns(original, j) back to the original table:
 * removed rows are matched to original rows by merged image, and the added
 * rows reuse the removed rows' (a, b) column pairs, matched by sum,
 * lexicographically least first. Internal error on unmatchable sums.
 */
Move lift_move(const Table& original, int j, const Move& merged_move);

/**
 * Quadratic moves on t0 making it equal t1, given that the two tables have
 * equal merged images at j and equal (j, j+1) pair multisets; each move swaps
 * the pairs of two rows with equal pair sums. Precondition error otherwise.
 */
std::vector<Move> fixup_merged_columns(const Table& t0, const Table& t1, int j);

struct TraceEntry {
    std::string phase;
    int side = 0;
    Move move;
};

/// Ordered move log with phase labels; replaying side-0 moves on T_0 and
/// side-1 moves on T_1 yields equal canonical tables.
struct ReductionTrace {
    std::vector<TraceEntry> entries;
    int max_degree = 2;
};

struct ConnectConfig {
    int k_max = 0;  // 0 = auto: escalate up to min(d, max(2, |G|)), then d
    int base_n = 4;
    std::uint64_t small_fiber_bound = 5000;  // BFS directly under this size estimate
    std::uint64_t bfs_state_cap = 200000;
    std::uint64_t completion_cap = kDefaultCompletionCap;
    AlignBudget align;
    std::ostream* trace = nullptr;
};

/**
 * Produces a certificate connecting two compatible tables: direct
 * bidirectional search in small fibers, otherwise the column-merge
 * reduction (align, merge, recurse, lift, fixup). Progress-failure error
 * with phase diagnostics when budgets exhaust.
 */
Certificate connect_tables(const Table& t0, const Table& t1, const ConnectConfig& config = {},
                           ReductionTrace* trace_out = nullptr);

}  // namespace clawmark

#endif
