#ifndef CLAWMARK_MOVE_HPP
#define CLAWMARK_MOVE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clawmark/table.hpp"

namespace clawmark {

inline constexpr std::uint64_t kDefaultCompletionCap = 1'000'000;

/// A degree-k move: replace a sub-multiset of rows by a signature-matching
/// multiset of flows. Rows are named by value, not by position.
struct Move {
    std::vector<Flow> removed;
    std::vector<Flow> added;

    int degree() const { return static_cast<int>(removed.size()); }
};

/// A quadratic move: rows i, j exchange their entries on the index set
/// `indices` (0-based columns) whose entrywise differences sum to zero.
struct QuadraticMoveSpec {
    int i = 0;
    int j = 1;
    std::vector<int> indices;
};

struct QuadraticMove {
    Move move;
    bool is_identity = false;
};

/// Builds the degree-2 move of the given exchange; invalid-move error when
/// the zero-sum condition fails or the index set is empty.
QuadraticMove make_quadratic_move(const Table& t, const QuadraticMoveSpec& spec);

/// Applies a move: result = (rows - removed) + added, canonicalized.
/// Inapplicable-move error if removed is not a sub-multiset of the rows.
Table apply_move(const Table& t, const Move& m);

/**
 * Finds a nonempty index subset of deltas summing to zero (0-based, sorted).
 * Strategy: first scan prefix sums for a repeat (the contiguous run between
 * the earliest such pair), which always succeeds when |deltas| >= |G|;
 * otherwise exhaustive search in lexicographic subset order. Returns nullopt
 * only when no subset sums to zero.
 */
std::optional<std::vector<int>> find_zero_sum_subset(const GroupSpec& spec,
                                                     const std::vector<ElemIdx>& deltas);

/**
 * Visits every multiset of d flows whose table has the given signature, as
 * rows in nondecreasing lexicographic order. Return false from the visitor to
 * stop. Capacity error when more than cap tables are produced.
 */
void for_each_table_with_signature(const GroupSpec& spec, int n, int d,
                                   const ColumnSignature& sig,
                                   const std::function<bool(const std::vector<Flow>&)>& visit,
                                   std::uint64_t cap = kDefaultCompletionCap);

/**
 * Visits all valid moves of degree 2..k on t, up to symmetry: each distinct
 * removed sub-multiset once, each signature-matching completion other than
 * the removed rows themselves. Return false to stop.
 */
void for_each_move(const Table& t, int k, const std::function<bool(const Move&)>& visit,
                   std::uint64_t cap = kDefaultCompletionCap);

/// Materialized for_each_move.
std::vector<Move> enumerate_moves(const Table& t, int k,
                                  std::uint64_t cap = kDefaultCompletionCap);

}  // namespace clawmark

#endif
