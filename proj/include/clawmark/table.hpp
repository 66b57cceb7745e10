#ifndef CLAWMARK_TABLE_HPP
#define CLAWMARK_TABLE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clawmark/flow.hpp"
#include "clawmark/group.hpp"

namespace clawmark {

/**
 * A table of flows, regarded up to row permutation: a multiset of d flows of
 * length n over a common group. Duplicate rows are allowed.
 */
struct Table {
    GroupSpec spec;
    int n = 1;
    std::vector<Flow> rows;

    Table(GroupSpec spec_, int n_, std::vector<Flow> rows_);

    int degree() const { return static_cast<int>(rows.size()); }

    /// Multiset equality: canonical forms compared.
    bool operator==(const Table& other) const;
};

/// Rows sorted lexicographically by entry indices; idempotent.
Table canonicalize(const Table& t);

/// Canonical byte serialization of a table, suitable as a hash key.
std::string table_bytes(const Table& t);

/// Per-column count vectors: counts.at(i).at(g) = occurrences of element g in
/// column i.
struct ColumnSignature {
    std::vector<std::vector<int>> counts;

    bool operator==(const ColumnSignature& other) const = default;
};

ColumnSignature column_signature(const Table& t);

/// Canonical byte serialization of a signature.
std::string signature_bytes(const ColumnSignature& sig);

/// FNV-1a 64-bit hash of arbitrary bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// True iff the column signatures agree; structural error on mismatched
/// spec or n.
bool compatible(const Table& a, const Table& b);

/**
 * Table text format:
 *   group: Z2
 *   n: 6
 *   rows:
 *   1 1 1 1 1 1
 *   ...
 * Lines beginning '#' are comments. A pair file holds two such blocks
 * separated by a line `---`.
 */
Table parse_table(std::string_view text);
std::string serialize_table(const Table& t);

std::pair<Table, Table> parse_pair_file(std::string_view text);
std::string serialize_pair(const Table& a, const Table& b);

}  // namespace clawmark

#endif
