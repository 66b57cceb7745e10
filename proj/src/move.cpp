#include "clawmark/move.hpp"

#include <algorithm>

namespace clawmark {

QuadraticMove make_quadratic_move(const Table& t, const QuadraticMoveSpec& spec) {
    const int d = t.degree();
    if (spec.i < 0 || spec.i >= d || spec.j < 0 || spec.j >= d)
        fail(ErrorKind::InvalidMove, "row index out of range");
    if (spec.i == spec.j)
        fail(ErrorKind::InvalidMove, "quadratic move needs two distinct rows");
    if (spec.indices.empty())
        fail(ErrorKind::InvalidMove, "index set must be nonempty");
    std::vector<int> idx = spec.indices;
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        fail(ErrorKind::InvalidMove, "index set has repeated columns");
    if (idx.front() < 0 || idx.back() >= t.n)
        fail(ErrorKind::InvalidMove, "column index out of range");
    const Flow& ri = t.rows[spec.i];
    const Flow& rj = t.rows[spec.j];
    ElemIdx diff_sum = GroupSpec::kZero;
    for (int c : idx) diff_sum = t.spec.add(diff_sum, t.spec.sub(ri[c], rj[c]));
    if (diff_sum != GroupSpec::kZero)
        fail(ErrorKind::InvalidMove,
             "differences over the index set sum to " + t.spec.format_element(diff_sum) +
                 ", not zero");
    Flow si = ri, sj = rj;
    for (int c : idx) std::swap(si[c], sj[c]);
    QuadraticMove qm;
    qm.move.removed = {ri, rj};
    qm.move.added = {si, sj};
    std::vector<Flow> before = qm.move.removed, after = qm.move.added;
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    qm.is_identity = before == after;
    return qm;
}

Table apply_move(const Table& t, const Move& m) {
    if (m.removed.size() != m.added.size())
        fail(ErrorKind::InvalidMove, "move removes " + std::to_string(m.removed.size()) +
                                         " rows but adds " + std::to_string(m.added.size()));
    for (std::size_t r = 0; r < m.added.size(); ++r)
        if (static_cast<int>(m.added[r].size()) != t.n || !is_flow(t.spec, m.added[r]))
            fail(ErrorKind::Validation,
                 "added row " + std::to_string(r + 1) + " is not a flow");
    Table removed_t(t.spec, t.n, m.removed);
    Table added_t(t.spec, t.n, m.added);
    if (!(column_signature(removed_t) == column_signature(added_t)))
        fail(ErrorKind::InvalidMove, "removed and added rows have different column signatures");

    std::vector<Flow> rest = t.rows;
    for (const Flow& gone : m.removed) {
        auto it = std::find(rest.begin(), rest.end(), gone);
        if (it == rest.end())
            fail(ErrorKind::InapplicableMove,
                 "removed row " + format_flow(t.spec, gone) + " is not in the table");
        rest.erase(it);
    }
    rest.insert(rest.end(), m.added.begin(), m.added.end());
    return canonicalize(Table(t.spec, t.n, std::move(rest)));
}

std::optional<std::vector<int>> find_zero_sum_subset(const GroupSpec& spec,
                                                     const std::vector<ElemIdx>& deltas) {
    const int m = static_cast<int>(deltas.size());
    // Prefix-sum pigeonhole: a repeated prefix sum yields the contiguous run
    // in between; guaranteed to fire when m >= |G|.
    std::vector<ElemIdx> prefix(m + 1, GroupSpec::kZero);
    for (int i = 0; i < m; ++i) prefix[i + 1] = spec.add(prefix[i], deltas[i]);
    for (int s = 0; s < m; ++s)
        for (int e = s + 1; e <= m; ++e)
            if (prefix[s] == prefix[e]) {
                std::vector<int> run;
                for (int i = s; i < e; ++i) run.push_back(i);
                return run;
            }
    // Exhaustive search in lexicographic subset order.
    std::vector<int> chosen;
    std::optional<std::vector<int>> found;
    auto dfs = [&](auto&& self, int start, ElemIdx sum) -> bool {
        for (int i = start; i < m; ++i) {
            chosen.push_back(i);
            ElemIdx next = spec.add(sum, deltas[i]);
            if (next == GroupSpec::kZero) {
                found = chosen;
                return true;
            }
            if (self(self, i + 1, next)) return true;
            chosen.pop_back();
        }
        return false;
    };
    dfs(dfs, 0, GroupSpec::kZero);
    return found;
}

namespace {

// Consistency screen: every column's counts sum to d and the weighted total
// is zero; otherwise no table can match.
bool signature_consistent(const GroupSpec& spec, int n, int d, const ColumnSignature& sig) {
    if (static_cast<int>(sig.counts.size()) != n) return false;
    ElemIdx total = GroupSpec::kZero;
    for (const auto& col : sig.counts) {
        if (static_cast<int>(col.size()) != spec.order()) return false;
        int sum = 0;
        for (int g = 0; g < spec.order(); ++g) {
            if (col[g] < 0) return false;
            sum += col[g];
            for (int c = 0; c < col[g]; ++c)
                total = spec.add(total, static_cast<ElemIdx>(g));
        }
        if (sum != d) return false;
    }
    return total == GroupSpec::kZero;
}

struct SignatureSearch {
    const GroupSpec& spec;
    int n;
    int d;
    std::vector<std::vector<int>> remaining;
    std::vector<Flow> rows;
    const std::function<bool(const std::vector<Flow>&)>& visit;
    std::uint64_t cap;
    std::uint64_t produced = 0;
    bool stopped = false;

    // Fills row r column by column, keeping rows lexicographically
    // nondecreasing; the last column is forced by the flow condition.
    void fill_row(int r, int col, ElemIdx sum, bool tight) {
        if (stopped) return;
        Flow& row = rows[r];
        if (col == n - 1) {
            ElemIdx forced = spec.neg(sum);
            if (remaining[col][forced] == 0) return;
            if (tight && r > 0 && forced < rows[r - 1][col]) return;
            row[col] = forced;
            --remaining[col][forced];
            place_row(r + 1);
            ++remaining[col][forced];
            return;
        }
        ElemIdx low = (tight && r > 0) ? rows[r - 1][col] : GroupSpec::kZero;
        for (int g = low; g < spec.order(); ++g) {
            if (remaining[col][g] == 0) continue;
            row[col] = static_cast<ElemIdx>(g);
            --remaining[col][g];
            fill_row(r, col + 1, spec.add(sum, row[col]), tight && g == low && r > 0);
            ++remaining[col][g];
            if (stopped) return;
        }
    }

    void place_row(int r) {
        if (stopped) return;
        if (r == d) {
            if (++produced > cap)
                fail(ErrorKind::Capacity,
                     "signature completion enumeration exceeds the cap of " + std::to_string(cap));
            if (!visit(rows)) stopped = true;
            return;
        }
        fill_row(r, 0, GroupSpec::kZero, true);
    }
};

}  // namespace

void for_each_table_with_signature(const GroupSpec& spec, int n, int d,
                                   const ColumnSignature& sig,
                                   const std::function<bool(const std::vector<Flow>&)>& visit,
                                   std::uint64_t cap) {
    if (!signature_consistent(spec, n, d, sig)) return;
    if (d == 0) {
        visit({});
        return;
    }
    SignatureSearch search{spec, n, d, sig.counts, std::vector<Flow>(d, Flow(n)), visit, cap};
    search.place_row(0);
}

void for_each_move(const Table& t, int k, const std::function<bool(const Move&)>& visit,
                   std::uint64_t cap) {
    if (k < 2) fail(ErrorKind::Precondition, "move enumeration needs k >= 2");
    const Table canon = canonicalize(t);
    const int d = canon.degree();
    bool stopped = false;

    std::vector<Flow> removed;
    auto complete = [&]() {
        std::vector<Flow> sorted_removed = removed;
        std::sort(sorted_removed.begin(), sorted_removed.end());
        ColumnSignature sig = column_signature(Table(canon.spec, canon.n, removed));
        for_each_table_with_signature(
            canon.spec, canon.n, static_cast<int>(removed.size()), sig,
            [&](const std::vector<Flow>& added) {
                if (added == sorted_removed) return true;
                Move m{removed, added};
                if (!visit(m)) {
                    stopped = true;
                    return false;
                }
                return true;
            },
            cap);
    };

    // Distinct sub-multisets of size kk, rows taken from the canonical order.
    auto choose = [&](auto&& self, int start, int need) -> void {
        if (stopped) return;
        if (need == 0) {
            complete();
            return;
        }
        for (int i = start; i <= d - need; ++i) {
            if (i > start && canon.rows[i] == canon.rows[i - 1]) continue;
            removed.push_back(canon.rows[i]);
            self(self, i + 1, need - 1);
            removed.pop_back();
            if (stopped) return;
        }
    };

    for (int kk = 2; kk <= std::min(k, d) && !stopped; ++kk)
        choose(choose, 0, kk);
}

std::vector<Move> enumerate_moves(const Table& t, int k, std::uint64_t cap) {
    std::vector<Move> moves;
    for_each_move(
        t, k,
        [&](const Move& m) {
            moves.push_back(m);
            return true;
        },
        cap);
    return moves;
}

}  // namespace clawmark
