#include "clawmark/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace clawmark {

FrequencyProfile frequency_profile(const Table& t, int F) {
    if (F < 1) fail(ErrorKind::Precondition, "frequency threshold must be >= 1");
    const int order = t.spec.order();
    FrequencyProfile profile;
    profile.F = F;
    profile.counts.assign(order, 0);
    for (const Flow& row : t.rows)
        for (ElemIdx e : row) ++profile.counts[e];
    const long long bound = static_cast<long long>(F) * t.degree();
    std::vector<bool> is_frequent(order, false);
    for (int g = 0; g < order; ++g)
        if (profile.counts[g] > bound) {
            profile.frequent.push_back(static_cast<ElemIdx>(g));
            is_frequent[g] = true;
        }
    profile.dots.assign(t.degree(), std::vector<bool>(t.n, false));
    for (int r = 0; r < t.degree(); ++r)
        for (int c = 0; c < t.n; ++c)
            profile.dots[r][c] = !is_frequent[t.rows[r][c]];
    profile.paper_regime = F > order * order + 3 * order;
    return profile;
}

int default_frequency_threshold(const GroupSpec& spec) {
    const int order = spec.order();
    return order * order + 3 * order + 1;
}

std::vector<int> restrict_to_frequent_columns(const Table& t, ElemIdx g) {
    if (g >= t.spec.order()) fail(ErrorKind::Structural, "element index out of range");
    std::vector<int> columns;
    for (int c = 0; c < t.n; ++c) {
        std::vector<int> counts(t.spec.order(), 0);
        for (const Flow& row : t.rows) ++counts[row[c]];
        if (counts[g] == *std::max_element(counts.begin(), counts.end()))
            columns.push_back(c);
    }
    return columns;
}

int find_row_with_zeros(const std::vector<std::vector<bool>>& zero_mask, int z,
                        Rational epsilon) {
    if (epsilon.num <= 0 || epsilon.den <= 0)
        fail(ErrorKind::Precondition, "epsilon must be a positive rational");
    for (std::size_t r = 0; r < zero_mask.size(); ++r) {
        int zeros = static_cast<int>(
            std::count(zero_mask[r].begin(), zero_mask[r].end(), true));
        if (zeros >= z) return static_cast<int>(r);
    }
    fail(ErrorKind::Precondition,
         "no row has " + std::to_string(z) +
             " zeros: the epsilon-counting hypothesis does not hold for this mask");
}

std::pair<Table, std::vector<Move>> normalize_row_dots(const Table& t, int F) {
    const int order = t.spec.order();
    const int bound = order * (F + 1);
    Table current = canonicalize(t);
    std::vector<Move> moves;
    int guard = t.degree() * t.n + 8;
    int prev_max = -1, prev_at_max = -1;
    while (guard-- > 0) {
        FrequencyProfile profile = frequency_profile(current, F);
        std::vector<int> dots_per_row(current.degree(), 0);
        for (int r = 0; r < current.degree(); ++r)
            dots_per_row[r] = static_cast<int>(
                std::count(profile.dots[r].begin(), profile.dots[r].end(), true));
        if (current.degree() == 0) break;
        int max_dots = *std::max_element(dots_per_row.begin(), dots_per_row.end());
        if (max_dots <= bound) break;
        int at_max = static_cast<int>(
            std::count(dots_per_row.begin(), dots_per_row.end(), max_dots));
        // The paper's termination metric: (max, #rows attaining it) must drop.
        if (prev_max >= 0 &&
            !(max_dots < prev_max || (max_dots == prev_max && at_max < prev_at_max)))
            fail(ErrorKind::ProgressFailure,
                 "dot normalization stopped making progress at max=" +
                     std::to_string(max_dots));
        prev_max = max_dots;
        prev_at_max = at_max;

        int r_max = static_cast<int>(std::max_element(dots_per_row.begin(),
                                                      dots_per_row.end()) -
                                     dots_per_row.begin());
        int r_min = static_cast<int>(std::min_element(dots_per_row.begin(),
                                                      dots_per_row.end()) -
                                     dots_per_row.begin());
        // Columns where the loaded row has a dot the light row does not; the
        // first |G| of them already guarantee a zero-sum exchange set.
        std::vector<int> candidates;
        for (int c = 0; c < current.n && static_cast<int>(candidates.size()) < order; ++c)
            if (profile.dots[r_max][c] && !profile.dots[r_min][c]) candidates.push_back(c);
        std::vector<ElemIdx> deltas;
        deltas.reserve(candidates.size());
        for (int c : candidates)
            deltas.push_back(current.spec.sub(current.rows[r_max][c], current.rows[r_min][c]));
        auto subset = find_zero_sum_subset(current.spec, deltas);
        if (!subset)
            fail(ErrorKind::ProgressFailure,
                 "no zero-sum exchange set between the extreme rows; the counting "
                 "preconditions fail at this scale");
        QuadraticMoveSpec qspec;
        qspec.i = r_max;
        qspec.j = r_min;
        for (int idx : *subset) qspec.indices.push_back(candidates[idx]);
        QuadraticMove qm = make_quadratic_move(current, qspec);
        moves.push_back(qm.move);
        current = apply_move(current, qm.move);
    }
    if (guard < 0)
        fail(ErrorKind::ProgressFailure, "dot normalization exceeded its iteration guard");
    return {current, moves};
}

namespace {

using PairKey = std::pair<ElemIdx, ElemIdx>;
using PairCounts = std::map<PairKey, int>;

PairCounts pair_counts(const Table& t, int j) {
    PairCounts counts;
    for (const Flow& row : t.rows) ++counts[{row[j], row[j + 1]}];
    return counts;
}

int pair_distance(const PairCounts& a, const PairCounts& b) {
    int distance = 0;
    for (const auto& [key, count] : a) {
        auto it = b.find(key);
        int other = it == b.end() ? 0 : it->second;
        if (count > other) distance += count - other;
    }
    return distance;
}

// All non-identity quadratic moves on t whose index set meets {j, j+1}.
void for_each_touching_quadratic(const Table& t, int j,
                                 const std::function<bool(const Move&)>& visit) {
    const int d = t.degree();
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            std::vector<int> diff;
            for (int c = 0; c < t.n; ++c)
                if (t.rows[a][c] != t.rows[b][c]) diff.push_back(c);
            if (diff.size() > 16) continue;  // keep the subset scan bounded
            bool touches_possible =
                std::find(diff.begin(), diff.end(), j) != diff.end() ||
                std::find(diff.begin(), diff.end(), j + 1) != diff.end();
            if (!touches_possible) continue;
            const std::uint32_t subsets = 1u << diff.size();
            for (std::uint32_t mask = 1; mask < subsets; ++mask) {
                if (mask + 1 == subsets) continue;  // full swap is the identity
                ElemIdx sum = GroupSpec::kZero;
                bool touches = false;
                for (std::size_t i = 0; i < diff.size(); ++i)
                    if (mask & (1u << i)) {
                        sum = t.spec.add(sum, t.spec.sub(t.rows[a][diff[i]],
                                                         t.rows[b][diff[i]]));
                        touches = touches || diff[i] == j || diff[i] == j + 1;
                    }
                if (!touches || sum != GroupSpec::kZero) continue;
                Flow sa = t.rows[a], sb = t.rows[b];
                for (std::size_t i = 0; i < diff.size(); ++i)
                    if (mask & (1u << i)) std::swap(sa[diff[i]], sb[diff[i]]);
                Move m;
                m.removed = {t.rows[a], t.rows[b]};
                m.added = {std::move(sa), std::move(sb)};
                if (!visit(m)) return;
            }
        }
    }
}

struct SearchEntry {
    Table table;
    std::string parent;  // empty for the root
    Move move;           // move leading here from the parent
};

// Greedy best-first search on side 0 for a state matching the target pair
// multiset at (j, j+1). Returns the move path on success.
std::optional<std::vector<Move>> search_alignment(const Table& start, const PairCounts& target,
                                                  int j, const AlignBudget& budget,
                                                  Table* final_table) {
    std::unordered_map<std::string, SearchEntry> seen;
    using Ranked = std::tuple<int, std::uint64_t, std::string>;
    std::priority_queue<Ranked, std::vector<Ranked>, std::greater<Ranked>> queue;
    std::uint64_t tick = 0;

    std::string root = table_bytes(start);
    seen.emplace(root, SearchEntry{start, "", {}});
    queue.emplace(pair_distance(pair_counts(start, j), target), tick++, root);

    std::uint64_t expanded = 0;
    while (!queue.empty()) {
        auto [dist, order, bytes] = queue.top();
        queue.pop();
        const Table state = seen.at(bytes).table;
        if (dist == 0) {
            std::vector<Move> path;
            std::string at = bytes;
            while (!seen.at(at).parent.empty()) {
                path.push_back(seen.at(at).move);
                at = seen.at(at).parent;
            }
            std::reverse(path.begin(), path.end());
            if (final_table) *final_table = state;
            return path;
        }
        if (++expanded > budget.max_states) return std::nullopt;

        auto consider = [&](const Move& m) {
            Table next = apply_move(state, m);
            std::string nb = table_bytes(next);
            if (seen.count(nb)) return true;
            int ndist = pair_distance(pair_counts(next, j), target);
            seen.emplace(nb, SearchEntry{std::move(next), bytes, m});
            queue.emplace(ndist, tick++, nb);
            return true;
        };
        for_each_touching_quadratic(state, j, consider);
        if (budget.k > 2) {
            for_each_move(state, budget.k, [&](const Move& m) {
                if (m.degree() <= 2) return true;
                return consider(m);
            });
        }
    }
    return std::nullopt;
}

}  // namespace

AlignResult align_two_columns(const Table& t0, const Table& t1, const AlignBudget& budget) {
    if (!(t0.spec == t1.spec) || t0.n != t1.n)
        fail(ErrorKind::Structural, "alignment needs tables over the same group and n");
    if (!compatible(t0, t1))
        fail(ErrorKind::Precondition, "alignment needs compatible tables");
    AlignResult result;
    if (t0.n < 2) {
        result.diagnostics = "alignment needs n >= 2";
        return result;
    }
    Table c0 = canonicalize(t0), c1 = canonicalize(t1);

    std::vector<std::pair<int, int>> ranked;  // (distance, j)
    for (int j = 0; j + 1 < c0.n; ++j)
        ranked.emplace_back(pair_distance(pair_counts(c0, j), pair_counts(c1, j)), j);
    std::sort(ranked.begin(), ranked.end());

    std::ostringstream diag;
    for (const auto& [dist, j] : ranked) {
        if (dist == 0) {
            result.ok = true;
            result.j = j;
            result.t0 = c0;
            result.t1 = c1;
            return result;
        }
        Table aligned = c0;
        auto path = search_alignment(c0, pair_counts(c1, j), j, budget, &aligned);
        if (path) {
            result.ok = true;
            result.j = j;
            result.moves0 = std::move(*path);
            result.t0 = std::move(aligned);
            result.t1 = c1;
            return result;
        }
        diag << "column " << j << ": budget exhausted (initial distance " << dist << "); ";
    }
    result.diagnostics = diag.str();
    return result;
}

Table merge_columns(const Table& t, int j) {
    if (t.n < 2) fail(ErrorKind::Structural, "merging needs n >= 2");
    if (j < 0 || j + 1 >= t.n) fail(ErrorKind::Structural, "merge column out of range");
    std::vector<Flow> rows;
    rows.reserve(t.rows.size());
    for (const Flow& row : t.rows) {
        Flow merged;
        merged.reserve(t.n - 1);
        for (int c = 0; c < t.n; ++c) {
            if (c == j) {
                merged.push_back(t.spec.add(row[j], row[j + 1]));
                ++c;  // skip j+1
            } else {
                merged.push_back(row[c]);
            }
        }
        rows.push_back(std::move(merged));
    }
    return Table(t.spec, t.n - 1, std::move(rows));
}

namespace {
Flow merge_row(const GroupSpec& spec, const Flow& row, int j) {
    Flow merged;
    merged.reserve(row.size() - 1);
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (static_cast<int>(c) == j) {
            merged.push_back(spec.add(row[j], row[j + 1]));
            ++c;
        } else {
            merged.push_back(row[c]);
        }
    }
    return merged;
}
}  // namespace

Move lift_move(const Table& original, int j, const Move& merged_move) {
    if (j < 0 || j + 1 >= original.n) fail(ErrorKind::Structural, "merge column out of range");
    std::vector<Flow> removed_sorted = merged_move.removed;
    std::sort(removed_sorted.begin(), removed_sorted.end());

    // Match each removed merged row to the lexicographically least unused
    // original row with that merged image.
    std::vector<char> used(original.rows.size(), 0);
    std::vector<Flow> lifted_removed;
    std::vector<PairKey> pairs;
    for (const Flow& target : removed_sorted) {
        int best = -1;
        for (std::size_t i = 0; i < original.rows.size(); ++i) {
            if (used[i]) continue;
            if (merge_row(original.spec, original.rows[i], j) != target) continue;
            if (best < 0 || original.rows[i] < original.rows[best])
                best = static_cast<int>(i);
        }
        if (best < 0)
            fail(ErrorKind::Internal, "merged move removes a row with no preimage");
        used[best] = 1;
        lifted_removed.push_back(original.rows[best]);
        pairs.emplace_back(original.rows[best][j], original.rows[best][j + 1]);
    }

    // Hand the removed pairs to the added rows, matching each row's merged
    // value to a pair sum; ties go to the lexicographically least pair.
    std::vector<Flow> added_sorted = merged_move.added;
    std::sort(added_sorted.begin(), added_sorted.end());
    std::vector<char> pair_used(pairs.size(), 0);
    std::vector<Flow> lifted_added;
    for (const Flow& target : added_sorted) {
        ElemIdx sum = target[j];
        int best = -1;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (pair_used[p]) continue;
            if (original.spec.add(pairs[p].first, pairs[p].second) != sum) continue;
            if (best < 0 || pairs[p] < pairs[best]) best = static_cast<int>(p);
        }
        if (best < 0)
            fail(ErrorKind::Internal, "no removed pair matches an added row's merged value");
        pair_used[best] = 1;
        Flow row;
        row.reserve(original.n);
        for (int c = 0; c < original.n - 1; ++c) {
            if (c == j) {
                row.push_back(pairs[best].first);
                row.push_back(pairs[best].second);
            } else {
                row.push_back(target[c]);
            }
        }
        lifted_added.push_back(std::move(row));
    }
    return Move{std::move(lifted_removed), std::move(lifted_added)};
}

std::vector<Move> fixup_merged_columns(const Table& t0, const Table& t1, int j) {
    if (!(t0.spec == t1.spec) || t0.n != t1.n)
        fail(ErrorKind::Structural, "fixup needs tables over the same group and n");
    if (j < 0 || j + 1 >= t0.n) fail(ErrorKind::Structural, "merge column out of range");
    if (!(merge_columns(t0, j) == merge_columns(t1, j)))
        fail(ErrorKind::Precondition, "tables differ outside the merged column pair");
    if (pair_counts(t0, j) != pair_counts(t1, j))
        fail(ErrorKind::Precondition,
             "pair multisets at the merged columns differ; quadratic swaps cannot fix this");

    const GroupSpec& spec = t0.spec;
    std::vector<Flow> rows = t0.rows;

    auto group_key = [&](const Flow& row) {
        Flow merged = merge_row(spec, row, j);
        std::string bytes;
        for (ElemIdx e : merged) {
            bytes.push_back(static_cast<char>(e & 0xff));
            bytes.push_back(static_cast<char>((e >> 8) & 0xff));
        }
        return bytes;
    };

    // Target pair counts per merged-row group, from t1.
    std::map<std::string, PairCounts> target;
    for (const Flow& row : t1.rows) ++target[group_key(row)][{row[j], row[j + 1]}];

    std::vector<Move> moves;
    const int guard_limit = static_cast<int>(rows.size() * rows.size()) + 8;
    int guard = guard_limit;
    while (guard-- > 0) {
        std::map<std::string, PairCounts> current;
        for (const Flow& row : rows) ++current[group_key(row)][{row[j], row[j + 1]}];

        // Find a group lacking a pair the target demands.
        std::string needy_key;
        PairKey wanted{};
        bool found = false;
        for (const auto& [key, want] : target) {
            for (const auto& [pair, count] : want) {
                auto it = current[key].find(pair);
                int have = it == current[key].end() ? 0 : it->second;
                if (have < count) {
                    needy_key = key;
                    wanted = pair;
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) break;

        // A row of the needy group holding a surplus pair...
        int row_surplus = -1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (group_key(rows[r]) != needy_key) continue;
            PairKey held{rows[r][j], rows[r][j + 1]};
            auto it = target[needy_key].find(held);
            int want = it == target[needy_key].end() ? 0 : it->second;
            if (current[needy_key][held] > want) {
                row_surplus = static_cast<int>(r);
                break;
            }
        }
        // ...and a donor row elsewhere holding the wanted pair in surplus.
        int row_donor = -1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::string key = group_key(rows[r]);
            if (key == needy_key) continue;
            PairKey held{rows[r][j], rows[r][j + 1]};
            if (held != wanted) continue;
            auto it = target[key].find(held);
            int want = it == target[key].end() ? 0 : it->second;
            if (current[key][held] > want) {
                row_donor = static_cast<int>(r);
                break;
            }
        }
        if (row_surplus < 0 || row_donor < 0)
            fail(ErrorKind::Internal, "pair redistribution lost its invariant");

        Flow& a = rows[row_surplus];
        Flow& b = rows[row_donor];
        Move m;
        m.removed = {a, b};
        std::swap(a[j], b[j]);
        std::swap(a[j + 1], b[j + 1]);
        m.added = {a, b};
        moves.push_back(std::move(m));
    }
    if (guard < 0) fail(ErrorKind::Internal, "fixup exceeded its iteration guard");
    return moves;
}

namespace {

// Upper bound on the fiber size, ignoring the flow constraint: the product
// over columns of multinomial(d; counts).
double fiber_size_bound(const ColumnSignature& sig, int d) {
    double log_total = 0;
    for (const auto& col : sig.counts) {
        log_total += std::lgamma(d + 1.0);
        for (int c : col) log_total -= std::lgamma(c + 1.0);
    }
    return log_total > 41.4 ? 1e18 : std::exp(log_total);  // exp(41.4) ~ 1e18
}

struct BfsNode {
    Table table;
    std::string parent;
    Move move;
};

// Bidirectional breadth-first search in the fiber graph under degree-<=k
// moves. Returns steps (side 0 then side 1) reaching a common table, nullopt
// when the two tables are disconnected at this degree.
std::optional<std::vector<CertStep>> bfs_connect(const Table& a, const Table& b, int k,
                                                 const ConnectConfig& cfg) {
    std::unordered_map<std::string, BfsNode> visited[2];
    std::vector<std::string> frontier[2];
    std::string root[2] = {table_bytes(a), table_bytes(b)};
    visited[0].emplace(root[0], BfsNode{a, "", {}});
    visited[1].emplace(root[1], BfsNode{b, "", {}});
    frontier[0].push_back(root[0]);
    frontier[1].push_back(root[1]);

    std::string meet;
    auto expand = [&](int side) -> bool {
        std::vector<std::string> next;
        for (const std::string& bytes : frontier[side]) {
            const Table state = visited[side].at(bytes).table;
            bool done = false;
            for_each_neighbor(
                state, k,
                [&](const Table& nt, const Move& m) {
                    std::string nb = table_bytes(nt);
                    if (visited[side].count(nb)) return true;
                    visited[side].emplace(nb, BfsNode{nt, bytes, m});
                    next.push_back(nb);
                    if (visited[1 - side].count(nb)) {
                        meet = nb;
                        done = true;
                        return false;
                    }
                    return true;
                },
                cfg.completion_cap);
            if (done) return true;
            if (visited[0].size() + visited[1].size() > cfg.bfs_state_cap)
                fail(ErrorKind::ProgressFailure,
                     "fiber search exceeded the state cap of " +
                         std::to_string(cfg.bfs_state_cap));
        }
        frontier[side] = std::move(next);
        return false;
    };

    while (!frontier[0].empty() || !frontier[1].empty()) {
        int side;
        if (frontier[0].empty())
            side = 1;
        else if (frontier[1].empty())
            side = 0;
        else
            side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
        if (frontier[side].empty()) break;
        if (expand(side)) {
            std::vector<CertStep> steps;
            for (int s = 0; s < 2; ++s) {
                std::vector<CertStep> part;
                std::string at = meet;
                while (!visited[s].at(at).parent.empty()) {
                    part.push_back(CertStep{s, visited[s].at(at).move});
                    at = visited[s].at(at).parent;
                }
                std::reverse(part.begin(), part.end());
                steps.insert(steps.end(), part.begin(), part.end());
            }
            return steps;
        }
    }
    return std::nullopt;
}

struct ConnectContext {
    const ConnectConfig& cfg;
    std::vector<TraceEntry>* trace;

    void note(const std::string& text) const {
        if (cfg.trace) (*cfg.trace) << text << "\n";
    }
    void record(const std::string& phase, int side, const Move& move) const {
        if (trace) trace->push_back(TraceEntry{phase, side, move});
    }
};

std::vector<CertStep> connect_rec(const Table& a, const Table& b, const ConnectContext& ctx);

std::vector<CertStep> bfs_with_escalation(const Table& a, const Table& b,
                                          const ConnectContext& ctx, const std::string& phase) {
    const int d = a.degree();
    const bool auto_mode = ctx.cfg.k_max <= 0;
    const int k_limit = auto_mode ? std::min(d, std::max(2, a.spec.order()))
                                  : std::min(ctx.cfg.k_max, d);
    bool capped = false;
    for (int k = 2; k <= k_limit; ++k) {
        std::optional<std::vector<CertStep>> steps;
        try {
            steps = bfs_connect(a, b, k, ctx.cfg);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ProgressFailure && e.kind() != ErrorKind::Capacity)
                throw;
            capped = true;
            break;  // higher degrees only enlarge the search
        }
        if (steps) {
            std::ostringstream note;
            note << "[n=" << a.n << "] " << phase << ": path of " << steps->size()
                 << " moves at degree " << k;
            ctx.note(note.str());
            for (const CertStep& s : *steps) ctx.record(phase, s.side, s.move);
            return *steps;
        }
    }
    if (auto_mode) {
        // Last resort: the single full-table exchange of degree d.
        Move swap_all{a.rows, b.rows};
        ctx.note("[n=" + std::to_string(a.n) + "] " + phase + ": full exchange of degree " +
                 std::to_string(d));
        ctx.record(phase, 0, swap_all);
        return {CertStep{0, swap_all}};
    }
    if (capped)
        fail(ErrorKind::ProgressFailure,
             "fiber search at n=" + std::to_string(a.n) +
                 " exhausted its budget before reaching degree " + std::to_string(k_limit));
    fail(ErrorKind::Precondition,
         "fiber of degree " + std::to_string(d) + " at n=" + std::to_string(a.n) +
             " is not connected by moves of degree <= " + std::to_string(k_limit));
}

std::vector<CertStep> connect_rec(const Table& a, const Table& b, const ConnectContext& ctx) {
    if (a == b) return {};
    const int d = a.degree();
    const bool small = a.n <= ctx.cfg.base_n ||
                       fiber_size_bound(column_signature(a), d) <=
                           static_cast<double>(ctx.cfg.small_fiber_bound);
    if (small) return bfs_with_escalation(a, b, ctx, "bfs");

    // Column-merge reduction: align a column pair, merge it on both sides,
    // connect the merged tables, lift the moves back, then repair the pairs.
    AlignBudget budget = ctx.cfg.align;
    AlignResult aligned = align_two_columns(a, b, budget);
    if (!aligned.ok && ctx.cfg.k_max != 2) {
        const bool auto_mode = ctx.cfg.k_max <= 0;
        budget.k = auto_mode ? std::max(2, std::min(d, a.spec.order()))
                             : std::min(ctx.cfg.k_max, d);
        if (budget.k > 2) aligned = align_two_columns(a, b, budget);
    }
    if (!aligned.ok) {
        ctx.note("[n=" + std::to_string(a.n) + "] align failed (" + aligned.diagnostics +
                 "); falling back to fiber search");
        return bfs_with_escalation(a, b, ctx, "bfs");
    }
    std::ostringstream note;
    note << "[n=" << a.n << "] align at column " << aligned.j << ": "
         << aligned.moves0.size() << " moves on T_0, " << aligned.moves1.size()
         << " on T_1";
    ctx.note(note.str());

    std::vector<CertStep> steps;
    for (const Move& m : aligned.moves0) {
        ctx.record("align", 0, m);
        steps.push_back(CertStep{0, m});
    }
    for (const Move& m : aligned.moves1) {
        ctx.record("align", 1, m);
        steps.push_back(CertStep{1, m});
    }

    Table cur0 = *aligned.t0, cur1 = *aligned.t1;
    const int j = aligned.j;
    Table merged0 = canonicalize(merge_columns(cur0, j));
    Table merged1 = canonicalize(merge_columns(cur1, j));
    ctx.note("[n=" + std::to_string(a.n) + "] merge columns " + std::to_string(j) + "," +
             std::to_string(j + 1) + " -> n=" + std::to_string(merged0.n));

    std::vector<CertStep> sub = connect_rec(merged0, merged1, ctx);

    const std::string lift_phase = "merge-level " + std::to_string(a.n);
    for (const CertStep& s : sub) {
        Table& cur = s.side == 0 ? cur0 : cur1;
        Move lifted = lift_move(cur, j, s.move);
        ctx.record(lift_phase, s.side, lifted);
        steps.push_back(CertStep{s.side, lifted});
        cur = apply_move(cur, lifted);
    }

    std::vector<Move> fix = fixup_merged_columns(cur0, cur1, j);
    ctx.note("[n=" + std::to_string(a.n) + "] fixup: " + std::to_string(fix.size()) +
             " quadratic moves");
    for (const Move& m : fix) {
        ctx.record("fixup", 0, m);
        steps.push_back(CertStep{0, m});
        cur0 = apply_move(cur0, m);
    }
    if (!(cur0 == cur1))
        fail(ErrorKind::Internal, "column-merge reduction did not converge");
    return steps;
}

}  // namespace

Certificate connect_tables(const Table& t0, const Table& t1, const ConnectConfig& config,
                           ReductionTrace* trace_out) {
    if (!(t0.spec == t1.spec) || t0.n != t1.n)
        fail(ErrorKind::Structural, "connect needs tables over the same group and n");
    if (!compatible(t0, t1))
        fail(ErrorKind::Precondition, "tables are not compatible");
    Table c0 = canonicalize(t0), c1 = canonicalize(t1);
    std::vector<TraceEntry> entries;
    ConnectContext ctx{config, &entries};
    std::vector<CertStep> steps = connect_rec(c0, c1, ctx);
    Certificate cert = make_certificate(c0, c1, std::move(steps));
    VerifyResult check = verify_certificate(cert);
    if (!check.accepted)
        fail(ErrorKind::Internal,
             "produced certificate fails verification: " + check.reason + " at step " +
                 std::to_string(check.step) + " (" + check.message + ")");
    if (trace_out) {
        trace_out->entries = std::move(entries);
        trace_out->max_degree = cert.k;
    }
    return cert;
}

}  // namespace clawmark
