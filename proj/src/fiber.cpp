#include "clawmark/fiber.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace clawmark {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

// Runs fn(0..count-1), optionally on several worker threads; the first
// exception thrown by any worker is rethrown after all join.
void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Adds union-find edges for all moves of degree exactly k on every fiber
// member; returns the remaining component count.
int add_level_edges(const std::vector<Table>& fiber,
                    const std::unordered_map<std::string, int>& index, UnionFind& uf,
                    int components, int k, std::uint64_t completion_cap) {
    for (std::size_t ti = 0; ti < fiber.size() && components > 1; ++ti) {
        for_each_move(
            fiber[ti], k,
            [&](const Move& m) {
                if (m.degree() != k) return true;
                Table target = apply_move(fiber[ti], m);
                auto it = index.find(table_bytes(target));
                if (it == index.end())
                    fail(ErrorKind::Internal, "move left the fiber");
                if (uf.unite(static_cast<int>(ti), it->second)) --components;
                return components > 1;
            },
            completion_cap);
    }
    return components;
}

}  // namespace

FiberKey fiber_key_of(const Table& t) {
    return FiberKey{t.spec, t.n, t.degree(), column_signature(t)};
}

std::vector<Table> enumerate_fiber(const FiberKey& key, std::uint64_t cap) {
    std::vector<Table> fiber;
    for_each_table_with_signature(
        key.spec, key.n, key.d, key.sig,
        [&](const std::vector<Flow>& rows) {
            fiber.emplace_back(key.spec, key.n, rows);
            return true;
        },
        cap);
    return fiber;
}

void for_each_neighbor(const Table& t, int k,
                       const std::function<bool(const Table&, const Move&)>& visit,
                       std::uint64_t cap) {
    for_each_move(
        t, k, [&](const Move& m) { return visit(apply_move(t, m), m); }, cap);
}

std::optional<int> min_connecting_degree_over(const std::vector<Table>& fiber, int k_max,
                                              std::uint64_t completion_cap) {
    if (fiber.size() <= 1) return 2;
    std::unordered_map<std::string, int> index;
    index.reserve(fiber.size());
    for (std::size_t i = 0; i < fiber.size(); ++i)
        index.emplace(table_bytes(fiber[i]), static_cast<int>(i));
    UnionFind uf(static_cast<int>(fiber.size()));
    int components = static_cast<int>(fiber.size());
    const int d = fiber.front().degree();
    for (int k = 2; k <= std::min(k_max, d); ++k) {
        components = add_level_edges(fiber, index, uf, components, k, completion_cap);
        if (components == 1) return std::max(k, 2);
    }
    return std::nullopt;
}

std::vector<int> fiber_components(const std::vector<Table>& fiber, int k,
                                  std::uint64_t completion_cap) {
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < fiber.size(); ++i)
        index.emplace(table_bytes(fiber[i]), static_cast<int>(i));
    UnionFind uf(static_cast<int>(fiber.size()));
    int components = static_cast<int>(fiber.size());
    for (int kk = 2; kk <= k; ++kk)
        components = add_level_edges(fiber, index, uf, components, kk, completion_cap);
    std::vector<int> result(fiber.size(), -1);
    std::unordered_map<int, int> renumber;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        int root = uf.find(static_cast<int>(i));
        auto [it, fresh] = renumber.emplace(root, static_cast<int>(renumber.size()));
        result[i] = it->second;
    }
    return result;
}

std::optional<int> min_connecting_degree(const FiberKey& key, int k_max, std::uint64_t cap) {
    return min_connecting_degree_over(enumerate_fiber(key, cap), k_max);
}

namespace {
std::string cache_key(const std::string& group, int n, int d, std::uint64_t sig_hash) {
    std::ostringstream key;
    key << group << ' ' << n << ' ' << d << ' ' << std::hex << sig_hash;
    return key.str();
}
}  // namespace

ResultCache::ResultCache(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string group, hash;
        int n = 0, d = 0, min_k = 0;
        std::uint64_t sig_hash = 0;
        bool ok = static_cast<bool>(fields >> group >> n >> d >> hash >> min_k) && n >= 1 &&
                  d >= 0 && min_k >= 2;
        if (ok) {
            // Re-render the hash through the canonical key format so that
            // leading zeros or case in the file do not break lookups.
            std::size_t used = 0;
            try {
                sig_hash = std::stoull(hash, &used, 16);
            } catch (const std::exception&) {
                ok = false;
            }
            if (used != hash.size()) ok = false;
        }
        if (ok) {
            entries_[cache_key(group, n, d, sig_hash)] = min_k;
        } else {
            ++skipped_;
            std::cerr << "cache: skipping corrupt line " << number << " of " << path_ << "\n";
        }
    }
}

std::optional<int> ResultCache::lookup(const std::string& group, int n, int d,
                                       std::uint64_t sig_hash) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(cache_key(group, n, d, sig_hash));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::store(const std::string& group, int n, int d, std::uint64_t sig_hash,
                        int min_k) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::string key = cache_key(group, n, d, sig_hash);
    if (!entries_.emplace(key, min_k).second) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    out << key << ' ' << min_k << '\n';
}

std::size_t ResultCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

WidthReport markov_width(const GroupSpec& spec, int n, int d, int k_max,
                         const WidthOptions& options) {
    if (d < 0) fail(ErrorKind::Structural, "degree must be nonnegative");
    if (k_max < 2) fail(ErrorKind::Structural, "k_max must be at least 2");
    WidthReport report;
    report.group = spec.literal();
    report.n = n;
    report.d = d;
    report.k_max = k_max;
    if (d == 0) {
        report.fibers_examined = 1;
        report.tables_examined = 1;
        report.fibers.push_back({fnv1a64(""), 1, 2, false});
        return report;
    }

    const std::vector<Flow> flows = enumerate_flows(spec, n, options.flow_cap);

    // Group all d-multisets of flows into fibers by signature.
    struct FiberData {
        std::string sig_bytes;
        ColumnSignature sig;
        std::vector<Table> tables;
    };
    std::vector<FiberData> fibers;
    std::unordered_map<std::string, int> sig_index;
    std::uint64_t produced = 0;
    std::vector<int> pick(d, 0);
    std::vector<Flow> rows(d);
    auto emit = [&]() {
        if (++produced > options.table_cap)
            fail(ErrorKind::Capacity,
                 "table enumeration for " + spec.literal() + ", n=" + std::to_string(n) +
                     ", d=" + std::to_string(d) + " exceeds the cap of " +
                     std::to_string(options.table_cap));
        for (int r = 0; r < d; ++r) rows[r] = flows[pick[r]];
        Table t(spec, n, rows);
        std::string bytes = signature_bytes(column_signature(t));
        auto [it, fresh] = sig_index.emplace(bytes, static_cast<int>(fibers.size()));
        if (fresh)
            fibers.push_back({bytes, column_signature(t), {}});
        fibers[it->second].tables.push_back(std::move(t));
    };
    // Nondecreasing index tuples enumerate each multiset exactly once.
    auto choose = [&](auto&& self, int at, int low) -> void {
        if (at == d) {
            emit();
            return;
        }
        for (int i = low; i < static_cast<int>(flows.size()); ++i) {
            pick[at] = i;
            self(self, at + 1, i);
        }
    };
    choose(choose, 0, 0);

    report.fibers_examined = fibers.size();
    report.tables_examined = produced;
    report.fibers.assign(fibers.size(), FiberResult{});

    // Optional pruning: fibers whose sorted column count-vectors agree are
    // images of each other under a column permutation, which commutes with
    // moves; one representative per class suffices.
    std::vector<int> representative(fibers.size());
    std::unordered_map<std::string, int> class_index;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        if (!options.use_symmetry) {
            representative[i] = static_cast<int>(i);
            continue;
        }
        std::vector<std::vector<int>> cols = fibers[i].sig.counts;
        std::sort(cols.begin(), cols.end());
        ColumnSignature sorted{std::move(cols)};
        auto [it, fresh] = class_index.emplace(signature_bytes(sorted), static_cast<int>(i));
        representative[i] = it->second;
    }

    run_parallel(fibers.size(), options.threads, [&](std::size_t i) {
        FiberResult& result = report.fibers[i];
        result.sig_hash = fnv1a64(fibers[i].sig_bytes);
        result.size = static_cast<int>(fibers[i].tables.size());
        if (representative[i] != static_cast<int>(i)) return;  // filled from the rep below
        if (result.size <= 1) {
            result.min_k = 2;
            return;
        }
        if (options.cache) {
            if (auto hit = options.cache->lookup(report.group, n, d, result.sig_hash)) {
                result.min_k = *hit;
                return;
            }
        }
        try {
            result.min_k = min_connecting_degree_over(fibers[i].tables, k_max,
                                                      options.completion_cap);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Capacity) throw;
            result.capped = true;
            return;
        }
        if (options.cache && result.min_k)
            options.cache->store(report.group, n, d, result.sig_hash, *result.min_k);
    });
    for (std::size_t i = 0; i < fibers.size(); ++i)
        if (representative[i] != static_cast<int>(i)) {
            report.fibers[i].min_k = report.fibers[representative[i]].min_k;
            report.fibers[i].capped = report.fibers[representative[i]].capped;
        }

    // Deterministic reduce: width = max of min_k over connected fibers; an
    // exceeded fiber takes witness priority.
    int attaining = -1;
    int exceeded_at = -1;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        const FiberResult& result = report.fibers[i];
        if (result.size < 2) continue;
        report.vacuous = false;
        if (result.capped) {
            report.capped = true;
            continue;
        }
        if (!result.min_k) {
            report.exceeded = true;
            if (exceeded_at < 0) exceeded_at = static_cast<int>(i);
            continue;
        }
        if (*result.min_k > report.width) {
            report.width = *result.min_k;
            attaining = static_cast<int>(i);
        } else if (attaining < 0) {
            attaining = static_cast<int>(i);
        }
    }
    const int chosen = exceeded_at >= 0 ? exceeded_at : attaining;
    if (chosen >= 0) {
        const FiberData& fiber = fibers[chosen];
        report.witness_signature = fiber.sig;
        // At a separating degree bound, witness two tables from different
        // components; at the floor, any two fiber members.
        int separating = 0;
        if (exceeded_at >= 0)
            separating = k_max;
        else if (*report.fibers[chosen].min_k > 2)
            separating = *report.fibers[chosen].min_k - 1;
        if (separating >= 2) {
            std::vector<int> comp = fiber_components(fiber.tables, separating,
                                                     options.completion_cap);
            std::size_t other = 1;
            while (other < comp.size() && comp[other] == comp[0]) ++other;
            report.witness = std::make_pair(fiber.tables[0],
                                            fiber.tables[other < comp.size() ? other : 1]);
        } else {
            report.witness = std::make_pair(fiber.tables[0], fiber.tables[1]);
        }
    }
    return report;
}

PhiReport phi_evidence(const GroupSpec& spec, int n, int d_max, int k_max,
                       const WidthOptions& options) {
    if (d_max < 1) fail(ErrorKind::Structural, "d_max must be at least 1");
    PhiReport report;
    report.group = spec.literal();
    report.n = n;
    report.d_max = d_max;
    report.k_max = k_max;
    for (int d = 1; d <= d_max; ++d) {
        WidthReport wr = markov_width(spec, n, d, k_max, options);
        report.vacuous = report.vacuous && wr.vacuous;
        report.exceeded = report.exceeded || wr.exceeded;
        report.capped = report.capped || wr.capped;
        report.fibers_examined += wr.fibers_examined;
        if (wr.width > report.width) report.width = wr.width;
        report.per_degree.push_back(std::move(wr));
    }
    // Witness: the first exceeded degree, otherwise the first degree
    // attaining the aggregate width.
    for (const WidthReport& wr : report.per_degree) {
        if (!wr.witness) continue;
        bool take = wr.exceeded || (!report.exceeded && wr.width == report.width);
        if (take) {
            report.witness_d = wr.d;
            report.witness_signature = wr.witness_signature;
            report.witness = wr.witness;
            break;
        }
    }
    std::ostringstream caveat;
    caveat << "width " << report.width << " lower-bounds phi(" << report.group << ","
           << report.n << "); generation is verified only up to the degree-" << report.d_max
           << " truncation";
    report.caveat = caveat.str();
    return report;
}

Table apply_symmetry(const Table& t, const SymmetryAction& a) {
    if (static_cast<int>(a.perm.size()) != t.n || static_cast<int>(a.shifts.size()) != t.n)
        fail(ErrorKind::Precondition, "symmetry action size does not match the table");
    std::vector<bool> seen(t.n, false);
    for (int p : a.perm) {
        if (p < 0 || p >= t.n || seen[p])
            fail(ErrorKind::Precondition, "column permutation is not a permutation");
        seen[p] = true;
    }
    ElemIdx total = GroupSpec::kZero;
    for (ElemIdx s : a.shifts) total = t.spec.add(total, s);
    if (total != GroupSpec::kZero)
        fail(ErrorKind::Precondition, "column shifts must sum to zero");
    std::vector<Flow> rows;
    rows.reserve(t.rows.size());
    for (const Flow& row : t.rows) {
        Flow image(t.n);
        for (int i = 0; i < t.n; ++i)
            image[i] = t.spec.add(row[a.perm[i]], a.shifts[i]);
        rows.push_back(std::move(image));
    }
    return canonicalize(Table(t.spec, t.n, std::move(rows)));
}

}  // namespace clawmark
