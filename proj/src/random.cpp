#include "clawmark/random.hpp"

#include <algorithm>

namespace clawmark {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) fail(ErrorKind::Precondition, "random bound must be positive");
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

Flow random_flow(const GroupSpec& spec, int n, Rng& rng) {
    if (n < 1) fail(ErrorKind::Structural, "flow length must be >= 1");
    Flow row(n);
    ElemIdx sum = GroupSpec::kZero;
    for (int c = 0; c + 1 < n; ++c) {
        row[c] = static_cast<ElemIdx>(rng.below(spec.order()));
        sum = spec.add(sum, row[c]);
    }
    row[n - 1] = spec.neg(sum);
    return row;
}

Table random_table(const GroupSpec& spec, int n, int d, Rng& rng) {
    if (d < 0) fail(ErrorKind::Structural, "table degree must be >= 0");
    std::vector<Flow> rows;
    rows.reserve(d);
    for (int r = 0; r < d; ++r) rows.push_back(random_flow(spec, n, rng));
    return Table(spec, n, std::move(rows));
}

Table shuffled_compatible_mate(const Table& t, Rng& rng, int max_attempts) {
    const int d = t.degree();
    if (d <= 1 || t.n <= 1) return canonicalize(t);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Shuffle each column independently: every column signature is
        // preserved by construction, only flow-ness is at stake.
        std::vector<Flow> rows = t.rows;
        for (int c = 0; c < t.n; ++c) {
            for (int r = d - 1; r > 0; --r) {
                int s = static_cast<int>(rng.below(r + 1));
                std::swap(rows[r][c], rows[s][c]);
            }
        }
        bool ok = true;
        for (const Flow& row : rows)
            if (flow_sum(t.spec, row) != GroupSpec::kZero) {
                ok = false;
                break;
            }
        if (ok) return Table(t.spec, t.n, std::move(rows));
    }
    return canonicalize(t);
}

}  // namespace clawmark
