#ifndef CLAWMARK_RANDOM_HPP
#define CLAWMARK_RANDOM_HPP

#include <cstdint>
#include <random>

#include "clawmark/table.hpp"

namespace clawmark {

/// Deterministic random source for reproducible experiments. All randomized
/// helpers take an Rng explicitly; nothing in the library touches global
/// state, so a fixed seed yields identical runs across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform integer in [0, bound). Requires bound >= 1.
    std::uint64_t below(std::uint64_t bound);

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// A uniformly random flow of length n: the first n-1 entries are uniform,
/// the last is the unique completion.
Flow random_flow(const GroupSpec& spec, int n, Rng& rng);

/// A table of d independent random flows.
Table random_table(const GroupSpec& spec, int n, int d, Rng& rng);

/// A table compatible with t, produced by shuffling every column
/// independently and repairing the resulting rows into flows by rejection:
/// column shuffles preserve all column signatures, and the sampler retries
/// until every row sums to zero. Retries are bounded; on persistent failure
/// the original table is returned (which is trivially compatible).
Table shuffled_compatible_mate(const Table& t, Rng& rng, int max_attempts = 2000);

}  // namespace clawmark

#endif
