#pragma once

#include <cstdint>

namespace spectrade {

// SplitMix64. Chosen over std::mt19937 + std::uniform_int_distribution
// because the standard distributions are implementation-defined; this
// generator produces identical streams on every platform and compiler.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform over [0, bound) by rejection, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform over [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return g.next();
}

// Independent generator for one entity of one kind, so that adding buyers
// does not shift the draws of existing sellers and vice versa.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t kind,
                            std::uint64_t index) {
    return SplitMix64(mix_seed(mix_seed(seed, kind), index));
}

// Every tie in grouping, group bidding and clearing is broken through this
// policy. ById is the default deterministic order; Seeded permutes the order
// reproducibly so tie sensitivity can be measured.
struct TieBreak {
    enum class Mode { ById, Seeded };

    Mode mode = Mode::ById;
    std::uint64_t seed = 0;

    static TieBreak by_id() { return {}; }
    static TieBreak seeded(std::uint64_t seed) {
        return {Mode::Seeded, seed};
    }

    // Priority key for an entity id; smaller key wins the tie.
    std::uint64_t key(int id) const {
        if (mode == Mode::ById) return static_cast<std::uint64_t>(id);
        return mix_seed(seed, static_cast<std::uint64_t>(id));
    }
};

}  // namespace spectrade
