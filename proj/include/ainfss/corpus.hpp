#pragma once

#include "ainfss/deform.hpp"

namespace ainfss {

/* SplitMix64; the selftest corpus generator.  Draws are reduced by modulo so
 * corpora reproduce bit-for-bit from the seed alone. */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
    bool chance(int num, int den) { return below(static_cast<std::uint64_t>(den)) < static_cast<std::uint64_t>(num); }

  private:
    std::uint64_t state_;
};

struct CorpusOptions {
    Field field = Field::prime(101);
    int max_dim = 10;
    int max_width = 4;  // p- and q-support width bound
    bool unitary = false;
};

/* Valid structures assembled from hand-verified blocks (abelian pieces,
 * two-term differentials, truncated polynomial products, a Massey triple,
 * a minimal m_2/m_3 pair) glued by direct sum and a random basis change. */
AInfinityAlgebra random_algebra(Rng& rng, const CorpusOptions& opt);
FormalBigradedDeformation random_deformation(Rng& rng, const CorpusOptions& opt);
FilteredAInfinity random_filtered(Rng& rng, const CorpusOptions& opt);

/* The named desk fixtures. */
AInfinityAlgebra massey_fixture(const Field& f);                  // F3
FormalBigradedDeformation fixture_f1(const Field& f);             // m_1^1 x = y
FormalBigradedDeformation fixture_f2(const Field& f);             // m_1^2 x = y
AInfinityAlgebra truncated_polynomial(const Field& f, int power); // k[x]/(x^power)

}  // namespace ainfss
