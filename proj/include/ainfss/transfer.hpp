#pragma once

#include "ainfss/deform.hpp"

namespace ainfss {

/* Minimal model of an A∞-algebra: structure maps on the cohomology with
 * vanishing differential, plus the quasi-isomorphism into the input. */
struct TransferResult {
    AInfinityAlgebra model;                    // minimal, on the cohomology space
    CohomologyData cohomology;                 // chosen section/projection
    std::map<int, MultiMap> morphism;          // f_n : H^⊗n -> A
    std::vector<std::string> witness_log;      // one line per obstruction solve

    AInfinityMorphism morphism_into(const AInfinityAlgebra& input) const;
};

/* Obstruction-theoretic minimal-model construction.  Iterates the arity,
 * forming at each step the obstruction from the already-built data, checking
 * that the differential kills it, projecting to get the next structure map
 * and solving for the next morphism component.  arity_max <= 0 means the
 * automatic bound of the cohomology space. */
TransferResult kadeishvili_transfer(const AInfinityAlgebra& a, int arity_max = 0);

/* Deformation of the minimal model together with the morphism components
 * f_n^j, built by the double induction over arity and ħ-order. */
struct DeformedTransferResult {
    FormalBigradedDeformation model_deformation;
    CohomologyData cohomology;
    std::map<std::pair<int, int>, MultiMap> morphism;  // (arity, order) -> f_n^j
    std::vector<std::string> witness_log;

    DeformedMorphism morphism_into(const FormalBigradedDeformation& input) const;
};

DeformedTransferResult deformation_transfer(const FormalBigradedDeformation& d, int arity_max = 0,
                                            int order_max = -1);

/* For each truncation order N, checks that Σ_{j<=N} f_1^j ħ^j induces a
 * bijection on the cohomology of the truncated complexes over k[ħ]/(ħ^{N+1}). */
Report verify_quasi_iso(const FormalBigradedDeformation& input, const DeformedTransferResult& result,
                        int order_cap = -1);

}  // namespace ainfss
