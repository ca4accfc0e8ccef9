#pragma once

#include "ainfss/transfer.hpp"

namespace ainfss {

/* Isomorphism-invariant data of one page: dimensions, d-ranks keyed by the
 * source bidegree and product ranks keyed by the source pair.  Zero entries
 * are omitted. */
struct PageData {
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, std::size_t> d_ranks;
    std::map<std::pair<Bidegree, Bidegree>, std::size_t> mu_ranks;
};

struct PageSet {
    int start = 1;
    std::vector<PageData> pages;  // pages[i] is page (start + i)
    std::map<Bidegree, std::size_t> einf;

    const PageData& page(int r) const;  // by page index
    int last() const { return start + static_cast<int>(pages.size()) - 1; }
};

/* Projected dg algebra of a deformation with minimal base: differential is
 * the order-1 arity-1 component, product the order-0 arity-2 one; the
 * bigrading type goes up by one. */
AInfinityAlgebra project_P(const FormalBigradedDeformation& d);

/* Translated deformation: arity-n components reindexed by ħ^{n-2}; a
 * deformation of project_P(d) with type raised by one. */
FormalBigradedDeformation translate_T(const FormalBigradedDeformation& d);

/* The page-advancing functor on deformations: restrict to
 * {a : m̃_1(a) ∈ ħ·A_ħ}, rescale m̃_i by ħ^{i-2}, and re-present over the
 * quotient basis (kernel generators plus ħ·complement generators). */
FormalBigradedDeformation functor_D(const FormalBigradedDeformation& d);

/* Exact couple of bigraded modules with per-bidegree blocks.  D-slices are
 * materialized on a finite window; slices beyond the high p edge vanish and
 * the window's low margin is never consulted by page extraction. */
struct ExactCouple {
    int r_type = 0;
    int s_type = 0;
    Field field = Field::rationals();
    std::map<Bidegree, std::size_t> d_dims;
    std::map<Bidegree, std::size_t> e_dims;
    std::map<Bidegree, Matrix> i_blocks;  // keyed by source bidegree
    std::map<Bidegree, Matrix> j_blocks;
    std::map<Bidegree, Matrix> k_blocks;

    /* D-slices are either materialized (in the window), provably zero (past
     * the high p edge or outside the total-degree band), or unknown low
     * margin; checks and derivations only touch trusted slices. */
    std::set<Bidegree> d_window;
    int high_p = 0;
    int total_lo = 0, total_hi = -1;
    bool trusted(const Bidegree& deg) const {
        return deg.p > high_p || deg.total() < total_lo || deg.total() > total_hi ||
               d_window.count(deg) > 0;
    }

    std::size_t d_dim(const Bidegree& d) const;
    std::size_t e_dim(const Bidegree& d) const;
    const Matrix& i_block(const Bidegree& d) const;
    const Matrix& j_block(const Bidegree& d) const;
    const Matrix& k_block(const Bidegree& d) const;

    Bidegree i_bidegree() const { return {-1, 1}; }
    Bidegree j_bidegree() const { return {r_type, -r_type}; }
    Bidegree k_bidegree() const { return {1 + s_type, -s_type}; }

    /* Page index of the spectral sequence this couple generates next. */
    int page_index() const { return r_type + s_type + 1; }

    PageData page_data() const;  // E dims and ranks of d = j∘k
};

/* Cohomology long exact sequence of 0 -> D^s(A_ħ) --ħ--> D^s(A_ħ) ->
 * D^s(A_ħ)/(ħ) -> 0 assembled into a couple of (0, s + s')-th type. */
ExactCouple exact_couple_from_deformation(const FormalBigradedDeformation& d, int iterations,
                                          int window_margin = 6);

/* Exactness at the three vertices, rank-checked per bidegree on the trusted
 * interior of the window. */
Report check_exact_couple(const ExactCouple& c);

/* Derived couple: E' = Ker(d)/Im(d), D' = Im(i), j'(i x) = [j x], k' induced. */
ExactCouple derive_couple(const ExactCouple& c);

/* Classical subquotient pages of a filtered A∞-algebra, with differentials
 * and products induced by the total structure maps, plus exact E_∞. */
PageSet pages_from_filtration(const FilteredAInfinity& f, int r_max);

enum class PageRoute { d_iteration, enhancement };

struct DeformationPages {
    PageSet pages;
    /* Enhancement route: the associated family of deformations, one per page. */
    std::vector<FormalBigradedDeformation> family;
};

DeformationPages pages_from_deformation(const FormalBigradedDeformation& d, int r_max, PageRoute route);

/* Per-page, per-bidegree comparison of dims, d-ranks, product ranks and E_∞. */
Report compare_pages(const PageSet& a, const PageSet& b);

/* E_∞ against the associated graded of the cohomology of the ħ=1 total
 * complex with its induced filtration. */
Report weak_convergence_check(const FilteredAInfinity& f);
Report weak_convergence_check(const FormalBigradedDeformation& d);

}  // namespace ainfss
