#pragma once

#include "ainfss/multimap.hpp"

namespace ainfss {

/* Bidegree of the arity-n structure map of an algebra with compatible
 * bigrading of s-th type: (2-n)(s, -s+1). */
inline Bidegree structure_bidegree(int s_type, int arity) {
    return Bidegree{s_type, -s_type + 1} * (2 - arity);
}

/* Bidegree of the arity-n component of a morphism: (1-n)(s, -s+1). */
inline Bidegree morphism_bidegree(int s_type, int arity) {
    return Bidegree{s_type, -s_type + 1} * (1 - arity);
}

class AInfinityAlgebra {
  public:
    AInfinityAlgebra(SpacePtr space, int s_type, std::optional<std::string> unit = std::nullopt);

    const SpacePtr& space() const { return space_; }
    int s_type() const { return s_type_; }
    const std::optional<std::size_t>& unit() const { return unit_; }
    std::optional<std::string> unit_name() const;

    /* Sets the arity-n structure map (empty map erases the arity). */
    void set_map(MultiMap m);
    bool has_map(int arity) const { return maps_.count(arity) > 0; }
    const MultiMap& map(int arity) const;  // zero map when absent
    const std::map<int, MultiMap>& maps() const { return maps_; }
    int max_arity() const { return maps_.empty() ? 0 : maps_.rbegin()->first; }

    bool is_minimal() const { return !has_map(1) || map(1).is_zero(); }

    /* Largest arity the structure can carry before every admissible map is
     * forced to vanish on this support: total-degree width + 3.  Declared
     * maps beyond it are rejected by check_stasheff. */
    int arity_bound() const;

    bool operator==(const AInfinityAlgebra& o) const;

  private:
    SpacePtr space_;
    int s_type_;
    std::optional<std::size_t> unit_;
    std::map<int, MultiMap> maps_;
    mutable std::map<int, MultiMap> zero_cache_;
};

struct AInfinityMorphism {
    const AInfinityAlgebra* source = nullptr;
    const AInfinityAlgebra* target = nullptr;
    std::map<int, MultiMap> components;  // arity -> f_n : source^⊗n -> target

    bool has(int arity) const { return components.count(arity) > 0; }
    const MultiMap& at(int arity) const;  // zero map when absent

  private:
    mutable std::map<int, MultiMap> zero_cache_;
};

/* LHS of the Stasheff identity SI(n):
 * Σ_{(r,s,t)} (-1)^{r+st} m_{r+1+t} ∘ (id^r ⊗ m_s ⊗ id^t). */
MultiMap si_defect(const AInfinityAlgebra& a, int n);

/* Reports every (n <= n_max, input tuple) with a nonzero SI defect, plus
 * declared arities beyond the automatic bound.  n_max <= 0 means the bound. */
Report check_stasheff(const AInfinityAlgebra& a, int n_max = 0);

/* Defect of the morphism identity MI(n), as LHS - RHS. */
MultiMap mi_defect(const AInfinityMorphism& f, int n);
Report check_morphism(const AInfinityMorphism& f, int n_max = 0);

/* Rebuilds the structure as desuspended coderivation components on A[1] and
 * reports nonzero squares; must flag exactly the arities check_stasheff does. */
Report bar_square_check(const AInfinityAlgebra& a, int n_max = 0);

/* Sum over (r,s,t) of b_{r+1+t} ∘ (id^r ⊗ b_s ⊗ id^t) on the shift. */
MultiMap bar_square_component(const AInfinityAlgebra& a, int n);

/* Wraps a differential and a binary product into an A∞-algebra after
 * verifying square-zero, Leibniz, associativity and the unit laws. */
AInfinityAlgebra from_dg(const BigradedMap& d, const MultiMap& mu,
                         std::optional<std::string> unit = std::nullopt);

/* Strict unit laws: m_2(1,a) = m_2(a,1) = a and m_i(..,1,..) = 0 for i != 2. */
Report check_unit_axioms(const AInfinityAlgebra& a);

}  // namespace ainfss
