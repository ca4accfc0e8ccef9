#pragma once

#include <functional>
#include <span>

#include "ainfss/bigraded.hpp"

namespace ainfss {

/* Sparse multilinear map source^⊗n -> target, homogeneous of one bidegree.
 * Keys are tuples of source basis indices; absent key means zero. */
class MultiMap {
  public:
    MultiMap() = default;
    MultiMap(SpacePtr source, SpacePtr target, int arity, Bidegree bidegree);

    static MultiMap identity(const SpacePtr& sp);

    const SpacePtr& source() const { return source_; }
    const SpacePtr& target() const { return target_; }
    int arity() const { return arity_; }
    const Bidegree& bidegree() const { return bidegree_; }
    int degree() const { return bidegree_.total(); }

    const std::map<std::vector<std::size_t>, LinComb>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    /* Inserts a value after checking the bidegree bookkeeping
     * out = Σ in + bidegree on every term. */
    void set_entry(std::vector<std::size_t> key, LinComb value);
    void accumulate(const std::vector<std::size_t>& key, const LinComb& value);
    const LinComb& entry(const std::vector<std::size_t>& key) const;

    LinComb evaluate(std::span<const LinComb> args) const;

    MultiMap operator*(const Scalar& c) const;
    MultiMap operator-() const { return *this * Scalar::of_int(source_->field(), -1); }
    void add_in_place(const MultiMap& o);
    bool operator==(const MultiMap& o) const;

    std::string to_string() const;

  private:
    SpacePtr source_, target_;
    int arity_ = 0;
    Bidegree bidegree_;
    std::map<std::vector<std::size_t>, LinComb> entries_;
};

/* View of an arity-1 multilinear map as a plain homogeneous linear map. */
BigradedMap as_linear(const MultiMap& m);

/* outer ∘ (F_1 ⊗ ... ⊗ F_q) with the Koszul sign rule; a null factor stands
 * for the identity of the result's source space.  All non-null factors must
 * share one source and map into outer's source. */
MultiMap tensor_then(const MultiMap& outer, const std::vector<const MultiMap*>& factors);

/* outer ∘ (id^⊗r ⊗ inner ⊗ id^⊗t) */
MultiMap compose_at(const MultiMap& outer, const MultiMap& inner, int r, int t);

/* Change of basis: entry(g_1..g_n) = out(m(in[g_1], ..., in[g_n])).
 * Every in[g] must be homogeneous of g's bidegree, so no signs arise. */
MultiMap conjugate(const MultiMap& m, const SpacePtr& new_source, const std::vector<LinComb>& in,
                   const SpacePtr& new_target, const std::function<LinComb(const LinComb&)>& out,
                   Bidegree new_bidegree);

/* Shift A[1]: same basis with q lowered by one (total degree drops by 1). */
SpacePtr suspended_space(const SpacePtr& sp);
MultiMap suspension(const SpacePtr& sp, const SpacePtr& shifted);    // s : A -> A[1]
MultiMap desuspension(const SpacePtr& sp, const SpacePtr& shifted);  // s^{-1} : A[1] -> A

/* b_i = -s ∘ m_i ∘ (s^⊗i)^{-1} on the shift, with
 * (s^⊗i)^{-1} = (-1)^{i(i-1)/2} (s^{-1})^⊗i. */
MultiMap bar_component(const MultiMap& m_i, const MultiMap& s, const MultiMap& s_inv);

}  // namespace ainfss
