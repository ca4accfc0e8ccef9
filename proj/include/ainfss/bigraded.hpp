#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ainfss/matrix.hpp"

namespace ainfss {

struct Bidegree {
    int p = 0;
    int q = 0;
    int total() const { return p + q; }
    Bidegree operator+(const Bidegree& o) const { return {p + o.p, q + o.q}; }
    Bidegree operator-(const Bidegree& o) const { return {p - o.p, q - o.q}; }
    Bidegree operator*(int n) const { return {n * p, n * q}; }
    auto operator<=>(const Bidegree&) const = default;
    std::string to_string() const { return std::to_string(p) + "," + std::to_string(q); }
};

struct BasisElement {
    std::string name;
    Bidegree deg;
};

/* Finite-support bigraded vector space with a named, ordered basis. */
class BigradedSpace {
  public:
    BigradedSpace(Field f, std::vector<BasisElement> basis);

    const Field& field() const { return field_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const BasisElement& element(std::size_t i) const { return basis_[i]; }
    std::optional<std::size_t> index_of(const std::string& name) const;

    const std::vector<std::size_t>& at(const Bidegree& d) const;
    std::map<Bidegree, std::size_t> dims() const;
    std::vector<Bidegree> support() const;

    /* Width of the p-support and of the total-degree support; 0 when empty. */
    int p_width() const;
    int total_width() const;

    bool operator==(const BigradedSpace& o) const;

  private:
    Field field_;
    std::vector<BasisElement> basis_;
    std::map<std::string, std::size_t> index_;
    std::map<Bidegree, std::vector<std::size_t>> by_deg_;
};

using SpacePtr = std::shared_ptr<const BigradedSpace>;

SpacePtr make_space(Field f, std::vector<BasisElement> basis);

/* Sparse vector: sorted (basis index, nonzero coefficient) pairs. */
class LinComb {
  public:
    LinComb() = default;

    static LinComb basis(const Field& f, std::size_t i) { return LinComb({{i, Scalar::one(f)}}); }
    static LinComb from_dense(const Vec& v);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<std::pair<std::size_t, Scalar>>& terms() const { return terms_; }

    void add(std::size_t i, const Scalar& c);
    LinComb operator+(const LinComb& o) const;
    LinComb operator*(const Scalar& c) const;
    LinComb operator-() const;
    bool operator==(const LinComb& o) const { return terms_ == o.terms_; }

    Vec dense(std::size_t n, const Field& f) const;
    std::string to_string(const BigradedSpace& sp) const;

    /* The common bidegree of the support, or nullopt if empty/mixed. */
    std::optional<Bidegree> homogeneous_bidegree(const BigradedSpace& sp) const;

  private:
    explicit LinComb(std::vector<std::pair<std::size_t, Scalar>> t) : terms_(std::move(t)) {}
    std::vector<std::pair<std::size_t, Scalar>> terms_;
};

/* Homogeneous linear map between bigraded spaces, stored as images of the
 * source basis.  Every image must sit in bidegree (source deg + bidegree). */
class BigradedMap {
  public:
    BigradedMap(SpacePtr source, SpacePtr target, Bidegree bidegree);

    const SpacePtr& source() const { return source_; }
    const SpacePtr& target() const { return target_; }
    const Bidegree& bidegree() const { return bidegree_; }

    void set_image(std::size_t i, LinComb v);
    const LinComb& image(std::size_t i) const { return images_[i]; }
    LinComb apply(const LinComb& v) const;
    bool is_zero() const;

    /* Matrix block sending the (p,q) slice of the source into the
     * (p,q)+bidegree slice of the target. */
    Matrix block(const Bidegree& d) const;

    BigradedMap compose(const BigradedMap& inner) const;  // this ∘ inner

  private:
    SpacePtr source_, target_;
    Bidegree bidegree_;
    std::vector<LinComb> images_;
};

/* Findings of a structural check; empty means the law holds. */
struct Report {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
    void add(std::string s) { issues.push_back(std::move(s)); }
    void merge(const Report& o) { issues.insert(issues.end(), o.issues.begin(), o.issues.end()); }
    std::string to_string() const;
};

/* Lists the bidegrees where (d ∘ d) has a nonzero block. */
Report check_square_zero(const BigradedMap& d);

/* Basis data for a subquotient Z/B of one bidegree slice of a space:
 * representatives plus a coordinate solve against [reps | B]. */
class Subquotient {
  public:
    Subquotient(const Field& f, std::size_t ambient_dim, const std::vector<Vec>& z_basis,
                const std::vector<Vec>& b_basis, const std::vector<Vec>& preferred = {});

    std::size_t dim() const { return reps_.size(); }
    const std::vector<Vec>& reps() const { return reps_; }

    /* Coordinates of v (assumed in Z); throws internal_error otherwise. */
    Vec coords(const Vec& v) const;

  private:
    std::vector<Vec> reps_;
    std::optional<Solver> solver_;
    std::size_t nb_ = 0;
};

/* Cohomology of a square-zero map with a chosen section: H with canonical
 * basis names "h{p}_{q}_{i}", the projection Ker(d) -> H and the section
 * f1 : H -> ambient.  When `unit` names a basis element, its class is placed
 * first in its slice and lifted to the element itself. */
struct CohomologyData {
    SpacePtr H;
    BigradedMap f1;                       // H -> ambient, bidegree (0,0)
    std::map<Bidegree, Subquotient> slices;
    std::optional<std::size_t> unit_class;  // index into H when requested

    /* pi : Ker(d) -> H on a homogeneous element of the ambient space. */
    LinComb project(const LinComb& v, const BigradedSpace& ambient) const;
};

CohomologyData cohomology_with_section(const BigradedMap& d,
                                       std::optional<std::size_t> unit = std::nullopt);

}  // namespace ainfss
