#include "ainfss/ainf.hpp"

#include <sstream>

namespace ainfss {

namespace {

std::string key_string(const BigradedSpace& sp, const std::vector<std::size_t>& key) {
    std::ostringstream os;
    os << "(";
    for (std::size_t l = 0; l < key.size(); ++l) os << (l ? "," : "") << sp.element(key[l]).name;
    os << ")";
    return os.str();
}

}  // namespace

AInfinityAlgebra::AInfinityAlgebra(SpacePtr space, int s_type, std::optional<std::string> unit)
    : space_(std::move(space)), s_type_(s_type) {
    if (s_type < 0) throw validation_error("s_type must be nonnegative");
    if (unit) {
        auto idx = space_->index_of(*unit);
        if (!idx) throw validation_error("unit \"" + *unit + "\" is not a basis element");
        if (space_->element(*idx).deg != Bidegree{0, 0})
            throw validation_error("unit must sit in bidegree 0,0");
        unit_ = idx;
    }
}

std::optional<std::string> AInfinityAlgebra::unit_name() const {
    if (!unit_) return std::nullopt;
    return space_->element(*unit_).name;
}

void AInfinityAlgebra::set_map(MultiMap m) {
    if (m.source().get() != space_.get() || m.target().get() != space_.get())
        throw validation_error("structure map must be an endomap of the underlying space");
    if (m.bidegree() != structure_bidegree(s_type_, m.arity()))
        throw validation_error("arity-" + std::to_string(m.arity()) + " map has bidegree " +
                               m.bidegree().to_string() + ", expected " +
                               structure_bidegree(s_type_, m.arity()).to_string());
    if (m.is_zero())
        maps_.erase(m.arity());
    else
        maps_.insert_or_assign(m.arity(), std::move(m));
}

const MultiMap& AInfinityAlgebra::map(int arity) const {
    auto it = maps_.find(arity);
    if (it != maps_.end()) return it->second;
    auto z = zero_cache_.find(arity);
    if (z == zero_cache_.end())
        z = zero_cache_.emplace(arity, MultiMap(space_, space_, arity, structure_bidegree(s_type_, arity))).first;
    return z->second;
}

int AInfinityAlgebra::arity_bound() const { return space_->total_width() + 3; }

bool AInfinityAlgebra::operator==(const AInfinityAlgebra& o) const {
    return *space_ == *o.space_ && s_type_ == o.s_type_ && unit_name() == o.unit_name() && maps_ == o.maps_;
}

const MultiMap& AInfinityMorphism::at(int arity) const {
    auto it = components.find(arity);
    if (it != components.end()) return it->second;
    auto c = zero_cache_.find(arity);
    if (c == zero_cache_.end())
        c = zero_cache_.emplace(arity, MultiMap(source->space(), target->space(), arity,
                                                morphism_bidegree(source->s_type(), arity)))
                .first;
    return c->second;
}

MultiMap si_defect(const AInfinityAlgebra& a, int n) {
    MultiMap defect(a.space(), a.space(), n, structure_bidegree(a.s_type(), n) + Bidegree{a.s_type(), -a.s_type() + 1});
    // bidegree bookkeeping: SI(n) has the bidegree of m_1 ∘ m_n, i.e. (3-n)(s,-s+1)
    for (int r = 0; r <= n - 1; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            const MultiMap& inner = a.map(s);
            const MultiMap& outer = a.map(r + 1 + t);
            if (inner.is_zero() || outer.is_zero()) continue;
            MultiMap term = compose_at(outer, inner, r, t);
            if ((r + s * t) % 2) term = -term;
            defect.add_in_place(term);
        }
    return defect;
}

Report check_stasheff(const AInfinityAlgebra& a, int n_max) {
    Report rep;
    int bound = a.arity_bound();
    if (n_max <= 0) n_max = bound;
    for (const auto& [arity, m] : a.maps())
        if (arity > bound)
            rep.add("declared arity-" + std::to_string(arity) + " map exceeds the arity bound " +
                    std::to_string(bound));
    for (int n = 1; n <= n_max; ++n) {
        MultiMap defect = si_defect(a, n);
        for (const auto& [key, val] : defect.entries())
            rep.add("SI(" + std::to_string(n) + ") fails on " + key_string(*a.space(), key) + ": " +
                    val.to_string(*a.space()));
    }
    if (a.unit()) rep.merge(check_unit_axioms(a));
    return rep;
}

MultiMap mi_defect(const AInfinityMorphism& f, int n) {
    const AInfinityAlgebra& A = *f.source;
    const AInfinityAlgebra& B = *f.target;
    if (A.s_type() != B.s_type())
        throw validation_error("morphism between algebras of different s-types");
    MultiMap defect(A.space(), B.space(), n,
                    morphism_bidegree(A.s_type(), n) + Bidegree{A.s_type(), -A.s_type() + 1});
    // LHS: Σ (-1)^{r+st} f_{r+1+t} ∘ (id^r ⊗ m^A_s ⊗ id^t)
    for (int r = 0; r <= n - 1; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            const MultiMap& inner = A.map(s);
            const MultiMap& outer = f.at(r + 1 + t);
            if (inner.is_zero() || outer.is_zero()) continue;
            MultiMap term = compose_at(outer, inner, r, t);
            if ((r + s * t) % 2) term = -term;
            defect.add_in_place(term);
        }
    // RHS: Σ_q Σ_{i_1+..+i_q = n} (-1)^w m^B_q ∘ (f_{i_1} ⊗ ... ⊗ f_{i_q})
    std::vector<int> parts;
    std::function<void(int, int)> split = [&](int remaining, int q_hint) {
        (void)q_hint;
        if (remaining == 0) {
            int q = static_cast<int>(parts.size());
            const MultiMap& mq = B.map(q);
            if (mq.is_zero()) return;
            std::vector<const MultiMap*> factors;
            bool all_present = true;
            for (int ij : parts) {
                const MultiMap& fij = f.at(ij);
                if (fij.is_zero()) all_present = false;
                factors.push_back(&fij);
            }
            if (!all_present) return;
            int w = 0;
            for (int j = 1; j <= q; ++j) w += (q - j) * (parts[static_cast<std::size_t>(j - 1)] - 1);
            MultiMap term = tensor_then(mq, factors);
            if (w % 2 == 0) term = -term;  // defect is LHS - RHS
            defect.add_in_place(term);
            return;
        }
        for (int i = 1; i <= remaining; ++i) {
            parts.push_back(i);
            split(remaining - i, 0);
            parts.pop_back();
        }
    };
    split(n, 0);
    return defect;
}

Report check_morphism(const AInfinityMorphism& f, int n_max) {
    Report rep;
    if (f.source->s_type() != f.target->s_type()) {
        rep.add("source and target s-types differ");
        return rep;
    }
    if (n_max <= 0) n_max = f.source->arity_bound();
    for (int n = 1; n <= n_max; ++n) {
        MultiMap defect = mi_defect(f, n);
        for (const auto& [key, val] : defect.entries())
            rep.add("MI(" + std::to_string(n) + ") fails on " + key_string(*f.source->space(), key) + ": " +
                    val.to_string(*f.target->space()));
    }
    if (f.source->unit() && f.target->unit()) {
        const auto& f1 = f.at(1);
        LinComb img = f1.entry({*f.source->unit()});
        LinComb expect = LinComb::basis(f.target->space()->field(), *f.target->unit());
        if (!(img == expect)) rep.add("f_1 does not send the unit to the unit");
        for (const auto& [arity, comp] : f.components) {
            if (arity < 2) continue;
            for (const auto& [key, val] : comp.entries())
                for (auto i : key)
                    if (i == *f.source->unit() && !val.is_zero()) {
                        rep.add("f_" + std::to_string(arity) + " nonzero on a unit input " +
                                key_string(*f.source->space(), key));
                        break;
                    }
        }
    }
    return rep;
}

MultiMap bar_square_component(const AInfinityAlgebra& a, int n) {
    SpacePtr shifted = suspended_space(a.space());
    MultiMap s = suspension(a.space(), shifted);
    MultiMap s_inv = desuspension(a.space(), shifted);
    std::map<int, MultiMap> b;
    for (const auto& [arity, m] : a.maps()) b.emplace(arity, bar_component(m, s, s_inv));
    auto b_at = [&](int arity) -> const MultiMap* {
        auto it = b.find(arity);
        return it == b.end() ? nullptr : &it->second;
    };
    int st = a.s_type();
    Bidegree square_bideg{(3 - n) * st, (3 - n) * (1 - st) + n - 1};
    MultiMap square(shifted, shifted, n, square_bideg);
    for (int r = 0; r <= n - 1; ++r)
        for (int s_ar = 1; r + s_ar <= n; ++s_ar) {
            int t = n - r - s_ar;
            const MultiMap* inner = b_at(s_ar);
            const MultiMap* outer = b_at(r + 1 + t);
            if (!inner || !outer) continue;
            square.add_in_place(compose_at(*outer, *inner, r, t));
        }
    return square;
}

Report bar_square_check(const AInfinityAlgebra& a, int n_max) {
    Report rep;
    if (n_max <= 0) n_max = a.arity_bound();
    for (int n = 1; n <= n_max; ++n) {
        MultiMap sq = bar_square_component(a, n);
        for (const auto& [key, val] : sq.entries())
            rep.add("coderivation square nonzero at arity " + std::to_string(n) + " on " +
                    key_string(*sq.source(), key));
    }
    return rep;
}

AInfinityAlgebra from_dg(const BigradedMap& d, const MultiMap& mu, std::optional<std::string> unit) {
    const SpacePtr& sp = mu.source();
    if (mu.arity() != 2) throw validation_error("from_dg product must have arity 2");
    if (mu.bidegree() != Bidegree{0, 0}) throw validation_error("from_dg product must have bidegree 0,0");
    Bidegree db = d.bidegree();
    if (db.total() != 1 || db.p < 0)
        throw validation_error("from_dg differential must have bidegree (s,1-s) with s >= 0");
    int s_type = db.p;

    if (d.source().get() != sp.get() && !(*d.source() == *sp))
        throw validation_error("from_dg: differential and product live on different spaces");

    AInfinityAlgebra a(sp, s_type, unit);
    {
        Report sq = check_square_zero(d);
        if (!sq.ok()) throw validation_error("from_dg: square-zero fails:\n" + sq.to_string());
    }
    MultiMap m1(sp, sp, 1, db);
    for (std::size_t i = 0; i < sp->dim(); ++i)
        if (!d.image(i).is_zero()) m1.set_entry({i}, d.image(i));
    a.set_map(m1);
    a.set_map(mu);

    Report laws;
    {
        MultiMap leibniz = si_defect(a, 2);
        for (const auto& [key, val] : leibniz.entries())
            laws.add("Leibniz fails on " + key_string(*sp, key));
        MultiMap assoc = si_defect(a, 3);
        for (const auto& [key, val] : assoc.entries())
            laws.add("associativity fails on " + key_string(*sp, key));
    }
    if (unit) laws.merge(check_unit_axioms(a));
    if (!laws.ok()) throw validation_error("from_dg:\n" + laws.to_string());
    return a;
}

Report check_unit_axioms(const AInfinityAlgebra& a) {
    Report rep;
    if (!a.unit()) return rep;
    std::size_t e = *a.unit();
    const Field& f = a.space()->field();
    for (const auto& [arity, m] : a.maps()) {
        if (arity == 2) continue;
        for (const auto& [key, val] : m.entries())
            for (auto i : key)
                if (i == e) {
                    rep.add("m_" + std::to_string(arity) + " nonzero on a unit input " +
                            key_string(*a.space(), key));
                    break;
                }
    }
    const MultiMap& m2 = a.map(2);
    for (std::size_t i = 0; i < a.space()->dim(); ++i) {
        LinComb expect = LinComb::basis(f, i);
        if (!(m2.entry({e, i}) == expect)) rep.add("m_2(1, " + a.space()->element(i).name + ") != identity");
        if (!(m2.entry({i, e}) == expect)) rep.add("m_2(" + a.space()->element(i).name + ", 1) != identity");
    }
    return rep;
}

}  // namespace ainfss
