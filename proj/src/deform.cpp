#include "ainfss/deform.hpp"

namespace ainfss {

void FormalBigradedDeformation::set_component(int order, MultiMap m) {
    if (order == 0) {
        base_.set_map(std::move(m));
        return;
    }
    if (order < 0) throw validation_error("negative ħ-order");
    if (m.source().get() != space().get() || m.target().get() != space().get())
        throw validation_error("deformation component must be an endomap of the base space");
    Bidegree expect = deformation_bidegree(s_type(), m.arity(), order);
    if (m.bidegree() != expect)
        throw validation_error("order-" + std::to_string(order) + " arity-" + std::to_string(m.arity()) +
                               " component has bidegree " + m.bidegree().to_string() + ", expected " +
                               expect.to_string());
    auto key = std::make_pair(m.arity(), order);
    if (m.is_zero())
        higher_.erase(key);
    else
        higher_.insert_or_assign(key, std::move(m));
}

const MultiMap& FormalBigradedDeformation::component(int arity, int order) const {
    if (order == 0) return base_.map(arity);
    auto it = higher_.find({arity, order});
    if (it != higher_.end()) return it->second;
    auto key = std::make_pair(arity, order);
    auto z = zero_cache_.find(key);
    if (z == zero_cache_.end())
        z = zero_cache_
                .emplace(key, MultiMap(space(), space(), arity, deformation_bidegree(s_type(), arity, order)))
                .first;
    return z->second;
}

bool FormalBigradedDeformation::has_component(int arity, int order) const {
    if (order == 0) return base_.has_map(arity) && !base_.map(arity).is_zero();
    return higher_.count({arity, order}) > 0;
}

int FormalBigradedDeformation::max_arity() const {
    int m = base_.max_arity();
    for (const auto& [k, v] : higher_) m = std::max(m, k.first);
    return m;
}

int FormalBigradedDeformation::max_order() const {
    int m = 0;
    for (const auto& [k, v] : higher_) m = std::max(m, k.second);
    return m;
}

std::vector<std::pair<int, LinComb>> FormalBigradedDeformation::evaluate_total(
    int arity, const std::vector<std::pair<LinComb, int>>& args) const {
    if (static_cast<int>(args.size()) != arity) throw internal_error("evaluate_total arity mismatch");
    int flag_sum = 0;
    std::vector<LinComb> plain;
    for (const auto& [v, flag] : args) {
        flag_sum += flag;
        plain.push_back(v);
    }
    std::map<int, LinComb> by_order;
    for (int j = 0; j <= max_order(); ++j) {
        const MultiMap& mj = component(arity, j);
        if (mj.is_zero()) continue;
        LinComb val = mj.evaluate(plain);
        if (val.is_zero()) continue;
        int order = j + flag_sum;
        auto [it, fresh] = by_order.emplace(order, val);
        if (!fresh) it->second = it->second + val;
    }
    std::vector<std::pair<int, LinComb>> out;
    for (auto& [o, v] : by_order)
        if (!v.is_zero()) out.emplace_back(o, std::move(v));
    return out;
}

bool FormalBigradedDeformation::operator==(const FormalBigradedDeformation& o) const {
    return base_ == o.base_ && higher_ == o.higher_ && truncation_ == o.truncation_;
}

FilteredAInfinity::FilteredAInfinity(FormalBigradedDeformation rep) : rep_(std::move(rep)) {
    if (rep_.s_type() != 0)
        throw validation_error("filtered split presentation requires a 0-type bigrading");
}

MultiMap deformation_si_defect(const FormalBigradedDeformation& d, int n, int order) {
    Bidegree bideg = deformation_bidegree(d.s_type(), n, order) + Bidegree{d.s_type(), -d.s_type() + 1};
    MultiMap defect(d.space(), d.space(), n, bideg);
    for (int r = 0; r <= n - 1; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            for (int j0 = 0; j0 <= order; ++j0) {
                int j1 = order - j0;
                const MultiMap& outer = d.component(r + 1 + t, j0);
                const MultiMap& inner = d.component(s, j1);
                if (outer.is_zero() || inner.is_zero()) continue;
                MultiMap term = compose_at(outer, inner, r, t);
                if ((r + s * t) % 2) term = -term;
                defect.add_in_place(term);
            }
        }
    return defect;
}

namespace {

std::string key_string(const BigradedSpace& sp, const std::vector<std::size_t>& key) {
    std::string out = "(";
    for (std::size_t l = 0; l < key.size(); ++l) out += (l ? "," : "") + sp.element(key[l]).name;
    return out + ")";
}

}  // namespace

Report check_deformation(const FormalBigradedDeformation& d, int n_max) {
    Report rep;
    int bound = d.base().arity_bound();
    if (n_max <= 0) n_max = bound;
    for (const auto& [key, m] : d.higher())
        if (key.first > bound)
            rep.add("declared arity-" + std::to_string(key.first) + " component exceeds the arity bound " +
                    std::to_string(bound));
    int order_max = 2 * d.max_order();
    if (d.truncation()) order_max = std::min(order_max, *d.truncation());
    for (int n = 1; n <= n_max; ++n)
        for (int o = 0; o <= order_max; ++o) {
            MultiMap defect = deformation_si_defect(d, n, o);
            for (const auto& [key, val] : defect.entries())
                rep.add("SI(" + std::to_string(n) + ") at ħ-order " + std::to_string(o) + " fails on " +
                        key_string(*d.space(), key) + ": " + val.to_string(*d.space()));
        }
    if (d.base().unit()) {
        rep.merge(check_unit_axioms(d.base()));
        std::size_t e = *d.base().unit();
        for (const auto& [key, m] : d.higher())
            for (const auto& [tuple, val] : m.entries())
                for (auto i : tuple)
                    if (i == e) {
                        rep.add("order-" + std::to_string(key.second) + " component m_" +
                                std::to_string(key.first) + " nonzero on a unit input");
                        break;
                    }
    }
    return rep;
}

FormalBigradedDeformation reduce_mod(const FormalBigradedDeformation& d, int order) {
    if (order < 0) throw validation_error("reduce_mod order must be nonnegative");
    FormalBigradedDeformation out(d.base());
    for (const auto& [key, m] : d.higher())
        if (key.second <= order) out.set_component(key.second, m);
    out.set_truncation(d.truncation() ? std::min(*d.truncation(), order) : order);
    return out;
}

Report check_filtered(const FilteredAInfinity& f) {
    Report rep = check_deformation(f.rep());
    for (auto& issue : rep.issues) {
        std::string from = "ħ-order", to = "filtration shift";
        for (std::size_t pos = issue.find(from); pos != std::string::npos; pos = issue.find(from, pos))
            issue.replace(pos, from.size(), to);
    }
    return rep;
}

FormalBigradedDeformation rees(const FilteredAInfinity& f) {
    Report rep = check_filtered(f);
    if (!rep.ok()) throw validation_error("rees of an invalid filtered algebra:\n" + rep.to_string());
    return f.rep();
}

AInfinityAlgebra associated_graded(const FilteredAInfinity& f) { return f.rep().base(); }

FilteredAInfinity specialize_hbar_one(const FormalBigradedDeformation& d) {
    return FilteredAInfinity(d);
}

bool rees_roundtrip_check(const FormalBigradedDeformation& d) {
    Report valid = check_deformation(d);
    if (!valid.ok()) throw validation_error("rees_roundtrip_check on an invalid deformation");
    FormalBigradedDeformation back = rees(specialize_hbar_one(d));
    return back == d;
}

DeformedMorphism::DeformedMorphism(const FormalBigradedDeformation* source,
                                   const FormalBigradedDeformation* target)
    : source_(source), target_(target) {
    if (source_->s_type() != target_->s_type())
        throw validation_error("deformed morphism between different s-types");
}

void DeformedMorphism::set_component(int order, MultiMap f) {
    if (order < 0) throw validation_error("negative ħ-order");
    Bidegree expect = morphism_bidegree(source_->s_type(), f.arity()) + Bidegree{order, -order};
    if (f.bidegree() != expect)
        throw validation_error("morphism component bidegree " + f.bidegree().to_string() + ", expected " +
                               expect.to_string());
    auto key = std::make_pair(f.arity(), order);
    if (f.is_zero())
        comps_.erase(key);
    else
        comps_.insert_or_assign(key, std::move(f));
}

const MultiMap& DeformedMorphism::component(int arity, int order) const {
    auto it = comps_.find({arity, order});
    if (it != comps_.end()) return it->second;
    auto key = std::make_pair(arity, order);
    auto z = zero_cache_.find(key);
    if (z == zero_cache_.end())
        z = zero_cache_
                .emplace(key, MultiMap(source_->space(), target_->space(), arity,
                                       morphism_bidegree(source_->s_type(), arity) + Bidegree{order, -order}))
                .first;
    return z->second;
}

int DeformedMorphism::max_arity() const {
    int m = 0;
    for (const auto& [k, v] : comps_) m = std::max(m, k.first);
    return m;
}

int DeformedMorphism::max_order() const {
    int m = 0;
    for (const auto& [k, v] : comps_) m = std::max(m, k.second);
    return m;
}

MultiMap deformed_mi_defect(const DeformedMorphism& f, int n, int order) {
    const FormalBigradedDeformation& A = f.source();
    const FormalBigradedDeformation& B = f.target();
    int st = A.s_type();
    MultiMap defect(A.space(), B.space(), n,
                    morphism_bidegree(st, n) + Bidegree{st, -st + 1} + Bidegree{order, -order});
    for (int r = 0; r <= n - 1; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            for (int ja = 0; ja <= order; ++ja) {
                const MultiMap& outer = f.component(r + 1 + t, ja);
                const MultiMap& inner = A.component(s, order - ja);
                if (outer.is_zero() || inner.is_zero()) continue;
                MultiMap term = compose_at(outer, inner, r, t);
                if ((r + s * t) % 2) term = -term;
                defect.add_in_place(term);
            }
        }
    auto f_orders = [&](int a) {
        std::vector<int> out;
        for (const auto& [key, comp] : f.components())
            if (key.first == a) out.push_back(key.second);
        return out;
    };
    auto m_orders = [&](int q) {
        std::vector<int> out;
        for (int j = 0; j <= B.max_order(); ++j)
            if (!B.component(q, j).is_zero()) out.push_back(j);
        return out;
    };
    std::vector<int> parts;
    std::function<void(int)> split = [&](int remaining) {
        if (remaining == 0) {
            int q = static_cast<int>(parts.size());
            int w = 0;
            for (int j = 1; j <= q; ++j) w += (q - j) * (parts[static_cast<std::size_t>(j - 1)] - 1);
            std::vector<const MultiMap*> factors(static_cast<std::size_t>(q), nullptr);
            for (int j0 : m_orders(q)) {
                if (j0 > order) continue;
                const MultiMap& mq = B.component(q, j0);
                std::function<void(std::size_t, int)> assign = [&](std::size_t pos, int left) {
                    if (pos == factors.size()) {
                        if (left != 0) return;
                        MultiMap term = tensor_then(mq, factors);
                        if (w % 2 == 0) term = -term;  // defect = LHS - RHS
                        defect.add_in_place(term);
                        return;
                    }
                    for (int o : f_orders(parts[pos])) {
                        if (o > left) continue;
                        factors[pos] = &f.component(parts[pos], o);
                        assign(pos + 1, left - o);
                    }
                };
                assign(0, order - j0);
            }
            return;
        }
        for (int i = 1; i <= remaining; ++i) {
            if (f_orders(i).empty()) continue;
            parts.push_back(i);
            split(remaining - i);
            parts.pop_back();
        }
    };
    split(n);
    return defect;
}

Report check_deformed_morphism(const DeformedMorphism& f, int n_max, int order_max) {
    Report rep;
    if (n_max <= 0) n_max = f.source().base().arity_bound();
    if (order_max < 0)
        order_max = std::max({f.max_order(), f.source().max_order(), f.target().max_order()}) * 2;
    for (int n = 1; n <= n_max; ++n)
        for (int o = 0; o <= order_max; ++o) {
            MultiMap defect = deformed_mi_defect(f, n, o);
            for (const auto& [key, val] : defect.entries())
                rep.add("MI(" + std::to_string(n) + ") at ħ-order " + std::to_string(o) + " fails on " +
                        key_string(*f.source().space(), key));
        }
    return rep;
}

}  // namespace ainfss
