#include "ainfss/multimap.hpp"

#include <algorithm>
#include <sstream>

namespace ainfss {

MultiMap::MultiMap(SpacePtr source, SpacePtr target, int arity, Bidegree bidegree)
    : source_(std::move(source)), target_(std::move(target)), arity_(arity), bidegree_(bidegree) {
    if (arity < 1) throw validation_error("multilinear map arity must be >= 1");
}

MultiMap MultiMap::identity(const SpacePtr& sp) {
    MultiMap m(sp, sp, 1, {0, 0});
    for (std::size_t i = 0; i < sp->dim(); ++i)
        m.set_entry({i}, LinComb::basis(sp->field(), i));
    return m;
}

void MultiMap::set_entry(std::vector<std::size_t> key, LinComb value) {
    if (static_cast<int>(key.size()) != arity_) throw validation_error("entry key arity mismatch");
    Bidegree in{0, 0};
    for (auto i : key) in = in + source_->element(i).deg;
    Bidegree expect = in + bidegree_;
    for (const auto& [j, c] : value.terms())
        if (target_->element(j).deg != expect)
            throw validation_error("entry value leaves bidegree " + expect.to_string() + " (arity " +
                                   std::to_string(arity_) + ", key bidegree " + in.to_string() + ")");
    if (value.is_zero())
        entries_.erase(key);
    else
        entries_[std::move(key)] = std::move(value);
}

void MultiMap::accumulate(const std::vector<std::size_t>& key, const LinComb& value) {
    if (value.is_zero()) return;
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        set_entry(key, value);
        return;
    }
    LinComb sum = it->second + value;
    if (sum.is_zero())
        entries_.erase(it);
    else
        it->second = std::move(sum);
}

const LinComb& MultiMap::entry(const std::vector<std::size_t>& key) const {
    static const LinComb zero;
    auto it = entries_.find(key);
    return it == entries_.end() ? zero : it->second;
}

LinComb MultiMap::evaluate(std::span<const LinComb> args) const {
    if (static_cast<int>(args.size()) != arity_) throw validation_error("evaluate arity mismatch");
    LinComb out;
    for (const auto& [key, val] : entries_) {
        Scalar c = Scalar::one(source_->field());
        bool hit = true;
        for (int l = 0; l < arity_ && hit; ++l) {
            hit = false;
            for (const auto& [i, s] : args[static_cast<std::size_t>(l)].terms())
                if (i == key[static_cast<std::size_t>(l)]) {
                    c *= s;
                    hit = true;
                    break;
                }
        }
        if (hit) out = out + val * c;
    }
    return out;
}

MultiMap MultiMap::operator*(const Scalar& c) const {
    MultiMap out(source_, target_, arity_, bidegree_);
    if (c.is_zero()) return out;
    for (const auto& [k, v] : entries_) out.entries_[k] = v * c;
    return out;
}

void MultiMap::add_in_place(const MultiMap& o) {
    if (arity_ != o.arity_ || bidegree_ != o.bidegree_)
        throw internal_error("multimap sum shape mismatch");
    for (const auto& [k, v] : o.entries_) accumulate(k, v);
}

bool MultiMap::operator==(const MultiMap& o) const {
    return arity_ == o.arity_ && bidegree_ == o.bidegree_ && entries_ == o.entries_;
}

std::string MultiMap::to_string() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) {
        os << "(";
        for (std::size_t l = 0; l < k.size(); ++l) os << (l ? "," : "") << source_->element(k[l]).name;
        os << ") -> " << v.to_string(*target_) << "\n";
    }
    return os.str();
}

BigradedMap as_linear(const MultiMap& m) {
    if (m.arity() != 1) throw internal_error("as_linear requires arity 1");
    BigradedMap out(m.source(), m.target(), m.bidegree());
    for (const auto& [key, val] : m.entries()) out.set_image(key[0], val);
    return out;
}

namespace {

struct FactorInfo {
    const MultiMap* map;  // null = identity
    int arity;
    int degree;
    Bidegree bidegree;
};

}  // namespace

MultiMap tensor_then(const MultiMap& outer, const std::vector<const MultiMap*>& factors) {
    if (static_cast<int>(factors.size()) != outer.arity())
        throw internal_error("tensor_then: factor count must equal outer arity");

    SpacePtr src;
    for (const auto* f : factors)
        if (f) {
            if (src && src.get() != f->source().get() && !(*src == *f->source()))
                throw internal_error("tensor_then: factors with mixed sources");
            if (!src) src = f->source();
            if (f->target().get() != outer.source().get() && !(*f->target() == *outer.source()))
                throw internal_error("tensor_then: factor target != outer source");
        }
    if (!src) src = outer.source();

    std::vector<FactorInfo> info;
    int total_arity = 0;
    Bidegree total_bideg = outer.bidegree();
    for (const auto* f : factors) {
        FactorInfo fi{f, f ? f->arity() : 1, f ? f->degree() : 0, f ? f->bidegree() : Bidegree{0, 0}};
        total_arity += fi.arity;
        total_bideg = total_bideg + fi.bidegree;
        info.push_back(fi);
    }

    // index non-identity factor entries by produced symbol
    const std::size_t q = factors.size();
    std::vector<std::map<std::size_t, std::vector<std::pair<const std::vector<std::size_t>*, Scalar>>>> by_symbol(q);
    for (std::size_t l = 0; l < q; ++l) {
        if (!info[l].map) continue;
        for (const auto& [key, val] : info[l].map->entries())
            for (const auto& [sym, c] : val.terms()) by_symbol[l][sym].emplace_back(&key, c);
    }

    const Field& field = src->field();
    MultiMap result(src, outer.target(), total_arity, total_bideg);

    std::vector<std::size_t> key;
    key.reserve(static_cast<std::size_t>(total_arity));

    for (const auto& [w, lout] : outer.entries()) {
        // depth-first over per-position choices producing w[l]
        std::function<void(std::size_t, Scalar, int)> walk = [&](std::size_t l, Scalar coeff, int sign_exp) {
            if (l == q) {
                Scalar signed_coeff = (sign_exp % 2) ? -coeff : coeff;
                result.accumulate(key, lout * signed_coeff);
                return;
            }
            // Koszul: factors to the right of position l act across this block
            auto block_sign = [&](int block_deg) {
                int e = 0;
                for (std::size_t j = l + 1; j < q; ++j) e += info[j].degree * block_deg;
                return e;
            };
            if (!info[l].map) {
                key.push_back(w[l]);
                walk(l + 1, coeff, sign_exp + block_sign(src->element(w[l]).deg.total()));
                key.pop_back();
                return;
            }
            auto it = by_symbol[l].find(w[l]);
            if (it == by_symbol[l].end()) return;
            for (const auto& [inkey, c] : it->second) {
                int block_deg = 0;
                for (auto i : *inkey) block_deg += src->element(i).deg.total();
                key.insert(key.end(), inkey->begin(), inkey->end());
                walk(l + 1, coeff * c, sign_exp + block_sign(block_deg));
                key.erase(key.end() - static_cast<std::ptrdiff_t>(inkey->size()), key.end());
            }
        };
        walk(0, Scalar::one(field), 0);
    }
    return result;
}

MultiMap compose_at(const MultiMap& outer, const MultiMap& inner, int r, int t) {
    std::vector<const MultiMap*> factors(static_cast<std::size_t>(r), nullptr);
    factors.push_back(&inner);
    factors.insert(factors.end(), static_cast<std::size_t>(t), nullptr);
    return tensor_then(outer, factors);
}

MultiMap conjugate(const MultiMap& m, const SpacePtr& new_source, const std::vector<LinComb>& in,
                   const SpacePtr& new_target, const std::function<LinComb(const LinComb&)>& out,
                   Bidegree new_bidegree) {
    if (in.size() != new_source->dim()) throw internal_error("conjugate: one image per new generator");
    std::map<std::size_t, std::vector<std::pair<std::size_t, Scalar>>> rev;  // old symbol -> (new gen, coeff)
    for (std::size_t g = 0; g < in.size(); ++g)
        for (const auto& [sym, c] : in[g].terms()) rev[sym].emplace_back(g, c);

    MultiMap result(new_source, new_target, m.arity(), new_bidegree);
    std::vector<std::size_t> key;
    for (const auto& [oldkey, val] : m.entries()) {
        LinComb pushed = out(val);
        if (pushed.is_zero()) continue;
        std::function<void(std::size_t, Scalar)> walk = [&](std::size_t l, Scalar coeff) {
            if (l == oldkey.size()) {
                result.accumulate(key, pushed * coeff);
                return;
            }
            auto it = rev.find(oldkey[l]);
            if (it == rev.end()) return;
            for (const auto& [g, c] : it->second) {
                key.push_back(g);
                walk(l + 1, coeff * c);
                key.pop_back();
            }
        };
        walk(0, Scalar::one(new_source->field()));
    }
    return result;
}

SpacePtr suspended_space(const SpacePtr& sp) {
    std::vector<BasisElement> basis;
    for (std::size_t i = 0; i < sp->dim(); ++i) {
        const auto& e = sp->element(i);
        basis.push_back({"s" + std::to_string(i), {e.deg.p, e.deg.q - 1}});
    }
    return make_space(sp->field(), std::move(basis));
}

MultiMap suspension(const SpacePtr& sp, const SpacePtr& shifted) {
    MultiMap s(sp, shifted, 1, {0, -1});
    for (std::size_t i = 0; i < sp->dim(); ++i) s.set_entry({i}, LinComb::basis(sp->field(), i));
    return s;
}

MultiMap desuspension(const SpacePtr& sp, const SpacePtr& shifted) {
    MultiMap s(shifted, sp, 1, {0, 1});
    for (std::size_t i = 0; i < sp->dim(); ++i) s.set_entry({i}, LinComb::basis(sp->field(), i));
    return s;
}

MultiMap bar_component(const MultiMap& m_i, const MultiMap& s, const MultiMap& s_inv) {
    const int i = m_i.arity();
    std::vector<const MultiMap*> desusp(static_cast<std::size_t>(i), &s_inv);
    MultiMap core = tensor_then(m_i, desusp);  // m_i ∘ (s^{-1})^⊗i
    MultiMap lifted = tensor_then(s, {&core});
    int exp = (i * (i - 1)) / 2 + 1;  // (s^⊗i)^{-1} sign and the global minus
    return (exp % 2) ? -lifted : lifted;
}

}  // namespace ainfss
