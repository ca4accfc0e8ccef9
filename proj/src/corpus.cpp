#include "ainfss/corpus.hpp"

#include <functional>

namespace ainfss {

namespace {

/* A block is a small verified structure; sums of blocks are valid because
 * their maps never mix summands. */
struct Block {
    std::vector<BasisElement> basis;
    // entries as (arity, order, input positions, output terms in positions)
    struct Entry {
        int arity;
        int order;
        std::vector<std::size_t> in;
        std::vector<std::pair<std::size_t, int>> out;  // (position, integer coefficient)
    };
    std::vector<Entry> entries;
    std::optional<std::size_t> unit;
};

Block abelian_block(Rng& rng, int width, int n) {
    Block b;
    for (int i = 0; i < n; ++i)
        b.basis.push_back({"", {rng.range(0, width), rng.range(0, width)}});
    return b;
}

/* x -> y with a differential of ħ-order j (j = 0 gives a plain two-term
 * complex); valid because y is sent to zero. */
Block pair_block(Rng& rng, int width, int order) {
    Block b;
    int p = rng.range(0, std::max(0, width - order));
    int q = rng.range(0, width);
    b.basis.push_back({"", {p, q}});
    b.basis.push_back({"", {p + order, q + 1 - order}});
    b.entries.push_back({1, order, {0}, {{1, 1}}});
    return b;
}

/* m̃_1(x) = ħ y + ħ^2 z; squares to zero since y and z die. */
Block two_order_block(Rng& rng, int width) {
    Block b;
    (void)width;
    int q = rng.range(0, 1);
    b.basis.push_back({"", {0, q}});
    b.basis.push_back({"", {1, q}});
    b.basis.push_back({"", {2, q - 1}});
    b.entries.push_back({1, 1, {0}, {{1, 1}}});
    b.entries.push_back({1, 2, {0}, {{2, 1}}});
    return b;
}

/* k[x]/(x^power) with x in bidegree (0,1); associative, no differential. */
Block poly_block(int power) {
    Block b;
    for (int i = 1; i < power; ++i) b.basis.push_back({"", {0, i}});
    for (int i = 1; i < power; ++i)
        for (int j = 1; i + j < power; ++j)
            b.entries.push_back({2, 0, {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)},
                                 {{static_cast<std::size_t>(i + j - 1), 1}}});
    return b;
}

/* Minimal structure with interacting product and triple product:
 * m_2(a,b) = m_2(b,a) = c and m_3(a,a,a) = b. */
Block minimal_m3_block() {
    Block b;
    b.basis = {{"", {0, 1}}, {"", {0, 2}}, {"", {0, 3}}};
    b.entries.push_back({2, 0, {0, 1}, {{2, 1}}});
    b.entries.push_back({2, 0, {1, 0}, {{2, 1}}});
    b.entries.push_back({3, 0, {0, 0, 0}, {{1, 1}}});
    return b;
}

/* Massey triple product block: d(u) = ab, d(v) = bc, products a·b, b·c,
 * a·v, u·c. */
Block massey_block() {
    Block b;
    b.basis = {{"", {0, 1}}, {"", {0, 1}}, {"", {0, 1}}, {"", {0, 1}}, {"", {0, 1}},
               {"", {0, 2}}, {"", {0, 2}}, {"", {0, 2}}, {"", {0, 2}}};
    // a b c u v ab bc P Q
    b.entries.push_back({1, 0, {3}, {{5, 1}}});
    b.entries.push_back({1, 0, {4}, {{6, 1}}});
    b.entries.push_back({2, 0, {0, 1}, {{5, 1}}});
    b.entries.push_back({2, 0, {1, 2}, {{6, 1}}});
    b.entries.push_back({2, 0, {0, 4}, {{7, 1}}});
    b.entries.push_back({2, 0, {3, 2}, {{8, 1}}});
    return b;
}

/* m_2^1(x,y) = w: the product raises the filtration by one. */
Block shifted_product_block(Rng& rng) {
    Block b;
    int q = rng.range(0, 1);
    b.basis = {{"", {0, q}}, {"", {0, 1}}, {"", {1, q}}};
    b.entries.push_back({2, 1, {0, 1}, {{2, 1}}});
    return b;
}

/* Direct sum of blocks, optionally with a strict unit adjoined that acts as
 * the identity on every summand. */
FormalBigradedDeformation assemble(const Field& f, const std::vector<Block>& blocks, bool unitary) {
    std::vector<BasisElement> basis;
    std::vector<std::size_t> offset;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        offset.push_back(basis.size());
        for (std::size_t i = 0; i < blocks[bi].basis.size(); ++i)
            basis.push_back({"e" + std::to_string(bi) + "_" + std::to_string(i), blocks[bi].basis[i].deg});
    }
    std::optional<std::string> unit;
    std::size_t unit_index = basis.size();
    if (unitary) {
        unit = "one";
        basis.push_back({*unit, {0, 0}});
    }
    SpacePtr sp = make_space(f, basis);
    FormalBigradedDeformation d{AInfinityAlgebra(sp, 0, unit)};
    std::map<std::pair<int, int>, MultiMap> comps;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (const auto& e : blocks[bi].entries) {
            auto [it, fresh] = comps.try_emplace(std::make_pair(e.arity, e.order),
                                                 MultiMap(sp, sp, e.arity,
                                                          deformation_bidegree(0, e.arity, e.order)));
            std::vector<std::size_t> key;
            for (auto i : e.in) key.push_back(offset[bi] + i);
            LinComb val;
            for (const auto& [pos, c] : e.out) val.add(offset[bi] + pos, Scalar::of_int(f, c));
            it->second.accumulate(key, val);
        }
    if (unitary) {
        auto [it, fresh] = comps.try_emplace(std::make_pair(2, 0),
                                             MultiMap(sp, sp, 2, deformation_bidegree(0, 2, 0)));
        for (std::size_t i = 0; i < sp->dim(); ++i) {
            it->second.accumulate({unit_index, i}, LinComb::basis(f, i));
            if (i != unit_index) it->second.accumulate({i, unit_index}, LinComb::basis(f, i));
        }
    }
    for (auto& [k, comp] : comps)
        if (!comp.is_zero()) d.set_component(k.second, std::move(comp));
    return d;
}

/* Random k[ħ]-linear bigraded automorphism: bidegree-(0,0) invertible order-0
 * part plus random (j,-j) tails; fixes the unit when present. */
struct Automorphism {
    std::map<int, MultiMap> comps;  // order -> arity-1 map of bidegree (j,-j)
};

Automorphism random_automorphism(Rng& rng, const FormalBigradedDeformation& d, int max_order) {
    const SpacePtr& sp = d.space();
    const Field& f = sp->field();
    Automorphism g;
    // order-0: block diagonal invertible
    MultiMap g0(sp, sp, 1, {0, 0});
    for (const Bidegree& deg : sp->support()) {
        const auto& idx = sp->at(deg);
        std::size_t n = idx.size();
        Matrix m(f, n, n);
        for (int attempt = 0; attempt < 64; ++attempt) {
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) m.at(r, c) = Scalar::of_int(f, rng.range(-2, 2));
            for (std::size_t r = 0; r < n; ++r)
                if (d.base().unit() && idx[r] == *d.base().unit()) {
                    for (std::size_t c = 0; c < n; ++c) {
                        m.at(r, c) = Scalar::of_int(f, c == r ? 1 : 0);
                        m.at(c, r) = Scalar::of_int(f, c == r ? 1 : 0);
                    }
                }
            if (rank(m) == n) break;
            if (attempt == 63) m = Matrix::identity(f, n);
        }
        for (std::size_t c = 0; c < n; ++c) {
            LinComb img;
            for (std::size_t r = 0; r < n; ++r) img.add(idx[r], m.at(r, c));
            g0.set_entry({idx[c]}, img);
        }
    }
    g.comps.emplace(0, std::move(g0));
    // sparse higher tails
    for (int j = 1; j <= max_order; ++j) {
        MultiMap gj(sp, sp, 1, {j, -j});
        bool any = false;
        for (std::size_t i = 0; i < sp->dim(); ++i) {
            if (d.base().unit() && i == *d.base().unit()) continue;
            if (!rng.chance(1, 3)) continue;
            Bidegree tdeg = sp->element(i).deg + Bidegree{j, -j};
            const auto& tgt = sp->at(tdeg);
            if (tgt.empty()) continue;
            LinComb img;
            img.add(tgt[rng.range(0, static_cast<int>(tgt.size()) - 1)],
                    Scalar::of_int(f, rng.chance(1, 2) ? 1 : -1));
            gj.set_entry({i}, img);
            any = true;
        }
        if (any) g.comps.emplace(j, std::move(gj));
    }
    return g;
}

/* Order-by-order inverse: h_0 = g_0^{-1}, h_j = -g_0^{-1} Σ_{i>=1} g_i h_{j-i}. */
std::map<int, MultiMap> invert(const Automorphism& g, const SpacePtr& sp, int max_order) {
    const Field& f = sp->field();
    std::map<int, MultiMap> h;
    // invert the order-0 part blockwise
    MultiMap h0(sp, sp, 1, {0, 0});
    BigradedMap g0 = as_linear(g.comps.at(0));
    for (const Bidegree& deg : sp->support()) {
        const auto& idx = sp->at(deg);
        Solver solver(g0.block(deg));
        for (std::size_t c = 0; c < idx.size(); ++c) {
            Vec e(idx.size(), Scalar::zero(f));
            e[c] = Scalar::one(f);
            auto x = solver.solve(e);
            if (!x) throw internal_error("corpus automorphism is singular");
            LinComb img;
            for (std::size_t r = 0; r < idx.size(); ++r) img.add(idx[r], (*x)[r]);
            h0.set_entry({idx[c]}, img);
        }
    }
    h.emplace(0, std::move(h0));
    for (int j = 1; j <= max_order; ++j) {
        MultiMap acc(sp, sp, 1, {j, -j});
        for (int i = 1; i <= j; ++i) {
            auto gi = g.comps.find(i);
            auto hj = h.find(j - i);
            if (gi == g.comps.end() || hj == h.end()) continue;
            acc.add_in_place(tensor_then(gi->second, {&hj->second}));
        }
        if (acc.is_zero()) continue;
        MultiMap hj = -tensor_then(h.at(0), {&acc});
        h.emplace(j, std::move(hj));
    }
    return h;
}

FormalBigradedDeformation conjugate_deformation(Rng& rng, const FormalBigradedDeformation& d) {
    const SpacePtr& sp = d.space();
    int max_order = sp->p_width() + 1;
    Automorphism g = random_automorphism(rng, d, max_order);
    std::map<int, MultiMap> h = invert(g, sp, max_order);

    // conjugated base first
    auto component_of = [&](int arity, int order) { return d.component(arity, order); };
    std::map<std::pair<int, int>, MultiMap> result;
    int arities = d.max_arity();
    for (int n = 1; n <= arities; ++n) {
        bool present = false;
        for (int j = 0; j <= d.max_order() && !present; ++j) present = d.has_component(n, j);
        if (!present) continue;
        for (int a = 0; a <= max_order; ++a) {
            auto ga = g.comps.find(a);
            if (ga == g.comps.end()) continue;
            for (int c = 0; c <= d.max_order(); ++c) {
                const MultiMap& mc = component_of(n, c);
                if (mc.is_zero()) continue;
                // enumerate factor-order tuples summing to anything <= cap
                std::vector<int> orders(static_cast<std::size_t>(n), 0);
                std::function<void(std::size_t, int)> walk = [&](std::size_t pos, int used) {
                    if (pos == orders.size()) {
                        std::vector<const MultiMap*> factors;
                        for (int b : orders) {
                            auto hit = h.find(b);
                            if (hit == h.end()) return;
                            factors.push_back(&hit->second);
                        }
                        MultiMap inner = tensor_then(mc, factors);
                        if (inner.is_zero()) return;
                        MultiMap term = tensor_then(ga->second, {&inner});
                        if (term.is_zero()) return;
                        int total = a + c + used;
                        auto [it, fresh] = result.try_emplace(
                            std::make_pair(n, total),
                            MultiMap(sp, sp, n, deformation_bidegree(0, n, total)));
                        it->second.add_in_place(term);
                        return;
                    }
                    for (int b = 0; used + b <= max_order; ++b) {
                        if (!h.count(b)) {
                            if (b == 0) return;
                            continue;
                        }
                        orders[pos] = b;
                        walk(pos + 1, used + b);
                    }
                };
                walk(0, 0);
            }
        }
    }
    AInfinityAlgebra base(sp, 0, d.base().unit_name());
    for (auto& [key, comp] : result)
        if (key.second == 0 && !comp.is_zero()) base.set_map(comp);
    FormalBigradedDeformation out(std::move(base));
    for (auto& [key, comp] : result)
        if (key.second > 0 && !comp.is_zero()) out.set_component(key.second, std::move(comp));
    return out;
}

std::vector<Block> draw_blocks(Rng& rng, const CorpusOptions& opt, bool with_orders) {
    std::vector<Block> blocks;
    int budget = rng.range(2, opt.max_dim);
    bool used_massey = false;
    while (budget > 0) {
        int kind = rng.range(0, with_orders ? 6 : 4);
        Block b;
        switch (kind) {
            case 0: b = abelian_block(rng, opt.max_width, rng.range(1, 2)); break;
            case 1: b = pair_block(rng, opt.max_width, with_orders ? rng.range(0, 2) : 0); break;
            case 2: b = poly_block(rng.range(3, 4)); break;
            case 3: b = minimal_m3_block(); break;
            case 4:
                if (!used_massey && budget >= 9) {
                    b = massey_block();
                    used_massey = true;
                } else {
                    b = abelian_block(rng, opt.max_width, 1);
                }
                break;
            case 5: b = two_order_block(rng, opt.max_width); break;
            default: b = shifted_product_block(rng); break;
        }
        if (static_cast<int>(b.basis.size()) > budget) {
            b = abelian_block(rng, opt.max_width, 1);
        }
        budget -= static_cast<int>(b.basis.size());
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace

AInfinityAlgebra random_algebra(Rng& rng, const CorpusOptions& opt) {
    FormalBigradedDeformation d = assemble(opt.field, draw_blocks(rng, opt, false), opt.unitary);
    return conjugate_deformation(rng, d).base();
}

FormalBigradedDeformation random_deformation(Rng& rng, const CorpusOptions& opt) {
    FormalBigradedDeformation d = assemble(opt.field, draw_blocks(rng, opt, true), opt.unitary);
    return conjugate_deformation(rng, d);
}

FilteredAInfinity random_filtered(Rng& rng, const CorpusOptions& opt) {
    return FilteredAInfinity(random_deformation(rng, opt));
}

AInfinityAlgebra massey_fixture(const Field& f) {
    SpacePtr sp = make_space(f, {{"a", {0, 1}},
                                 {"b", {0, 1}},
                                 {"c", {0, 1}},
                                 {"u", {0, 1}},
                                 {"v", {0, 1}},
                                 {"ab", {0, 2}},
                                 {"bc", {0, 2}},
                                 {"P", {0, 2}},
                                 {"Q", {0, 2}}});
    auto ix = [&](const char* n) { return *sp->index_of(n); };
    BigradedMap d(sp, sp, {0, 1});
    d.set_image(ix("u"), LinComb::basis(f, ix("ab")));
    d.set_image(ix("v"), LinComb::basis(f, ix("bc")));
    MultiMap mu(sp, sp, 2, {0, 0});
    mu.set_entry({ix("a"), ix("b")}, LinComb::basis(f, ix("ab")));
    mu.set_entry({ix("b"), ix("c")}, LinComb::basis(f, ix("bc")));
    mu.set_entry({ix("a"), ix("v")}, LinComb::basis(f, ix("P")));
    mu.set_entry({ix("u"), ix("c")}, LinComb::basis(f, ix("Q")));
    return from_dg(d, mu);
}

FormalBigradedDeformation fixture_f1(const Field& f) {
    SpacePtr sp = make_space(f, {{"x", {0, 0}}, {"y", {1, 0}}});
    FormalBigradedDeformation d{AInfinityAlgebra(sp, 0)};
    MultiMap m11(sp, sp, 1, deformation_bidegree(0, 1, 1));
    m11.set_entry({*sp->index_of("x")}, LinComb::basis(f, *sp->index_of("y")));
    d.set_component(1, m11);
    return d;
}

FormalBigradedDeformation fixture_f2(const Field& f) {
    SpacePtr sp = make_space(f, {{"x", {0, 0}}, {"y", {2, -1}}});
    FormalBigradedDeformation d{AInfinityAlgebra(sp, 0)};
    MultiMap m12(sp, sp, 1, deformation_bidegree(0, 1, 2));
    m12.set_entry({*sp->index_of("x")}, LinComb::basis(f, *sp->index_of("y")));
    d.set_component(2, m12);
    return d;
}

AInfinityAlgebra truncated_polynomial(const Field& f, int power) {
    std::vector<BasisElement> basis;
    for (int i = 1; i < power; ++i) basis.push_back({"x" + std::to_string(i), {0, i}});
    SpacePtr sp = make_space(f, basis);
    MultiMap mu(sp, sp, 2, {0, 0});
    for (int i = 1; i < power; ++i)
        for (int j = 1; i + j < power; ++j)
            mu.set_entry({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)},
                         LinComb::basis(f, static_cast<std::size_t>(i + j - 1)));
    AInfinityAlgebra a(sp, 0);
    a.set_map(mu);
    return a;
}

}  // namespace ainfss
