#include "ainfss/pages.hpp"

#include <algorithm>
#include <functional>

namespace ainfss {

namespace {

/* ---- column-space helpers -------------------------------------------- */

Matrix columns_matrix(const Field& f, std::size_t n, const std::vector<Vec>& cols) {
    return Matrix::from_columns(f, n, cols);
}

std::vector<Vec> image_columns(const Matrix& m) {
    std::vector<Vec> out;
    auto rr = rref(m);
    for (auto c : rr.pivots) out.push_back(m.column(c));
    return out;
}

std::vector<Vec> prune_columns(const Field& f, std::size_t n, const std::vector<Vec>& cols) {
    return image_columns(columns_matrix(f, n, cols));
}

std::vector<Vec> span_sum(const Field& f, std::size_t n, const std::vector<Vec>& a,
                          const std::vector<Vec>& b) {
    std::vector<Vec> all = a;
    all.insert(all.end(), b.begin(), b.end());
    return prune_columns(f, n, all);
}

std::size_t span_dim(const Field& f, std::size_t n, const std::vector<Vec>& cols) {
    return rank(columns_matrix(f, n, cols));
}

MultiMap with_bidegree(const MultiMap& m, const SpacePtr& src, const SpacePtr& tgt, Bidegree b) {
    MultiMap out(src, tgt, m.arity(), b);
    for (const auto& [key, val] : m.entries()) out.set_entry(key, val);
    return out;
}

}  // namespace

const PageData& PageSet::page(int r) const {
    int idx = r - start;
    if (idx < 0 || idx >= static_cast<int>(pages.size()))
        throw validation_error("page " + std::to_string(r) + " not computed");
    return pages[static_cast<std::size_t>(idx)];
}

/* ---- functors P and T ------------------------------------------------- */

AInfinityAlgebra project_P(const FormalBigradedDeformation& d) {
    if (!d.base().is_minimal())
        throw validation_error("project_P requires a minimal base (m_1^0 = 0)");
    int st = d.s_type();
    AInfinityAlgebra out(d.space(), st + 1, d.base().unit_name());
    const MultiMap& m11 = d.component(1, 1);
    if (!m11.is_zero())
        out.set_map(with_bidegree(m11, d.space(), d.space(), structure_bidegree(st + 1, 1)));
    const MultiMap& m20 = d.component(2, 0);
    if (!m20.is_zero())
        out.set_map(with_bidegree(m20, d.space(), d.space(), structure_bidegree(st + 1, 2)));
    return out;
}

FormalBigradedDeformation translate_T(const FormalBigradedDeformation& d) {
    if (!d.base().is_minimal())
        throw validation_error("translate_T requires a minimal base (m_1^0 = 0)");
    int st = d.s_type();
    FormalBigradedDeformation out(project_P(d));
    auto move_component = [&](int arity, int order, const MultiMap& m) {
        int new_order = order + arity - 2;
        if (new_order < 0) throw internal_error("translate_T: negative target order");
        if (new_order == 0) return;  // the base of the output, set by project_P
        out.set_component(new_order, with_bidegree(m, d.space(), d.space(),
                                                   deformation_bidegree(st + 1, arity, new_order)));
    };
    for (const auto& [arity, m] : d.base().maps()) move_component(arity, 0, m);
    for (const auto& [key, m] : d.higher()) move_component(key.first, key.second, m);
    return out;
}

/* ---- functor D --------------------------------------------------------
 * D(A_ħ) = Ker(m_1^0)·ħ^0 ⊕ ħ·A_ħ.  A free basis is given by kernel
 * generators (kept at their bidegree) and ħ·(complement generators)
 * (bidegree shifted by (-1,1)); the rescaled maps ħ^{n-2} m̃_n are expressed
 * in that basis by peeling ħ-orders. */

FormalBigradedDeformation functor_D(const FormalBigradedDeformation& d) {
    const SpacePtr& V = d.space();
    const Field& f = V->field();
    int st = d.s_type();
    BigradedMap m10 = as_linear(d.base().map(1));

    struct KernelSplit {
        std::vector<Vec> kernel;
        std::vector<Vec> complement;
        std::optional<Solver> full;  // coordinates against [kernel | complement]
    };
    std::map<Bidegree, KernelSplit> split;
    for (const Bidegree& deg : V->support()) {
        KernelSplit ks;
        std::size_t n = V->at(deg).size();
        ks.kernel = kernel_basis(m10.block(deg));
        if (d.base().unit() && V->element(*d.base().unit()).deg == deg) {
            // prefer the unit itself as the leading kernel generator
            const auto& idx = V->at(deg);
            Vec uv(n, Scalar::zero(f));
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (idx[i] == *d.base().unit()) uv[i] = Scalar::one(f);
            std::vector<Vec> candidates{uv};
            candidates.insert(candidates.end(), ks.kernel.begin(), ks.kernel.end());
            auto chosen = greedy_complement(f, n, {}, candidates);
            ks.kernel.clear();
            for (auto c : chosen) ks.kernel.push_back(candidates[c]);
        }
        ks.complement = split_subspace(f, n, ks.kernel);
        std::vector<Vec> cols = ks.kernel;
        cols.insert(cols.end(), ks.complement.begin(), ks.complement.end());
        ks.full.emplace(columns_matrix(f, n, cols));
        split.emplace(deg, std::move(ks));
    }

    struct Gen {
        LinComb image;  // underlying element of V
        bool hbar;      // carries one power of ħ
    };
    std::vector<Gen> gens;
    std::vector<BasisElement> basis;
    // per new bidegree: generator indices of kernel and ħ-complement slots
    std::map<Bidegree, std::vector<std::size_t>> kernel_slots, hbar_slots;
    std::optional<std::string> new_unit;

    std::set<Bidegree> new_degs;
    for (const auto& [deg, ks] : split) {
        if (!ks.kernel.empty()) new_degs.insert(deg);
        if (!ks.complement.empty()) new_degs.insert({deg.p - 1, deg.q + 1});
    }
    for (const Bidegree& nd : new_degs) {
        int count = 0;
        auto add = [&](const Bidegree& vdeg, bool hbar, const Vec& vec) {
            const auto& idx = V->at(vdeg);
            LinComb img;
            for (std::size_t i = 0; i < idx.size(); ++i) img.add(idx[i], vec[i]);
            std::string name = "g" + std::to_string(nd.p) + "_" + std::to_string(nd.q) + "_" +
                               std::to_string(count++);
            basis.push_back({name, nd});
            if (!hbar && d.base().unit() && img == LinComb::basis(f, *d.base().unit())) new_unit = name;
            gens.push_back({std::move(img), hbar});
            return gens.size() - 1;
        };
        if (auto it = split.find(nd); it != split.end())
            for (const auto& v : it->second.kernel) kernel_slots[nd].push_back(add(nd, false, v));
        Bidegree up{nd.p + 1, nd.q - 1};
        if (auto it = split.find(up); it != split.end())
            for (const auto& v : it->second.complement) hbar_slots[nd].push_back(add(up, true, v));
    }

    SpacePtr W = make_space(f, basis);
    FormalBigradedDeformation out(AInfinityAlgebra(W, st + 1, new_unit));

    // Σ_r w_r ħ^r in V-coordinates -> combination of new generators per order
    auto convert = [&](const std::map<int, LinComb>& powers) {
        std::map<int, LinComb> by_order;
        for (const auto& [r, w] : powers) {
            if (w.is_zero()) continue;
            if (r < 0) throw internal_error("functor_D: negative ħ-power survived");
            auto degw = w.homogeneous_bidegree(*V);
            if (!degw) throw internal_error("functor_D: non-homogeneous value");
            auto ksit = split.find(*degw);
            if (ksit == split.end()) throw internal_error("functor_D: value outside the support");
            const KernelSplit& ks = ksit->second;
            const auto& idx = V->at(*degw);
            Vec dense(idx.size(), Scalar::zero(f));
            std::map<std::size_t, std::size_t> pos;
            for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
            for (const auto& [i, c] : w.terms()) dense[pos.at(i)] = c;
            auto coords = ks.full->solve(dense);
            if (!coords) throw internal_error("functor_D: coordinate solve failed");
            std::size_t nk = ks.kernel.size();
            const auto& kslots = kernel_slots[*degw];
            const auto& hslots = hbar_slots[Bidegree{degw->p - 1, degw->q + 1}];
            for (std::size_t i = 0; i < coords->size(); ++i) {
                const Scalar& c = (*coords)[i];
                if (c.is_zero()) continue;
                if (i < nk) {
                    by_order[r].add(kslots[i], c);
                } else if (r == 0) {
                    throw internal_error("functor_D: order-0 value outside Ker(m_1^0)");
                } else {
                    by_order[r - 1].add(hslots[i - nk], c);
                }
            }
        }
        return by_order;
    };

    // reverse index: V-symbol -> generators whose image contains it
    std::map<std::size_t, std::vector<std::pair<std::size_t, Scalar>>> rev;
    for (std::size_t g = 0; g < gens.size(); ++g)
        for (const auto& [sym, c] : gens[g].image.terms()) rev[sym].emplace_back(g, c);

    int max_arity = d.max_arity();
    for (int arity = 1; arity <= max_arity; ++arity) {
        bool present = false;
        for (int j = 0; j <= d.max_order() && !present; ++j) present = d.has_component(arity, j);
        if (!present) continue;
        // accumulate ħ^{arity-2} m̃_arity over tuples of generators
        std::map<std::vector<std::size_t>, std::map<int, LinComb>> raw;
        for (int j = 0; j <= d.max_order(); ++j) {
            const MultiMap& comp = d.component(arity, j);
            for (const auto& [key, val] : comp.entries()) {
                std::vector<std::size_t> tuple;
                std::function<void(std::size_t, Scalar, int)> walk = [&](std::size_t l, Scalar coeff,
                                                                         int flags) {
                    if (l == key.size()) {
                        int power = arity - 2 + j + flags;
                        auto& bucket = raw[tuple][power];
                        bucket = bucket + val * coeff;
                        return;
                    }
                    auto it = rev.find(key[l]);
                    if (it == rev.end()) return;
                    for (const auto& [g, c] : it->second) {
                        tuple.push_back(g);
                        walk(l + 1, coeff * c, flags + (gens[g].hbar ? 1 : 0));
                        tuple.pop_back();
                    }
                };
                walk(0, Scalar::one(f), 0);
            }
        }
        std::map<int, MultiMap> new_comps;
        for (const auto& [tuple, powers] : raw) {
            for (const auto& [order, combo] : convert(powers)) {
                if (combo.is_zero()) continue;
                auto [it, fresh] = new_comps.try_emplace(
                    order, MultiMap(W, W, arity, deformation_bidegree(st + 1, arity, order)));
                it->second.accumulate(tuple, combo);
            }
        }
        for (auto& [order, comp] : new_comps)
            if (!comp.is_zero()) out.set_component(order, std::move(comp));
    }
    return out;
}

/* ---- exact couples ----------------------------------------------------- */

std::size_t ExactCouple::d_dim(const Bidegree& d) const {
    auto it = d_dims.find(d);
    return it == d_dims.end() ? 0 : it->second;
}

std::size_t ExactCouple::e_dim(const Bidegree& d) const {
    auto it = e_dims.find(d);
    return it == e_dims.end() ? 0 : it->second;
}

namespace {
const Matrix& block_or_zero(const std::map<Bidegree, Matrix>& blocks, const Bidegree& src,
                            std::size_t rows, std::size_t cols, const Field& f) {
    auto it = blocks.find(src);
    if (it != blocks.end()) return it->second;
    static thread_local std::map<std::tuple<std::size_t, std::size_t, std::string>, Matrix> zeros;
    auto key = std::make_tuple(rows, cols, f.to_string());
    auto z = zeros.find(key);
    if (z == zeros.end()) z = zeros.emplace(key, Matrix(f, rows, cols)).first;
    return z->second;
}
}  // namespace

const Matrix& ExactCouple::i_block(const Bidegree& d) const {
    return block_or_zero(i_blocks, d, d_dim(d + i_bidegree()), d_dim(d), field);
}
const Matrix& ExactCouple::j_block(const Bidegree& d) const {
    return block_or_zero(j_blocks, d, e_dim(d + j_bidegree()), d_dim(d), field);
}
const Matrix& ExactCouple::k_block(const Bidegree& d) const {
    return block_or_zero(k_blocks, d, d_dim(d + k_bidegree()), e_dim(d), field);
}

PageData ExactCouple::page_data() const {
    PageData out;
    for (const auto& [deg, n] : e_dims)
        if (n) out.dims[deg] = n;
    for (const auto& [deg, n] : e_dims) {
        if (!n) continue;
        Matrix d_block = j_block(deg + k_bidegree()) * k_block(deg);
        std::size_t r = rank(d_block);
        if (r) out.d_ranks[deg] = r;
    }
    return out;
}

ExactCouple exact_couple_from_deformation(const FormalBigradedDeformation& d0, int iterations,
                                          int window_margin) {
    if (iterations < 0) throw validation_error("iteration count must be nonnegative");
    FormalBigradedDeformation d = d0;
    for (int it = 0; it < iterations; ++it) d = functor_D(d);

    const SpacePtr& V = d.space();
    const Field& f = V->field();
    int st = d.s_type();

    ExactCouple c;
    c.r_type = 0;
    c.s_type = st;
    c.field = f;

    if (V->dim() == 0) return c;
    int pmin = V->basis()[0].deg.p, pmax = pmin, nmin = V->basis()[0].deg.total(), nmax = nmin;
    for (const auto& e : V->basis()) {
        pmin = std::min(pmin, e.deg.p);
        pmax = std::max(pmax, e.deg.p);
        nmin = std::min(nmin, e.deg.total());
        nmax = std::max(nmax, e.deg.total());
    }
    c.high_p = pmax;
    c.total_lo = nmin;
    c.total_hi = nmax + 1;

    // E-side: cohomology of the base complex, with fixed subquotient data
    BigradedMap m10 = as_linear(d.base().map(1));
    std::map<Bidegree, Subquotient> e_sub;
    for (const Bidegree& deg : V->support()) {
        std::vector<Vec> z = kernel_basis(m10.block(deg));
        std::vector<Vec> b = image_columns(m10.block(deg - m10.bidegree()));
        Subquotient sq(f, V->at(deg).size(), z, b);
        if (sq.dim()) c.e_dims[deg] = sq.dim();
        e_sub.emplace(deg, std::move(sq));
    }

    // D-side slices of H(A_ħ) on the window: basis of A_ħ^{p,q} is (v, r)
    struct Slice {
        std::vector<std::pair<std::size_t, int>> basis;  // (V index, ħ power)
        std::map<std::pair<std::size_t, int>, std::size_t> pos;
        std::optional<Subquotient> h;  // absent on the unbuildable low margin
    };
    std::map<Bidegree, Slice> slices;
    auto build_slice_basis = [&](const Bidegree& deg) {
        Slice s;
        for (int r = 0; r <= pmax - deg.p; ++r) {
            Bidegree vd{deg.p + r, deg.q - r};
            for (auto i : V->at(vd)) {
                s.pos[{i, r}] = s.basis.size();
                s.basis.emplace_back(i, r);
            }
        }
        return s;
    };
    Bidegree dbideg{st, 1 - st};  // bidegree of m̃_1
    // widen the low p edge so boundary-image chains stay inside the window
    int plo = pmin - window_margin - st * (nmax - nmin + 3);
    for (int n = nmin - 1; n <= nmax + 1; ++n)
        for (int p = plo; p <= pmax; ++p) slices.emplace(Bidegree{p, n - p}, build_slice_basis({p, n - p}));

    auto differential_block = [&](const Bidegree& deg) {
        auto src = slices.find(deg);
        auto tgt = slices.find(deg + dbideg);
        std::size_t rows = tgt == slices.end() ? 0 : tgt->second.basis.size();
        std::size_t cols = src == slices.end() ? 0 : src->second.basis.size();
        Matrix m(f, rows, cols);
        if (!rows || !cols) return m;
        for (std::size_t cidx = 0; cidx < cols; ++cidx) {
            auto [v, r] = src->second.basis[cidx];
            for (int j = 0; j <= d.max_order(); ++j) {
                const MultiMap& mj = d.component(1, j);
                if (mj.is_zero()) continue;
                for (const auto& [w, coef] : mj.entry({v}).terms()) {
                    auto it = tgt->second.pos.find({w, r + j});
                    if (it == tgt->second.pos.end()) continue;
                    m.at(it->second, cidx) += coef;
                }
            }
        }
        return m;
    };

    std::map<Bidegree, Matrix> dblocks;
    for (const auto& [deg, s] : slices) dblocks.emplace(deg, differential_block(deg));
    for (auto& [deg, s] : slices) {
        auto z = kernel_basis(dblocks.at(deg));
        auto prev = dblocks.find(deg - dbideg);
        if (prev == dblocks.end()) {
            if (!z.empty()) continue;  // unbuildable low-margin slice, leave unmaterialized
            s.h.emplace(f, s.basis.size(), z, std::vector<Vec>{});
        } else {
            s.h.emplace(f, s.basis.size(), z, image_columns(prev->second));
        }
        c.d_window.insert(deg);
        if (s.h->dim()) c.d_dims[deg] = s.h->dim();
    }

    // i: multiplication by ħ, from (p,q) to (p-1,q+1)
    for (const auto& [deg, s] : slices) {
        Bidegree tdeg = deg + c.i_bidegree();
        auto t = slices.find(tdeg);
        if (t == slices.end() || !s.h || !t->second.h) continue;
        if (!s.h->dim() || !t->second.h->dim()) continue;
        Matrix m(f, t->second.h->dim(), s.h->dim());
        for (std::size_t cidx = 0; cidx < s.h->dim(); ++cidx) {
            const Vec& rep = s.h->reps()[cidx];
            Vec shifted(t->second.basis.size(), Scalar::zero(f));
            for (std::size_t b = 0; b < s.basis.size(); ++b) {
                if (rep[b].is_zero()) continue;
                auto [v, r] = s.basis[b];
                shifted[t->second.pos.at({v, r + 1})] = rep[b];
            }
            Vec coords = t->second.h->coords(shifted);
            for (std::size_t ridx = 0; ridx < coords.size(); ++ridx) m.at(ridx, cidx) = coords[ridx];
        }
        c.i_blocks.emplace(deg, std::move(m));
    }

    // j: reduce mod ħ, bidegree (0,0)
    for (const auto& [deg, s] : slices) {
        auto esq = e_sub.find(deg);
        if (esq == e_sub.end() || !s.h || !s.h->dim() || !esq->second.dim()) continue;
        Matrix m(f, esq->second.dim(), s.h->dim());
        const auto& idx = V->at(deg);
        std::map<std::size_t, std::size_t> vpos;
        for (std::size_t i = 0; i < idx.size(); ++i) vpos[idx[i]] = i;
        for (std::size_t cidx = 0; cidx < s.h->dim(); ++cidx) {
            const Vec& rep = s.h->reps()[cidx];
            Vec order0(idx.size(), Scalar::zero(f));
            for (std::size_t b = 0; b < s.basis.size(); ++b) {
                if (rep[b].is_zero()) continue;
                auto [v, r] = s.basis[b];
                if (r == 0) order0[vpos.at(v)] = rep[b];
            }
            Vec coords = esq->second.coords(order0);
            for (std::size_t ridx = 0; ridx < coords.size(); ++ridx) m.at(ridx, cidx) = coords[ridx];
        }
        c.j_blocks.emplace(deg, std::move(m));
    }

    // k: connecting map, class of Σ_{j>=1} m_1^j(v) ħ^{j-1}
    for (const auto& [deg, sq] : e_sub) {
        if (!sq.dim()) continue;
        Bidegree tdeg = deg + c.k_bidegree();
        auto t = slices.find(tdeg);
        if (t == slices.end()) {
            if (!build_slice_basis(tdeg).basis.empty())
                throw internal_error("exact couple window misses the k target");
            continue;  // slice provably empty beyond the support
        }
        if (!t->second.h) throw internal_error("exact couple window misses the k target");
        if (!t->second.h->dim()) continue;
        Matrix m(f, t->second.h->dim(), sq.dim());
        const auto& idx = V->at(deg);
        for (std::size_t cidx = 0; cidx < sq.dim(); ++cidx) {
            const Vec& rep = sq.reps()[cidx];
            Vec out(t->second.basis.size(), Scalar::zero(f));
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (rep[i].is_zero()) continue;
                for (int j = 1; j <= d.max_order(); ++j) {
                    const MultiMap& mj = d.component(1, j);
                    if (mj.is_zero()) continue;
                    for (const auto& [w, coef] : mj.entry({idx[i]}).terms())
                        out[t->second.pos.at({w, j - 1})] += coef * rep[i];
                }
            }
            Vec coords = t->second.h->coords(out);
            for (std::size_t ridx = 0; ridx < coords.size(); ++ridx) m.at(ridx, cidx) = coords[ridx];
        }
        c.k_blocks.emplace(deg, std::move(m));
    }
    return c;
}

Report check_exact_couple(const ExactCouple& c) {
    Report rep;
    auto contained = [&](const Matrix& sub, const std::vector<Vec>& space_basis, std::size_t n) {
        Solver s(columns_matrix(c.field, n, space_basis));
        for (std::size_t col = 0; col < sub.cols(); ++col)
            if (!s.contains(sub.column(col))) return false;
        return true;
    };
    for (const auto& [deg, dim] : c.d_dims) {
        // Im(k) = Ker(i) at D^{deg}; needs the i target and the k source
        Bidegree ksrc = deg - c.k_bidegree();
        if (c.trusted(deg + c.i_bidegree())) {
            const Matrix& kb = c.k_block(ksrc);
            const Matrix& ib = c.i_block(deg);
            auto ker = kernel_basis(ib);
            if (rank(kb) != ker.size() || !contained(kb, ker, dim))
                rep.add("exactness Im(k)=Ker(i) fails at D " + deg.to_string());
        }
        // Im(i) = Ker(j) at D^{deg}; needs the i source
        Bidegree isrc = deg - c.i_bidegree();
        if (c.trusted(isrc)) {
            const Matrix& ib_in = c.i_block(isrc);
            const Matrix& jb = c.j_block(deg);
            auto ker = kernel_basis(jb);
            if (rank(ib_in) != ker.size() || !contained(ib_in, ker, dim))
                rep.add("exactness Im(i)=Ker(j) fails at D " + deg.to_string());
        }
    }
    for (const auto& [deg, dim] : c.e_dims) {
        // Im(j) = Ker(k) at E^{deg}; needs the j source and the k target
        Bidegree jsrc = deg - c.j_bidegree();
        if (!c.trusted(jsrc) || !c.trusted(deg + c.k_bidegree())) continue;
        const Matrix& jb = c.j_block(jsrc);
        const Matrix& kb = c.k_block(deg);
        auto ker = kernel_basis(kb);
        if (rank(jb) != ker.size() || !contained(jb, ker, dim))
            rep.add("exactness Im(j)=Ker(k) fails at E " + deg.to_string());
    }
    return rep;
}

ExactCouple derive_couple(const ExactCouple& c) {
    ExactCouple out;
    out.r_type = c.r_type + 1;
    out.s_type = c.s_type;
    out.field = c.field;
    out.high_p = c.high_p;
    out.total_lo = c.total_lo;
    out.total_hi = c.total_hi;
    const Field& f = c.field;

    // D' = Im(i); keep explicit bases in the parent coordinates.  A slice is
    // trusted when its i source is, which erodes the low margin by one row.
    std::map<Bidegree, std::vector<Vec>> dbasis;
    std::map<Bidegree, std::optional<Solver>> dsolv;
    for (const Bidegree& deg : c.d_window) {
        if (!c.trusted(deg - c.i_bidegree())) continue;
        out.d_window.insert(deg);
        std::vector<Vec> b = image_columns(c.i_block(deg - c.i_bidegree()));
        if (!b.empty()) {
            out.d_dims[deg] = b.size();
            dsolv[deg].emplace(columns_matrix(f, c.d_dim(deg), b));
        }
        dbasis[deg] = std::move(b);
    }

    // E' = Ker(d)/Im(d) for d = j∘k
    Bidegree d_bideg = c.k_bidegree() + c.j_bidegree();
    std::map<Bidegree, Subquotient> esub;
    for (const auto& [deg, dim] : c.e_dims) {
        Matrix d_here = c.j_block(deg + c.k_bidegree()) * c.k_block(deg);
        Bidegree prev = deg - d_bideg;
        Matrix d_prev = c.j_block(prev + c.k_bidegree()) * c.k_block(prev);
        Subquotient sq(f, dim, kernel_basis(d_here), image_columns(d_prev));
        if (sq.dim()) out.e_dims[deg] = sq.dim();
        esub.emplace(deg, std::move(sq));
    }

    // i' = restriction of i
    for (const auto& [deg, basis] : dbasis) {
        if (basis.empty()) continue;
        Bidegree tdeg = deg + c.i_bidegree();
        auto tgt = dsolv.find(tdeg);
        if (tgt == dsolv.end() || !tgt->second) continue;
        Matrix m(f, dbasis.at(tdeg).size(), basis.size());
        bool full = true;
        for (std::size_t col = 0; col < basis.size(); ++col) {
            Vec img = c.i_block(deg).apply(basis[col]);
            auto coords = tgt->second->solve(img);
            if (!coords) {
                full = false;
                break;
            }
            for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, col) = (*coords)[r];
        }
        if (full) out.i_blocks.emplace(deg, std::move(m));
    }

    // j'(i x) = [j x]: pull back through i, push through j, take the class
    for (const auto& [deg, basis] : dbasis) {
        if (basis.empty()) continue;
        Bidegree pre = deg - c.i_bidegree();
        Bidegree edeg = pre + c.j_bidegree();
        auto sq = esub.find(edeg);
        if (sq == esub.end() || sq->second.dim() == 0) continue;
        Solver isolv(c.i_block(pre));
        Matrix m(f, sq->second.dim(), basis.size());
        for (std::size_t col = 0; col < basis.size(); ++col) {
            auto y = isolv.solve(basis[col]);
            if (!y) throw internal_error("derive_couple: element of Im(i) has no preimage");
            Vec e = c.j_block(pre).apply(*y);
            Vec coords = sq->second.coords(e);
            for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, col) = coords[r];
        }
        out.j_blocks.emplace(deg, std::move(m));
    }

    // k' on classes
    for (const auto& [deg, sq] : esub) {
        if (!sq.dim()) continue;
        Bidegree tdeg = deg + c.k_bidegree();
        auto tgt = dsolv.find(tdeg);
        if (tgt == dsolv.end() || !tgt->second) {
            for (const auto& rep : sq.reps())
                for (const auto& x : c.k_block(deg).apply(rep))
                    if (!x.is_zero()) throw internal_error("derive_couple: k' lands outside Im(i)");
            continue;
        }
        Matrix m(f, dbasis.at(tdeg).size(), sq.dim());
        for (std::size_t col = 0; col < sq.dim(); ++col) {
            Vec img = c.k_block(deg).apply(sq.reps()[col]);
            auto coords = tgt->second->solve(img);
            if (!coords) throw internal_error("derive_couple: k' lands outside Im(i)");
            for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, col) = (*coords)[r];
        }
        out.k_blocks.emplace(deg, std::move(m));
    }
    return out;
}

/* ---- filtration pages --------------------------------------------------
 * Z_r^{p,q} = F^p ∩ d^{-1}(F^{p+r}) in total degree p+q;
 * E_r = Z_r / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}). */

namespace {

struct TotalComplex {
    const FilteredAInfinity& filt;
    const SpacePtr space;
    Field f;
    std::map<int, std::vector<std::size_t>> by_total;          // total degree -> global indices
    std::map<int, std::map<std::size_t, std::size_t>> coord;   // global index -> local position
    std::map<int, Matrix> d;                                   // total differential per degree
    int pmin = 0, pmax = 0;

    explicit TotalComplex(const FilteredAInfinity& ff) : filt(ff), space(ff.space()), f(space->field()) {
        if (space->dim() == 0) return;
        pmin = pmax = space->basis()[0].deg.p;
        for (std::size_t i = 0; i < space->dim(); ++i) {
            int n = space->element(i).deg.total();
            coord[n][i] = by_total[n].size();
            by_total[n].push_back(i);
            pmin = std::min(pmin, space->element(i).deg.p);
            pmax = std::max(pmax, space->element(i).deg.p);
        }
        for (const auto& [n, idx] : by_total) {
            std::size_t rows = by_total.count(n + 1) ? by_total.at(n + 1).size() : 0;
            Matrix m(f, rows, idx.size());
            for (std::size_t c = 0; c < idx.size(); ++c)
                for (int j = 0; j <= filt.max_shift(); ++j) {
                    const MultiMap& mj = filt.component(1, j);
                    if (mj.is_zero()) continue;
                    for (const auto& [w, coef] : mj.entry({idx[c]}).terms())
                        m.at(coord.at(n + 1).at(w), c) += coef;
                }
            d.emplace(n, std::move(m));
        }
    }

    std::size_t dim(int n) const {
        auto it = by_total.find(n);
        return it == by_total.end() ? 0 : it->second.size();
    }
    const Matrix& dmat(int n) const {
        static thread_local std::map<std::pair<std::string, int>, Matrix> zeros;
        auto it = d.find(n);
        if (it != d.end()) return it->second;
        auto key = std::make_pair(f.to_string(), 0);
        auto z = zeros.find(key);
        if (z == zeros.end()) z = zeros.emplace(key, Matrix(f, 0, 0)).first;
        return z->second;
    }

    /* total degree n vectors spanning F^p ∩ d^{-1}(F^{p+r}) */
    std::vector<Vec> zspace(int p, int n, int r) const {
        std::size_t dn = dim(n);
        if (!dn) return {};
        std::vector<std::size_t> sub;  // local coords of F^p
        for (std::size_t c = 0; c < dn; ++c)
            if (space->element(by_total.at(n)[c]).deg.p >= p) sub.push_back(c);
        if (sub.empty()) return {};
        std::vector<std::size_t> bad_rows;  // target coords below F^{p+r}
        if (dim(n + 1)) {
            const auto& tgt = by_total.at(n + 1);
            for (std::size_t rr = 0; rr < tgt.size(); ++rr)
                if (space->element(tgt[rr]).deg.p < p + r) bad_rows.push_back(rr);
        }
        Matrix m(f, bad_rows.size(), sub.size());
        const Matrix& dm = dmat(n);
        for (std::size_t c = 0; c < sub.size(); ++c)
            for (std::size_t rr = 0; rr < bad_rows.size(); ++rr) m.at(rr, c) = dm.at(bad_rows[rr], sub[c]);
        std::vector<Vec> out;
        for (const Vec& kv : kernel_basis(m)) {
            Vec full(dn, Scalar::zero(f));
            for (std::size_t c = 0; c < sub.size(); ++c) full[sub[c]] = kv[c];
            out.push_back(std::move(full));
        }
        return out;
    }

    Vec apply_d(int n, const Vec& v) const { return dmat(n).apply(v); }

    /* total product m_2 on coordinate vectors of degrees n1, n2 */
    Vec multiply(int n1, const Vec& a, int n2, const Vec& b) const {
        Vec out(dim(n1 + n2), Scalar::zero(f));
        if (out.empty()) return out;
        const auto& i1 = by_total.at(n1);
        const auto& i2 = by_total.at(n2);
        for (int j = 0; j <= filt.max_shift(); ++j) {
            const MultiMap& mj = filt.component(2, j);
            if (mj.is_zero()) continue;
            for (const auto& [key, val] : mj.entries()) {
                auto p1 = coord.at(n1).find(key[0]);
                auto p2 = coord.at(n2).find(key[1]);
                if (p1 == coord.at(n1).end() || p2 == coord.at(n2).end()) continue;
                Scalar c = a[p1->second] * b[p2->second];
                if (c.is_zero()) continue;
                for (const auto& [w, coef] : val.terms()) out[coord.at(n1 + n2).at(w)] += coef * c;
            }
        }
        return out;
    }
};

}  // namespace

PageSet pages_from_filtration(const FilteredAInfinity& filt, int r_max) {
    {
        Report rep = check_filtered(filt);
        if (!rep.ok()) throw validation_error("pages_from_filtration: invalid input:\n" + rep.to_string());
    }
    TotalComplex tc(filt);
    const Field& f = tc.f;
    PageSet out;
    out.start = 1;
    if (filt.space()->dim() == 0) {
        out.pages.resize(static_cast<std::size_t>(std::max(r_max, 1)));
        return out;
    }
    int width = tc.pmax - tc.pmin;
    int r_stop = std::max(r_max, width + 1);

    for (int r = 1; r <= r_stop; ++r) {
        PageData page;
        std::map<Bidegree, Subquotient> sub;
        for (const auto& [n, idx] : tc.by_total) {
            for (int p = tc.pmin; p <= tc.pmax; ++p) {
                Bidegree deg{p, n - p};
                std::vector<Vec> z = tc.zspace(p, n, r);
                std::vector<Vec> b1 = tc.zspace(p + 1, n, r - 1);
                std::vector<Vec> b2;
                for (const Vec& v : tc.zspace(p - r + 1, n - 1, r - 1)) b2.push_back(tc.apply_d(n - 1, v));
                Subquotient sq(f, idx.size(), z, span_sum(f, idx.size(), b1, b2));
                if (sq.dim()) page.dims[deg] = sq.dim();
                sub.emplace(deg, std::move(sq));
            }
        }
        for (const auto& [deg, sq] : sub) {
            if (!sq.dim()) continue;
            Bidegree tdeg{deg.p + r, deg.q - r + 1};
            auto tgt = sub.find(tdeg);
            if (tgt == sub.end() || !tgt->second.dim()) continue;
            Matrix m(f, tgt->second.dim(), sq.dim());
            for (std::size_t c = 0; c < sq.dim(); ++c) {
                Vec coords = tgt->second.coords(tc.apply_d(deg.total(), sq.reps()[c]));
                for (std::size_t rr = 0; rr < coords.size(); ++rr) m.at(rr, c) = coords[rr];
            }
            std::size_t rk = rank(m);
            if (rk) page.d_ranks[deg] = rk;
        }
        for (const auto& [dg1, sq1] : sub) {
            if (!sq1.dim()) continue;
            for (const auto& [dg2, sq2] : sub) {
                if (!sq2.dim()) continue;
                Bidegree tdeg = dg1 + dg2;
                auto tgt = sub.find(tdeg);
                if (tgt == sub.end() || !tgt->second.dim()) continue;
                Matrix m(f, tgt->second.dim(), sq1.dim() * sq2.dim());
                for (std::size_t c1 = 0; c1 < sq1.dim(); ++c1)
                    for (std::size_t c2 = 0; c2 < sq2.dim(); ++c2) {
                        Vec prod = tc.multiply(dg1.total(), sq1.reps()[c1], dg2.total(), sq2.reps()[c2]);
                        Vec coords = tgt->second.coords(prod);
                        for (std::size_t rr = 0; rr < coords.size(); ++rr)
                            m.at(rr, c1 * sq2.dim() + c2) = coords[rr];
                    }
                std::size_t rk = rank(m);
                if (rk) page.mu_ranks[{dg1, dg2}] = rk;
            }
        }
        out.pages.push_back(std::move(page));
    }

    // exact E_∞: (F^p ∩ Ker d)/(F^{p+1} ∩ Ker d + F^p ∩ Im d)
    for (const auto& [n, idx] : tc.by_total) {
        std::size_t dn = idx.size();
        std::vector<Vec> ker = kernel_basis(tc.dmat(n));
        std::vector<Vec> img;
        if (tc.by_total.count(n - 1)) img = image_columns(tc.dmat(n - 1));
        auto filter_p = [&](const std::vector<Vec>& vs, int p) {
            // span(vs) ∩ F^p via kernel of the below-p projection
            std::vector<std::size_t> bad;
            for (std::size_t c = 0; c < dn; ++c)
                if (tc.space->element(idx[c]).deg.p < p) bad.push_back(c);
            Matrix m(f, bad.size(), vs.size());
            for (std::size_t c = 0; c < vs.size(); ++c)
                for (std::size_t rr = 0; rr < bad.size(); ++rr) m.at(rr, c) = vs[c][bad[rr]];
            std::vector<Vec> outv;
            for (const Vec& kv : kernel_basis(m)) {
                Vec full(dn, Scalar::zero(f));
                for (std::size_t c = 0; c < vs.size(); ++c)
                    for (std::size_t rr = 0; rr < dn; ++rr) full[rr] += vs[c][rr] * kv[c];
                outv.push_back(std::move(full));
            }
            return prune_columns(f, dn, outv);
        };
        for (int p = tc.pmin; p <= tc.pmax; ++p) {
            auto zk = filter_p(ker, p);
            auto num = zk.size();
            auto den = span_dim(f, dn, span_sum(f, dn, filter_p(ker, p + 1), filter_p(img, p)));
            if (num > den) out.einf[{p, n - p}] = num - den;
        }
    }

    // stabilization audit: the last page must equal E_∞
    const PageData& last = out.pages.back();
    if (last.dims != out.einf || !last.d_ranks.empty())
        throw internal_error("filtration pages did not stabilize at the p-width bound");
    return out;
}

/* ---- pages from a deformation ----------------------------------------- */

namespace {

/* dims, d-ranks (induced order-1 differential) and product ranks (induced
 * order-0 product) on the cohomology of the base of one deformation. */
PageData page_from_cohomology(const FormalBigradedDeformation& c) {
    PageData page;
    const SpacePtr& V = c.space();
    const Field& f = V->field();
    CohomologyData coh = cohomology_with_section(as_linear(c.base().map(1)), c.base().unit());
    for (const auto& [deg, n] : coh.H->dims())
        if (n) page.dims[deg] = n;

    BigradedMap m11 = as_linear(c.component(1, 1));
    std::map<Bidegree, std::vector<std::size_t>> by_deg;
    for (std::size_t h = 0; h < coh.H->dim(); ++h) by_deg[coh.H->element(h).deg].push_back(h);
    for (const auto& [deg, hs] : by_deg) {
        Matrix m(f, coh.H->at(deg + m11.bidegree()).size(), hs.size());
        bool nonzero = false;
        for (std::size_t col = 0; col < hs.size(); ++col) {
            LinComb img = m11.apply(coh.f1.image(hs[col]));
            if (img.is_zero()) continue;
            LinComb cls = coh.project(img, *V);
            for (const auto& [h, coef] : cls.terms()) {
                const auto& tgt = coh.H->at(deg + m11.bidegree());
                for (std::size_t rr = 0; rr < tgt.size(); ++rr)
                    if (tgt[rr] == h) {
                        m.at(rr, col) = coef;
                        nonzero = true;
                    }
            }
        }
        if (!nonzero) continue;
        std::size_t rk = rank(m);
        if (rk) page.d_ranks[deg] = rk;
    }

    const MultiMap& m20 = c.component(2, 0);
    if (!m20.is_zero()) {
        for (const auto& [dg1, hs1] : by_deg)
            for (const auto& [dg2, hs2] : by_deg) {
                Bidegree tdeg = dg1 + dg2;
                const auto& tgt = coh.H->at(tdeg);
                if (tgt.empty()) continue;
                Matrix m(f, tgt.size(), hs1.size() * hs2.size());
                bool nonzero = false;
                for (std::size_t c1 = 0; c1 < hs1.size(); ++c1)
                    for (std::size_t c2 = 0; c2 < hs2.size(); ++c2) {
                        std::array<LinComb, 2> args{coh.f1.image(hs1[c1]), coh.f1.image(hs2[c2])};
                        LinComb prod = m20.evaluate(std::span<const LinComb>(args.data(), 2));
                        if (prod.is_zero()) continue;
                        LinComb cls = coh.project(prod, *V);
                        for (const auto& [h, coef] : cls.terms())
                            for (std::size_t rr = 0; rr < tgt.size(); ++rr)
                                if (tgt[rr] == h) {
                                    m.at(rr, c1 * hs2.size() + c2) = coef;
                                    nonzero = true;
                                }
                    }
                if (!nonzero) continue;
                std::size_t rk = rank(m);
                if (rk) page.mu_ranks[{dg1, dg2}] = rk;
            }
    }
    return page;
}

/* dims and ranks read off a minimal deformation directly (enhancement route:
 * the page is the base of the transferred deformation). */
PageData page_from_minimal(const FormalBigradedDeformation& c) {
    PageData page;
    const SpacePtr& H = c.space();
    for (const auto& [deg, n] : H->dims())
        if (n) page.dims[deg] = n;
    BigradedMap d1 = as_linear(c.component(1, 1));
    for (const auto& deg : H->support()) {
        std::size_t rk = rank(d1.block(deg));
        if (rk) page.d_ranks[deg] = rk;
    }
    const MultiMap& m20 = c.component(2, 0);
    if (!m20.is_zero()) {
        const Field& f = H->field();
        std::map<Bidegree, std::vector<std::size_t>> by_deg;
        for (std::size_t h = 0; h < H->dim(); ++h) by_deg[H->element(h).deg].push_back(h);
        for (const auto& [dg1, hs1] : by_deg)
            for (const auto& [dg2, hs2] : by_deg) {
                const auto& tgt = H->at(dg1 + dg2);
                if (tgt.empty()) continue;
                std::map<std::size_t, std::size_t> tpos;
                for (std::size_t rr = 0; rr < tgt.size(); ++rr) tpos[tgt[rr]] = rr;
                Matrix m(f, tgt.size(), hs1.size() * hs2.size());
                bool nonzero = false;
                for (std::size_t c1 = 0; c1 < hs1.size(); ++c1)
                    for (std::size_t c2 = 0; c2 < hs2.size(); ++c2)
                        for (const auto& [h, coef] : m20.entry({hs1[c1], hs2[c2]}).terms()) {
                            m.at(tpos.at(h), c1 * hs2.size() + c2) = coef;
                            nonzero = true;
                        }
                if (!nonzero) continue;
                std::size_t rk = rank(m);
                if (rk) page.mu_ranks[{dg1, dg2}] = rk;
            }
    }
    return page;
}

}  // namespace

DeformationPages pages_from_deformation(const FormalBigradedDeformation& d, int r_max, PageRoute route) {
    {
        Report rep = check_deformation(d);
        if (!rep.ok()) throw validation_error("pages_from_deformation: invalid input:\n" + rep.to_string());
    }
    DeformationPages out;
    out.pages.start = d.s_type() + 1;
    int width = d.space()->p_width();
    int r_stop = std::max(r_max, d.s_type() + width + 1);

    if (route == PageRoute::d_iteration) {
        FormalBigradedDeformation c = d;
        for (int r = out.pages.start; r <= r_stop; ++r) {
            out.pages.pages.push_back(page_from_cohomology(c));
            if (r < r_stop) c = functor_D(c);
        }
    } else {
        FormalBigradedDeformation c = d;
        out.family.push_back(c);
        for (int r = out.pages.start; r <= r_stop; ++r) {
            DeformedTransferResult tr = deformation_transfer(c);
            out.pages.pages.push_back(page_from_minimal(tr.model_deformation));
            if (r < r_stop) {
                c = translate_T(tr.model_deformation);
                out.family.push_back(c);
            }
        }
    }
    const PageData& last = out.pages.pages.back();
    if (!last.d_ranks.empty())
        throw internal_error("deformation pages did not stabilize at the p-width bound");
    out.pages.einf = last.dims;
    return out;
}

/* ---- comparison and convergence ---------------------------------------- */

Report compare_pages(const PageSet& a, const PageSet& b) {
    Report rep;
    if (a.start != b.start) {
        rep.add("start indices differ: " + std::to_string(a.start) + " vs " + std::to_string(b.start));
        return rep;
    }
    int last = std::min(a.last(), b.last());
    for (int r = a.start; r <= last; ++r) {
        const PageData& pa = a.page(r);
        const PageData& pb = b.page(r);
        if (pa.dims != pb.dims) rep.add("page " + std::to_string(r) + ": dimension tables differ");
        if (pa.d_ranks != pb.d_ranks) rep.add("page " + std::to_string(r) + ": d-rank tables differ");
        if (pa.mu_ranks != pb.mu_ranks) rep.add("page " + std::to_string(r) + ": product rank tables differ");
    }
    if (a.einf != b.einf) rep.add("E_∞ tables differ");
    return rep;
}

Report weak_convergence_check(const FilteredAInfinity& filt) {
    Report rep;
    PageSet ps = pages_from_filtration(filt, 1);
    TotalComplex tc(filt);
    const Field& f = tc.f;
    std::map<Bidegree, std::size_t> gr;
    for (const auto& [n, idx] : tc.by_total) {
        std::size_t dn = idx.size();
        std::vector<Vec> ker = kernel_basis(tc.dmat(n));
        std::vector<Vec> img;
        if (tc.by_total.count(n - 1)) img = image_columns(tc.dmat(n - 1));
        auto filtered_h_dim = [&](int p) {
            // dim (F^p ∩ Ker d + Im d) — the p-th filtration step of H plus Im d
            std::vector<std::size_t> bad;
            for (std::size_t c = 0; c < dn; ++c)
                if (tc.space->element(idx[c]).deg.p < p) bad.push_back(c);
            Matrix m(f, bad.size(), ker.size());
            for (std::size_t c = 0; c < ker.size(); ++c)
                for (std::size_t rr = 0; rr < bad.size(); ++rr) m.at(rr, c) = ker[c][bad[rr]];
            std::vector<Vec> fk;
            for (const Vec& kv : kernel_basis(m)) {
                Vec full(dn, Scalar::zero(f));
                for (std::size_t c = 0; c < ker.size(); ++c)
                    for (std::size_t rr = 0; rr < dn; ++rr) full[rr] += ker[c][rr] * kv[c];
                fk.push_back(std::move(full));
            }
            return span_dim(f, dn, span_sum(f, dn, fk, img));
        };
        for (int p = tc.pmin; p <= tc.pmax; ++p) {
            std::size_t hi = filtered_h_dim(p), lo = filtered_h_dim(p + 1);
            if (hi > lo) gr[{p, n - p}] = hi - lo;
        }
    }
    if (gr != ps.einf) {
        rep.add("E_∞ does not match the associated graded of the filtered cohomology");
        for (const auto& [deg, n] : gr)
            if (!ps.einf.count(deg) || ps.einf.at(deg) != n)
                rep.add("  Gr H at " + deg.to_string() + " has dim " + std::to_string(n));
        for (const auto& [deg, n] : ps.einf)
            if (!gr.count(deg)) rep.add("  E_∞ extra entry at " + deg.to_string());
    }
    return rep;
}

Report weak_convergence_check(const FormalBigradedDeformation& d) {
    return weak_convergence_check(specialize_hbar_one(d));
}

}  // namespace ainfss
