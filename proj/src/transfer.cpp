#include "ainfss/transfer.hpp"

#include <functional>

namespace ainfss {

namespace {

bool touches_unit(const std::vector<std::size_t>& key, const std::optional<std::size_t>& unit) {
    if (!unit) return false;
    for (auto i : key)
        if (i == *unit) return true;
    return false;
}

/* Shared solve step: given the obstruction U (values in Ker m1), set
 * model_map = -π∘U and solve m1∘f = U + f1∘model_map entrywise. */
struct SolveOutcome {
    MultiMap model_map;
    MultiMap f_map;
    std::size_t solved = 0;
};

SolveOutcome project_and_solve(const MultiMap& u, const CohomologyData& coh, const AInfinityAlgebra& ambient,
                               Bidegree model_bideg, Bidegree f_bideg,
                               const std::optional<std::size_t>& unit_class, bool unit_law_at_two,
                               const char* stage) {
    const SpacePtr& H = coh.H;
    const SpacePtr& A = ambient.space();
    BigradedMap m1 = as_linear(ambient.map(1));

    SolveOutcome out{MultiMap(H, H, u.arity(), model_bideg), MultiMap(H, A, u.arity(), f_bideg), 0};

    // Lemma-style assertion: the ambient differential must kill the obstruction.
    for (const auto& [key, val] : u.entries()) {
        LinComb dval = m1.apply(val);
        if (!dval.is_zero())
            throw internal_error(std::string(stage) + ": differential does not kill the obstruction (sign bug)");
    }

    // Structure entries on unit inputs must vanish, except that the arity-2
    // order-0 map carries the unit law itself.
    bool keep_unit_entries = (u.arity() == 2 && unit_law_at_two);
    std::map<Bidegree, Solver> solvers;
    for (const auto& [key, val] : u.entries()) {
        LinComb cls = coh.project(val, *A);
        if (!keep_unit_entries && touches_unit(key, unit_class)) {
            if (!cls.is_zero())
                throw internal_error(std::string(stage) + ": obstruction class nonzero on a unit input");
        } else {
            out.model_map.accumulate(key, -cls);
        }
    }
    for (const auto& [key, val] : u.entries()) {
        LinComb rhs = val;
        const LinComb& cls = out.model_map.entry(key);
        // rhs = U + f1 ∘ model_map = (id - f1 π) U
        for (const auto& [h, c] : cls.terms()) rhs = rhs + coh.f1.image(h) * c;
        if (rhs.is_zero()) continue;
        if (touches_unit(key, unit_class))
            throw internal_error(std::string(stage) + ": unit input needs a nonzero morphism component");
        auto deg = rhs.homogeneous_bidegree(*A);
        if (!deg) throw internal_error(std::string(stage) + ": non-homogeneous right-hand side");
        Bidegree solve_deg = *deg - m1.bidegree();
        auto it = solvers.find(solve_deg);
        if (it == solvers.end()) it = solvers.emplace(solve_deg, Solver(m1.block(solve_deg))).first;
        const auto& idx_out = A->at(*deg);
        Vec dense(idx_out.size(), Scalar::zero(A->field()));
        {
            std::map<std::size_t, std::size_t> pos;
            for (std::size_t i = 0; i < idx_out.size(); ++i) pos[idx_out[i]] = i;
            for (const auto& [i, c] : rhs.terms()) dense[pos.at(i)] = c;
        }
        auto x = it->second.solve(dense);
        if (!x) throw internal_error(std::string(stage) + ": obstruction not a boundary (sign bug)");
        const auto& idx_in = A->at(solve_deg);
        LinComb fval;
        for (std::size_t i = 0; i < idx_in.size(); ++i) fval.add(idx_in[i], (*x)[i]);
        if (!fval.is_zero()) {
            out.f_map.accumulate(key, fval);
            ++out.solved;
        }
    }
    return out;
}

}  // namespace

AInfinityMorphism TransferResult::morphism_into(const AInfinityAlgebra& input) const {
    AInfinityMorphism f;
    f.source = &model;
    f.target = &input;
    f.components = morphism;
    return f;
}

TransferResult kadeishvili_transfer(const AInfinityAlgebra& a, int arity_max) {
    {
        Report rep = check_stasheff(a);
        if (!rep.ok()) throw validation_error("kadeishvili_transfer input fails SI:\n" + rep.to_string());
    }
    const SpacePtr& A = a.space();
    CohomologyData coh = cohomology_with_section(as_linear(a.map(1)), a.unit());

    std::optional<std::string> unit_name;
    if (a.unit()) {
        if (!coh.unit_class && coh.H->dim() > 0)
            throw validation_error("unit class vanishes in cohomology; no unitary model exists");
        if (coh.unit_class) unit_name = coh.H->element(*coh.unit_class).name;
    }
    AInfinityAlgebra model(coh.H, a.s_type(), unit_name);
    std::map<int, MultiMap> f;
    f.emplace(1, [&] {
        MultiMap f1(coh.H, A, 1, {0, 0});
        for (std::size_t i = 0; i < coh.H->dim(); ++i) f1.set_entry({i}, coh.f1.image(i));
        return f1;
    }());

    std::vector<std::string> log;
    int bound = arity_max > 0 ? arity_max : model.arity_bound();

    auto f_at = [&](int arity) -> const MultiMap* {
        auto it = f.find(arity);
        return it == f.end() ? nullptr : &it->second;
    };

    for (int next = 2; next <= bound; ++next) {
        // obstruction over already-built data: inner arities 2..next-1,
        // and all decompositions through the input structure maps
        MultiMap u(coh.H, A, next, morphism_bidegree(a.s_type(), next) + Bidegree{a.s_type(), -a.s_type() + 1});
        for (int r = 0; r <= next - 1; ++r)
            for (int s = 2; r + s <= next && r + (next - r - s) >= 1; ++s) {
                int t = next - r - s;
                const MultiMap* outer = f_at(r + 1 + t);
                if (!outer || !model.has_map(s)) continue;
                MultiMap term = compose_at(*outer, model.map(s), r, t);
                if ((r + s * t) % 2) term = -term;
                u.add_in_place(term);
            }
        std::vector<int> parts;
        std::function<void(int)> split = [&](int remaining) {
            if (remaining == 0) {
                int q = static_cast<int>(parts.size());
                if (q < 2 || !a.has_map(q)) return;
                std::vector<const MultiMap*> factors;
                for (int ij : parts) {
                    const MultiMap* fij = f_at(ij);
                    if (!fij) return;
                    factors.push_back(fij);
                }
                int w = 0;
                for (int j = 1; j <= q; ++j) w += (q - j) * (parts[static_cast<std::size_t>(j - 1)] - 1);
                MultiMap term = tensor_then(a.map(q), factors);
                if (w % 2 == 0) term = -term;  // subtracted sum
                u.add_in_place(term);
                return;
            }
            for (int i = 1; i <= remaining; ++i) {
                parts.push_back(i);
                split(remaining - i);
                parts.pop_back();
            }
        };
        split(next);

        SolveOutcome step = project_and_solve(u, coh, a, structure_bidegree(a.s_type(), next),
                                              morphism_bidegree(a.s_type(), next), coh.unit_class,
                                              /*unit_law_at_two=*/true, "kadeishvili_transfer");
        log.push_back("arity " + std::to_string(next) + ": obstruction entries " +
                      std::to_string(u.entries().size()) + ", structure entries " +
                      std::to_string(step.model_map.entries().size()) + ", solves " +
                      std::to_string(step.solved));
        if (!step.model_map.is_zero()) model.set_map(step.model_map);
        if (!step.f_map.is_zero()) f.emplace(next, std::move(step.f_map));
    }
    return TransferResult{std::move(model), std::move(coh), std::move(f), std::move(log)};
}

DeformedMorphism DeformedTransferResult::morphism_into(const FormalBigradedDeformation& input) const {
    DeformedMorphism f(&model_deformation, &input);
    for (const auto& [key, comp] : morphism) f.set_component(key.second, comp);
    return f;
}

DeformedTransferResult deformation_transfer(const FormalBigradedDeformation& d, int arity_max,
                                            int order_max) {
    {
        Report rep = check_deformation(d);
        if (!rep.ok()) throw validation_error("deformation_transfer input invalid:\n" + rep.to_string());
    }
    TransferResult kad = kadeishvili_transfer(d.base(), arity_max);
    const SpacePtr& H = kad.model.space();
    const SpacePtr& A = d.space();
    int st = d.s_type();

    FormalBigradedDeformation model_def(kad.model);
    std::map<std::pair<int, int>, MultiMap> f;
    for (const auto& [arity, comp] : kad.morphism) f.emplace(std::make_pair(arity, 0), comp);

    auto f_comp = [&](int arity, int order) -> const MultiMap* {
        auto it = f.find({arity, order});
        return it == f.end() ? nullptr : &it->second;
    };

    int bound = arity_max > 0 ? arity_max : kad.model.arity_bound();
    if (order_max < 0) {
        // cap from the bidegree bookkeeping: an order-N' component of arity n
        // needs N' = p_out - Σ p_in - (p-shift) and -N' = q_out - Σ q_in - (q-shift)
        order_max = d.max_order();
        if (H->dim() > 0) {
            auto box = [](const BigradedSpace& sp) {
                int plo = sp.basis()[0].deg.p, phi = plo, qlo = sp.basis()[0].deg.q, qhi = qlo;
                for (const auto& e : sp.basis()) {
                    plo = std::min(plo, e.deg.p);
                    phi = std::max(phi, e.deg.p);
                    qlo = std::min(qlo, e.deg.q);
                    qhi = std::max(qhi, e.deg.q);
                }
                return std::array<int, 4>{plo, phi, qlo, qhi};
            };
            auto hb = box(*H), ab = box(*A);
            for (int n = 1; n <= bound; ++n)
                for (const auto& [out, shift_p, shift_q] :
                     {std::tuple{hb, (2 - n) * st, (2 - n) * (1 - st)},
                      std::tuple{ab, (1 - n) * st, (1 - n) * (1 - st)}}) {
                    int p_cap = out[1] - n * hb[0] - shift_p;
                    int q_cap = n * hb[3] + shift_q - out[2];
                    order_max = std::max(order_max, std::min(p_cap, q_cap));
                }
        }
    }

    std::vector<std::string> log;
    for (int arity = 1; arity <= bound; ++arity) {
        // nonzero-order lists per arity, refreshed as components accumulate
        auto f_orders = [&](int a) {
            std::vector<int> out;
            for (const auto& [key, comp] : f)
                if (key.first == a) out.push_back(key.second);
            return out;
        };
        auto m_orders = [&](int q) {
            std::vector<int> out;
            for (int j = 0; j <= d.max_order(); ++j)
                if (!d.component(q, j).is_zero()) out.push_back(j);
            return out;
        };
        for (int order = 1; order <= order_max; ++order) {
            MultiMap u(H, A, arity,
                       morphism_bidegree(st, arity) + Bidegree{st, -st + 1} + Bidegree{order, -order});
            // Σ over the full (r,s,t) range and ħ-order splits; the term that
            // would involve f_1^0 ∘ m̄_arity^order is excluded (it is unknown)
            for (int r = 0; r <= arity - 1; ++r)
                for (int s = 1; r + s <= arity; ++s) {
                    int t = arity - r - s;
                    int j_lo = (s == arity) ? 1 : 0;
                    for (int j = j_lo; j <= order; ++j) {
                        const MultiMap* outer = f_comp(r + 1 + t, j);
                        if (!outer) continue;
                        const MultiMap& inner = model_def.component(s, order - j);
                        if (inner.is_zero()) continue;
                        MultiMap term = compose_at(*outer, inner, r, t);
                        if ((r + s * t) % 2) term = -term;
                        u.add_in_place(term);
                    }
                }
            // subtracted sum over decompositions, walking only the nonzero
            // component orders; (q,j0,j1)=(1,0,order) excluded
            std::vector<int> parts;
            std::function<void(int)> split = [&](int remaining) {
                if (remaining == 0) {
                    int q = static_cast<int>(parts.size());
                    int w = 0;
                    for (int j = 1; j <= q; ++j) w += (q - j) * (parts[static_cast<std::size_t>(j - 1)] - 1);
                    std::vector<const MultiMap*> factors(static_cast<std::size_t>(q), nullptr);
                    for (int j0 : m_orders(q)) {
                        if (j0 > order) continue;
                        const MultiMap& mq = d.component(q, j0);
                        std::function<void(std::size_t, int)> assign = [&](std::size_t pos, int left) {
                            if (pos == factors.size()) {
                                if (left != 0) return;
                                if (q == 1 && j0 == 0) return;  // the unknown m_1^0 ∘ f_N^{N'}
                                MultiMap term = tensor_then(mq, factors);
                                if (w % 2 == 0) term = -term;
                                u.add_in_place(term);
                                return;
                            }
                            for (int o : f_orders(parts[pos])) {
                                if (o > left) continue;
                                factors[pos] = f_comp(parts[pos], o);
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
            split(arity);

            SolveOutcome step = project_and_solve(
                u, kad.cohomology, d.base(), deformation_bidegree(st, arity, order),
                morphism_bidegree(st, arity) + Bidegree{order, -order}, kad.cohomology.unit_class,
                /*unit_law_at_two=*/false, "deformation_transfer");
            if (!u.is_zero() || !step.model_map.is_zero())
                log.push_back("arity " + std::to_string(arity) + ", ħ-order " + std::to_string(order) +
                              ": obstruction entries " + std::to_string(u.entries().size()) +
                              ", structure entries " + std::to_string(step.model_map.entries().size()) +
                              ", solves " + std::to_string(step.solved));
            if (!step.model_map.is_zero()) model_def.set_component(order, step.model_map);
            if (!step.f_map.is_zero()) f.emplace(std::make_pair(arity, order), std::move(step.f_map));
        }
    }
    return DeformedTransferResult{std::move(model_def), std::move(kad.cohomology), std::move(f),
                                  std::move(log)};
}

namespace {

/* The complex (V ⊗ k[ħ]/(ħ^{N+1}), Σ_{j<=N} d^j ħ^j) as a bigraded space with
 * basis (element, ħ-power). */
struct TruncatedComplex {
    SpacePtr space;
    BigradedMap d;

    TruncatedComplex(const SpacePtr& base, int cap, Bidegree dbideg,
                     const std::function<const MultiMap*(int)>& diff_component)
        : space(expand(base, cap)), d(space, space, dbideg) {
        for (std::size_t i = 0; i < base->dim(); ++i) {
            for (int r = 0; r <= cap; ++r) {
                LinComb img;
                for (int j = 0; r + j <= cap; ++j) {
                    const MultiMap* mj = diff_component(j);
                    if (!mj) continue;
                    for (const auto& [tgt, c] : mj->entry({i}).terms())
                        img.add(index(base, tgt, r + j), c);
                }
                d.set_image(index(base, i, r), img);
            }
        }
    }

    // ħ-power major layout, matching expand()
    static std::size_t index(const SpacePtr& base, std::size_t i, int r) {
        return static_cast<std::size_t>(r) * base->dim() + i;
    }

  private:
    static SpacePtr expand(const SpacePtr& base, int cap) {
        std::vector<BasisElement> basis;
        for (int r = 0; r <= cap; ++r)
            for (std::size_t i = 0; i < base->dim(); ++i) {
                const auto& e = base->element(i);
                basis.push_back({e.name + "#h" + std::to_string(r), {e.deg.p - r, e.deg.q + r}});
            }
        return make_space(base->field(), std::move(basis));
    }
};

}  // namespace

Report verify_quasi_iso(const FormalBigradedDeformation& input, const DeformedTransferResult& result,
                        int order_cap) {
    Report rep;
    if (order_cap < 0)
        order_cap = std::max(input.max_order(), result.model_deformation.max_order()) + 1;
    const SpacePtr& H = result.model_deformation.space();
    const SpacePtr& A = input.space();

    int st = input.s_type();
    Bidegree dbideg{st, 1 - st};
    for (int cap = 0; cap <= order_cap; ++cap) {
        TruncatedComplex src(H, cap, dbideg, [&](int j) -> const MultiMap* {
            const MultiMap& c = result.model_deformation.component(1, j);
            return c.is_zero() ? nullptr : &c;
        });
        TruncatedComplex tgt(A, cap, dbideg, [&](int j) -> const MultiMap* {
            const MultiMap& c = input.component(1, j);
            return c.is_zero() ? nullptr : &c;
        });
        BigradedMap big_f(src.space, tgt.space, {0, 0});
        for (std::size_t i = 0; i < H->dim(); ++i)
            for (int r = 0; r <= cap; ++r) {
                LinComb img;
                for (int j = 0; r + j <= cap; ++j) {
                    auto it = result.morphism.find({1, j});
                    if (it == result.morphism.end()) continue;
                    for (const auto& [tgt_i, c] : it->second.entry({i}).terms())
                        img.add(TruncatedComplex::index(A, tgt_i, r + j), c);
                }
                big_f.set_image(TruncatedComplex::index(H, i, r), img);
            }

        // chain map audit
        for (std::size_t i = 0; i < src.space->dim(); ++i) {
            LinComb lhs = tgt.d.apply(big_f.image(i));
            LinComb rhs = big_f.apply(src.d.image(i));
            if (!(lhs == rhs)) {
                rep.add("truncation " + std::to_string(cap) + ": f_1 is not a chain map");
                break;
            }
        }

        std::set<Bidegree> degs;
        for (const auto& e : src.space->basis()) degs.insert(e.deg);
        for (const auto& e : tgt.space->basis()) degs.insert(e.deg);
        for (const Bidegree& deg : degs) {
            Matrix ds = src.d.block(deg);
            Matrix dsp = src.d.block(deg - src.d.bidegree());
            Matrix dt = tgt.d.block(deg);
            Matrix dtp = tgt.d.block(deg - tgt.d.bidegree());
            auto im = [&](const Matrix& m) {
                std::vector<Vec> out;
                auto rr = rref(m);
                for (auto c : rr.pivots) out.push_back(m.column(c));
                return out;
            };
            Subquotient hs(H->field(), src.space->at(deg).size(), kernel_basis(ds), im(dsp));
            Subquotient ht(A->field(), tgt.space->at(deg).size(), kernel_basis(dt), im(dtp));
            if (hs.dim() != ht.dim()) {
                rep.add("truncation " + std::to_string(cap) + ": cohomology dims differ at " + deg.to_string() +
                        " (" + std::to_string(hs.dim()) + " vs " + std::to_string(ht.dim()) + ")");
                continue;
            }
            if (hs.dim() == 0) continue;
            Matrix fb = big_f.block(deg);
            Matrix induced(H->field(), ht.dim(), hs.dim());
            for (std::size_t c = 0; c < hs.dim(); ++c) {
                Vec img = fb.apply(hs.reps()[c]);
                Vec coords = ht.coords(img);
                for (std::size_t r = 0; r < ht.dim(); ++r) induced.at(r, c) = coords[r];
            }
            if (rank(induced) != hs.dim())
                rep.add("truncation " + std::to_string(cap) + ": induced map not bijective at " +
                        deg.to_string());
        }
    }
    return rep;
}

}  // namespace ainfss
