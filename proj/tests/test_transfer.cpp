#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ainfss/corpus.hpp"
#include "ainfss/transfer.hpp"

using namespace ainfss;

TEST_CASE("a minimal algebra transfers to itself with a strict identity") {
    Field q = Field::rationals();
    AInfinityAlgebra a = truncated_polynomial(q, 4);  // m1 = 0
    TransferResult tr = kadeishvili_transfer(a);
    CHECK(tr.model.space()->dim() == a.space()->dim());
    // same structure constants after the canonical renaming
    REQUIRE(tr.model.maps().count(2));
    for (const auto& [key, val] : a.map(2).entries()) {
        LinComb got = tr.model.map(2).entry(key);
        CHECK(got.terms().size() == val.terms().size());
        for (std::size_t t = 0; t < val.terms().size(); ++t) {
            CHECK(got.terms()[t].first == val.terms()[t].first);
            CHECK(got.terms()[t].second == val.terms()[t].second);
        }
    }
    // f is strict: f1 the identity matrix, no higher components
    CHECK(tr.morphism.size() == 1);
    for (std::size_t i = 0; i < a.space()->dim(); ++i)
        CHECK(tr.morphism.at(1).entry({i}) == LinComb::basis(q, i));
}

TEST_CASE("an acyclic two-term complex transfers to the zero model") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {0, 1}}});
    AInfinityAlgebra a(sp, 0);
    MultiMap m1(sp, sp, 1, {0, 1});
    m1.set_entry({0}, LinComb::basis(q, 1));
    a.set_map(m1);
    TransferResult tr = kadeishvili_transfer(a);
    CHECK(tr.model.space()->dim() == 0);
    CHECK(tr.model.maps().empty());
}

namespace {

/* Exhaustive Massey coset oracle over a small prime field: every choice of
 * bounding elements u' = u + span(a,b,c), v' = v + span(a,b,c) gives the
 * class of a·v' + u'·c in H^2 = span([P],[Q]); boundaries are spanned by ab
 * and bc, so the class is read off the P and Q coordinates directly. */
std::set<std::pair<std::uint64_t, std::uint64_t>> massey_coset_enumerated(std::uint64_t p) {
    Field f = Field::prime(p);
    AInfinityAlgebra alg = massey_fixture(f);
    const SpacePtr& sp = alg.space();
    auto ix = [&](const char* n) { return *sp->index_of(n); };
    const MultiMap& mu = alg.map(2);
    std::set<std::pair<std::uint64_t, std::uint64_t>> classes;
    std::array<std::size_t, 3> cocycles{ix("a"), ix("b"), ix("c")};
    for (std::uint64_t a0 = 0; a0 < p; ++a0)
        for (std::uint64_t a1 = 0; a1 < p; ++a1)
            for (std::uint64_t a2 = 0; a2 < p; ++a2)
                for (std::uint64_t b0 = 0; b0 < p; ++b0)
                    for (std::uint64_t b1 = 0; b1 < p; ++b1)
                        for (std::uint64_t b2 = 0; b2 < p; ++b2) {
                            LinComb u = LinComb::basis(f, ix("u"));
                            LinComb v = LinComb::basis(f, ix("v"));
                            std::array<std::uint64_t, 3> ca{a0, a1, a2}, cb{b0, b1, b2};
                            for (int i = 0; i < 3; ++i) {
                                u.add(cocycles[static_cast<std::size_t>(i)],
                                      Scalar::of_int(f, static_cast<long>(ca[static_cast<std::size_t>(i)])));
                                v.add(cocycles[static_cast<std::size_t>(i)],
                                      Scalar::of_int(f, static_cast<long>(cb[static_cast<std::size_t>(i)])));
                            }
                            std::array<LinComb, 2> av{LinComb::basis(f, ix("a")), v};
                            std::array<LinComb, 2> uc{u, LinComb::basis(f, ix("c"))};
                            LinComb w = mu.evaluate(std::span<const LinComb>(av.data(), 2)) +
                                        mu.evaluate(std::span<const LinComb>(uc.data(), 2));
                            std::uint64_t cp = 0, cq = 0;
                            for (const auto& [i, c] : w.terms()) {
                                if (i == ix("P")) cp = std::stoull(c.to_string());
                                if (i == ix("Q")) cq = std::stoull(c.to_string());
                                // ab/bc coordinates are boundaries, dropped
                            }
                            classes.insert({cp, cq});
                        }
    return classes;
}

}  // namespace

TEST_CASE("Massey triple product: enumeration oracle pins a single class") {
    auto classes = massey_coset_enumerated(5);
    REQUIRE(classes.size() == 1);
    CHECK(*classes.begin() == std::pair<std::uint64_t, std::uint64_t>{1, 1});  // [P] + [Q]
}

TEST_CASE("transferred m3 lands in the Massey coset and is nonzero") {
    for (Field f : {Field::rationals(), Field::prime(101), Field::prime(5)}) {
        AInfinityAlgebra alg = massey_fixture(f);
        TransferResult tr = kadeishvili_transfer(alg);
        const SpacePtr& H = tr.model.space();
        // H^1 = [a],[b],[c]; H^2 = [P],[Q] with the canonical h-naming
        REQUIRE(H->at({0, 1}).size() == 3);
        REQUIRE(H->at({0, 2}).size() == 2);
        auto ha = *H->index_of("h0_1_0");
        auto hb = *H->index_of("h0_1_1");
        auto hc = *H->index_of("h0_1_2");
        auto hp = *H->index_of("h0_2_0");
        auto hq = *H->index_of("h0_2_1");
        REQUIRE(tr.model.has_map(3));
        LinComb m3 = tr.model.map(3).entry({ha, hb, hc});
        LinComb coset;  // [P] + [Q], frozen from the enumeration oracle
        coset.add(hp, Scalar::one(f));
        coset.add(hq, Scalar::one(f));
        CHECK((m3 == coset || m3 == -coset));
        CHECK_FALSE(m3.is_zero());
        // model and morphism satisfy their identities to the bound
        CHECK(check_stasheff(tr.model).ok());
        AInfinityMorphism mor = tr.morphism_into(alg);
        CHECK(check_morphism(mor).ok());
    }
}

TEST_CASE("transfer outputs pass all checks on the random corpus") {
    Rng rng(47);
    for (int trial = 0; trial < 60; ++trial) {
        CorpusOptions opt;
        opt.field = trial % 2 ? Field::rationals() : Field::prime(101);
        opt.unitary = trial % 4 == 0;
        AInfinityAlgebra a = random_algebra(rng, opt);
        TransferResult tr = kadeishvili_transfer(a);
        CHECK(tr.model.is_minimal());
        CHECK(check_stasheff(tr.model).ok());
        AInfinityMorphism mor = tr.morphism_into(a);
        CHECK(check_morphism(mor).ok());
        // m̄2 agrees with the induced product on classes
        const MultiMap& m2 = a.map(2);
        for (std::size_t i = 0; i < tr.model.space()->dim(); ++i)
            for (std::size_t j = 0; j < tr.model.space()->dim(); ++j) {
                std::array<LinComb, 2> args{tr.cohomology.f1.image(i), tr.cohomology.f1.image(j)};
                LinComb prod = m2.evaluate(std::span<const LinComb>(args.data(), 2));
                LinComb induced =
                    prod.is_zero() ? LinComb() : tr.cohomology.project(prod, *a.space());
                CHECK(tr.model.map(2).entry({i, j}) == induced);
            }
        if (a.unit() && tr.model.space()->dim() > 0) {
            REQUIRE(tr.model.unit().has_value());
            CHECK(check_unit_axioms(tr.model).ok());
        }
    }
}

TEST_CASE("deformation transfer on the worked fixtures") {
    Field q = Field::rationals();

    // constant deformation: constant model, no higher morphism components
    FormalBigradedDeformation constant(truncated_polynomial(q, 3));
    DeformedTransferResult trc = deformation_transfer(constant);
    CHECK(trc.model_deformation.max_order() == 0);
    for (const auto& [key, comp] : trc.morphism) CHECK(key.second == 0);

    // F1: the transfer reproduces the order-1 differential on H = span(x,y)
    FormalBigradedDeformation f1 = fixture_f1(q);
    DeformedTransferResult tr1 = deformation_transfer(f1);
    REQUIRE(tr1.model_deformation.space()->dim() == 2);
    const MultiMap& m11 = tr1.model_deformation.component(1, 1);
    REQUIRE_FALSE(m11.is_zero());
    auto hx = *tr1.model_deformation.space()->index_of("h0_0_0");
    auto hy = *tr1.model_deformation.space()->index_of("h1_0_0");
    CHECK(m11.entry({hx}) == LinComb::basis(q, hy));

    // F2: m̄_1^2 nonzero, m̄_1^1 zero
    FormalBigradedDeformation f2 = fixture_f2(q);
    DeformedTransferResult tr2 = deformation_transfer(f2);
    CHECK(tr2.model_deformation.component(1, 1).is_zero());
    CHECK_FALSE(tr2.model_deformation.component(1, 2).is_zero());

    for (auto* tr : {&trc, &tr1, &tr2}) {
        CHECK(check_deformation(tr->model_deformation).ok());
    }
}

TEST_CASE("deformation transfer passes checks and quasi-iso on the corpus") {
    Rng rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        CorpusOptions opt;
        opt.field = trial % 2 ? Field::rationals() : Field::prime(101);
        opt.max_dim = 7;
        opt.unitary = trial % 5 == 0;
        FormalBigradedDeformation d = random_deformation(rng, opt);
        DeformedTransferResult tr = deformation_transfer(d);
        CHECK(check_deformation(tr.model_deformation).ok());
        DeformedMorphism mor = tr.morphism_into(d);
        CHECK(check_deformed_morphism(mor).ok());
        CHECK(verify_quasi_iso(d, tr).ok());
        // bidegree audit over every produced component
        int st = d.s_type();
        for (const auto& [key, comp] : tr.model_deformation.higher())
            CHECK(comp.bidegree() == deformation_bidegree(st, key.first, key.second));
        for (const auto& [key, comp] : tr.morphism)
            CHECK(comp.bidegree() ==
                  morphism_bidegree(st, key.first) + Bidegree{key.second, -key.second});
    }
}

TEST_CASE("identical inputs produce bit-identical transfers") {
    Rng rng1(99), rng2(99);
    CorpusOptions opt;
    opt.field = Field::prime(101);
    for (int trial = 0; trial < 10; ++trial) {
        FormalBigradedDeformation d1 = random_deformation(rng1, opt);
        FormalBigradedDeformation d2 = random_deformation(rng2, opt);
        REQUIRE(d1 == d2);
        DeformedTransferResult t1 = deformation_transfer(d1);
        DeformedTransferResult t2 = deformation_transfer(d2);
        CHECK(t1.model_deformation == t2.model_deformation);
        CHECK(t1.morphism.size() == t2.morphism.size());
        CHECK(t1.witness_log == t2.witness_log);
    }
}
