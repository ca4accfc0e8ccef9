#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ainfss/corpus.hpp"
#include "ainfss/deform.hpp"

using namespace ainfss;

TEST_CASE("constant deformations of valid bases are valid") {
    Field q = Field::rationals();
    FormalBigradedDeformation d(truncated_polynomial(q, 4));
    CHECK(check_deformation(d).ok());
}

TEST_CASE("F1 is a valid deformation and illegal bidegrees are rejected") {
    Field q = Field::rationals();
    FormalBigradedDeformation d = fixture_f1(q);
    CHECK(check_deformation(d).ok());

    // m_1^1 y = x has bidegree (-1,0), not the required (1,0)
    MultiMap bad(d.space(), d.space(), 1, deformation_bidegree(0, 1, 1));
    CHECK_THROWS_AS(bad.set_entry({*d.space()->index_of("y")},
                                  LinComb::basis(q, *d.space()->index_of("x"))),
                    validation_error);
}

TEST_CASE("a deformation violating the order-composed identities is flagged") {
    Field q = Field::rationals();
    // x -> y at order 1 and y -> z at order 1: SI(1) fails at ħ-order 2
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {1, 0}}, {"z", {2, 0}}});
    FormalBigradedDeformation d{AInfinityAlgebra(sp, 0)};
    MultiMap m11(sp, sp, 1, deformation_bidegree(0, 1, 1));
    m11.set_entry({0}, LinComb::basis(q, 1));
    m11.set_entry({1}, LinComb::basis(q, 2));
    d.set_component(1, m11);
    Report rep = check_deformation(d);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.issues[0].find("ħ-order 2") != std::string::npos);
}

TEST_CASE("reduce_mod truncates the ħ-orders") {
    Field q = Field::rationals();
    FormalBigradedDeformation f2 = fixture_f2(q);
    FormalBigradedDeformation r0 = reduce_mod(f2, 0);
    CHECK(r0.base() == f2.base());
    CHECK(r0.higher().empty());
    CHECK(r0.truncation() == 0);
    FormalBigradedDeformation r1 = reduce_mod(f2, 1);
    CHECK(r1.max_order() == 0);  // the only component lives at order 2
    CHECK(r1.base().maps().empty());
    FormalBigradedDeformation rbig = reduce_mod(f2, 100);
    CHECK(rbig.base() == f2.base());
    CHECK(rbig.higher() == f2.higher());
    CHECK(check_deformation(r1).ok());
}

TEST_CASE("reductions of valid deformations stay valid") {
    Rng rng(13);
    CorpusOptions opt;
    opt.field = Field::prime(101);
    for (int trial = 0; trial < 25; ++trial) {
        FormalBigradedDeformation d = random_deformation(rng, opt);
        REQUIRE(check_deformation(d).ok());
        for (int cut = 0; cut <= d.max_order(); ++cut) CHECK(check_deformation(reduce_mod(d, cut)).ok());
    }
}

TEST_CASE("rees and associated graded on the shift presentation") {
    Field q = Field::rationals();
    // shift-0 only: the Rees deformation is constant
    FilteredAInfinity constant(FormalBigradedDeformation(truncated_polynomial(q, 3)));
    FormalBigradedDeformation re = rees(constant);
    CHECK(re.max_order() == 0);
    CHECK(re.base() == associated_graded(constant));

    // F1 as filtered: the shift-1 differential becomes the ħ^1 component
    FilteredAInfinity f1filt = specialize_hbar_one(fixture_f1(q));
    FormalBigradedDeformation back = rees(f1filt);
    CHECK(back == fixture_f1(q));
    CHECK(associated_graded(f1filt).maps().empty());

    // the unit is preserved through the construction
    Rng rng(3);
    CorpusOptions opt;
    opt.field = q;
    opt.unitary = true;
    FilteredAInfinity uf = random_filtered(rng, opt);
    REQUIRE(uf.unit().has_value());
    CHECK(rees(uf).base().unit() == uf.unit());
    CHECK(associated_graded(uf).unit() == uf.unit());
}

TEST_CASE("specialization at ħ = 1 satisfies the filtered compatibility") {
    Field q = Field::rationals();
    FilteredAInfinity filt = specialize_hbar_one(fixture_f1(q));
    CHECK(check_filtered(filt).ok());
    // the compatibility in explicit form: every component raises the total
    // filtration by its shift, never lowering it
    for (const auto& [key, comp] : filt.rep().higher()) CHECK(key.second >= 1);

    CHECK_THROWS_AS(specialize_hbar_one(FormalBigradedDeformation(
                        AInfinityAlgebra(make_space(q, {{"x", {0, 0}}}), 1))),
                    validation_error);
}

TEST_CASE("rees round trip is the identity on the corpus") {
    Field q = Field::rationals();
    CHECK(rees_roundtrip_check(FormalBigradedDeformation(truncated_polynomial(q, 4))));
    CHECK(rees_roundtrip_check(fixture_f1(q)));
    CHECK(rees_roundtrip_check(fixture_f2(q)));
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        CorpusOptions opt;
        opt.field = trial % 2 ? Field::rationals() : Field::prime(101);
        FormalBigradedDeformation d = random_deformation(rng, opt);
        CHECK(rees_roundtrip_check(d));
        // and the graded algebra of the specialization is the base
        CHECK(associated_graded(specialize_hbar_one(d)) == d.base());
    }
}

TEST_CASE("ħ-order support bound on the corpus") {
    Rng rng(31);
    CorpusOptions opt;
    opt.field = Field::prime(101);
    for (int trial = 0; trial < 40; ++trial) {
        FormalBigradedDeformation d = random_deformation(rng, opt);
        CHECK(d.max_order() <= d.space()->p_width());
    }
}

TEST_CASE("deformed morphism identities at every order") {
    Field q = Field::rationals();
    FormalBigradedDeformation f1 = fixture_f1(q);
    DeformedMorphism id(&f1, &f1);
    id.set_component(0, MultiMap::identity(f1.space()));
    CHECK(check_deformed_morphism(id).ok());

    // a morphism missing the order-1 correction fails MI(1) at ħ-order 1
    FormalBigradedDeformation constant(f1.base());
    DeformedMorphism broken(&constant, &f1);
    broken.set_component(0, MultiMap::identity(f1.space()));
    Report rep = check_deformed_morphism(broken, 1, 1);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.issues[0].find("ħ-order 1") != std::string::npos);
}
