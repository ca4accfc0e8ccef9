#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ainfss/ainf.hpp"
#include "ainfss/corpus.hpp"
#include "ainfss/transfer.hpp"

using namespace ainfss;

namespace {

/* k[x]/(x^4): the smallest fixture where an asymmetric product corruption
 * breaks associativity. */
AInfinityAlgebra poly4(const Field& f) { return truncated_polynomial(f, 4); }

AInfinityAlgebra corrupt_poly4(const Field& f) {
    AInfinityAlgebra a = poly4(f);
    MultiMap mu = a.map(2);
    LinComb neg;
    neg.add(*a.space()->index_of("x3"), -Scalar::one(f));
    mu.set_entry({*a.space()->index_of("x1"), *a.space()->index_of("x2")}, neg);
    AInfinityAlgebra bad(a.space(), 0);
    bad.set_map(mu);
    return bad;
}

}  // namespace

TEST_CASE("SI(1) is the square-zero condition") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {0, 1}}, {"z", {0, 2}}});
    AInfinityAlgebra a(sp, 0);
    MultiMap m1(sp, sp, 1, {0, 1});
    m1.set_entry({0}, LinComb::basis(q, 1));
    m1.set_entry({1}, LinComb::basis(q, 2));
    a.set_map(m1);
    MultiMap defect = si_defect(a, 1);
    REQUIRE(defect.entries().size() == 1);
    CHECK(defect.entry({0}) == LinComb::basis(q, 2));  // m1(m1(x)) = z
}

TEST_CASE("SI(3) of a dg algebra is the associativity defect") {
    Field q = Field::rationals();
    AInfinityAlgebra bad = corrupt_poly4(q);
    // only m2 present: SI(3) = m2(m2 ⊗ id) - m2(id ⊗ m2) up to the sign rule
    MultiMap defect = si_defect(bad, 3);
    std::vector<std::size_t> key{*bad.space()->index_of("x1"), *bad.space()->index_of("x1"),
                                 *bad.space()->index_of("x1")};
    LinComb expect;
    expect.add(*bad.space()->index_of("x3"), Scalar::of_int(q, 2));
    CHECK(defect.entry(key) == expect);
    CHECK(si_defect(poly4(q), 3).is_zero());
}

TEST_CASE("zero structure has vanishing defects at all arities") {
    Field q = Field::rationals();
    AInfinityAlgebra a(make_space(q, {{"x", {0, 0}}, {"y", {1, 2}}}), 0);
    for (int n = 1; n <= a.arity_bound(); ++n) CHECK(si_defect(a, n).is_zero());
}

TEST_CASE("check_stasheff flags the corrupted product at n = 3") {
    Field q = Field::rationals();
    Report rep = check_stasheff(corrupt_poly4(q));
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.issues[0].find("SI(3)") != std::string::npos);
    CHECK(check_stasheff(poly4(q)).ok());
}

TEST_CASE("declared arities above the automatic bound are flagged") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 1}}, {"y", {0, 2}}});
    AInfinityAlgebra a(sp, 0);  // bound = 1 + 3 = 4
    CHECK(a.arity_bound() == 4);
    MultiMap m5(sp, sp, 5, structure_bidegree(0, 5));
    m5.set_entry({0, 0, 0, 0, 0}, LinComb::basis(q, 1));  // (0,5) bidegree admissible
    a.set_map(m5);
    Report rep = check_stasheff(a);
    bool flagged = false;
    for (const auto& s : rep.issues) flagged = flagged || s.find("exceeds the arity bound") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("morphism identities: strict identity and broken chain map") {
    Field q = Field::rationals();
    AInfinityAlgebra a = poly4(q);
    AInfinityMorphism id;
    id.source = &a;
    id.target = &a;
    id.components.emplace(1, MultiMap::identity(a.space()));
    CHECK(check_morphism(id).ok());

    // f1 that is not a chain map: defect at n = 1 is f1∘m̄1 - m1∘f1
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {0, 1}}});
    AInfinityAlgebra src(sp, 0);  // zero differential
    AInfinityAlgebra tgt(sp, 0);
    MultiMap m1(sp, sp, 1, {0, 1});
    m1.set_entry({0}, LinComb::basis(q, 1));
    tgt.set_map(m1);
    AInfinityMorphism f;
    f.source = &src;
    f.target = &tgt;
    f.components.emplace(1, MultiMap::identity(sp));
    MultiMap defect = mi_defect(f, 1);
    LinComb expect;
    expect.add(1, -Scalar::one(q));  // -(m1∘f1)(x) with our LHS - RHS convention
    CHECK(defect.entry({0}) == expect);
    CHECK_FALSE(check_morphism(f).ok());
}

TEST_CASE("bar square agrees with the Stasheff checker") {
    // fixed fixtures
    for (Field f : {Field::rationals(), Field::prime(101), Field::prime(2)}) {
        CHECK(bar_square_check(poly4(f)).ok());
        CHECK(bar_square_check(massey_fixture(f)).ok());
        Report si = check_stasheff(corrupt_poly4(f));
        Report bar = bar_square_check(corrupt_poly4(f));
        CHECK(si.ok() == bar.ok());  // char 2 masks this corruption in both
    }
    // random corpus, both fields
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        CorpusOptions opt;
        opt.field = trial % 2 ? Field::rationals() : Field::prime(101);
        opt.max_dim = 7;
        opt.unitary = trial % 5 == 0;
        AInfinityAlgebra a = random_algebra(rng, opt);
        CHECK(check_stasheff(a).ok());
        CHECK(bar_square_check(a).ok());
    }
}

TEST_CASE("bar square flags exactly where check_stasheff flags") {
    Field q = Field::rationals();
    AInfinityAlgebra bad = corrupt_poly4(q);
    Report si = check_stasheff(bad);
    Report bar = bar_square_check(bad);
    REQUIRE_FALSE(si.ok());
    REQUIRE_FALSE(bar.ok());
    // same arity, same count of flagged tuples
    CHECK(si.issues.size() == bar.issues.size());
    for (const auto& s : bar.issues) CHECK(s.find("arity 3") != std::string::npos);
}

TEST_CASE("si_defect bidegree bookkeeping") {
    Rng rng(17);
    CorpusOptions opt;
    opt.field = Field::prime(101);
    for (int trial = 0; trial < 30; ++trial) {
        AInfinityAlgebra a = random_algebra(rng, opt);
        for (int n = 1; n <= 4; ++n) {
            MultiMap defect = si_defect(a, n);
            CHECK(defect.bidegree() == structure_bidegree(a.s_type(), n) +
                                           Bidegree{a.s_type(), 1 - a.s_type()});
        }
    }
}

TEST_CASE("from_dg accepts lawful data and names the broken law") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 1}}, {"y", {0, 2}}});
    // trivial product, zero differential
    CHECK_NOTHROW(from_dg(BigradedMap(sp, sp, {0, 1}), MultiMap(sp, sp, 2, {0, 0})));

    AInfinityAlgebra p3 = truncated_polynomial(q, 3);
    CHECK(p3.map(2).entry({0, 0}) == LinComb::basis(q, 1));  // m2(x,x) = x^2

    // non-associative mutation is rejected with a witness triple
    SpacePtr sp4 = make_space(q, {{"x1", {0, 1}}, {"x2", {0, 2}}, {"x3", {0, 3}}});
    MultiMap mu(sp4, sp4, 2, {0, 0});
    mu.set_entry({0, 0}, LinComb::basis(q, 1));
    LinComb neg;
    neg.add(2, -Scalar::one(q));
    mu.set_entry({0, 1}, neg);
    mu.set_entry({1, 0}, LinComb::basis(q, 2));
    try {
        from_dg(BigradedMap(sp4, sp4, {0, 1}), mu);
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("associativity fails on (x1,x1,x1)") != std::string::npos);
    }
}

TEST_CASE("strict unit axioms") {
    Field q = Field::rationals();
    Rng rng(23);
    CorpusOptions opt;
    opt.field = q;
    opt.unitary = true;
    for (int trial = 0; trial < 20; ++trial) {
        AInfinityAlgebra a = random_algebra(rng, opt);
        REQUIRE(a.unit().has_value());
        CHECK(check_unit_axioms(a).ok());
        CHECK(check_stasheff(a).ok());
    }
    // a broken unit law is reported
    SpacePtr sp = make_space(q, {{"e", {0, 0}}, {"x", {0, 1}}});
    AInfinityAlgebra a(sp, 0, "e");
    MultiMap mu(sp, sp, 2, {0, 0});
    mu.set_entry({0, 0}, LinComb::basis(q, 0));
    mu.set_entry({0, 1}, LinComb::basis(q, 1));  // e*x = x but x*e missing
    a.set_map(mu);
    CHECK_FALSE(check_unit_axioms(a).ok());
}

TEST_CASE("minimal m2/m3 block satisfies SI in characteristic 2 as well") {
    // signs masked in char 2 must not hide a failure elsewhere
    for (Field f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        Rng rng(67);
        CorpusOptions opt;
        opt.field = f;
        for (int trial = 0; trial < 40; ++trial) {
            AInfinityAlgebra a = random_algebra(rng, opt);
            CHECK(check_stasheff(a).ok());
            CHECK(bar_square_check(a).ok());
        }
    }
}
