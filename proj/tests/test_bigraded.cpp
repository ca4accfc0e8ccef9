#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ainfss/bigraded.hpp"
#include "ainfss/corpus.hpp"
#include "ainfss/multimap.hpp"

using namespace ainfss;

namespace {

SpacePtr three_term_space(const Field& f) {
    return make_space(f, {{"x", {0, 0}}, {"y", {0, 1}}, {"z", {3, -1}}});
}

}  // namespace

TEST_CASE("space bookkeeping rejects bad input") {
    Field q = Field::rationals();
    CHECK_THROWS_AS(make_space(q, {{"x", {0, 0}}, {"x", {0, 1}}}), validation_error);
    SpacePtr sp = three_term_space(q);
    CHECK(sp->dim() == 3);
    CHECK(sp->at({0, 1}).size() == 1);
    CHECK(sp->at({5, 5}).empty());
    CHECK(sp->p_width() == 3);
    CHECK(sp->total_width() == 2);
}

TEST_CASE("maps must respect their declared bidegree") {
    Field q = Field::rationals();
    SpacePtr sp = three_term_space(q);
    BigradedMap d(sp, sp, {0, 1});
    d.set_image(*sp->index_of("x"), LinComb::basis(q, *sp->index_of("y")));
    CHECK_THROWS_AS(d.set_image(*sp->index_of("y"), LinComb::basis(q, *sp->index_of("x"))),
                    validation_error);
}

TEST_CASE("check_square_zero reports the failing bidegree") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {0, 1}}, {"z", {0, 2}}});
    BigradedMap zero(sp, sp, {0, 1});
    CHECK(check_square_zero(zero).ok());

    BigradedMap d(sp, sp, {0, 1});
    d.set_image(0, LinComb::basis(q, 1));
    CHECK(check_square_zero(d).ok());

    d.set_image(1, LinComb::basis(q, 2));  // x -> y -> z breaks square zero
    Report rep = check_square_zero(d);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].find("\"x\"") != std::string::npos);
    CHECK(rep.issues[0].find("0,0") != std::string::npos);
}

TEST_CASE("cohomology of the zero differential is the identity section") {
    Field q = Field::rationals();
    SpacePtr sp = three_term_space(q);
    CohomologyData coh = cohomology_with_section(BigradedMap(sp, sp, {0, 1}));
    CHECK(coh.H->dim() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(coh.f1.image(i) == LinComb::basis(q, i));
}

TEST_CASE("cohomology of a two-term differential vanishes") {
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"x", {0, 0}}, {"y", {0, 1}}});
    BigradedMap d(sp, sp, {0, 1});
    d.set_image(0, LinComb::basis(q, 1));
    CohomologyData coh = cohomology_with_section(d);
    CHECK(coh.H->dim() == 0);
}

TEST_CASE("cohomology keeps the spectator class at its bidegree") {
    Field q = Field::rationals();
    SpacePtr sp = three_term_space(q);
    BigradedMap d(sp, sp, {0, 1});
    d.set_image(*sp->index_of("x"), LinComb::basis(q, *sp->index_of("y")));
    CohomologyData coh = cohomology_with_section(d);
    REQUIRE(coh.H->dim() == 1);
    CHECK(coh.H->element(0).deg == Bidegree{3, -1});
    CHECK(coh.H->element(0).name == "h3_-1_0");
    CHECK(coh.f1.image(0) == LinComb::basis(q, *sp->index_of("z")));
}

TEST_CASE("rank-nullity audit of the cohomology slices") {
    Rng rng(5);
    CorpusOptions opt;
    opt.field = Field::prime(101);
    for (int trial = 0; trial < 50; ++trial) {
        AInfinityAlgebra a = random_algebra(rng, opt);
        BigradedMap d = as_linear(a.map(1));
        CohomologyData coh = cohomology_with_section(d);
        for (const Bidegree& deg : a.space()->support()) {
            Matrix here = d.block(deg);
            Matrix prev = d.block(deg - d.bidegree());
            std::size_t h = coh.H->at(deg).size();
            CHECK(h == kernel_basis(here).size() - rank(prev));
        }
        // f1 injective, pi surjective, (id - f1 pi) lands in Im(d)
        for (std::size_t i = 0; i < coh.H->dim(); ++i) {
            LinComb rep = coh.f1.image(i);
            CHECK(coh.project(rep, *a.space()) == LinComb::basis(opt.field, i));
        }
    }
}

TEST_CASE("(id - f1 pi) maps kernel elements into the image") {
    Field q = Field::rationals();
    Rng rng(11);
    CorpusOptions opt;
    opt.field = q;
    for (int trial = 0; trial < 25; ++trial) {
        AInfinityAlgebra a = random_algebra(rng, opt);
        BigradedMap d = as_linear(a.map(1));
        CohomologyData coh = cohomology_with_section(d);
        for (const Bidegree& deg : a.space()->support()) {
            Matrix block = d.block(deg);
            Matrix prev = d.block(deg - d.bidegree());
            Solver image(prev);
            const auto& idx = a.space()->at(deg);
            for (const Vec& kv : kernel_basis(block)) {
                LinComb z;
                for (std::size_t i = 0; i < idx.size(); ++i) z.add(idx[i], kv[i]);
                LinComb cls = coh.project(z, *a.space());
                LinComb lift;
                for (const auto& [h, c] : cls.terms()) lift = lift + coh.f1.image(h) * c;
                LinComb residue = z + (-lift);
                Vec dense(idx.size(), Scalar::zero(q));
                std::map<std::size_t, std::size_t> pos;
                for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
                for (const auto& [i, c] : residue.terms()) dense[pos.at(i)] = c;
                CHECK(image.contains(dense));
            }
        }
    }
}

TEST_CASE("map composition is associative and adds bidegrees") {
    Field f = Field::prime(101);
    Rng rng(3);
    SpacePtr sp = make_space(f, {{"a", {0, 0}}, {"b", {1, 0}}, {"c", {2, 0}}, {"d", {3, 0}}});
    auto random_map = [&](Bidegree bd) {
        BigradedMap m(sp, sp, bd);
        for (std::size_t i = 0; i < sp->dim(); ++i) {
            Bidegree tdeg = sp->element(i).deg + bd;
            const auto& tgt = sp->at(tdeg);
            if (tgt.empty()) continue;
            LinComb img;
            img.add(tgt[rng.below(tgt.size())], Scalar::of_int(f, rng.range(-3, 3)));
            m.set_image(i, img);
        }
        return m;
    };
    for (int trial = 0; trial < 50; ++trial) {
        BigradedMap g1 = random_map({1, 0}), g2 = random_map({1, 0}), g3 = random_map({1, 0});
        BigradedMap left = g3.compose(g2).compose(g1);
        BigradedMap right = g3.compose(g2.compose(g1));
        CHECK(left.bidegree() == Bidegree{3, 0});
        for (std::size_t i = 0; i < sp->dim(); ++i) CHECK(left.image(i) == right.image(i));
    }
}
