#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ainfss/cli.hpp"
#include "ainfss/corpus.hpp"
#include "ainfss/json_io.hpp"

using namespace ainfss;

#ifndef FIXTURE_DIR
#define FIXTURE_DIR "tests/fixtures"
#endif

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return std::string(BUILD_TMP_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("documents round-trip through the canonical form") {
    for (const char* name : {"f1.json", "f2.json", "f3.json", "filtered_f2.json", "corrupted.json",
                             "filtered_unitary.json"}) {
        std::string text = slurp(fixture(name));
        AlgebraDocument doc = parse_document(text);
        CHECK(serialize_document(doc) == text);
    }
    // random documents: parse ∘ serialize = identity
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        CorpusOptions opt;
        opt.field = trial % 2 ? Field::rationals() : Field::prime(101);
        AlgebraDocument doc = document_from(random_deformation(rng, opt));
        std::string text = serialize_document(doc);
        AlgebraDocument back = parse_document(text);
        CHECK(back.value == doc.value);
        CHECK(serialize_document(back) == text);
    }
}

TEST_CASE("parse rejects malformed and non-canonical documents") {
    std::string good = slurp(fixture("f1.json"));

    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string text = good;
        auto pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, from.size(), to);
        return text;
    };

    CHECK_THROWS_AS(parse_document("{"), validation_error);
    CHECK_THROWS_AS(parse_document(corrupt("\"y\",\n          \"1\"", "\"z\",\n          \"1\"")),
                    validation_error);  // undeclared name
    CHECK_THROWS_AS(parse_document(corrupt("\"1\"", "\"2/4\"")), validation_error);
    CHECK_THROWS_AS(parse_document(corrupt("\"s_type\": 0", "\"s_type\": 0,\n  \"extra\": 1")),
                    validation_error);  // unknown field
    CHECK_THROWS_AS(parse_document(corrupt("\"kind\": \"deformation\"", "\"kind\": \"mystery\"")),
                    validation_error);
}

TEST_CASE("check: valid fixtures pass, the corrupted one names SI(3)") {
    CHECK(run({"check", fixture("f1.json")}).code == 0);
    CHECK(run({"check", fixture("f3.json")}).code == 0);
    CHECK(run({"check", fixture("filtered_unitary.json")}).code == 0);
    CliRun bad = run({"check", fixture("corrupted.json")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("SI(3)") != std::string::npos);
    CHECK(run({"check", fixture("missing.json")}).code == 2);
}

TEST_CASE("cohomology prints the dimension table") {
    CliRun r = run({"cohomology", fixture("f3.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"0,1\": 3") != std::string::npos);
    CHECK(r.out.find("\"0,2\": 2") != std::string::npos);
}

TEST_CASE("transfer writes a model document that checks out") {
    std::string out_path = temp_path("f3_model.json");
    CliRun r = run({"transfer", fixture("f3.json"), "--out", out_path});
    REQUIRE(r.code == 0);
    AlgebraDocument model = parse_document(slurp(out_path));
    CHECK(model.kind == AlgebraDocument::Kind::algebra);
    CHECK(check_stasheff(model.algebra()).ok());
    CHECK(model.algebra().is_minimal());
    CHECK(model.algebra().has_map(3));  // the Massey triple product survives

    std::string dout = temp_path("f1_model.json");
    REQUIRE(run({"transfer", fixture("f1.json"), "--out", dout}).code == 0);
    AlgebraDocument dmodel = parse_document(slurp(dout));
    CHECK(dmodel.kind == AlgebraDocument::Kind::deformation);
    CHECK(check_deformation(dmodel.deformation()).ok());
}

TEST_CASE("pages and compare: the two routes agree on f2") {
    std::string a = temp_path("f2_filt.json"), b = temp_path("f2_diter.json");
    REQUIRE(run({"pages", fixture("f2.json"), "--route", "filtration", "--r-max", "4", "--out", a}).code == 0);
    REQUIRE(run({"pages", fixture("f2.json"), "--route", "d-iter", "--r-max", "4", "--out", b}).code == 0);
    CliRun cmp = run({"compare", a, b, "--r-max", "4"});
    CHECK(cmp.code == 0);

    // a genuinely different pair is reported as a mismatch
    std::string c = temp_path("f1_filt.json");
    REQUIRE(run({"pages", fixture("f1.json"), "--route", "filtration", "--r-max", "4", "--out", c}).code == 0);
    CHECK(run({"compare", a, c}).code == 1);

    // page reports round-trip
    PageSet ps = parse_pages(slurp(a));
    CHECK(serialize_pages(ps) == slurp(a));
}

TEST_CASE("einf prints the stable table") {
    CliRun r = run({"einf", fixture("filtered_f2.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("{}") != std::string::npos);  // F2 collapses to zero
    CHECK(run({"einf", fixture("f3.json")}).code == 2);
}

TEST_CASE("selftest is deterministic for a fixed seed") {
    CliRun a = run({"selftest", "--seed", "11"});
    CliRun b = run({"selftest", "--seed", "11"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CliRun c = run({"selftest", "--seed", "12"});
    CHECK(c.code == 0);
    CHECK(a.out != c.out);  // corpora differ with the seed
}

TEST_CASE("unknown commands and missing options exit with code 2") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"transfer", fixture("f1.json")}).code == 2);
    CHECK(run({"compare", fixture("f1.json")}).code == 2);
}
