#include "ainfss/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ainfss/corpus.hpp"
#include "ainfss/json_io.hpp"

namespace ainfss {

namespace {

constexpr std::uint64_t kDefaultSeed = 0x41494e46u;  // selftest default

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write " + path);
    out << text;
}

struct Args {
    std::string command;
    std::vector<std::string> positional;
    std::map<std::string, std::string> options;

    static Args parse(const std::vector<std::string>& argv) {
        Args a;
        if (argv.empty()) throw validation_error("usage: ainfss <command> [args]");
        a.command = argv[0];
        for (std::size_t i = 1; i < argv.size(); ++i) {
            const std::string& s = argv[i];
            if (s.rfind("--", 0) == 0) {
                if (i + 1 >= argv.size()) throw validation_error("option " + s + " needs a value");
                a.options[s.substr(2)] = argv[++i];
            } else {
                a.positional.push_back(s);
            }
        }
        return a;
    }

    std::string option_or(const std::string& key, const std::string& fallback) const {
        auto it = options.find(key);
        return it == options.end() ? fallback : it->second;
    }
};

Report structure_report(const AlgebraDocument& doc) {
    switch (doc.kind) {
        case AlgebraDocument::Kind::algebra: return check_stasheff(doc.algebra());
        case AlgebraDocument::Kind::deformation: return check_deformation(doc.deformation());
        case AlgebraDocument::Kind::filtered: return check_filtered(doc.filtered());
    }
    return {};
}

int cmd_check(const Args& a, std::ostream& out) {
    AlgebraDocument doc = parse_document(read_file(a.positional.at(0)));
    Report rep = structure_report(doc);
    if (rep.ok()) {
        out << "ok: " << AlgebraDocument::kind_name(doc.kind) << " satisfies its structure laws\n";
        return 0;
    }
    out << rep.to_string();
    return 1;
}

int cmd_cohomology(const Args& a, std::ostream& out) {
    AlgebraDocument doc = parse_document(read_file(a.positional.at(0)));
    const AInfinityAlgebra& base = doc.value.base();
    CohomologyData coh = cohomology_with_section(as_linear(base.map(1)), base.unit());
    nlohmann::ordered_json j;
    j["dims"] = nlohmann::ordered_json::object();
    for (const auto& [deg, n] : coh.H->dims()) j["dims"][deg.to_string()] = n;
    j["classes"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < coh.H->dim(); ++i) {
        const auto& e = coh.H->element(i);
        j["classes"].push_back({e.name, coh.f1.image(i).to_string(*base.space())});
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_transfer(const Args& a, std::ostream& out) {
    AlgebraDocument doc = parse_document(read_file(a.positional.at(0)));
    std::string out_path = a.option_or("out", "");
    if (out_path.empty()) throw validation_error("transfer needs --out <file>");
    Report valid = structure_report(doc);
    if (!valid.ok()) {
        out << valid.to_string();
        return 1;
    }
    std::string serialized;
    std::vector<std::string> log;
    if (doc.kind == AlgebraDocument::Kind::algebra) {
        TransferResult tr = kadeishvili_transfer(doc.algebra());
        log = tr.witness_log;
        serialized = serialize_document(document_from(tr.model));
    } else {
        FormalBigradedDeformation input =
            doc.kind == AlgebraDocument::Kind::filtered ? rees(doc.filtered()) : doc.deformation();
        DeformedTransferResult tr = deformation_transfer(input);
        log = tr.witness_log;
        serialized = serialize_document(document_from(tr.model_deformation));
    }
    write_file(out_path, serialized);
    for (const auto& l : log) out << l << "\n";
    out << "model written to " << out_path << "\n";
    return 0;
}

PageSet pages_for(const AlgebraDocument& doc, const std::string& route, int r_max) {
    if (route == "filtration") {
        FilteredAInfinity filt = doc.kind == AlgebraDocument::Kind::filtered
                                     ? doc.filtered()
                                     : specialize_hbar_one(doc.deformation());
        return pages_from_filtration(filt, r_max);
    }
    FormalBigradedDeformation input =
        doc.kind == AlgebraDocument::Kind::filtered ? rees(doc.filtered()) : doc.deformation();
    if (route == "d-iter") return pages_from_deformation(input, r_max, PageRoute::d_iteration).pages;
    if (route == "enhance") return pages_from_deformation(input, r_max, PageRoute::enhancement).pages;
    throw validation_error("unknown route \"" + route + "\" (filtration | d-iter | enhance)");
}

int cmd_pages(const Args& a, std::ostream& out) {
    AlgebraDocument doc = parse_document(read_file(a.positional.at(0)));
    int r_max = std::stoi(a.option_or("r-max", "4"));
    PageSet ps = pages_for(doc, a.option_or("route", "filtration"), r_max);
    std::string text = serialize_pages(ps);
    std::string out_path = a.option_or("out", "");
    if (out_path.empty())
        out << text;
    else {
        write_file(out_path, text);
        out << "pages written to " << out_path << "\n";
    }
    return 0;
}

int cmd_compare(const Args& a, std::ostream& out) {
    PageSet p1 = parse_pages(read_file(a.positional.at(0)));
    PageSet p2 = parse_pages(read_file(a.positional.at(1)));
    int r_max = std::stoi(a.option_or("r-max", "0"));
    auto trim = [&](PageSet& ps) {
        if (r_max > 0 && ps.last() > r_max && r_max >= ps.start)
            ps.pages.resize(static_cast<std::size_t>(r_max - ps.start + 1));
    };
    trim(p1);
    trim(p2);
    Report rep = compare_pages(p1, p2);
    if (rep.ok()) {
        out << "ok: page tables agree\n";
        return 0;
    }
    out << rep.to_string();
    return 1;
}

int cmd_einf(const Args& a, std::ostream& out) {
    AlgebraDocument doc = parse_document(read_file(a.positional.at(0)));
    if (doc.kind == AlgebraDocument::Kind::algebra)
        throw validation_error("einf needs a deformation or filtered document");
    PageSet ps = pages_for(doc, doc.kind == AlgebraDocument::Kind::filtered ? "filtration" : "d-iter", 1);
    nlohmann::ordered_json j;
    for (const auto& [deg, n] : ps.einf) j[deg.to_string()] = n;
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_selftest(const Args& a, std::ostream& out) {
    std::uint64_t seed = kDefaultSeed;
    if (const char* env = std::getenv("AINFSS_SEED")) seed = std::strtoull(env, nullptr, 10);
    if (a.options.count("seed")) seed = std::strtoull(a.options.at("seed").c_str(), nullptr, 10);
    out << "selftest seed " << seed << "\n";
    Rng rng(seed);
    bool all_ok = true;
    auto verdict = [&](const std::string& name, bool ok) {
        out << "  " << name << ": " << (ok ? "pass" : "FAIL") << "\n";
        all_ok = all_ok && ok;
    };

    for (int i = 0; i < 12; ++i) {
        CorpusOptions opt;
        opt.field = (i % 2 == 0) ? Field::prime(101) : Field::rationals();
        opt.max_dim = 8;
        opt.unitary = (i % 4 == 3);
        AInfinityAlgebra alg = random_algebra(rng, opt);
        bool si = check_stasheff(alg).ok();
        bool bar = bar_square_check(alg).ok();
        TransferResult tr = kadeishvili_transfer(alg);
        AInfinityMorphism mor = tr.morphism_into(alg);
        bool model_ok = tr.model.is_minimal() && check_stasheff(tr.model).ok() && check_morphism(mor).ok();
        verdict("algebra " + std::to_string(i) + " (" + opt.field.to_string() + ", dim " +
                    std::to_string(alg.space()->dim()) + ")",
                si && bar && model_ok);
    }

    for (int i = 0; i < 6; ++i) {
        CorpusOptions opt;
        opt.field = (i % 2 == 0) ? Field::prime(101) : Field::rationals();
        opt.max_dim = 6;
        FormalBigradedDeformation d = random_deformation(rng, opt);
        bool valid = check_deformation(d).ok();
        bool roundtrip = rees_roundtrip_check(d);
        DeformedTransferResult tr = deformation_transfer(d);
        bool transferred = check_deformation(tr.model_deformation).ok() && verify_quasi_iso(d, tr).ok();
        PageSet filt = pages_from_filtration(specialize_hbar_one(d), 4);
        PageSet dit = pages_from_deformation(d, 4, PageRoute::d_iteration).pages;
        bool agree = compare_pages(filt, dit).ok();
        bool converges = weak_convergence_check(d).ok();
        verdict("deformation " + std::to_string(i) + " (" + opt.field.to_string() + ", dim " +
                    std::to_string(d.space()->dim()) + ")",
                valid && roundtrip && transferred && agree && converges);
    }

    for (int i = 0; i < 4; ++i) {
        CorpusOptions opt;
        opt.field = (i % 2 == 0) ? Field::prime(101) : Field::rationals();
        opt.max_dim = 6;
        opt.unitary = (i >= 2);
        FilteredAInfinity filt = random_filtered(rng, opt);
        PageSet a_pages = pages_from_filtration(filt, 4);
        PageSet b_pages = pages_from_deformation(rees(filt), 4, PageRoute::enhancement).pages;
        verdict("filtered " + std::to_string(i) + " (" + opt.field.to_string() + ", dim " +
                    std::to_string(filt.space()->dim()) + ")",
                compare_pages(a_pages, b_pages).ok());
    }

    out << (all_ok ? "selftest: PASS" : "selftest: FAIL") << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        Args a = Args::parse(args);
        auto need = [&](std::size_t n) {
            if (a.positional.size() != n)
                throw validation_error(a.command + " takes " + std::to_string(n) + " file argument(s)");
        };
        if (a.command == "check") {
            need(1);
            return cmd_check(a, out);
        }
        if (a.command == "cohomology") {
            need(1);
            return cmd_cohomology(a, out);
        }
        if (a.command == "transfer") {
            need(1);
            return cmd_transfer(a, out);
        }
        if (a.command == "pages") {
            need(1);
            return cmd_pages(a, out);
        }
        if (a.command == "compare") {
            need(2);
            return cmd_compare(a, out);
        }
        if (a.command == "einf") {
            need(1);
            return cmd_einf(a, out);
        }
        if (a.command == "selftest") {
            need(0);
            return cmd_selftest(a, out);
        }
        throw validation_error("unknown command \"" + a.command +
                               "\" (check | cohomology | transfer | pages | compare | einf | selftest)");
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ainfss
