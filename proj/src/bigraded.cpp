#include "ainfss/bigraded.hpp"

#include <algorithm>
#include <sstream>

namespace ainfss {

BigradedSpace::BigradedSpace(Field f, std::vector<BasisElement> basis)
    : field_(std::move(f)), basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].name.empty()) throw validation_error("empty basis name");
        if (!index_.emplace(basis_[i].name, i).second)
            throw validation_error("duplicate basis name \"" + basis_[i].name + "\"");
        by_deg_[basis_[i].deg].push_back(i);
    }
}

std::optional<std::size_t> BigradedSpace::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& BigradedSpace::at(const Bidegree& d) const {
    static const std::vector<std::size_t> empty;
    auto it = by_deg_.find(d);
    return it == by_deg_.end() ? empty : it->second;
}

std::map<Bidegree, std::size_t> BigradedSpace::dims() const {
    std::map<Bidegree, std::size_t> out;
    for (const auto& [d, v] : by_deg_) out[d] = v.size();
    return out;
}

std::vector<Bidegree> BigradedSpace::support() const {
    std::vector<Bidegree> out;
    for (const auto& [d, v] : by_deg_) out.push_back(d);
    return out;
}

int BigradedSpace::p_width() const {
    if (basis_.empty()) return 0;
    int lo = basis_[0].deg.p, hi = lo;
    for (const auto& b : basis_) {
        lo = std::min(lo, b.deg.p);
        hi = std::max(hi, b.deg.p);
    }
    return hi - lo;
}

int BigradedSpace::total_width() const {
    if (basis_.empty()) return 0;
    int lo = basis_[0].deg.total(), hi = lo;
    for (const auto& b : basis_) {
        lo = std::min(lo, b.deg.total());
        hi = std::max(hi, b.deg.total());
    }
    return hi - lo;
}

bool BigradedSpace::operator==(const BigradedSpace& o) const {
    if (!(field_ == o.field_) || basis_.size() != o.basis_.size()) return false;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name != o.basis_[i].name || basis_[i].deg != o.basis_[i].deg) return false;
    return true;
}

SpacePtr make_space(Field f, std::vector<BasisElement> basis) {
    return std::make_shared<const BigradedSpace>(std::move(f), std::move(basis));
}

LinComb LinComb::from_dense(const Vec& v) {
    LinComb out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) out.terms_.emplace_back(i, v[i]);
    return out;
}

void LinComb::add(std::size_t i, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const auto& t, std::size_t j) { return t.first < j; });
    if (it != terms_.end() && it->first == i) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {i, c});
    }
}

LinComb LinComb::operator+(const LinComb& o) const {
    LinComb out = *this;
    for (const auto& [i, c] : o.terms_) out.add(i, c);
    return out;
}

LinComb LinComb::operator*(const Scalar& c) const {
    LinComb out;
    if (c.is_zero()) return out;
    for (const auto& [i, s] : terms_) out.terms_.emplace_back(i, s * c);
    return out;
}

LinComb LinComb::operator-() const {
    LinComb out;
    for (const auto& [i, s] : terms_) out.terms_.emplace_back(i, -s);
    return out;
}

Vec LinComb::dense(std::size_t n, const Field& f) const {
    Vec v(n, Scalar::zero(f));
    for (const auto& [i, c] : terms_) v[i] = c;
    return v;
}

std::string LinComb::to_string(const BigradedSpace& sp) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : terms_) {
        os << (first ? "" : " + ") << c.to_string() << "*" << sp.element(i).name;
        first = false;
    }
    return os.str();
}

std::optional<Bidegree> LinComb::homogeneous_bidegree(const BigradedSpace& sp) const {
    if (terms_.empty()) return std::nullopt;
    Bidegree d = sp.element(terms_[0].first).deg;
    for (const auto& [i, c] : terms_)
        if (sp.element(i).deg != d) return std::nullopt;
    return d;
}

BigradedMap::BigradedMap(SpacePtr source, SpacePtr target, Bidegree bidegree)
    : source_(std::move(source)), target_(std::move(target)), bidegree_(bidegree),
      images_(source_->dim()) {}

void BigradedMap::set_image(std::size_t i, LinComb v) {
    for (const auto& [j, c] : v.terms()) {
        Bidegree expect = source_->element(i).deg + bidegree_;
        if (target_->element(j).deg != expect)
            throw validation_error("map image of \"" + source_->element(i).name +
                                   "\" leaves bidegree " + expect.to_string());
    }
    images_[i] = std::move(v);
}

LinComb BigradedMap::apply(const LinComb& v) const {
    LinComb out;
    for (const auto& [i, c] : v.terms())
        for (const auto& [j, d] : images_[i].terms()) out.add(j, c * d);
    return out;
}

bool BigradedMap::is_zero() const {
    return std::all_of(images_.begin(), images_.end(), [](const LinComb& v) { return v.is_zero(); });
}

Matrix BigradedMap::block(const Bidegree& d) const {
    const auto& src = source_->at(d);
    const auto& tgt = target_->at(d + bidegree_);
    Matrix m(source_->field(), tgt.size(), src.size());
    std::map<std::size_t, std::size_t> tgt_pos;
    for (std::size_t r = 0; r < tgt.size(); ++r) tgt_pos[tgt[r]] = r;
    for (std::size_t c = 0; c < src.size(); ++c)
        for (const auto& [j, coef] : images_[src[c]].terms()) m.at(tgt_pos.at(j), c) = coef;
    return m;
}

BigradedMap BigradedMap::compose(const BigradedMap& inner) const {
    if (inner.target_.get() != source_.get() && !(*inner.target_ == *source_))
        throw validation_error("composition source/target mismatch");
    BigradedMap out(inner.source_, target_, inner.bidegree_ + bidegree_);
    for (std::size_t i = 0; i < inner.source_->dim(); ++i) out.set_image(i, apply(inner.image(i)));
    return out;
}

std::string Report::to_string() const {
    std::ostringstream os;
    for (const auto& s : issues) os << s << "\n";
    return os.str();
}

Report check_square_zero(const BigradedMap& d) {
    Report rep;
    if (d.source().get() != d.target().get() && !(*d.source() == *d.target())) {
        rep.add("square-zero check requires an endomap");
        return rep;
    }
    if (d.bidegree().total() != 1) rep.add("differential bidegree " + d.bidegree().to_string() + " has total degree != 1");
    for (std::size_t i = 0; i < d.source()->dim(); ++i) {
        LinComb dd = d.apply(d.image(i));
        if (!dd.is_zero())
            rep.add("d∘d nonzero on \"" + d.source()->element(i).name + "\" at bidegree " +
                    d.source()->element(i).deg.to_string() + ": " + dd.to_string(*d.target()));
    }
    return rep;
}

Subquotient::Subquotient(const Field& f, std::size_t ambient_dim, const std::vector<Vec>& z_basis,
                         const std::vector<Vec>& b_basis, const std::vector<Vec>& preferred) {
    std::vector<Vec> candidates = preferred;
    candidates.insert(candidates.end(), z_basis.begin(), z_basis.end());
    auto chosen = greedy_complement(f, ambient_dim, b_basis, candidates);
    for (auto i : chosen) reps_.push_back(candidates[i]);
    nb_ = b_basis.size();
    std::vector<Vec> cols = reps_;
    cols.insert(cols.end(), b_basis.begin(), b_basis.end());
    solver_.emplace(Matrix::from_columns(f, ambient_dim, cols));
}

Vec Subquotient::coords(const Vec& v) const {
    auto x = solver_->solve(v);
    if (!x) throw internal_error("subquotient coordinate solve: vector not in Z");
    return Vec(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(reps_.size()));
}

CohomologyData cohomology_with_section(const BigradedMap& d, std::optional<std::size_t> unit) {
    Report sq = check_square_zero(d);
    if (!sq.ok()) throw validation_error("not a differential:\n" + sq.to_string());
    const BigradedSpace& A = *d.source();
    const Field& f = A.field();

    std::map<Bidegree, Subquotient> slices;
    std::vector<BasisElement> h_basis;
    std::vector<std::pair<Bidegree, std::size_t>> h_origin;  // (slice degree, rep index)
    std::optional<std::size_t> unit_class;

    for (const Bidegree& deg : A.support()) {
        const auto& idx = A.at(deg);
        Matrix dblock = d.block(deg);
        std::vector<Vec> z = kernel_basis(dblock);
        Matrix prev = d.block(deg - d.bidegree());
        std::vector<Vec> b;
        {
            auto rr = rref(prev);  // image basis from pivot columns, deterministic
            for (auto c : rr.pivots) b.push_back(prev.column(c));
        }
        std::vector<Vec> preferred;
        if (unit && A.element(*unit).deg == deg) {
            // lift the unit: its class must be represented by the unit itself
            Vec uv(idx.size(), Scalar::zero(f));
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (idx[i] == *unit) uv[i] = Scalar::one(f);
            preferred.push_back(std::move(uv));
        }
        Subquotient sq_slice(f, idx.size(), z, b, preferred);
        for (std::size_t i = 0; i < sq_slice.dim(); ++i) {
            std::string name = "h" + std::to_string(deg.p) + "_" + std::to_string(deg.q) + "_" + std::to_string(i);
            h_basis.push_back({name, deg});
            h_origin.emplace_back(deg, i);
            if (!preferred.empty() && i == 0 && sq_slice.reps()[0] == preferred[0])
                unit_class = h_basis.size() - 1;
        }
        slices.emplace(deg, std::move(sq_slice));
    }

    SpacePtr H = make_space(f, h_basis);
    BigradedMap f1(H, d.source(), {0, 0});
    for (std::size_t k = 0; k < h_basis.size(); ++k) {
        const auto& [deg, i] = h_origin[k];
        const auto& idx = A.at(deg);
        const Vec& rep = slices.at(deg).reps()[i];
        LinComb img;
        for (std::size_t r = 0; r < idx.size(); ++r) img.add(idx[r], rep[r]);
        f1.set_image(k, img);
    }
    return CohomologyData{H, std::move(f1), std::move(slices), unit_class};
}

LinComb CohomologyData::project(const LinComb& v, const BigradedSpace& ambient) const {
    LinComb out;
    if (v.is_zero()) return out;
    auto deg = v.homogeneous_bidegree(ambient);
    if (!deg) throw internal_error("projection of a non-homogeneous element");
    auto it = slices.find(*deg);
    if (it == slices.end()) throw internal_error("projection outside the support");
    const auto& idx = ambient.at(*deg);
    Vec dense(idx.size(), Scalar::zero(ambient.field()));
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
    for (const auto& [i, c] : v.terms()) dense[pos.at(i)] = c;
    Vec coords = it->second.coords(dense);
    LinComb result;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_zero()) continue;
        // H-basis elements of this slice are contiguous and ordered by rep index
        std::string name = "h" + std::to_string(deg->p) + "_" + std::to_string(deg->q) + "_" + std::to_string(i);
        auto hidx = H->index_of(name);
        if (!hidx) throw internal_error("missing cohomology class " + name);
        result.add(*hidx, coords[i]);
    }
    return result;
}

}  // namespace ainfss
