#include "oracles.hpp"

namespace ainfss::oracles {

namespace {

std::vector<Vec> image_cols(const Matrix& m) {
    std::vector<Vec> out;
    auto rr = rref(m);
    for (auto c : rr.pivots) out.push_back(m.column(c));
    return out;
}

std::size_t dim_of(const Field& f, std::size_t n, const std::vector<Vec>& cols) {
    return rank(Matrix::from_columns(f, n, cols));
}

std::vector<Vec> concat(std::vector<Vec> a, const std::vector<Vec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/* columns of `mat` applied to span(cols) */
std::vector<Vec> apply_span(const Matrix& mat, const std::vector<Vec>& cols) {
    std::vector<Vec> out;
    for (const auto& v : cols) out.push_back(mat.apply(v));
    return out;
}

/* {x in span(z) : m x in span(w)}, all inside one slice pair */
std::vector<Vec> preimage_within(const Field& f, const Matrix& m, const std::vector<Vec>& z,
                                 const std::vector<Vec>& w) {
    if (z.empty()) return {};
    // solve m·(z·u) = w·t, i.e. [m·z | -w] (u,t)^T = 0, keep the z·u parts
    std::size_t rows = m.rows();
    Matrix stacked(f, rows, z.size() + w.size());
    for (std::size_t c = 0; c < z.size(); ++c) {
        Vec img = m.apply(z[c]);
        for (std::size_t rr = 0; rr < rows; ++rr) stacked.at(rr, c) = img[rr];
    }
    for (std::size_t c = 0; c < w.size(); ++c)
        for (std::size_t rr = 0; rr < rows; ++rr) stacked.at(rr, z.size() + c) = -w[c][rr];
    std::vector<Vec> out;
    for (const Vec& k : kernel_basis(stacked)) {
        Vec x(z[0].size(), Scalar::zero(f));
        for (std::size_t c = 0; c < z.size(); ++c)
            for (std::size_t rr = 0; rr < x.size(); ++rr) x[rr] += z[c][rr] * k[c];
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

ClosedFormPages first_pages_closed_form(const FormalBigradedDeformation& d) {
    ClosedFormPages out;
    const SpacePtr& sp = d.space();
    const Field& f = sp->field();
    BigradedMap m10 = as_linear(d.component(1, 0));
    BigradedMap m11 = as_linear(d.component(1, 1));
    BigradedMap m12 = as_linear(d.component(1, 2));
    Bidegree b0 = m10.bidegree(), b1 = m11.bidegree();

    for (const Bidegree& deg : sp->support()) {
        std::size_t n = sp->at(deg).size();
        std::vector<Vec> z = kernel_basis(m10.block(deg));
        std::vector<Vec> b = image_cols(m10.block(deg - b0));
        std::size_t e1 = dim_of(f, n, z) - dim_of(f, n, b);
        if (e1) out.e1_dims[deg] = e1;

        // rank of the induced order-1 differential on E1
        Bidegree tdeg = deg + b1;
        std::size_t tn = sp->at(tdeg).size();
        std::vector<Vec> b_tgt = image_cols(m10.block(tdeg - b0));
        std::size_t rk1 = dim_of(f, tn, concat(apply_span(m11.block(deg), z), b_tgt)) -
                          dim_of(f, tn, b_tgt);
        if (rk1) out.d1_ranks[deg] = rk1;

        // E2 = [Ker m10 ∩ m11^{-1}(Im m10)] / [m11(Ker m10) + Im m10]
        std::vector<Vec> im_at_tgt = image_cols(m10.block(tdeg - b0));
        std::vector<Vec> num = preimage_within(f, m11.block(deg), z, im_at_tgt);
        std::vector<Vec> zprev = kernel_basis(m10.block(deg - b1));
        std::vector<Vec> den = concat(apply_span(m11.block(deg - b1), zprev), b);
        std::size_t e2 = dim_of(f, n, num) - dim_of(f, n, den);
        if (e2) out.e2_dims[deg] = e2;

        // d2(x) = m12(x) - m11(y) with m10(y) = m11(x), landing two steps on
        Bidegree t2 = deg + b1 + b1 - b0;
        std::size_t t2n = sp->at(t2).size();
        std::vector<Vec> den_t2 = concat(
            apply_span(m11.block(t2 - b1), kernel_basis(m10.block(t2 - b1))),
            image_cols(m10.block(t2 - b0)));
        Solver lift(m10.block(tdeg - b0));
        std::vector<Vec> images;
        for (const Vec& x : num) {
            Vec m11x = m11.block(deg).apply(x);
            auto y = lift.solve(m11x);
            if (!y) throw internal_error("closed-form oracle: no bounding element");
            Vec val = m12.block(deg).apply(x);
            Vec m11y = m11.block(tdeg - b0).apply(*y);
            for (std::size_t i = 0; i < val.size(); ++i) val[i] = val[i] - m11y[i];
            images.push_back(std::move(val));
        }
        std::size_t rk2 = dim_of(f, t2n, concat(images, den_t2)) - dim_of(f, t2n, den_t2);
        if (rk2) out.d2_ranks[deg] = rk2;
    }
    return out;
}

}  // namespace ainfss::oracles
