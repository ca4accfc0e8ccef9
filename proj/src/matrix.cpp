#include "ainfss/matrix.hpp"

#include <sstream>

namespace ainfss {

Matrix Matrix::identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_columns(const Field& f, std::size_t rows, const std::vector<Vec>& cols) {
    Matrix m(f, rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows) throw internal_error("from_columns: column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
    }
    return m;
}

Vec Matrix::column(std::size_t c) const {
    Vec v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw validation_error("matrix-vector shape mismatch");
    Vec out(rows_, Scalar::zero(field_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (!at(r, c).is_zero() && !v[c].is_zero()) out[r] += at(r, c) * v[c];
    return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw validation_error("matrix product shape mismatch");
    Matrix out(field_, rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(r, k).is_zero()) continue;
            for (std::size_t c = 0; c < o.cols_; ++c)
                if (!o.at(k, c).is_zero()) out.at(r, c) += at(r, k) * o.at(k, c);
        }
    return out;
}

bool Matrix::operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] != o.e_[i]) return false;
    return true;
}

bool Matrix::is_zero() const {
    for (const auto& s : e_)
        if (!s.is_zero()) return false;
    return true;
}

Matrix Matrix::hstack(const Matrix& o) const {
    if (rows_ != o.rows_) throw internal_error("hstack row mismatch");
    Matrix out(field_, rows_, cols_ + o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
        for (std::size_t c = 0; c < o.cols_; ++c) out.at(r, cols_ + c) = o.at(r, c);
    }
    return out;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r == 0 ? "[" : " ");
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "[") << at(r, c).to_string();
        os << "]" << (r + 1 == rows_ ? "]" : "\n");
    }
    return os.str();
}

namespace {

/* Row-reduce `m` in place; mirror every row operation on `side` when given.
 * Pivot rule: scan columns left to right, take the first row with a nonzero
 * entry at or below the current row. */
std::vector<std::size_t> reduce_in_place(Matrix& m, Matrix* side) {
    const Field f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(row, c), m.at(sel, c));
            if (side)
                for (std::size_t c = 0; c < side->cols(); ++c) std::swap(side->at(row, c), side->at(sel, c));
        }
        Scalar inv = m.at(row, col).inverse();
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(row, c) *= inv;
        if (side)
            for (std::size_t c = 0; c < side->cols(); ++c) side->at(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Scalar factor = m.at(r, col);
            for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) -= factor * m.at(row, c);
            if (side)
                for (std::size_t c = 0; c < side->cols(); ++c) side->at(r, c) -= factor * side->at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

RrefResult rref(const Matrix& m) {
    Matrix r = m;
    auto pivots = reduce_in_place(r, nullptr);
    return RrefResult{std::move(r), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Vec> solve_linear(const Matrix& a, const Vec& b) {
    Solver s(a);
    return s.solve(b);
}

std::vector<Vec> kernel_basis(const Matrix& m) {
    auto [r, pivots] = rref(m);
    const Field f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v(m.cols(), Scalar::zero(f));
        v[free] = Scalar::one(f);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vec> split_subspace(const Field& f, std::size_t n, const std::vector<Vec>& basis) {
    Matrix m(f, basis.size(), n);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        if (basis[r].size() != n) throw validation_error("split_subspace: vector length mismatch");
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = basis[r][c];
    }
    auto [r, pivots] = rref(m);
    if (pivots.size() != basis.size()) throw validation_error("split_subspace: dependent input basis");
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> comp;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        Vec v(n, Scalar::zero(f));
        v[c] = Scalar::one(f);
        comp.push_back(std::move(v));
    }
    return comp;
}

Solver::Solver(const Matrix& a) : cols_(a.cols()), r_(a), e_(Matrix::identity(a.field(), a.rows())) {
    pivots_ = reduce_in_place(r_, &e_);
}

std::optional<Vec> Solver::solve(const Vec& b) const {
    Vec c = e_.apply(b);
    for (std::size_t i = pivots_.size(); i < c.size(); ++i)
        if (!c[i].is_zero()) return std::nullopt;
    Vec x(cols_, Scalar::zero(r_.field()));
    for (std::size_t i = 0; i < pivots_.size(); ++i) x[pivots_[i]] = c[i];
    return x;
}

std::vector<std::size_t> greedy_complement(const Field& f, std::size_t n, const std::vector<Vec>& given,
                                           const std::vector<Vec>& candidates) {
    Matrix m(f, given.size() + candidates.size(), n);
    std::size_t row = 0;
    for (const auto& v : given) {
        for (std::size_t c = 0; c < n; ++c) m.at(row, c) = v[c];
        ++row;
    }
    std::vector<std::size_t> chosen;
    std::size_t current_rank = rank(m);
    if (current_rank != given.size()) throw internal_error("greedy_complement: dependent `given` set");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t c = 0; c < n; ++c) m.at(row, c) = candidates[i][c];
        Matrix probe = m;  // rows [0, row] filled
        Matrix window(f, row + 1, n);
        for (std::size_t r = 0; r <= row; ++r)
            for (std::size_t c = 0; c < n; ++c) window.at(r, c) = probe.at(r, c);
        if (rank(window) > current_rank) {
            ++current_rank;
            ++row;
            chosen.push_back(i);
        }
    }
    return chosen;
}

}  // namespace ainfss
