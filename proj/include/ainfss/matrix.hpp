#pragma once

#include <optional>
#include <vector>

#include "ainfss/field.hpp"

namespace ainfss {

using Vec = std::vector<Scalar>;

/* Dense matrix of exact scalars.  All elimination routines use the fixed
 * leftmost-pivot, first-nonzero-row rule so results are reproducible. */
class Matrix {
  public:
    Matrix() : field_(Field::rationals()) {}
    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), e_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(const Field& f, std::size_t n);
    static Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vec>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const Scalar& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

    Vec column(std::size_t c) const;
    Vec apply(const Vec& v) const;          // this * v
    Matrix operator*(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool is_zero() const;

    Matrix hstack(const Matrix& o) const;   // [this | o]

    std::string to_string() const;

  private:
    Field field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> e_;
};

struct RrefResult {
    Matrix R;
    std::vector<std::size_t> pivots;  // leftmost-first pivot column indices
};

RrefResult rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/* Particular solution of A x = b with every free coordinate set to zero,
 * or nullopt when the system is inconsistent. */
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b);

/* Basis of the null space, one vector per free column, in column order. */
std::vector<Vec> kernel_basis(const Matrix& m);

/* Canonical complement of the span of `basis` inside k^n: the standard basis
 * vectors at the non-pivot coordinates of the row-reduced basis. */
std::vector<Vec> split_subspace(const Field& f, std::size_t n, const std::vector<Vec>& basis);

/* Cached factorization for solving A x = b repeatedly against one matrix.
 * Holds E with E*A = rref(A); solutions follow the same free-coords-zero rule
 * as solve_linear. */
class Solver {
  public:
    explicit Solver(const Matrix& a);
    std::optional<Vec> solve(const Vec& b) const;
    bool contains(const Vec& b) const { return solve(b).has_value(); }
    std::size_t rank() const { return pivots_.size(); }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

  private:
    std::size_t cols_;
    Matrix r_;  // rref(A)
    Matrix e_;  // accumulated row operations
    std::vector<std::size_t> pivots_;
};

/* Greedy deterministic extension: vectors from `candidates`, in order, that
 * are independent modulo span(`given`).  Returns indices into `candidates`. */
std::vector<std::size_t> greedy_complement(const Field& f, std::size_t n, const std::vector<Vec>& given,
                                           const std::vector<Vec>& candidates);

}  // namespace ainfss
