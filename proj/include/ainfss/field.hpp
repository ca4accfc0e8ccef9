#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace ainfss {

/* Raised when an input value violates a structural law of its type. */
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Raised when an internally derived identity fails; signals a bug, never bad input. */
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

/* The coefficient field: the rationals or a prime field F_p. */
class Field {
  public:
    static Field rationals() { return Field(0); }
    static Field prime(std::uint64_t p);

    bool is_rationals() const { return p_ == 0; }
    std::uint64_t characteristic() const { return p_; }

    bool operator==(const Field&) const = default;

    std::string to_string() const;
    static Field from_string(const std::string& s);

  private:
    explicit Field(std::uint64_t p) : p_(p) {}
    std::uint64_t p_ = 0;  // 0 means Q
};

struct FpValue {
    std::uint64_t v;
    std::uint64_t p;
    bool operator==(const FpValue&) const = default;
};

/* An exact scalar in a fixed field.  Q values are kept reduced with positive
 * denominator; F_p values are kept in [0, p). */
class Scalar {
  public:
    Scalar() : rep_(FpValue{0, 0}) {}  // unusable placeholder; field set on assignment

    static Scalar zero(const Field& f) { return of_int(f, 0); }
    static Scalar one(const Field& f) { return of_int(f, 1); }
    static Scalar of_int(const Field& f, long n);

    /* Parses the canonical text form ("a/b" or "a" over Q, "n" over F_p).
     * Rejects non-canonical spellings such as "2/4" or "1/-2". */
    static Scalar parse(const Field& f, const std::string& s);

    Field field() const;
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // o must be nonzero
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string to_string() const;

  private:
    explicit Scalar(FpValue v) : rep_(v) {}
    explicit Scalar(mpq_class q) : rep_(std::move(q)) {}
    const FpValue& fp() const { return std::get<FpValue>(rep_); }
    const mpq_class& q() const { return std::get<mpq_class>(rep_); }

    std::variant<FpValue, mpq_class> rep_;
};

bool is_prime_u64(std::uint64_t n);

}  // namespace ainfss
