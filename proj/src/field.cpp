#include "ainfss/field.hpp"

namespace ainfss {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field Field::prime(std::uint64_t p) {
    if (p < 2 || p >= (1ull << 31) || !is_prime_u64(p))
        throw validation_error("field characteristic must be a prime < 2^31, got " + std::to_string(p));
    return Field(p);
}

std::string Field::to_string() const {
    return is_rationals() ? "Q" : "F" + std::to_string(p_);
}

Field Field::from_string(const std::string& s) {
    if (s == "Q") return rationals();
    if (s.size() > 1 && s[0] == 'F') {
        try {
            return prime(std::stoull(s.substr(1)));
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw validation_error("unrecognized field \"" + s + "\" (expected \"Q\" or \"F<p>\")");
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    if (a == 0) throw internal_error("inverse of zero in F_p");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

Scalar Scalar::of_int(const Field& f, long n) {
    if (f.is_rationals()) return Scalar(mpq_class(n));
    std::uint64_t p = f.characteristic();
    std::int64_t m = n % static_cast<std::int64_t>(p);
    if (m < 0) m += static_cast<std::int64_t>(p);
    return Scalar(FpValue{static_cast<std::uint64_t>(m), p});
}

Scalar Scalar::parse(const Field& f, const std::string& s) {
    if (s.empty()) throw validation_error("empty coefficient");
    if (f.is_rationals()) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw validation_error("bad rational coefficient \"" + s + "\"");
        mpq_class canon = q;
        canon.canonicalize();
        if (canon.get_str() != s)
            throw validation_error("non-canonical rational \"" + s + "\" (expected \"" + canon.get_str() + "\")");
        return Scalar(std::move(canon));
    }
    std::uint64_t p = f.characteristic();
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw validation_error("bad F_p coefficient \"" + s + "\"");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v >= (1ull << 62)) throw validation_error("F_p coefficient out of range \"" + s + "\"");
    }
    if (v >= p || (s.size() > 1 && s[0] == '0'))
        throw validation_error("non-canonical F_p coefficient \"" + s + "\" (expected a value in [0," +
                               std::to_string(p) + "))");
    return Scalar(FpValue{v, p});
}

Field Scalar::field() const {
    if (std::holds_alternative<mpq_class>(rep_)) return Field::rationals();
    return Field::prime(fp().p);
}

bool Scalar::is_zero() const {
    if (std::holds_alternative<mpq_class>(rep_)) return sgn(q()) == 0;
    return fp().v == 0;
}

bool Scalar::is_one() const {
    if (std::holds_alternative<mpq_class>(rep_)) return q() == 1;
    return fp().v == 1;
}

namespace {
void check_same_field(const std::variant<FpValue, mpq_class>& a, const std::variant<FpValue, mpq_class>& b) {
    const auto* x = std::get_if<FpValue>(&a);
    const auto* y = std::get_if<FpValue>(&b);
    if ((x == nullptr) != (y == nullptr) || (x && y && x->p != y->p))
        throw internal_error("mixed-field scalar arithmetic");
}
}  // namespace

Scalar Scalar::operator-() const {
    if (std::holds_alternative<mpq_class>(rep_)) return Scalar(mpq_class(-q()));
    const auto& a = fp();
    return Scalar(FpValue{a.v == 0 ? 0 : a.p - a.v, a.p});
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(rep_, o.rep_);
    if (std::holds_alternative<mpq_class>(rep_)) return Scalar(mpq_class(q() + o.q()));
    const auto &a = fp(), &b = o.fp();
    std::uint64_t s = a.v + b.v;
    if (s >= a.p) s -= a.p;
    return Scalar(FpValue{s, a.p});
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(rep_, o.rep_);
    if (std::holds_alternative<mpq_class>(rep_)) return Scalar(mpq_class(q() * o.q()));
    const auto &a = fp(), &b = o.fp();
    return Scalar(FpValue{mulmod(a.v, b.v, a.p), a.p});
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw internal_error("inverse of zero scalar");
    if (std::holds_alternative<mpq_class>(rep_)) return Scalar(mpq_class(1 / q()));
    const auto& a = fp();
    return Scalar(FpValue{invmod(a.v, a.p), a.p});
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
    check_same_field(rep_, o.rep_);
    if (std::holds_alternative<mpq_class>(rep_)) return q() == o.q();
    return fp().v == o.fp().v;
}

std::string Scalar::to_string() const {
    if (std::holds_alternative<mpq_class>(rep_)) return q().get_str();
    return std::to_string(fp().v);
}

}  // namespace ainfss
