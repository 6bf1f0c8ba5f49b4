#include "sympcal/rational.hpp"

#include <numeric>
#include <sstream>

#include "sympcal/errors.hpp"

namespace sympcal {

namespace {
std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw DomainError("Rational: multiplication overflow");
    return r;
}
std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw DomainError("Rational: addition overflow");
    return r;
}
} // namespace

Rational::Rational(std::int64_t n) : num(n), den(1) {}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)),
                    checked_mul(den, o.den));
}
Rational Rational::operator-(const Rational& o) const {
    return *this + Rational(-o.num, o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw DomainError("Rational: division by zero");
    return Rational(checked_mul(num, o.den), checked_mul(den, o.num));
}
bool Rational::operator==(const Rational& o) const { return num == o.num && den == o.den; }
bool Rational::operator<(const Rational& o) const {
    return checked_mul(num, o.den) < checked_mul(o.num, den);
}
bool Rational::operator<=(const Rational& o) const { return *this < o || *this == o; }

Rational Rational::abs() const { return num < 0 ? Rational(-num, den) : *this; }
double Rational::to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
std::string Rational::str() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << "/" << den;
    return os.str();
}

bool RationalInterval::contains(const Rational& x) const { return lo <= x && x < hi; }
bool RationalInterval::subset_of(const RationalInterval& o) const {
    return o.lo <= lo && hi <= o.hi;
}
RationalInterval RationalInterval::shifted(const Rational& c) const { return {lo + c, hi + c}; }

IntervalLedger interval_ledger(const Rational& a0, const Rational& eps0, std::int64_t p_j,
                               const Rational& c_jm) {
    if (!(Rational(0) < eps0)) throw DomainError("interval_ledger: eps0 must be positive");
    if (c_jm < Rational(0)) throw DomainError("interval_ledger: C must be nonnegative");
    if (p_j <= 0) throw DomainError("interval_ledger: p_j must be positive");
    IntervalLedger lg;
    const Rational p(p_j);
    const Rational third = eps0 / Rational(3);
    lg.i = {p * (a0 - third), p * (a0 + third)};
    lg.i_plus_c = lg.i.shifted(c_jm);
    lg.i_plus_2c = lg.i.shifted(c_jm + c_jm);
    lg.isolation_window = {p * (a0 - eps0), p * (a0 + eps0)};
    lg.smallness_holds = c_jm / p < eps0 / Rational(6);
    lg.union_contained = lg.i.subset_of(lg.isolation_window) &&
                         lg.i_plus_c.subset_of(lg.isolation_window) &&
                         lg.i_plus_2c.subset_of(lg.isolation_window);
    lg.all_equal = c_jm == Rational(0);
    return lg;
}

} // namespace sympcal
