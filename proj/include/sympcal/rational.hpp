#pragma once

#include <cstdint>
#include <string>

namespace sympcal {

// Exact rational arithmetic for the action-interval ledger; inputs there are
// rationals and the containment decisions must not depend on rounding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n);  // NOLINT implicit for literals
    Rational(std::int64_t n, std::int64_t d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const;
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const;

    Rational abs() const;
    double to_double() const;
    std::string str() const;
};

struct RationalInterval {  // [lo, hi)
    Rational lo, hi;
    bool contains(const Rational& x) const;
    bool subset_of(const RationalInterval& o) const;
    RationalInterval shifted(const Rational& c) const;
};

// The action-isolation ledger: I = [p_j (a0 - eps0/3), p_j (a0 + eps0/3)),
// its shifts by C and 2C, the smallness test C/p_j < eps0/6 and the
// containment of the union in the isolation window.
struct IntervalLedger {
    RationalInterval i, i_plus_c, i_plus_2c;
    RationalInterval isolation_window;  // [p_j(a0-eps0), p_j(a0+eps0))
    bool smallness_holds = false;       // C/p_j < eps0/6
    bool union_contained = false;
    bool all_equal = false;             // C = 0 collapses the three intervals
};

IntervalLedger interval_ledger(const Rational& a0, const Rational& eps0, std::int64_t p_j,
                               const Rational& c_jm);

} // namespace sympcal
