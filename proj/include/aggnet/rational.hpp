#pragma once

#include <gmpxx.h>

#include <string>

#include "aggnet/errors.hpp"

namespace aggnet {

// Exact arbitrary-precision rational scalar. Never rounds.
using Rational = mpq_class;

template <typename T>
struct scalar_traits {
    static constexpr bool exact = false;
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
};

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

// Canonical "p/q" text form ("p" when the denominator is 1).
inline std::string rational_str(const Rational& q) { return q.get_str(); }

inline Rational rational_parse(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw InputError("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

} // namespace aggnet
