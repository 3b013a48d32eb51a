#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace kp {

// Exact arithmetic throughout the decision modules. cpp_rational keeps
// values canonical: lowest terms, positive denominator.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// Renders "p/q", or just "p" when q == 1.
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p/q" or "p" with optional sign. Never accepts floats.
inline Rational parse_rational(const std::string& text) {
    const auto bad = [&] { return std::invalid_argument("not a rational: '" + text + "'"); };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Best rational approximation with denominator <= max_den, by the
// continued-fraction convergent/semiconvergent construction. Reports the
// absolute rounding error through `error` when given.
Rational rational_from_double(double x, const Integer& max_den, double* error = nullptr);

}  // namespace kp
