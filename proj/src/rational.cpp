#include "feller/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "feller/errors.hpp"

namespace feller {

Rational parse_rational(std::string_view s) {
    if (s.empty()) throw DataError("empty rational literal");
    // cpp_rational's string constructor accepts both "p" and "p/q" but
    // aborts the process on q == 0, so validate first.
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(s)));
        }
        BigInt num{std::string(s.substr(0, slash))};
        BigInt den{std::string(s.substr(slash + 1))};
        if (den == 0) throw DataError("rational with zero denominator: " + std::string(s));
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw DataError("malformed rational literal '" + std::string(s) + "': " + e.what());
    }
}

std::string rational_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_double(double d) {
    if (!std::isfinite(d)) throw DataError("cannot convert non-finite double to rational");
    return Rational(d);
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt rational_floor(const Rational& r) {
    BigInt p = numerator(r);
    BigInt q = denominator(r);
    BigInt t = p / q;  // truncates toward zero
    if (p < 0 && t * q != p) --t;
    return t;
}

BigInt rational_ceil(const Rational& r) { return -rational_floor(-r); }

}  // namespace feller
