#ifndef KSC_RATIONAL_HPP
#define KSC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "error.hpp"

namespace ksc {

using bigint = mpz_class;
using rational = mpq_class;

inline std::string to_string(const rational& q) { return q.get_str(); }
inline std::string to_string(const bigint& z) { return z.get_str(); }

// num/den in lowest terms; gmpxx leaves two-argument construction uncanonicalized.
inline rational ratio(const bigint& num, const bigint& den) {
    if (den == 0) fail(errc::bad_input, "zero denominator");
    rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q" and "-p/q"; result is canonicalized.
inline rational parse_rational(const std::string& text) {
    rational q;
    if (text.empty() || q.set_str(text, 10) != 0)
        fail(errc::bad_input, "not a rational number: '" + text + "'");
    if (text.find('/') != std::string::npos && q.get_den() == 0)
        fail(errc::bad_input, "zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

} // namespace ksc

#endif
