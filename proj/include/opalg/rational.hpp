#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace opalg {

/// Exact rational scalar. mpq_class keeps values reduced with positive
/// denominator, which is the canonical form used throughout.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    for (char ch : text)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-' || ch == '+'))
            throw std::invalid_argument("bad rational literal: " + text);
    Rat r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + text);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Rat rat_pow(const Rat& base, unsigned exp) {
    Rat acc = 1, b = base;
    while (exp) {
        if (exp & 1u) acc *= b;
        b *= b;
        exp >>= 1u;
    }
    return acc;
}

inline Rat factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

inline Rat binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

/// Falling factorial n(n-1)...(n-k+1).
inline Rat falling(unsigned n, unsigned k) {
    if (k > n) return 0;
    Rat acc = 1;
    for (unsigned m = 0; m < k; ++m) acc *= static_cast<long>(n - m);
    return acc;
}

}  // namespace opalg
