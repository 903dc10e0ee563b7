/* Coefficient rings: Q, Z, Z localized at a prime, Z/n — plus the internal
 * bookkeeping needed when residue characteristics get inverted (Z[1/S], the
 * zero ring Z/1).  Everything is a small value type. */
#pragma once

#include "artinperv/intmat.hpp"

#include <set>
#include <string>

namespace artinperv {

enum class CoeffKind { Rationals, Integers, LocalizedAt, IntegersMod };

struct Coefficients {
    CoeffKind kind = CoeffKind::Integers;
    unsigned long p = 0;              /* LocalizedAt: the prime */
    mpz_class n = 0;                  /* IntegersMod: the modulus, n >= 1 (n = 1 only internally) */
    std::set<unsigned long> inverted; /* Integers only: Z[1/S] after localizing */

    static Coefficients rationals();
    static Coefficients integers();
    static Coefficients localized_at(unsigned long p);
    static Coefficients integers_mod(const mpz_class& n); /* requires n >= 2 */

    bool is_field() const { return kind == CoeffKind::Rationals; }
    bool is_zero_ring() const { return kind == CoeffKind::IntegersMod && n == 1; }
    bool is_z_like() const { return kind == CoeffKind::Integers || kind == CoeffKind::LocalizedAt; }

    /* invert every prime dividing e (characteristic exponent; e = 1 is a no-op) */
    Coefficients localize_away(unsigned long e) const;
    Coefficients localize_away_set(const std::set<unsigned long>& primes) const;

    bool prime_invertible(unsigned long q) const;

    /* unit-normalize an invariant factor d >= 0 for this ring:
     * 0 stays 0 (free), units collapse to 1 (to be dropped by callers). */
    mpz_class normalize_factor(const mpz_class& d) const;

    std::string to_string() const;
    bool operator==(const Coefficients& o) const;
    bool operator!=(const Coefficients& o) const { return !(*this == o); }
};

/* CLI surface syntax: "Q" | "Z" | "Zp:<p>" | "Zmod:<n>" */
Coefficients parse_coefficients(const std::string& text);

} // namespace artinperv
