#include "artinperv/coefficients.hpp"

#include <sstream>

namespace artinperv {

Coefficients Coefficients::rationals() {
    Coefficients c;
    c.kind = CoeffKind::Rationals;
    return c;
}

Coefficients Coefficients::integers() {
    Coefficients c;
    c.kind = CoeffKind::Integers;
    return c;
}

Coefficients Coefficients::localized_at(unsigned long p) {
    if (!is_prime_ul(p)) throw error("coefficients: localization requires a prime");
    Coefficients c;
    c.kind = CoeffKind::LocalizedAt;
    c.p = p;
    return c;
}

Coefficients Coefficients::integers_mod(const mpz_class& n) {
    if (n < 2) throw error("coefficients: modulus must be at least 2");
    Coefficients c;
    c.kind = CoeffKind::IntegersMod;
    c.n = n;
    return c;
}

Coefficients Coefficients::localize_away(unsigned long e) const {
    if (e <= 1) return *this;
    std::set<unsigned long> ps;
    for (auto& [q, mult] : factorize_ul(e)) {
        (void)mult;
        ps.insert(q);
    }
    return localize_away_set(ps);
}

Coefficients Coefficients::localize_away_set(const std::set<unsigned long>& primes) const {
    Coefficients c = *this;
    switch (kind) {
        case CoeffKind::Rationals:
            return c;
        case CoeffKind::Integers:
            c.inverted.insert(primes.begin(), primes.end());
            return c;
        case CoeffKind::LocalizedAt:
            if (primes.count(p)) return rationals();
            return c;
        case CoeffKind::IntegersMod:
            c.n = strip_primes(n, primes); /* may reach the zero ring n = 1 */
            return c;
    }
    throw error("coefficients: bad kind");
}

bool Coefficients::prime_invertible(unsigned long q) const {
    switch (kind) {
        case CoeffKind::Rationals:
            return true;
        case CoeffKind::Integers:
            return inverted.count(q) > 0;
        case CoeffKind::LocalizedAt:
            return q != p;
        case CoeffKind::IntegersMod:
            return gcd(n, mpz_class(q)) == 1;
    }
    throw error("coefficients: bad kind");
}

mpz_class Coefficients::normalize_factor(const mpz_class& d) const {
    if (d < 0) throw error("normalize_factor: negative invariant factor");
    if (d == 0) return 0;
    switch (kind) {
        case CoeffKind::Rationals:
            return 1;
        case CoeffKind::Integers:
            return strip_primes(d, inverted);
        case CoeffKind::LocalizedAt:
            return p_power_part(d, p);
        case CoeffKind::IntegersMod:
            return gcd(d, n); /* Z/n-module structure only sees d mod n */
    }
    throw error("coefficients: bad kind");
}

std::string Coefficients::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case CoeffKind::Rationals:
            return "Q";
        case CoeffKind::Integers:
            if (inverted.empty()) return "Z";
            {
                mpz_class prod = 1;
                for (unsigned long q : inverted) prod *= q;
                os << "Z[1/" << prod.get_str() << "]";
            }
            return os.str();
        case CoeffKind::LocalizedAt:
            os << "Z_(" << p << ")";
            return os.str();
        case CoeffKind::IntegersMod:
            os << "Z/" << n.get_str();
            return os.str();
    }
    throw error("coefficients: bad kind");
}

bool Coefficients::operator==(const Coefficients& o) const {
    return kind == o.kind && p == o.p && n == o.n && inverted == o.inverted;
}

Coefficients parse_coefficients(const std::string& text) {
    if (text == "Q") return Coefficients::rationals();
    if (text == "Z") return Coefficients::integers();
    if (text.rfind("Zp:", 0) == 0) {
        std::string body = text.substr(3);
        if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
            throw error("coefficients: malformed prime in '" + text + "'");
        unsigned long p = std::stoul(body);
        return Coefficients::localized_at(p);
    }
    if (text.rfind("Zmod:", 0) == 0) {
        std::string body = text.substr(5);
        if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
            throw error("coefficients: malformed modulus in '" + text + "'");
        return Coefficients::integers_mod(mpz_class(body));
    }
    throw error("coefficients: unknown spec '" + text + "' (expected Q | Z | Zp:<p> | Zmod:<n>)");
}

} // namespace artinperv
