#include "artinperv/omega0.hpp"

#include <sstream>

namespace artinperv {

ZMat z_kron(const ZMat& a, const ZMat& b) {
    ZMat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) {
            if (a.at(i, j) == 0) continue;
            for (long k = 0; k < b.rows(); ++k)
                for (long l = 0; l < b.cols(); ++l)
                    m.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return m;
}

/* ------------------------------ validation ------------------------------ */

void BaseField::validate() const {
    galois.validate();
    if (characteristic_exponent != 1 && !is_prime_ul(characteristic_exponent))
        throw error("base field: characteristic exponent must be 1 or a prime");
}

std::shared_ptr<const FiniteGroup> BaseField::quotient() const {
    return std::make_shared<const FiniteGroup>(galois.quotient);
}

void GeomDatum::validate() const {
    base.validate();
    const FiniteGroup& G = base.galois.quotient;
    if (static_cast<int>(pi0.size()) != G.order)
        throw error("geometry: need one component permutation per quotient element");
    long n = components();
    if (n == 0) throw error("geometry: pi0 must be nonempty");
    for (const auto& perm : pi0) {
        if (static_cast<long>(perm.size()) != n) throw error("geometry: ragged pi0 data");
        std::vector<bool> seen(static_cast<size_t>(n), false);
        for (int v : perm) {
            if (v < 0 || v >= n || seen[static_cast<size_t>(v)])
                throw error("geometry: pi0 action is not a permutation");
            seen[static_cast<size_t>(v)] = true;
        }
    }
    for (int g = 0; g < G.order; ++g)
        for (int h = 0; h < G.order; ++h)
            for (long c = 0; c < n; ++c)
                if (pi0[static_cast<size_t>(G.mul(g, h))][static_cast<size_t>(c)] !=
                    pi0[static_cast<size_t>(g)]
                       [static_cast<size_t>(pi0[static_cast<size_t>(h)][static_cast<size_t>(c)])])
                    throw error("geometry: pi0 action is not a group action");
    for (const auto& [deg, rep] : mu) {
        if (deg < 1) throw error("geometry: mu is indexed by degrees >= 1");
        if (deg > 2 * dimension)
            throw error("geometry: mu exceeds the cohomological dimension bound");
        if (rep.finite.generators != 0)
            throw error("geometry: mu must be purely divisible");
        if (!groups_equal(*rep.group, G))
            throw error("geometry: mu lives on a different quotient");
        validate_rep(rep);
    }
}

/* ------------------------------- builders ------------------------------- */

namespace {

std::set<unsigned long> char_primes(const BaseField& k) {
    if (k.characteristic_exponent == 1) return {};
    return {k.characteristic_exponent};
}

/* divisible rank-r summand (Q/Z[1/p](twist))^r with the given action */
ArtinRep divisible_rep(const BaseField& k, int twist, long rank,
                       const std::vector<ZMat>& action) {
    ArtinRep m;
    m.group = k.quotient();
    m.coeff = Coefficients::integers();
    m.finite = FgModule::zero(m.coeff);
    m.action.assign(static_cast<size_t>(m.group->order), QMat(0, 0));
    if (rank > 0) {
        DivisiblePart part;
        part.shape = DivisibleSummand{twist, rank, DivSupport::AllBut, char_primes(k)};
        if (action.empty())
            part.action.assign(static_cast<size_t>(m.group->order), ZMat::identity(rank));
        else
            part.action = action;
        m.divisible.push_back(std::move(part));
    }
    m.twist_chi = k.galois.cyclo;
    return m;
}

std::vector<std::vector<int>> trivial_pi0(const BaseField& k, long n) {
    std::vector<int> id;
    for (long i = 0; i < n; ++i) id.push_back(static_cast<int>(i));
    return std::vector<std::vector<int>>(static_cast<size_t>(k.galois.quotient.order), id);
}

mpz_class binomial(long n, long k) {
    mpz_class out;
    if (k < 0 || k > n) return 0;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return out;
}

} // namespace

GeomDatum geom_point(const BaseField& k) {
    GeomDatum x;
    x.base = k;
    x.pi0 = trivial_pi0(k, 1);
    x.dimension = 0;
    x.validate();
    return x;
}

GeomDatum geom_finite_etale(const BaseField& k, const std::vector<std::vector<int>>& pi0) {
    GeomDatum x;
    x.base = k;
    x.pi0 = pi0;
    x.dimension = 0;
    x.validate();
    return x;
}

GeomDatum geom_projective_space(const BaseField& k, long n) {
    if (n < 0) throw error("projective space: dimension must be >= 0");
    GeomDatum x;
    x.base = k;
    x.pi0 = trivial_pi0(k, 1);
    x.dimension = n;
    for (long j = 1; j <= n; ++j) x.mu[2 * j] = divisible_rep(k, static_cast<int>(-j), 1, {});
    x.validate();
    return x;
}

GeomDatum geom_curve(const BaseField& k, long genus, const std::vector<ZMat>& h1_action) {
    if (genus < 0) throw error("curve: genus must be >= 0");
    GeomDatum x;
    x.base = k;
    x.pi0 = trivial_pi0(k, 1);
    x.dimension = 1;
    if (genus > 0) x.mu[1] = divisible_rep(k, 0, 2 * genus, h1_action);
    x.mu[2] = divisible_rep(k, -1, 1, {});
    x.validate();
    return x;
}

GeomDatum geom_abelian_variety(const BaseField& k, long g) {
    if (g < 0) throw error("abelian variety: dimension must be >= 0");
    GeomDatum x;
    x.base = k;
    x.pi0 = trivial_pi0(k, 1);
    x.dimension = g;
    /* degree n: rank C(2g, n), twist -floor(n/2) (validated by the top
     * degree mu(2g) = Q/Z'(-g)) */
    for (long n = 1; n <= 2 * g; ++n) {
        mpz_class r = binomial(2 * g, n);
        x.mu[n] = divisible_rep(k, static_cast<int>(-(n / 2)),
                                static_cast<long>(r.get_si()), {});
    }
    x.validate();
    return x;
}

GeomDatum geom_disjoint_union(const GeomDatum& a, const GeomDatum& b) {
    if (a.base.galois.quotient.table != b.base.galois.quotient.table ||
        a.base.characteristic_exponent != b.base.characteristic_exponent)
        throw error("disjoint union: mismatched base fields");
    GeomDatum x;
    x.base = a.base;
    long na = a.components();
    for (int g = 0; g < a.base.galois.quotient.order; ++g) {
        std::vector<int> perm = a.pi0[static_cast<size_t>(g)];
        for (int v : b.pi0[static_cast<size_t>(g)]) perm.push_back(v + static_cast<int>(na));
        x.pi0.push_back(std::move(perm));
    }
    x.dimension = std::max(a.dimension, b.dimension);
    for (const auto& [deg, rep] : a.mu) x.mu[deg] = rep;
    for (const auto& [deg, rep] : b.mu) {
        auto it = x.mu.find(deg);
        if (it == x.mu.end())
            x.mu[deg] = rep;
        else
            it->second = rep_direct_sum(it->second, rep);
    }
    x.validate();
    return x;
}

namespace {

/* tensor of purely divisible reps: ranks multiply, twists add, supports meet */
ArtinRep divisible_rep_tensor(const ArtinRep& a, const ArtinRep& b) {
    ArtinRep out;
    out.group = a.group;
    out.coeff = a.coeff;
    out.finite = FgModule::zero(out.coeff);
    out.action.assign(static_cast<size_t>(out.group->order), QMat(0, 0));
    out.twist_chi = a.twist_chi.empty() ? b.twist_chi : a.twist_chi;
    for (const auto& pa : a.divisible)
        for (const auto& pb : b.divisible) {
            DivisiblePart prod;
            prod.shape.twist = pa.shape.twist + pb.shape.twist;
            prod.shape.rank = pa.shape.rank * pb.shape.rank;
            if (pa.shape.mode == DivSupport::AllBut && pb.shape.mode == DivSupport::AllBut) {
                prod.shape.mode = DivSupport::AllBut;
                prod.shape.primes = pa.shape.primes;
                prod.shape.primes.insert(pb.shape.primes.begin(), pb.shape.primes.end());
            } else if (pa.shape.mode == DivSupport::Only && pb.shape.mode == DivSupport::Only) {
                prod.shape.mode = DivSupport::Only;
                for (unsigned long q : pa.shape.primes)
                    if (pb.shape.primes.count(q)) prod.shape.primes.insert(q);
            } else {
                const auto& only = pa.shape.mode == DivSupport::Only ? pa : pb;
                const auto& allbut = pa.shape.mode == DivSupport::Only ? pb : pa;
                prod.shape.mode = DivSupport::Only;
                for (unsigned long q : only.shape.primes)
                    if (!allbut.shape.primes.count(q)) prod.shape.primes.insert(q);
            }
            if (prod.shape.rank == 0) continue;
            if (prod.shape.mode == DivSupport::Only && prod.shape.primes.empty()) continue;
            for (int g = 0; g < out.group->order; ++g)
                prod.action.push_back(z_kron(pa.action[static_cast<size_t>(g)],
                                             pb.action[static_cast<size_t>(g)]));
            out.divisible.push_back(std::move(prod));
        }
    return out;
}

} // namespace

ArtinRep divisible_pi0_rep(const GeomDatum& x) {
    long n = x.components();
    std::vector<ZMat> action;
    for (const auto& perm : x.pi0) {
        ZMat mat(n, n);
        for (long j = 0; j < n; ++j) mat.at(perm[static_cast<size_t>(j)], j) = 1;
        action.push_back(std::move(mat));
    }
    return divisible_rep(x.base, 0, n, action);
}

GeomDatum geom_product(const GeomDatum& a, const GeomDatum& b) {
    if (a.base.galois.quotient.table != b.base.galois.quotient.table ||
        a.base.characteristic_exponent != b.base.characteristic_exponent)
        throw error("product: mismatched base fields");
    GeomDatum x;
    x.base = a.base;
    long na = a.components(), nb = b.components();
    for (int g = 0; g < a.base.galois.quotient.order; ++g) {
        std::vector<int> perm(static_cast<size_t>(na * nb));
        for (long i = 0; i < na; ++i)
            for (long j = 0; j < nb; ++j) {
                long img = a.pi0[static_cast<size_t>(g)][static_cast<size_t>(i)] *
                               static_cast<long>(nb) +
                           b.pi0[static_cast<size_t>(g)][static_cast<size_t>(j)];
                perm[static_cast<size_t>(i * nb + j)] = static_cast<int>(img);
            }
        x.pi0.push_back(std::move(perm));
    }
    x.dimension = a.dimension + b.dimension;
    /* level-N Kuenneth: mu^n(X x Y) = sum_{i+j=n} mu^i tensor mu^j with
     * mu^0 the divisible module on the components */
    ArtinRep mu0a = divisible_pi0_rep(a), mu0b = divisible_pi0_rep(b);
    auto term = [&](long i, const GeomDatum& d, const ArtinRep& mu0) -> const ArtinRep* {
        if (i == 0) return &mu0;
        auto it = d.mu.find(i);
        return it == d.mu.end() ? nullptr : &it->second;
    };
    long top = 2 * (a.dimension + b.dimension);
    for (long n = 1; n <= top; ++n) {
        ArtinRep acc;
        bool have = false;
        for (long i = 0; i <= n; ++i) {
            const ArtinRep* ma = term(i, a, mu0a);
            const ArtinRep* mb = term(n - i, b, mu0b);
            if (!ma || !mb) continue;
            ArtinRep piece = divisible_rep_tensor(*ma, *mb);
            if (piece.divisible.empty()) continue;
            if (!have) {
                acc = std::move(piece);
                have = true;
            } else {
                acc = rep_direct_sum(acc, piece);
            }
        }
        if (have) x.mu[n] = std::move(acc);
    }
    x.validate();
    return x;
}

/* ------------------------------ pushforward ----------------------------- */

const ArtinRep& DiscreteComplex::at(long n) const {
    auto it = graded.find(n);
    if (it == graded.end()) throw error("discrete complex: zero degree accessed");
    return it->second;
}

std::string DiscreteComplex::to_string() const {
    if (graded.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [deg, rep] : graded) {
        if (!first) os << ", ";
        first = false;
        os << "H^" << deg << " = " << admissible_module(rep).to_string();
    }
    return os.str();
}

ArtinRep rep_tensor_coefficients(const ArtinRep& m, const Coefficients& R) {
    if (m.finite.generators != 0)
        throw error("rep_tensor_coefficients: purely divisible input expected");
    ArtinRep out;
    out.group = m.group;
    out.coeff = R;
    out.finite = FgModule::zero(R);
    out.action.assign(static_cast<size_t>(out.group->order), QMat(0, 0));
    out.twist_chi = m.twist_chi;
    for (const auto& part : m.divisible) {
        DivisibleModule t = divisible_tensor_coeff(DivisibleModule{{part.shape}}, R);
        if (t.summands.empty()) continue;
        DivisiblePart kept;
        kept.shape = t.summands[0];
        kept.action = part.action;
        out.divisible.push_back(std::move(kept));
    }
    return out;
}

DiscreteComplex omega0_pushforward(const GeomDatum& x, const Coefficients& R) {
    x.validate();
    Coefficients Rp = R.localize_away(x.base.characteristic_exponent);
    DiscreteComplex out;
    /* degree 0: the permutation representation R[1/p][pi0] */
    {
        ArtinRep h0 = ArtinRep::permutation(x.base.quotient(), Rp, x.pi0);
        h0.twist_chi = x.base.galois.cyclo;
        out.graded[0] = std::move(h0);
    }
    for (const auto& [deg, rep] : x.mu) {
        ArtinRep t = rep_tensor_coefficients(rep, Rp);
        if (!t.divisible.empty()) out.graded[deg + 1] = std::move(t);
    }
    return out;
}

DiscreteComplex omega0_pushforward_twisted(const GeomDatum& x, const Coefficients& R, int m) {
    if (m < 1) throw error("twisted pushforward requires m >= 1 (use omega0_pushforward for m = 0)");
    x.validate();
    Coefficients Rp = R.localize_away(x.base.characteristic_exponent);
    DiscreteComplex out;
    {
        ArtinRep t = rep_tensor_coefficients(divisible_pi0_rep(x), Rp);
        if (!t.divisible.empty()) out.graded[1] = tate_twist(t, -m);
    }
    for (const auto& [deg, rep] : x.mu) {
        ArtinRep t = rep_tensor_coefficients(rep, Rp);
        if (!t.divisible.empty()) out.graded[deg + 1] = tate_twist(t, -m);
    }
    return out;
}

std::string ConstructVerdict::to_string() const {
    if (constructible) return "Constructible";
    std::ostringstream os;
    os << "NotConstructible(" << witness << ")";
    return os.str();
}

ConstructVerdict constructibility_verdict(const GeomDatum& x, const Coefficients& R) {
    DiscreteComplex c = omega0_pushforward(x, R);
    for (const auto& [deg, rep] : c.graded) {
        AdmissibleModule m = admissible_module(rep);
        if (!is_finitely_presented(m)) return {false, deg};
    }
    return {true, -1};
}

} // namespace artinperv
