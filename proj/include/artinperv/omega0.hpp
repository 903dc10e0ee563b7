/* The Artin truncation of the pushforward to a field: graded cohomology of
 * omega^0 f_* 1_X computed from geometric data (pi_0 with Galois action plus
 * the divisible cohomology table mu^n), its negative Tate twists, and the
 * constructibility verdict. */
#pragma once

#include "artinperv/rep.hpp"

#include <map>

namespace artinperv {

struct BaseField {
    MarkedProfinite galois;         /* finite quotient carrying all the data */
    unsigned long characteristic_exponent = 1; /* 1 or a prime */

    void validate() const;
    std::shared_ptr<const FiniteGroup> quotient() const;
};

/* geometry as data: the component set with its Galois action and the table
 * mu^n = H^n(X_kbar, Q/Z') as purely divisible representations over Z */
struct GeomDatum {
    BaseField base;
    std::vector<std::vector<int>> pi0; /* pi0[g] = permutation of components */
    std::map<long, ArtinRep> mu;       /* degree n >= 1 -> nonzero divisible rep */
    long dimension = 0;

    long components() const {
        return pi0.empty() ? 0 : static_cast<long>(pi0[0].size());
    }
    void validate() const;
};

/* ------------------------------- builders ------------------------------- */

GeomDatum geom_point(const BaseField& k);
/* components with an explicit permutation action (one permutation per
 * quotient element) */
GeomDatum geom_finite_etale(const BaseField& k, const std::vector<std::vector<int>>& pi0);
GeomDatum geom_projective_space(const BaseField& k, long n);
/* smooth projective curve; optional action matrices (per quotient element) on
 * the 2g-dimensional degree-1 part */
GeomDatum geom_curve(const BaseField& k, long genus,
                     const std::vector<ZMat>& h1_action = {});
GeomDatum geom_abelian_variety(const BaseField& k, long g);
GeomDatum geom_disjoint_union(const GeomDatum& a, const GeomDatum& b);
GeomDatum geom_product(const GeomDatum& a, const GeomDatum& b);

/* ------------------------------ pushforward ----------------------------- */

struct DiscreteComplex {
    std::map<long, ArtinRep> graded; /* degree -> rep; absent = zero */

    bool is_zero() const { return graded.empty(); }
    bool has(long n) const { return graded.count(n) != 0; }
    const ArtinRep& at(long n) const;
    std::string to_string() const;
};

/* H^0 = R[1/p][pi0], H^1 = 0, H^n = mu^{n-1} tensor R for n >= 2 */
DiscreteComplex omega0_pushforward(const GeomDatum& x, const Coefficients& R);
/* degree n >= 1 = (mu^{n-1} tensor R)(-m), with mu^0 the divisible module on
 * the component set; requires m >= 1 */
DiscreteComplex omega0_pushforward_twisted(const GeomDatum& x, const Coefficients& R, int m);

struct ConstructVerdict {
    bool constructible = true;
    long witness = -1; /* least degree failing finite presentation */
    std::string to_string() const;
    bool operator==(const ConstructVerdict&) const = default;
};
ConstructVerdict constructibility_verdict(const GeomDatum& x, const Coefficients& R);

/* purely divisible representation tensored with a coefficient ring */
ArtinRep rep_tensor_coefficients(const ArtinRep& m, const Coefficients& R);

/* the divisible module on the component set, (Q/Z[1/p])[pi0], twist 0 */
ArtinRep divisible_pi0_rep(const GeomDatum& x);

ZMat z_kron(const ZMat& a, const ZMat& b);

} // namespace artinperv
