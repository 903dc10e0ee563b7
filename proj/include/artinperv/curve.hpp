/* One-dimensional bases as finite data: branches (generic points of the
 * normalization) with marked fundamental-group quotients, closed points with
 * residue Galois data, and the fiber points tying them together.  On top of
 * that sit the residue functor ∂_y, the gluing functor Ξ_x, and the category
 * N(C,R) of validated quadruples (U, (M_η), (M_x), (f_x)) with morphisms.
 *
 * Degree conventions.  M_x is a two-term complex in degrees [0,1]; Ξ_x(M) is
 * concentrated in degree 0; f_x therefore has a single component f⁰ and the
 * condition carried by objects is that H⁰(f_x) = f⁰|ker(d) is injective.
 * Branch representations sit in perverse degree 0 when placed in chain
 * degree -1 (see heart.hpp for the glued model).
 *
 * Residual actions.  A fiber point y stores the inertia mark g_y in the
 * branch quotient together with one lift per generator of G_{k(y)}; the lift
 * of an element is the product of generator lifts along its generator word.
 * Validation requires every lift to normalize <g_y> and the induced map
 * G_{k(y)} -> N(<g_y>)/<g_y> to be a homomorphism, which makes the action on
 * M^{<g_y>} well defined for every representation at once. */
#pragma once

#include "artinperv/rep.hpp"

#include <memory>
#include <string>
#include <vector>

namespace artinperv {

struct Branch {
    std::string name;
    MarkedProfinite pi1; /* finite quotient of the fundamental group of the branch */
};

struct FiberPoint {
    std::string name;
    std::size_t branch = 0;        /* index of η(y) */
    int inertia_mark = 0;          /* g_y, element of the branch quotient */
    SubgroupPair residue;          /* G_{k(y)} realized inside G_{k(x)} */
    std::vector<int> decomp_lifts; /* branch-quotient lifts, one per generator of G_{k(y)} */
};

struct ClosedPoint {
    std::string name;
    MarkedProfinite residue;        /* G_{k(x)} */
    unsigned long char_exponent = 1; /* p(x): 1 in characteristic zero, else a prime */
    std::vector<FiberPoint> fiber;
};

struct CurveData {
    std::string name;
    std::vector<Branch> branches;
    std::vector<ClosedPoint> points;

    void validate() const; /* throws artinperv::error with a path-qualified message */

    /* product of generator lifts along the generator word of h in G_{k(y)} */
    int decomposition_lift(std::size_t point, std::size_t fiber_index, int h) const;
};

std::shared_ptr<const FiniteGroup> branch_group(const CurveData& c, std::size_t branch);
std::shared_ptr<const FiniteGroup> residue_group(const CurveData& c, std::size_t point);

/* ------------------------------ ∂ and Ξ --------------------------------- */

/* ∂_y M = M^{<g_y>} ⊗_R R[1/p(x)] with the residual G_{k(y)}-action */
struct PartialResult {
    ArtinRep rep;   /* representation of G_{k(y)} over R[1/p(x)] */
    ZMat inclusion; /* chosen generators of the invariants in M's coordinates */
};
PartialResult partial_y_full(const CurveData& c, std::size_t point, std::size_t fiber_index,
                             const ArtinRep& m);
ArtinRep partial_y(const CurveData& c, std::size_t point, std::size_t fiber_index,
                   const ArtinRep& m);
/* ∂_y of an equivariant map (in the bases chosen by partial_y_full) */
QMat partial_map(const CurveData& c, std::size_t point, std::size_t fiber_index,
                 const ArtinRep& src, const ArtinRep& tgt, const QMat& f);

/* Ξ_x(M) = ⊕_{ν(y)=x} Ind_{G_{k(y)}}^{G_{k(x)}} ∂_y(M_{η(y)}), in fiber order */
ArtinRep xi_functor(const CurveData& c, std::size_t point, const std::vector<ArtinRep>& branch_reps);
/* functorial action of Ξ_x on a family of per-branch equivariant maps */
QMat xi_map(const CurveData& c, std::size_t point, const std::vector<ArtinRep>& src,
            const std::vector<ArtinRep>& tgt, const std::vector<QMat>& branch_maps);

/* ------------------------------- N(C,R) --------------------------------- */

/* point datum: complex [m0 -> m1] in degrees [0,1] over R[1/p(x)] plus the
 * degree-0 component of f_x : M_x -> Ξ_x(M) */
struct NPointPart {
    ArtinRep m0, m1;
    QMat d;  /* differential m0 -> m1 */
    QMat f0; /* m0 -> Ξ_x(M) */
};

struct NObject {
    std::shared_ptr<const CurveData> curve;
    std::string open_set; /* descriptor of U (the complement of the listed points) */
    Coefficients coeff;   /* R */
    std::vector<ArtinRep> branch; /* M_η, aligned with curve->branches */
    std::vector<NPointPart> point; /* aligned with curve->points */
};

NObject nobject_zero(std::shared_ptr<const CurveData> c, const Coefficients& R);

/* per-point map data: chain map (phi0, phi1) plus the homotopy slot h with
 * g_x∘phi0 - Ξ(Φ_η)∘f_x = h∘d; h = 0 is the strictly commuting square */
struct NPointMap {
    QMat phi0, phi1;
    QMat h;
};

struct NMorphism {
    NObject source, target;
    std::vector<QMat> branch_map;
    std::vector<NPointMap> point_map;
};

NMorphism nmorphism_zero(const NObject& src, const NObject& tgt);
NMorphism nmorphism_identity(const NObject& m);
NMorphism nmorphism_compose(const NMorphism& g, const NMorphism& f); /* g after f */
NMorphism nmorphism_sum(const NMorphism& a, const NMorphism& b);
NMorphism nmorphism_scaled(const NMorphism& a, const mpq_class& s);
NMorphism nmorphism_difference(const NMorphism& a, const NMorphism& b);

/* ----------------------------- validation ------------------------------- */

struct Violation {
    std::string path;    /* e.g. "point[0].f0" */
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_nobject(const NObject& m);
ValidationReport validate_nmorphism(const NMorphism& f);

/* ------------------------------ builders -------------------------------- */

/* projective line over an algebraically closed field of characteristic
 * exponent p, with the listed point names removed; trivial fundamental-group
 * quotient and trivial residue fields */
std::shared_ptr<const CurveData> curve_p1(unsigned long char_exponent,
                                          const std::vector<std::string>& removed_points);
/* same underlying P¹ but with a cyclic C_n quotient of the fundamental group
 * of the complement of {0, ∞}; the two points carry inverse inertia marks */
std::shared_ptr<const CurveData> curve_gm_cyclic(unsigned long char_exponent, int n);
/* nodal curve: two branches crossing at one closed point, all residue data
 * trivial, characteristic exponent p */
std::shared_ptr<const CurveData> curve_nodal(unsigned long char_exponent);
/* spectrum of a local ring: one branch with quotient Q, one closed point with
 * residue quotient G; y carries inertia mark g and the given generator lifts.
 * residue_subgroup lists the elements of G_{k(y)} inside G (empty = all of G,
 * i.e. trivial residue extension); decomp_lifts has one entry per generator
 * of the subgroup group (for a subgroup built here that means one entry per
 * subgroup element, in sorted order), or empty for the trivial residual
 * action where every lift is the identity of Q. */
std::shared_ptr<const CurveData> curve_local(const FiniteGroup& Q, int inertia_mark,
                                             const FiniteGroup& G,
                                             const std::vector<int>& decomp_lifts,
                                             unsigned long char_exponent,
                                             const std::vector<int>& residue_subgroup = {});

} // namespace artinperv
