/* The glued (comma) model of constructible complexes over a one-dimensional
 * base and the perverse heart N(C,R) living inside it.
 *
 * A GluedComplex is a triple (A, B, θ): a bounded complex A of branch
 * representations, per closed point a bounded complex B_x of residue
 * representations, and a chain map θ_x : B_x -> Ξ_x(A).  The recollement
 * functors read off as j*X = A, i*X = B_x, ω⁰i^!X = fib(θ_x), and the
 * perverse t-structure is glued:
 *     X ≤ 0  iff  A ≤ -1 (ordinary degrees) and B_x ≤ 0,
 *     X ≥ 1  iff  A ≥ 0 and fib(θ_x) ≥ 1          (δ(U) = 1, δ(x) = 0).
 * The dictionary to NObject places M_x = B_x[-1] (so M_x sits in [0,1] when
 * B_x sits in [-1,0]) and f_x = the degree -1 component of θ_x.
 *
 * Over Q every representation category in sight is semisimple, so every
 * glued complex is isomorphic to a minimal model (zero differentials,
 * degreewise θ); truncation then selects direct summands and every heart
 * operation is "compute in GluedComplex, truncate, read back".  Morphisms of
 * glued complexes are triples (a, b, h) with a homotopy slot h : B_X ->
 * Ξ(A_Y)[-1] measuring the failure of the θ-square to commute strictly. */
#pragma once

#include "artinperv/curve.hpp"

#include <map>
#include <optional>
#include <utility>

namespace artinperv {

/* ------------------------ complexes of representations ------------------ */

struct RepComplex {
    std::shared_ptr<const FiniteGroup> group;
    Coefficients coeff;
    int min_degree = 0;
    std::vector<ArtinRep> terms; /* terms[i] lives in degree min_degree + i */
    std::vector<QMat> diffs;     /* diffs[i] : terms[i] -> terms[i+1] */

    bool empty() const { return terms.empty(); }
    int max_degree() const { return min_degree + static_cast<int>(terms.size()) - 1; }
    bool has_degree(int n) const { return !terms.empty() && n >= min_degree && n <= max_degree(); }
    const ArtinRep& term(int n) const; /* throws outside the support */
    long rank_at(int n) const;         /* 0 outside the support */
    QMat diff(int n) const;            /* zero map outside */
};

RepComplex rep_complex_zero(std::shared_ptr<const FiniteGroup> g, const Coefficients& R);
RepComplex rep_complex_single(const ArtinRep& m, int degree);
void validate_rep_complex(const RepComplex& c); /* d² = 0, equivariance, shapes */

/* ------------------------------ glued complexes ------------------------- */

struct GluedPoint {
    RepComplex b;
    std::vector<QMat> theta; /* theta[i] : b.terms[i] -> Ξ_x(A)^{same degree} */
};

struct GluedComplex {
    std::shared_ptr<const CurveData> curve;
    Coefficients coeff;
    std::vector<RepComplex> a;  /* per branch */
    std::vector<GluedPoint> b;  /* per closed point */
};

void validate_glued(const GluedComplex& x);
GluedComplex glued_zero(std::shared_ptr<const CurveData> c, const Coefficients& R);
GluedComplex glued_shift(const GluedComplex& x, int k); /* X[k], (X[k])^n = X^{n+k} */
bool glued_is_zero(const GluedComplex& x);
bool glued_data_equal(const GluedComplex& x, const GluedComplex& y);

/* terms of Ξ_x(A) in degree n (the target of theta), as a representation */
ArtinRep glued_xi_term(const GluedComplex& x, std::size_t point, int n);

GluedComplex glued_from_nobject(const NObject& m);
/* inverse dictionary; requires a heart-shaped complex (A concentrated in
 * degree -1, B_x in [-1,0], H^{-1}(θ) injective) up to minimalization */
NObject heart_object_from_glued(const GluedComplex& x);

/* ------------------------------ glued morphisms ------------------------- */

struct GluedPointMap {
    std::vector<QMat> b; /* per degree of source B_x, into target B_x */
    std::vector<QMat> h; /* h[i] : B_X^deg -> Ξ(A_Y)^{deg-1} */
};

struct GluedMorphism {
    GluedComplex source, target;
    std::vector<std::vector<QMat>> a; /* per branch, per degree of source A */
    std::vector<GluedPointMap> pts;
};

/* checks chain-map identities and θ_Y∘b - Ξ(a)∘θ_X = d∘h + h∘d */
void validate_glued_morphism(const GluedMorphism& f);
GluedMorphism glued_morphism_from_nmorphism(const NMorphism& f);
GluedMorphism glued_compose(const GluedMorphism& g, const GluedMorphism& f);
/* f[k]: homotopy slots pick up (-1)^k */
GluedMorphism glued_shift_morphism(const GluedMorphism& f, int k);
/* cone with A_Z = cone(a), B_Z = cone(b), θ_Z(p,q) = (θ_X p, h p + θ_Y q) */
GluedComplex glued_cone(const GluedMorphism& f);

/* dimension of Hom_D(x, y) = H⁰ of the glued hom complex (Q only) */
long glued_hom_rank(const GluedComplex& x, const GluedComplex& y);
/* strict chain-map representatives of a basis of Hom_D(x, y) (Q only) */
std::vector<GluedMorphism> glued_hom_basis(const GluedComplex& x, const GluedComplex& y);

/* ------------------------- truncation and cohomology -------------------- */

/* minimal model: zero differentials, degreewise θ (Q only) */
GluedComplex glued_minimalize(const GluedComplex& x);

/* perverse truncation pair (X^{≤n}, X^{≥n+1}); results are minimal models */
std::pair<GluedComplex, GluedComplex> perverse_truncate_at(const GluedComplex& x, int n);
std::pair<GluedComplex, GluedComplex> perverse_truncate(const GluedComplex& x);

NObject perverse_cohomology(const GluedComplex& x, int n);

/* ranks of H^k(i*X) and H^k(ω⁰i^!X) = H^k(fib θ) at one point (Q only) */
struct PointShapes {
    std::map<int, long> istar;
    std::map<int, long> omega_shriek;
};
PointShapes glued_point_shapes(const GluedComplex& x, std::size_t point);

/* both supported-extension conditions of the intermediate extension:
 * i* concentrated in perverse degrees < 0 and ω⁰i^! in degrees > 0 */
bool satisfies_carext(const NObject& p);

/* ----------------------------- heart operations ------------------------- */

/* extreme extensions of a heart object L on U (one representation per
 * branch, all with the same coefficients).  j_shriek places Ξ_x(L) in degree
 * 1 of M_x with the identity as connecting differential (so i* of the result
 * is acyclic); omega0_j_star places Ξ_x(L) in degree 0 with f_x = id. */
NObject j_shriek(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l);
NObject omega0_j_star(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l);
/* the canonical comparison j_!L -> ω⁰j_*L (identity over U) */
NMorphism shriek_to_star(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l);

/* i_* of a family of point representations placed in perverse degree 0 */
NObject i_star(std::shared_ptr<const CurveData> c, const Coefficients& R,
               const std::vector<ArtinRep>& point_reps);

/* H⁰(M_x) and H¹(M_x) as representations (Q only) */
ArtinRep point_h0(const NObject& m, std::size_t point);
ArtinRep point_h1(const NObject& m, std::size_t point);

struct KernelResult {
    NObject kernel;
    NMorphism inclusion; /* kernel -> source */
};
struct CokernelResult {
    NObject cokernel;
    NMorphism projection; /* target -> cokernel */
};
KernelResult heart_kernel_full(const NMorphism& f);
CokernelResult heart_cokernel_full(const NMorphism& f);
NObject heart_kernel(const NMorphism& f);
NObject heart_cokernel(const NMorphism& f);
NObject heart_image(const NMorphism& f);   /* kernel of the cokernel projection */
NObject heart_coimage(const NMorphism& f); /* cokernel of the kernel inclusion */

/* image of j_!L -> ω⁰j_*L; requires Q coefficients */
NObject intermediate_extension(std::shared_ptr<const CurveData> c,
                               const std::vector<ArtinRep>& l);

/* E_C = j_!* of the unit local system shifted into the heart */
NObject weightless_motive(std::shared_ptr<const CurveData> c);

/* minimal form: M_x with zero differential and injective f⁰ (Q only) */
NObject normalize_nobject(const NObject& m);
bool nobjects_data_equal(const NObject& a, const NObject& b);
bool nobjects_isomorphic(const NObject& a, const NObject& b); /* Q only */

/* ----------------------------- hom spaces ------------------------------- */

/* basis representatives of Hom_{N(C,R)}(x, y) (Q only) */
std::vector<NMorphism> heart_hom_basis(const NObject& x, const NObject& y);
bool nmorphism_is_null_homotopic(const NMorphism& f);
bool nmorphisms_homotopic(const NMorphism& f, const NMorphism& g);
/* solve κ∘ξ ≃ ψ for ξ : T -> kernel; empty if no factorization exists */
std::optional<NMorphism> factor_through_kernel(const KernelResult& k, const NMorphism& psi);
/* solve ξ∘π ≃ ψ for ξ : cokernel -> T */
std::optional<NMorphism> factor_through_cokernel(const CokernelResult& c, const NMorphism& psi);

/* ------------------------- simples and series --------------------------- */

bool is_simple(const NObject& m);                        /* Q only */
std::vector<NObject> composition_series(const NObject& m); /* socle-first */

/* per-branch generic ranks and per-point Euler characteristics
 * rank H⁰(M_x) - rank H¹(M_x); both are additive in short exact sequences */
struct RankProfile {
    std::vector<long> branch;
    std::vector<long> point_euler;
    bool operator==(const RankProfile&) const = default;
};
RankProfile rank_profile(const NObject& m);

/* --------------------------- six-term sequence --------------------------- */

/* 0 -> i_* H^{-1} i^* M -> j_! j^* M -> M -> i_* H⁰ i^* M -> 0 */
struct SixTermSequence {
    NObject sub_point;  /* i_* H^{-1} i^* M */
    NObject shriek;     /* j_! j^* M */
    NObject target;     /* M */
    NObject quot_point; /* i_* H⁰ i^* M */
    NMorphism a, b, c;  /* the three connecting maps */
};
SixTermSequence six_term_sequence(const NObject& m); /* Q only */

/* ----------------------------- realization ------------------------------ */

/* the v-adic realization at ℓ: a symbolic coefficient extension tag over the
 * same matrix data (tame comparison e_y = id) */
struct RealizedObject {
    unsigned long ell = 0;
    NObject data;
};
struct RealizedMorphism {
    unsigned long ell = 0;
    NMorphism map;
};
RealizedObject realize_v(const NObject& m, unsigned long ell);
RealizedMorphism realize_v(const NMorphism& f, unsigned long ell);
RealizedObject realized_heart_kernel(const RealizedMorphism& f);
RealizedObject realized_heart_cokernel(const RealizedMorphism& f);
bool realized_data_equal(const RealizedObject& a, const RealizedObject& b);

} // namespace artinperv
