/* Cosimplicial descent for simple-normal-crossing configurations: Čech-style
 * descent complexes of the graded pushforwards, their E₁/E₂ spectral-sequence
 * pages with abutment, the shriek (twisted colimit) variant, and the
 * dimension-4 affine-cone pipeline. */
#pragma once

#include "artinperv/omega0.hpp"

#include <utility>

namespace artinperv {

/* restriction data from a component X_i to an intersection X_ij, supplied as
 * morphism data (never inferred):
 *   - pi0_map: component map pi0(X_ij) -> pi0(X_i) (covariant on points;
 *     pullback of functions is used on degree 0),
 *   - mu_maps[n]: integer matrix mu^n(X_i) -> mu^n(X_ij) on the full
 *     divisible coordinates (a degree shared by both schemes must have an
 *     entry; an explicit zero matrix encodes the zero map),
 *   - residue_maps[n]: integer matrix mu^n(X_i) -> mu^{n-2}(X_ij) raising the
 *     twist by one, used only by the shriek colimit (absent = zero). */
struct SncRestriction {
    std::vector<int> pi0_map;
    std::map<long, ZMat> mu_maps;
    std::map<long, ZMat> residue_maps;
};

struct SncIntersection {
    GeomDatum scheme;
    SncRestriction from_first, from_second;
};

struct SNCData {
    std::vector<GeomDatum> components;
    /* key (i, j) with i < j; triple intersections are empty by hypothesis */
    std::map<std::pair<long, long>, SncIntersection> pairwise;

    void validate() const;
};

/* graded map between consecutive cosimplicial columns: a block on the
 * degree-0 finite generators plus one block per positive degree on the
 * divisible coordinates (absent degree = zero map) */
struct GradedMap {
    ZMat h0;
    std::map<long, ZMat> divisible;
    bool is_zero() const;
};

struct DescentComplex {
    std::vector<DiscreteComplex> columns;  /* cosimplicial degree 0, 1, ... */
    std::vector<GradedMap> diffs;          /* diffs[q]: columns[q] -> columns[q+1] */
    bool is_zero() const;
    /* shape, equivariance, twist-class blocks, and d∘d = 0 */
    void validate() const;
};

DescentComplex descent_complex(const SNCData& s, const Coefficients& R);

/* spectral-sequence page: entries indexed by (n, m), differentials stored at
 * their source slot and mapping (n, m) -> (n + page, m - page + 1) */
struct PageDifferential {
    ZMat finite;
    ZMat divisible;
};

struct BigradedPage {
    long page = 1;
    bool degenerate = false; /* two-column pages degenerate at E2 */
    std::map<std::pair<long, long>, ArtinRep> entries;
    std::map<std::pair<long, long>, PageDifferential> diffs;
    bool has(long n, long m) const { return entries.count({n, m}) != 0; }
    const ArtinRep& at(long n, long m) const;
};

BigradedPage e1_page(const SNCData& s, const Coefficients& R);
BigradedPage e2_page(const SNCData& s, const Coefficients& R);
DiscreteComplex abutment(const SNCData& s, const Coefficients& R);

/* d ∘ d on a page (trivially zero on two-column pages) */
bool page_d_squared_zero(const BigradedPage& p);

/* shriek colimit: the level-n column places mu^{k-2n-3}(X_J)(-n-1-r) in total
 * degree k (mu^0 = the divisible module on the components) */
DescentComplex shriek_complex(const SNCData& s, long r, const Coefficients& R);

/* the dimension-4 affine-cone pipeline over the exceptional divisor E:
 * reproduces the exact sequence 0 -> mu_1(E) -> H^3 -> M -> 0 with
 * M = ker(mu^0(E)(-1) -> mu^2(E)) (cup with the hyperplane class, supplied
 * as an embedding degree on the first basis coordinate) */
struct ConeReport {
    long dimension = 0;       /* g */
    unsigned long ell = 0;
    long b1 = 0;              /* corank of Z(ell^infty) inside H^3 */
    long divisible_rank = 0;  /* total divisible rank of H^3 */
    bool constructible = true;
    AdmissibleModule h3_sub;      /* mu_1(E) ⊗ R[1/p] */
    AdmissibleModule h3_quotient; /* M */
    AdmissibleModule h3;          /* middle term, as split module data */
    std::string to_string() const;
};

ConeReport cone_pipeline(const GeomDatum& e, unsigned long ell,
                         long embedding_degree = 1,
                         const Coefficients& R = Coefficients::integers());

long total_divisible_rank(const ArtinRep& m);

} // namespace artinperv
