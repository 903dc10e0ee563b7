/* Finitely generated modules over the coefficient rings, presented by
 * relation matrices, together with the symbolic divisible (Tate-twisted)
 * modules and the admissible combination of both.  Kernels, cokernels and
 * images of morphisms of presented modules are computed by Smith normal form
 * (integral rings) or rational elimination (field case). */
#pragma once

#include "artinperv/coefficients.hpp"

#include <utility>
#include <vector>

namespace artinperv {

struct FgModule {
    Coefficients coeff;
    long generators = 0;
    ZMat relations; /* rows are relation vectors in the generators */

    FgModule() : relations(0, 0) {}
    FgModule(const Coefficients& R, long gens, ZMat rels);

    static FgModule free_module(const Coefficients& R, long rank);
    static FgModule zero(const Coefficients& R) { return free_module(R, 0); }
    static FgModule from_invariants(const Coefficients& R, long free_rank,
                                    const std::vector<mpz_class>& torsion);

    bool operator==(const FgModule& o) const; /* coefficients + normal form */
    bool operator!=(const FgModule& o) const { return !(*this == o); }
};

/* relations actually in force over the ring (adds n·id over Z/n) */
ZMat effective_relations(const FgModule& m);

struct ModuleShape {
    long free_rank = 0;                       /* free = rank of R-free summands */
    std::vector<mpz_class> invariant_factors; /* divisibility chain, entries >= 2 */
    bool operator==(const ModuleShape&) const = default;
    bool is_zero() const { return free_rank == 0 && invariant_factors.empty(); }
    std::string to_string(const Coefficients& R) const;
};

ModuleShape module_shape(const FgModule& m);
FgModule normalized_presentation(const FgModule& m);
bool module_is_zero(const FgModule& m);

FgModule fg_direct_sum(const FgModule& a, const FgModule& b);
FgModule fg_tensor(const FgModule& a, const FgModule& b);

/* torsion submodule and free quotient over Z or Z_(p) */
std::pair<FgModule, FgModule> torsion_split(const FgModule& m);

/* ------------------------------ morphisms ------------------------------- */

/* acts on generator columns: x -> matrix * x; matrix is (target gens) x (source gens) */
struct ModuleMorphism {
    FgModule source, target;
    ZMat matrix;
};

bool morphism_well_defined(const ModuleMorphism& f, std::string* why = nullptr);

/* do the given columns lie in the relation span of the module (i.e. are they
 * zero as module elements)?  The rational overload allows unit denominators. */
bool columns_in_relation_span(const ZMat& cols, const FgModule& target);
bool q_columns_in_relation_span(const QMat& cols, const FgModule& target);
/* is q (or its lcm of denominators) a unit in R? */
bool denominator_is_unit(const mpz_class& den, const Coefficients& R);

/* express the columns of rhs as R-combinations of the submodule generators
 * (columns of gens, written in the generators of amb) modulo the relations of
 * amb; the solution has unit denominators over amb.coeff.  Returns false when
 * no such expression exists over the ring. */
bool express_in_submodule(const ZMat& gens, const FgModule& amb, const QMat& rhs, QMat& x);

struct SubquotientResult {
    FgModule module;
    ZMat map; /* kernel/image: generators -> ambient generator coordinates;
                 cokernel: the projection is the identity on target generators */
};

SubquotientResult module_kernel(const ModuleMorphism& f);
SubquotientResult module_cokernel(const ModuleMorphism& f);
SubquotientResult module_image(const ModuleMorphism& f);

/* ------------------------- divisible modules ---------------------------- */

enum class DivSupport { AllBut, Only };

/* AllBut(P): (Q/Z[1/P](twist))^rank.  Only(L): (⊕_{l in L} Z(l^∞)(twist))^rank. */
struct DivisibleSummand {
    int twist = 0;
    long rank = 0;
    DivSupport mode = DivSupport::AllBut;
    std::set<unsigned long> primes;
    bool operator==(const DivisibleSummand&) const = default;
    std::string to_string() const;
};

struct DivisibleModule {
    std::vector<DivisibleSummand> summands;
    bool is_zero() const;
    static DivisibleModule zero() { return {}; }
    static DivisibleModule single(int twist, long rank,
                                  const std::set<unsigned long>& inverted = {});
    bool operator==(const DivisibleModule& o) const;
    bool operator!=(const DivisibleModule& o) const { return !(*this == o); }
};

DivisibleModule normalize_divisible(const DivisibleModule& d);
DivisibleModule divisible_direct_sum(const DivisibleModule& a, const DivisibleModule& b);
DivisibleModule divisible_tensor_coeff(const DivisibleModule& d, const Coefficients& R);
DivisibleModule divisible_twist(const DivisibleModule& d, int m);

/* N-torsion level: (Z/modulus)^rank tagged with the twist */
struct LevelPiece {
    int twist = 0;
    mpz_class modulus;
    long rank = 0;
    bool operator==(const LevelPiece&) const = default;
};
std::vector<LevelPiece> divisible_level(const DivisibleModule& d, const mpz_class& N);

/* kernel of an integer matrix F acting on shape^(cols of F):
 * finite invariant factors (support-restricted) plus a divisible rank */
struct DivisibleKernel {
    std::vector<mpz_class> finite_factors;
    long divisible_rank = 0;
};
DivisibleKernel divisible_map_kernel(const ZMat& F, const DivisibleSummand& shape);

/* ------------------------- admissible modules --------------------------- */

/* canonical merge/sort of twisted torsion pieces ((Z/modulus)(twist)^rank) */
std::vector<LevelPiece> normalize_level_pieces(const std::vector<LevelPiece>& pieces);

struct AdmissibleModule {
    FgModule finite;
    DivisibleModule divisible;
    /* finite torsion that carries a nonzero Tate twist (arises from invariants
     * of twisted divisible parts and from descent differentials) */
    std::vector<LevelPiece> twisted_torsion;

    AdmissibleModule() = default;
    AdmissibleModule(FgModule f, DivisibleModule d, std::vector<LevelPiece> tt = {})
        : finite(std::move(f)),
          divisible(normalize_divisible(d)),
          twisted_torsion(normalize_level_pieces(tt)) {}
    static AdmissibleModule zero(const Coefficients& R) {
        return AdmissibleModule(FgModule::zero(R), DivisibleModule::zero());
    }
    bool is_zero() const {
        return module_is_zero(finite) && divisible.is_zero() && twisted_torsion.empty();
    }
    bool operator==(const AdmissibleModule& o) const {
        return finite == o.finite &&
               normalize_divisible(divisible) == normalize_divisible(o.divisible) &&
               normalize_level_pieces(twisted_torsion) == normalize_level_pieces(o.twisted_torsion);
    }
    std::string to_string() const;
};

bool is_finitely_presented(const AdmissibleModule& m);
std::pair<AdmissibleModule, AdmissibleModule> admissible_torsion_split(const AdmissibleModule& m);

} // namespace artinperv
