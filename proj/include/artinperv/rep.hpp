/* Representations of finite groups on admissible modules: restriction,
 * induction, invariants, duals and tensor products, Hom modules, kernels and
 * cokernels of equivariant maps, Maschke decomposition over Q, and symbolic
 * Tate twists. */
#pragma once

#include "artinperv/group.hpp"
#include "artinperv/modules.hpp"

#include <memory>

namespace artinperv {

/* a divisible summand with a group action: integer matrices per element,
 * exactly multiplicative; at level N the element g acts by
 * action[g] * chi(g)^twist (mod the level) */
struct DivisiblePart {
    DivisibleSummand shape;
    std::vector<ZMat> action;
};

struct ArtinRep {
    std::shared_ptr<const FiniteGroup> group;
    Coefficients coeff;
    FgModule finite;            /* finite part (presentation over coeff) */
    std::vector<QMat> action;   /* per element; non-field rings require unit denominators */
    std::vector<DivisiblePart> divisible;
    std::vector<mpz_class> twist_chi; /* cyclotomic character values; empty = trivial */
    int finite_twist = 0;             /* accumulated twist on the finite part */

    long finite_generators() const { return finite.generators; }
    const FiniteGroup& grp() const { return *group; }

    static ArtinRep trivial(std::shared_ptr<const FiniteGroup> g, const Coefficients& R,
                            long rank = 1);
    static ArtinRep regular(std::shared_ptr<const FiniteGroup> g, const Coefficients& R);
    /* perms[g] lists images of basis indices under g */
    static ArtinRep permutation(std::shared_ptr<const FiniteGroup> g, const Coefficients& R,
                                const std::vector<std::vector<int>>& perms);
    static ArtinRep from_generator_matrices(std::shared_ptr<const FiniteGroup> g,
                                            const Coefficients& R, const FgModule& module,
                                            const std::vector<QMat>& generator_action);
    static ArtinRep zero_rep(std::shared_ptr<const FiniteGroup> g, const Coefficients& R);
};

std::shared_ptr<const FiniteGroup> share_group(FiniteGroup g);
bool groups_equal(const FiniteGroup& a, const FiniteGroup& b);

void validate_rep(const ArtinRep& m); /* throws artinperv::error with a diagnosis */
AdmissibleModule admissible_module(const ArtinRep& m);
std::vector<mpq_class> character(const ArtinRep& m);

/* presentation-normalized copy: finite part becomes from_invariants form,
 * action transported along the change of coordinates */
ArtinRep normalize_rep(const ArtinRep& m);

ArtinRep rep_direct_sum(const ArtinRep& a, const ArtinRep& b);

/* phi: H -> G, m a rep of G; yields the rep of H */
ArtinRep restrict_rep(const ArtinRep& m, const GroupHom& phi);
/* incl: H into G injective, m a rep of H; chi_G optionally installs the twist
 * character of G (must restrict to m's along incl) */
ArtinRep induce_rep(const ArtinRep& m, const GroupHom& incl,
                    const std::vector<mpz_class>& chi_G = {});

struct InvariantsResult {
    AdmissibleModule module;
    ZMat inclusion; /* finite-part: invariant generators in ambient coordinates */
};
InvariantsResult invariants(const ArtinRep& m, const std::vector<int>& elements);

ArtinRep dual_rep(const ArtinRep& m);                      /* rationals only */
ArtinRep tensor_rep(const ArtinRep& a, const ArtinRep& b); /* finite ⊗ finite */

AdmissibleModule hom_space(const ArtinRep& m, const ArtinRep& n);
/* basis of Hom_{Q[G]}(M, N) as matrices (rationals, free modules) */
std::vector<QMat> equivariant_hom_basis(const ArtinRep& m, const ArtinRep& n);
/* character inner product <chi_M, chi_N> (rationals; equals dim Hom) */
long hom_rank_q(const ArtinRep& m, const ArtinRep& n);
std::vector<mpq_class> induced_character(const ArtinRep& m, const GroupHom& incl);

ArtinRep tate_twist(const ArtinRep& m, int t, const std::vector<mpz_class>& chi = {});

struct EquivariantMap {
    ArtinRep source, target;
    QMat matrix; /* finite part only; divisible parts must match trivially */
};
bool equivariant_map_valid(const EquivariantMap& f, std::string* why = nullptr);
ArtinRep rep_kernel(const EquivariantMap& f, QMat* inclusion = nullptr);
ArtinRep rep_cokernel(const EquivariantMap& f);
ArtinRep rep_image(const EquivariantMap& f, QMat* inclusion = nullptr);

struct MaschkePiece {
    ArtinRep simple;
    long multiplicity = 1;
};
std::vector<MaschkePiece> maschke_decompose(const ArtinRep& m);
bool reps_isomorphic_q(const ArtinRep& a, const ArtinRep& b);
bool is_simple_q(const ArtinRep& m);

/* kron(A, B): block matrix with blocks a_ij * B (column-major vec convention
 * vec(A X B) = kron(B^T, A) vec(X)) */
QMat q_kron(const QMat& a, const QMat& b);

} // namespace artinperv
