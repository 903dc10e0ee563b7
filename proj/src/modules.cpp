#include "artinperv/modules.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace artinperv {

FgModule::FgModule(const Coefficients& R, long gens, ZMat rels)
    : coeff(R), generators(gens), relations(std::move(rels)) {
    if (relations.cols() != generators)
        throw error("FgModule: relation matrix must have one column per generator");
}

FgModule FgModule::free_module(const Coefficients& R, long rank) {
    return FgModule(R, rank, ZMat(0, rank));
}

FgModule FgModule::from_invariants(const Coefficients& R, long free_rank,
                                   const std::vector<mpz_class>& torsion) {
    long k = static_cast<long>(torsion.size());
    ZMat rels(k, k + free_rank);
    for (long i = 0; i < k; ++i) rels.at(i, i) = torsion[static_cast<size_t>(i)];
    return FgModule(R, k + free_rank, std::move(rels));
}

ZMat effective_relations(const FgModule& m) {
    if (m.coeff.kind == CoeffKind::IntegersMod)
        return ZMat::vstack(m.relations, ZMat::scalar(m.generators, m.coeff.n));
    return m.relations;
}

ModuleShape module_shape(const FgModule& m) {
    ModuleShape shape;
    if (m.coeff.is_zero_ring()) return shape;
    SnfResult s = smith_normal_form(effective_relations(m));
    const long limit = std::min(s.d.rows(), s.d.cols());
    for (long j = 0; j < m.generators; ++j) {
        mpz_class d = (j < limit) ? s.d.at(j, j) : mpz_class(0);
        if (d == 0) {
            ++shape.free_rank;
            continue;
        }
        mpz_class f = m.coeff.normalize_factor(d);
        if (f == 1) continue; /* unit: generator dies */
        if (m.coeff.kind == CoeffKind::IntegersMod && f == m.coeff.n) {
            ++shape.free_rank; /* a full Z/n summand is free over Z/n */
            continue;
        }
        shape.invariant_factors.push_back(f);
    }
    return shape;
}

std::string ModuleShape::to_string(const Coefficients& R) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << R.to_string() << "^" << free_rank;
        first = false;
    }
    for (const auto& d : invariant_factors) {
        if (!first) os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    return os.str();
}

FgModule normalized_presentation(const FgModule& m) {
    ModuleShape s = module_shape(m);
    return FgModule::from_invariants(m.coeff, s.free_rank, s.invariant_factors);
}

bool module_is_zero(const FgModule& m) { return module_shape(m).is_zero(); }

bool FgModule::operator==(const FgModule& o) const {
    return coeff == o.coeff && module_shape(*this) == module_shape(o);
}

FgModule fg_direct_sum(const FgModule& a, const FgModule& b) {
    if (a.coeff != b.coeff) throw error("direct sum: coefficient mismatch");
    return FgModule(a.coeff, a.generators + b.generators,
                    ZMat::block_diag(a.relations, b.relations));
}

FgModule fg_tensor(const FgModule& a, const FgModule& b) {
    if (a.coeff != b.coeff) throw error("tensor: coefficient mismatch");
    long g = a.generators * b.generators;
    ZMat rels(a.relations.rows() * b.generators + b.relations.rows() * a.generators, g);
    long row = 0;
    /* relations of a tensored with each generator of b */
    for (long r = 0; r < a.relations.rows(); ++r)
        for (long j = 0; j < b.generators; ++j, ++row)
            for (long i = 0; i < a.generators; ++i)
                rels.at(row, i * b.generators + j) = a.relations.at(r, i);
    for (long r = 0; r < b.relations.rows(); ++r)
        for (long i = 0; i < a.generators; ++i, ++row)
            for (long j = 0; j < b.generators; ++j)
                rels.at(row, i * b.generators + j) = b.relations.at(r, j);
    return FgModule(a.coeff, g, std::move(rels));
}

std::pair<FgModule, FgModule> torsion_split(const FgModule& m) {
    if (!m.coeff.is_z_like()) throw error("no torsion theory needed");
    ModuleShape s = module_shape(m);
    return {FgModule::from_invariants(m.coeff, 0, s.invariant_factors),
            FgModule::from_invariants(m.coeff, s.free_rank, {})};
}

/* ------------------------------ morphisms ------------------------------- */

namespace {

/* do the columns of C lie in the R-span of the columns of B? */
bool ring_membership(const ZMat& B, const ZMat& C, const Coefficients& R, std::string* why) {
    if (C.cols() == 0) return true;
    switch (R.kind) {
        case CoeffKind::Rationals: {
            QMat x;
            if (!q_solve(q_from_z(B), q_from_z(C), x)) {
                if (why) *why = "no rational solution";
                return false;
            }
            return true;
        }
        case CoeffKind::IntegersMod: {
            ZMat aug = ZMat::hstack(B, ZMat::scalar(B.rows(), R.n));
            ZMat x;
            if (!z_solve(aug, C, x)) {
                if (why) *why = "no solution modulo " + R.n.get_str();
                return false;
            }
            return true;
        }
        case CoeffKind::Integers:
        case CoeffKind::LocalizedAt: {
            std::vector<mpz_class> dens;
            if (!z_solve_denominators(B, C, dens)) {
                if (why) *why = "no rational solution";
                return false;
            }
            for (const auto& k : dens) {
                mpz_class rem = k;
                if (R.kind == CoeffKind::Integers)
                    rem = strip_primes(k, R.inverted);
                else {
                    /* over Z_(p) every prime except p is invertible */
                    mpz_class pp = p_power_part(k, R.p);
                    rem = pp;
                }
                if (rem != 1) {
                    if (why) *why = "denominator " + k.get_str() + " is not a unit";
                    return false;
                }
            }
            return true;
        }
    }
    throw error("ring_membership: bad ring");
}

/* solve B X = k_j C_j columnwise over Z, where each k_j is the minimal
 * denominator (required to be a unit of R); the columns of X then R-span the
 * coordinates of the columns of C in the basis B */
ZMat ring_solve_relations(const ZMat& B, const ZMat& C, const Coefficients& R) {
    if (C.cols() == 0) return ZMat(B.cols(), 0);
    if (R.kind == CoeffKind::IntegersMod) {
        /* solve B X + n Y = C integrally; the X block carries the coordinates */
        ZMat aug = ZMat::hstack(B, ZMat::scalar(B.rows(), R.n));
        ZMat x;
        if (!z_solve(aug, C, x)) throw error("module relations escaped the span (mod n)");
        return x.submatrix(0, 0, B.cols(), C.cols());
    }
    std::vector<mpz_class> dens;
    if (!z_solve_denominators(B, C, dens))
        throw error("module relations escaped the span");
    ZMat scaled = C;
    for (long j = 0; j < C.cols(); ++j) {
        const mpz_class& k = dens[static_cast<size_t>(j)];
        bool unit = false;
        switch (R.kind) {
            case CoeffKind::Rationals: unit = true; break;
            case CoeffKind::Integers: unit = (strip_primes(k, R.inverted) == 1); break;
            case CoeffKind::LocalizedAt: unit = (p_power_part(k, R.p) == 1); break;
            case CoeffKind::IntegersMod: break;
        }
        if (!unit) throw error("module relations escaped the span (non-unit denominator)");
        for (long i = 0; i < C.rows(); ++i) scaled.at(i, j) *= k;
    }
    ZMat x;
    if (!z_solve(B, scaled, x)) throw error("module relations escaped the span");
    return x;
}

} // namespace

bool denominator_is_unit(const mpz_class& den, const Coefficients& R) {
    switch (R.kind) {
        case CoeffKind::Rationals: return den != 0;
        case CoeffKind::Integers: return strip_primes(den, R.inverted) == 1;
        case CoeffKind::LocalizedAt: return den != 0 && p_power_part(den, R.p) == 1;
        case CoeffKind::IntegersMod: return gcd(den, R.n) == 1;
    }
    throw error("denominator_is_unit: bad ring");
}

bool columns_in_relation_span(const ZMat& cols, const FgModule& target) {
    if (cols.is_zero()) return true;
    return ring_membership(effective_relations(target).transpose(), cols, target.coeff, nullptr);
}

bool q_columns_in_relation_span(const QMat& cols, const FgModule& target) {
    if (cols.is_zero()) return true;
    mpz_class den = q_denominator(cols);
    if (!denominator_is_unit(den, target.coeff)) return false;
    ZMat scaled(cols.rows(), cols.cols());
    for (long i = 0; i < cols.rows(); ++i)
        for (long j = 0; j < cols.cols(); ++j) {
            mpq_class v = cols.at(i, j) * den;
            scaled.at(i, j) = v.get_num();
        }
    return columns_in_relation_span(scaled, target);
}

bool express_in_submodule(const ZMat& gens, const FgModule& amb, const QMat& rhs, QMat& x) {
    if (gens.rows() != amb.generators || rhs.rows() != amb.generators)
        throw error("express_in_submodule: shape mismatch");
    const Coefficients& R = amb.coeff;
    if (rhs.cols() == 0 || R.is_zero_ring()) {
        x = QMat::zero(gens.cols(), rhs.cols());
        return true;
    }
    if (R.is_field()) {
        QMat a = QMat::hstack(q_from_z(gens), q_from_z(effective_relations(amb).transpose()));
        QMat sol;
        if (!q_solve(a, rhs, sol)) return false;
        x = sol.submatrix(0, 0, gens.cols(), rhs.cols());
        return true;
    }
    mpz_class den = q_denominator(rhs);
    if (!denominator_is_unit(den, R)) return false;
    ZMat rz = z_from_q(rhs.scaled(den));
    ZMat a = ZMat::hstack(gens, effective_relations(amb).transpose());
    if (R.kind == CoeffKind::IntegersMod) {
        ZMat sol;
        if (!z_solve(a, rz, sol)) return false;
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), R.n.get_mpz_t()) == 0) return false;
        x = q_from_z(sol.submatrix(0, 0, gens.cols(), rz.cols()).scaled(dinv).mod(R.n));
        return true;
    }
    /* Z or Z_(p): find the minimal denominators, require them to be units */
    std::vector<mpz_class> dens;
    if (!z_solve_denominators(a, rz, dens)) return false;
    mpz_class need = 1;
    for (const auto& k : dens) need = lcm(need, k);
    if (!denominator_is_unit(need, R)) return false;
    ZMat sol;
    if (!z_solve(a, rz.scaled(need), sol)) return false; /* unreachable: need clears all columns */
    mpq_class scale(mpz_class(1), need * den);
    scale.canonicalize();
    x = q_from_z(sol.submatrix(0, 0, gens.cols(), rz.cols())).scaled(scale);
    return true;
}

bool morphism_well_defined(const ModuleMorphism& f, std::string* why) {
    if (f.source.coeff != f.target.coeff) {
        if (why) *why = "coefficient mismatch";
        return false;
    }
    if (f.matrix.rows() != f.target.generators || f.matrix.cols() != f.source.generators) {
        if (why) *why = "matrix shape does not match generators";
        return false;
    }
    ZMat relN = effective_relations(f.target).transpose(); /* columns span relations */
    ZMat image_of_rels = f.matrix * f.source.relations.transpose();
    return ring_membership(relN, image_of_rels, f.source.coeff, why);
}

SubquotientResult module_kernel(const ModuleMorphism& f) {
    const Coefficients& R = f.source.coeff;
    if (R.is_zero_ring())
        return {FgModule::zero(R), ZMat(f.source.generators, 0)};
    ZMat relN = effective_relations(f.target).transpose();
    ZMat relM = effective_relations(f.source).transpose();

    if (R.is_field()) {
        QMat G = QMat::hstack(q_from_z(f.matrix), q_from_z(relN));
        QMat K0 = q_kernel_basis(G);
        QMat pre = K0.submatrix(0, 0, f.source.generators, K0.cols());
        QMat B = q_column_space_basis(pre); /* basis of {x : Fx in W_N} */
        /* relations: coordinates of W_M in the basis B */
        QMat Cq;
        if (!q_solve(B, q_from_z(relM), Cq))
            throw error("module_kernel: relations escaped the kernel");
        /* scale columns to integers (any scaling is a unit over Q) */
        ZMat rels(Cq.cols(), Cq.rows());
        for (long j = 0; j < Cq.cols(); ++j) {
            mpz_class den = 1;
            for (long i = 0; i < Cq.rows(); ++i) den = lcm(den, Cq.at(i, j).get_den());
            for (long i = 0; i < Cq.rows(); ++i) {
                mpq_class v = Cq.at(i, j) * den;
                rels.at(j, i) = v.get_num();
            }
        }
        /* scale B to an integer inclusion matrix (unit scaling over Q) */
        mpz_class den = q_denominator(B);
        ZMat Bi(B.rows(), B.cols());
        for (long i = 0; i < B.rows(); ++i)
            for (long j = 0; j < B.cols(); ++j) {
                mpq_class v = B.at(i, j) * den;
                Bi.at(i, j) = v.get_num();
            }
        return {FgModule(R, Bi.cols(), std::move(rels)), Bi};
    }

    ZMat G = ZMat::hstack(f.matrix, relN);
    ZMat K0 = z_kernel_basis(G);
    ZMat pre = K0.submatrix(0, 0, f.source.generators, K0.cols());
    ZMat B = z_column_lattice_basis(pre); /* basis of the pre-image lattice */
    ZMat C = ring_solve_relations(B, relM, R);
    return {FgModule(R, B.cols(), C.transpose()), B};
}

SubquotientResult module_cokernel(const ModuleMorphism& f) {
    const Coefficients& R = f.source.coeff;
    ZMat rels = ZMat::vstack(f.matrix.transpose(), f.target.relations);
    return {FgModule(R, f.target.generators, std::move(rels)),
            ZMat::identity(f.target.generators)};
}

SubquotientResult module_image(const ModuleMorphism& f) {
    /* image ≅ source / kernel, included in the target by the original matrix */
    SubquotientResult k = module_kernel(f);
    ZMat rels = ZMat::vstack(f.source.relations, k.map.transpose());
    return {FgModule(f.source.coeff, f.source.generators, std::move(rels)), f.matrix};
}

/* ------------------------- divisible modules ---------------------------- */

std::string DivisibleSummand::to_string() const {
    std::ostringstream os;
    if (mode == DivSupport::AllBut) {
        os << "Q/Z";
        if (!primes.empty()) {
            mpz_class prod = 1;
            for (unsigned long q : primes) prod *= q;
            os << "[1/" << prod.get_str() << "]";
        }
    } else {
        os << "Z(";
        bool first = true;
        for (unsigned long q : primes) {
            os << (first ? "" : ",") << q << "^inf";
            first = false;
        }
        os << ")";
    }
    os << "(" << twist << ")";
    if (rank != 1) os << "^" << rank;
    return os.str();
}

bool DivisibleModule::is_zero() const {
    for (const auto& s : summands)
        if (s.rank > 0 && !(s.mode == DivSupport::Only && s.primes.empty())) return false;
    return true;
}

DivisibleModule DivisibleModule::single(int twist, long rank,
                                        const std::set<unsigned long>& inverted) {
    DivisibleModule d;
    d.summands.push_back({twist, rank, DivSupport::AllBut, inverted});
    return normalize_divisible(d);
}

bool DivisibleModule::operator==(const DivisibleModule& o) const {
    return normalize_divisible(*this).summands == normalize_divisible(o).summands;
}

DivisibleModule normalize_divisible(const DivisibleModule& d) {
    std::map<std::tuple<int, int, std::vector<unsigned long>>, long> acc;
    for (const auto& s : d.summands) {
        if (s.rank == 0) continue;
        if (s.rank < 0) throw error("divisible module: negative rank");
        if (s.mode == DivSupport::Only && s.primes.empty()) continue; /* empty support = 0 */
        std::vector<unsigned long> ps(s.primes.begin(), s.primes.end());
        acc[{s.twist, static_cast<int>(s.mode), ps}] += s.rank;
    }
    DivisibleModule out;
    for (const auto& [key, rank] : acc) {
        const auto& [twist, mode, ps] = key;
        out.summands.push_back({twist, rank, static_cast<DivSupport>(mode),
                                std::set<unsigned long>(ps.begin(), ps.end())});
    }
    return out;
}

DivisibleModule divisible_direct_sum(const DivisibleModule& a, const DivisibleModule& b) {
    DivisibleModule out = a;
    out.summands.insert(out.summands.end(), b.summands.begin(), b.summands.end());
    return normalize_divisible(out);
}

DivisibleModule divisible_tensor_coeff(const DivisibleModule& d, const Coefficients& R) {
    DivisibleModule out;
    for (const auto& s : d.summands) {
        DivisibleSummand t = s;
        switch (R.kind) {
            case CoeffKind::Rationals:
            case CoeffKind::IntegersMod:
                continue; /* divisible ⊗ Q = 0 = divisible ⊗ Z/n */
            case CoeffKind::Integers:
                if (s.mode == DivSupport::AllBut) {
                    t.primes.insert(R.inverted.begin(), R.inverted.end());
                } else {
                    t.primes.clear();
                    for (unsigned long q : s.primes)
                        if (!R.inverted.count(q)) t.primes.insert(q);
                }
                break;
            case CoeffKind::LocalizedAt:
                if (s.mode == DivSupport::AllBut) {
                    if (s.primes.count(R.p)) continue; /* p-part was already inverted away */
                    t.mode = DivSupport::Only;
                    t.primes = {R.p};
                } else {
                    if (!s.primes.count(R.p)) continue;
                    t.primes = {R.p};
                }
                break;
        }
        out.summands.push_back(t);
    }
    return normalize_divisible(out);
}

DivisibleModule divisible_twist(const DivisibleModule& d, int m) {
    DivisibleModule out = d;
    for (auto& s : out.summands) s.twist += m;
    return normalize_divisible(out);
}

std::vector<LevelPiece> divisible_level(const DivisibleModule& d, const mpz_class& N) {
    if (N < 1) throw error("level: N must be positive");
    std::map<std::pair<int, mpz_class>, long> acc;
    for (const auto& s : normalize_divisible(d).summands) {
        mpz_class Np;
        if (s.mode == DivSupport::AllBut) {
            Np = strip_primes(N, s.primes);
        } else {
            Np = 1;
            for (unsigned long q : s.primes) Np *= p_power_part(N, q);
        }
        if (Np == 1) continue;
        acc[{s.twist, Np}] += s.rank;
    }
    std::vector<LevelPiece> out;
    for (const auto& [key, rank] : acc) out.push_back({key.first, key.second, rank});
    return out;
}

DivisibleKernel divisible_map_kernel(const ZMat& F, const DivisibleSummand& shape) {
    if (F.cols() != shape.rank) throw error("divisible_map_kernel: shape mismatch");
    DivisibleKernel out;
    SnfResult s = smith_normal_form(F);
    for (long i = 0; i < shape.rank; ++i) {
        mpz_class d = (i < static_cast<long>(s.diag.size())) ? s.diag[static_cast<size_t>(i)]
                                                             : mpz_class(0);
        if (d == 0) {
            ++out.divisible_rank;
            continue;
        }
        mpz_class dp;
        if (shape.mode == DivSupport::AllBut) {
            dp = strip_primes(d, shape.primes);
        } else {
            dp = 1;
            for (unsigned long q : shape.primes) dp *= p_power_part(d, q);
        }
        if (dp > 1) out.finite_factors.push_back(dp);
    }
    std::sort(out.finite_factors.begin(), out.finite_factors.end());
    return out;
}

/* ------------------------- admissible modules --------------------------- */

std::vector<LevelPiece> normalize_level_pieces(const std::vector<LevelPiece>& pieces) {
    std::map<std::pair<int, mpz_class>, long> acc;
    for (const auto& p : pieces) {
        if (p.rank == 0 || p.modulus <= 1) continue;
        if (p.rank < 0) throw error("twisted torsion: negative rank");
        acc[{p.twist, p.modulus}] += p.rank;
    }
    std::vector<LevelPiece> out;
    for (const auto& [key, rank] : acc) out.push_back({key.first, key.second, rank});
    return out;
}

bool is_finitely_presented(const AdmissibleModule& m) { return m.divisible.is_zero(); }

std::pair<AdmissibleModule, AdmissibleModule> admissible_torsion_split(const AdmissibleModule& m) {
    auto [tor, fr] = torsion_split(m.finite);
    /* divisible and twisted-torsion parts are torsion: they ride along */
    return {AdmissibleModule(tor, m.divisible, m.twisted_torsion),
            AdmissibleModule(fr, DivisibleModule::zero())};
}

std::string AdmissibleModule::to_string() const {
    std::string fin = module_shape(finite).to_string(finite.coeff);
    DivisibleModule d = normalize_divisible(divisible);
    std::ostringstream os;
    if (fin != "0") os << fin;
    for (const auto& p : normalize_level_pieces(twisted_torsion)) {
        if (os.tellp() > 0) os << " + ";
        os << "(Z/" << p.modulus.get_str() << ")(" << p.twist << ")";
        if (p.rank != 1) os << "^" << p.rank;
    }
    for (const auto& s : d.summands) {
        if (os.tellp() > 0) os << " + ";
        os << s.to_string();
    }
    if (os.tellp() == 0) return "0";
    return os.str();
}

} // namespace artinperv
