#include "artinperv/rep.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace artinperv {

/* ----------------------------- small helpers ---------------------------- */

std::shared_ptr<const FiniteGroup> share_group(FiniteGroup g) {
    return std::make_shared<const FiniteGroup>(std::move(g));
}

bool groups_equal(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order == b.order && a.table == b.table;
}

QMat q_kron(const QMat& a, const QMat& b) {
    QMat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) {
            if (a.at(i, j) == 0) continue;
            for (long k = 0; k < b.rows(); ++k)
                for (long l = 0; l < b.cols(); ++l)
                    m.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return m;
}

namespace {

ZMat integerize(const QMat& m, mpz_class* den_out = nullptr) {
    mpz_class den = q_denominator(m);
    ZMat out(m.rows(), m.cols());
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            mpq_class v = m.at(i, j) * den;
            out.at(i, j) = v.get_num();
        }
    if (den_out) *den_out = den;
    return out;
}

/* chi(g)^t as an integer pair trick: returns (chi^max(t,0), chi^max(-t,0)) */
std::pair<mpz_class, mpz_class> twist_powers(const mpz_class& chi, int t) {
    mpz_class pos = 1, neg = 1;
    for (int i = 0; i < t; ++i) pos *= chi;
    for (int i = 0; i < -t; ++i) neg *= chi;
    return {pos, neg};
}

mpz_class mod_pow_signed(const mpz_class& base, int t, const mpz_class& e) {
    if (e <= 1) return 0;
    mpz_class b = base % e;
    if (b < 0) b += e;
    if (t < 0) {
        mpz_class binv;
        if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t()) == 0)
            throw error("twist character not invertible at this level");
        b = binv;
        t = -t;
    }
    mpz_class r = 1;
    for (int i = 0; i < t; ++i) r = (r * b) % e;
    return r;
}

} // namespace

/* ----------------------------- constructors ----------------------------- */

ArtinRep ArtinRep::trivial(std::shared_ptr<const FiniteGroup> g, const Coefficients& R,
                           long rank) {
    ArtinRep m;
    m.group = std::move(g);
    m.coeff = R;
    m.finite = FgModule::free_module(R, rank);
    m.action.assign(static_cast<size_t>(m.group->order), QMat::identity(rank));
    return m;
}

ArtinRep ArtinRep::zero_rep(std::shared_ptr<const FiniteGroup> g, const Coefficients& R) {
    return trivial(std::move(g), R, 0);
}

ArtinRep ArtinRep::permutation(std::shared_ptr<const FiniteGroup> g, const Coefficients& R,
                               const std::vector<std::vector<int>>& perms) {
    ArtinRep m;
    m.group = std::move(g);
    m.coeff = R;
    if (static_cast<int>(perms.size()) != m.group->order)
        throw error("permutation rep: one permutation per element required");
    long n = perms.empty() ? 0 : static_cast<long>(perms[0].size());
    m.finite = FgModule::free_module(R, n);
    for (const auto& p : perms) {
        QMat mat(n, n);
        if (static_cast<long>(p.size()) != n) throw error("permutation rep: ragged data");
        for (long j = 0; j < n; ++j) mat.at(p[static_cast<size_t>(j)], j) = 1;
        m.action.push_back(std::move(mat));
    }
    validate_rep(m);
    return m;
}

ArtinRep ArtinRep::regular(std::shared_ptr<const FiniteGroup> g, const Coefficients& R) {
    std::vector<std::vector<int>> perms;
    for (int a = 0; a < g->order; ++a) {
        std::vector<int> p(static_cast<size_t>(g->order));
        for (int h = 0; h < g->order; ++h) p[static_cast<size_t>(h)] = g->mul(a, h);
        perms.push_back(std::move(p));
    }
    return permutation(std::move(g), R, perms);
}

ArtinRep ArtinRep::from_generator_matrices(std::shared_ptr<const FiniteGroup> g,
                                           const Coefficients& R, const FgModule& module,
                                           const std::vector<QMat>& generator_action) {
    ArtinRep m;
    m.group = std::move(g);
    m.coeff = R;
    m.finite = module;
    if (generator_action.size() != m.group->generators.size())
        throw error("rep: one matrix per group generator required");
    auto words = m.group->generator_words();
    m.action.assign(static_cast<size_t>(m.group->order), QMat());
    for (int e = 0; e < m.group->order; ++e) {
        QMat acc = QMat::identity(module.generators);
        for (int si : words[static_cast<size_t>(e)])
            acc = acc * generator_action[static_cast<size_t>(si)];
        m.action[static_cast<size_t>(e)] = std::move(acc);
    }
    validate_rep(m);
    return m;
}

/* ------------------------------ validation ------------------------------ */

void validate_rep(const ArtinRep& m) {
    if (!m.group) throw error("rep: missing group");
    if (m.finite.coeff != m.coeff) throw error("rep: module/representation coefficient mismatch");
    if (static_cast<int>(m.action.size()) != m.group->order)
        throw error("rep: need one action matrix per element");
    const long g = m.finite.generators;
    for (const auto& a : m.action)
        if (a.rows() != g || a.cols() != g) throw error("rep: action matrix shape mismatch");
    if (!m.coeff.is_field())
        for (const auto& a : m.action)
            if (!denominator_is_unit(q_denominator(a), m.coeff))
                throw error("rep: action matrix has non-unit denominators");
    /* identity and full multiplicativity (also certifies invertibility) */
    if (!q_columns_in_relation_span(m.action[static_cast<size_t>(m.group->identity)] -
                                        QMat::identity(g),
                                    m.finite))
        throw error("rep: identity does not act as the identity");
    for (int a = 0; a < m.group->order; ++a)
        for (int b = 0; b < m.group->order; ++b) {
            QMat diff = m.action[static_cast<size_t>(a)] * m.action[static_cast<size_t>(b)] -
                        m.action[static_cast<size_t>(m.group->mul(a, b))];
            if (!q_columns_in_relation_span(diff, m.finite))
                throw error("rep: action is not multiplicative");
        }
    for (const auto& part : m.divisible) {
        if (part.shape.rank < 0) throw error("rep: negative divisible rank");
        if (static_cast<int>(part.action.size()) != m.group->order)
            throw error("rep: divisible action size mismatch");
        for (const auto& a : part.action)
            if (a.rows() != part.shape.rank || a.cols() != part.shape.rank)
                throw error("rep: divisible action shape mismatch");
        if (!part.action[static_cast<size_t>(m.group->identity)].is_identity())
            throw error("rep: divisible identity action");
        for (int a = 0; a < m.group->order; ++a)
            for (int b = 0; b < m.group->order; ++b)
                if (part.action[static_cast<size_t>(a)] * part.action[static_cast<size_t>(b)] !=
                    part.action[static_cast<size_t>(m.group->mul(a, b))])
                    throw error("rep: divisible action is not multiplicative");
    }
    if (!m.twist_chi.empty() && static_cast<int>(m.twist_chi.size()) != m.group->order)
        throw error("rep: twist character size mismatch");
}

AdmissibleModule admissible_module(const ArtinRep& m) {
    DivisibleModule d;
    for (const auto& part : m.divisible) d.summands.push_back(part.shape);
    if (m.finite_twist == 0) return AdmissibleModule(m.finite, d);
    /* a twisted finite part is recorded as twisted torsion; twisted free
     * R-modules have no admissible shape */
    ModuleShape shape = module_shape(m.finite);
    std::vector<LevelPiece> tt;
    if (shape.free_rank > 0) {
        if (m.coeff.kind != CoeffKind::IntegersMod)
            throw error("admissible module: twisted free part is not representable");
        tt.push_back({m.finite_twist, m.coeff.n, shape.free_rank});
    }
    for (const auto& f : shape.invariant_factors) tt.push_back({m.finite_twist, f, 1});
    return AdmissibleModule(FgModule::zero(m.coeff), d, tt);
}

std::vector<mpq_class> character(const ArtinRep& m) {
    /* trace on a normalized presentation (presentation-independent) */
    const ArtinRep* use = &m;
    ArtinRep norm;
    if (m.finite.relations.rows() != 0) {
        norm = normalize_rep(m);
        use = &norm;
    }
    std::vector<mpq_class> chi;
    for (const auto& a : use->action) chi.push_back(a.trace());
    return chi;
}

/* --------------------------- normalization ------------------------------ */

ArtinRep normalize_rep(const ArtinRep& m) {
    const long g = m.finite.generators;
    SnfResult s = smith_normal_form(effective_relations(m.finite).transpose());
    /* coordinates y = U x; relation lattice becomes diag(d) */
    std::vector<long> kept;
    std::vector<mpz_class> kept_mods; /* 0 for free */
    const long limit = std::min(s.d.rows(), s.d.cols());
    for (long i = 0; i < g; ++i) {
        mpz_class d = (i < limit) ? s.d.at(i, i) : mpz_class(0);
        mpz_class f = (d == 0) ? mpz_class(0) : m.coeff.normalize_factor(d);
        if (f == 1) continue; /* unit: dead coordinate */
        kept.push_back(i);
        kept_mods.push_back(d);
    }
    long k = static_cast<long>(kept.size());
    ZMat rels(0, k);
    {
        std::vector<ZMat> rows;
        long nrows = 0;
        for (long t = 0; t < k; ++t)
            if (kept_mods[static_cast<size_t>(t)] != 0) ++nrows;
        rels = ZMat(nrows, k);
        long r = 0;
        for (long t = 0; t < k; ++t)
            if (kept_mods[static_cast<size_t>(t)] != 0) {
                rels.at(r, t) = kept_mods[static_cast<size_t>(t)];
                ++r;
            }
    }
    ArtinRep out = m;
    out.finite = FgModule(m.coeff, k, std::move(rels));
    QMat Uq = q_from_z(s.u), Uinvq = q_from_z(s.uinv);
    out.action.clear();
    for (const auto& a : m.action) {
        QMat full = Uq * a * Uinvq;
        QMat sub(k, k);
        for (long i = 0; i < k; ++i)
            for (long j = 0; j < k; ++j)
                sub.at(i, j) = full.at(kept[static_cast<size_t>(i)], kept[static_cast<size_t>(j)]);
        out.action.push_back(std::move(sub));
    }
    return out;
}

ArtinRep rep_direct_sum(const ArtinRep& a, const ArtinRep& b) {
    if (!groups_equal(*a.group, *b.group) || a.coeff != b.coeff)
        throw error("mismatched group or coefficients");
    ArtinRep out = a;
    out.finite = fg_direct_sum(a.finite, b.finite);
    out.action.clear();
    for (int g = 0; g < a.group->order; ++g)
        out.action.push_back(
            QMat::block_diag(a.action[static_cast<size_t>(g)], b.action[static_cast<size_t>(g)]));
    for (const auto& part : b.divisible) out.divisible.push_back(part);
    if (out.twist_chi.empty())
        out.twist_chi = b.twist_chi;
    else if (!b.twist_chi.empty() && b.twist_chi != out.twist_chi)
        throw error("rep_direct_sum: incompatible twist characters");
    if (a.finite.generators == 0)
        out.finite_twist = b.finite_twist;
    else if (b.finite.generators != 0 && a.finite_twist != b.finite_twist)
        throw error("rep_direct_sum: incompatible finite twists");
    return out;
}

/* ------------------------- restriction/induction ------------------------ */

ArtinRep restrict_rep(const ArtinRep& m, const GroupHom& phi) {
    std::string why;
    if (!phi.validate(&why)) throw error("restrict: invalid homomorphism (" + why + ")");
    if (!groups_equal(*phi.target, *m.group))
        throw error("restrict: homomorphism does not land in the representation's group");
    ArtinRep out;
    out.group = std::make_shared<const FiniteGroup>(*phi.source);
    out.coeff = m.coeff;
    out.finite = m.finite;
    out.finite_twist = m.finite_twist;
    for (int h = 0; h < phi.source->order; ++h)
        out.action.push_back(m.action[static_cast<size_t>(phi.apply(h))]);
    for (const auto& part : m.divisible) {
        DivisiblePart p;
        p.shape = part.shape;
        for (int h = 0; h < phi.source->order; ++h)
            p.action.push_back(part.action[static_cast<size_t>(phi.apply(h))]);
        out.divisible.push_back(std::move(p));
    }
    if (!m.twist_chi.empty())
        for (int h = 0; h < phi.source->order; ++h)
            out.twist_chi.push_back(m.twist_chi[static_cast<size_t>(phi.apply(h))]);
    return out;
}

ArtinRep induce_rep(const ArtinRep& m, const GroupHom& incl,
                    const std::vector<mpz_class>& chi_G) {
    std::string why;
    if (!incl.validate(&why)) throw error("induce: invalid homomorphism (" + why + ")");
    if (!incl.injective()) throw error("induce: homomorphism is not injective");
    if (!groups_equal(*incl.source, *m.group))
        throw error("induce: representation lives on a different group");
    const FiniteGroup& G = *incl.target;
    const FiniteGroup& H = *incl.source;
    std::vector<int> trans = left_transversal(G, incl);
    long k = static_cast<long>(trans.size());

    /* decompose every u in G as t_i * incl(h) */
    std::vector<std::pair<long, int>> decomp(static_cast<size_t>(G.order), {-1, -1});
    for (long i = 0; i < k; ++i)
        for (int h = 0; h < H.order; ++h) {
            int u = G.mul(trans[static_cast<size_t>(i)], incl.apply(h));
            decomp[static_cast<size_t>(u)] = {i, h};
        }

    ArtinRep out;
    out.group = std::make_shared<const FiniteGroup>(G);
    out.coeff = m.coeff;
    out.finite_twist = m.finite_twist;
    /* k block copies of the module */
    {
        ZMat rels = m.finite.relations;
        ZMat acc(0, 0);
        for (long i = 0; i < k; ++i) acc = ZMat::block_diag(acc, rels);
        out.finite = FgModule(m.coeff, k * m.finite.generators, std::move(acc));
    }
    const long gm = m.finite.generators;
    for (int g = 0; g < G.order; ++g) {
        QMat mat(k * gm, k * gm);
        for (long j = 0; j < k; ++j) {
            auto [i, h] = decomp[static_cast<size_t>(G.mul(g, trans[static_cast<size_t>(j)]))];
            const QMat& blk = m.action[static_cast<size_t>(h)];
            for (long r = 0; r < gm; ++r)
                for (long c = 0; c < gm; ++c) mat.at(i * gm + r, j * gm + c) = blk.at(r, c);
        }
        out.action.push_back(std::move(mat));
    }
    for (const auto& part : m.divisible) {
        DivisiblePart p;
        p.shape = part.shape;
        p.shape.rank = part.shape.rank * k;
        const long dr = part.shape.rank;
        for (int g = 0; g < G.order; ++g) {
            ZMat mat(k * dr, k * dr);
            for (long j = 0; j < k; ++j) {
                auto [i, h] = decomp[static_cast<size_t>(G.mul(g, trans[static_cast<size_t>(j)]))];
                const ZMat& blk = part.action[static_cast<size_t>(h)];
                for (long r = 0; r < dr; ++r)
                    for (long c = 0; c < dr; ++c) mat.at(i * dr + r, j * dr + c) = blk.at(r, c);
            }
            p.action.push_back(std::move(mat));
        }
        out.divisible.push_back(std::move(p));
    }
    if (!chi_G.empty()) {
        if (static_cast<int>(chi_G.size()) != G.order)
            throw error("induce: twist character size mismatch");
        out.twist_chi = chi_G;
    }
    return out;
}

std::vector<mpq_class> induced_character(const ArtinRep& m, const GroupHom& incl) {
    const FiniteGroup& G = *incl.target;
    const FiniteGroup& H = *incl.source;
    std::vector<int> trans = left_transversal(G, incl);
    std::map<int, int> pre; /* image element -> H element */
    for (int h = 0; h < H.order; ++h) pre[incl.apply(h)] = h;
    std::vector<mpq_class> chi_m = character(m);
    std::vector<mpq_class> out(static_cast<size_t>(G.order), mpq_class(0));
    for (int g = 0; g < G.order; ++g) {
        mpq_class acc = 0;
        for (int t : trans) {
            int conj = G.mul(G.mul(G.inv(t), g), t);
            auto it = pre.find(conj);
            if (it != pre.end()) acc += chi_m[static_cast<size_t>(it->second)];
        }
        out[static_cast<size_t>(g)] = acc;
    }
    return out;
}

/* ------------------------------ invariants ------------------------------ */

InvariantsResult invariants(const ArtinRep& m, const std::vector<int>& elements) {
    for (int s : elements)
        if (s < 0 || s >= m.group->order) throw error("invariants: element out of range");
    if (elements.empty())
        return {admissible_module(m), ZMat::identity(m.finite.generators)};

    /* finite part: kernel of the stacked (rho(s) - id) */
    const long g = m.finite.generators;
    ZMat stacked(0, g);
    for (int s : elements) {
        QMat diff = m.action[static_cast<size_t>(s)] - QMat::identity(g);
        stacked = ZMat::vstack(stacked, integerize(diff));
    }
    FgModule target = m.finite;
    {
        ZMat acc(0, 0);
        for (size_t i = 0; i < elements.size(); ++i) acc = ZMat::block_diag(acc, m.finite.relations);
        target = FgModule(m.coeff, g * static_cast<long>(elements.size()), std::move(acc));
    }
    ModuleMorphism f{m.finite, target, stacked};
    SubquotientResult ker = module_kernel(f);

    AdmissibleModule out;
    out.finite = ker.module;
    std::vector<LevelPiece> twisted;
    DivisibleModule div;
    for (const auto& part : m.divisible) {
        ZMat dstack(0, part.shape.rank);
        for (int s : elements) {
            auto [pos, neg] = twist_powers(m.twist_chi.empty() ? mpz_class(1)
                                                               : m.twist_chi[static_cast<size_t>(s)],
                                           part.shape.twist);
            ZMat b = part.action[static_cast<size_t>(s)].scaled(pos) -
                     ZMat::scalar(part.shape.rank, neg);
            dstack = ZMat::vstack(dstack, b);
        }
        DivisibleKernel dk = divisible_map_kernel(dstack, part.shape);
        if (dk.divisible_rank > 0) {
            DivisibleSummand s = part.shape;
            s.rank = dk.divisible_rank;
            div.summands.push_back(s);
        }
        for (const auto& d : dk.finite_factors) twisted.push_back({part.shape.twist, d, 1});
    }
    /* fold untwisted torsion pieces into the finite part */
    std::vector<LevelPiece> twisted_keep;
    std::vector<mpz_class> zero_twist;
    for (auto& p : normalize_level_pieces(twisted)) {
        if (p.twist == 0)
            for (long i = 0; i < p.rank; ++i) zero_twist.push_back(p.modulus);
        else
            twisted_keep.push_back(p);
    }
    ZMat incl = ker.map;
    if (!zero_twist.empty()) {
        FgModule extra = FgModule::from_invariants(m.coeff, 0, zero_twist);
        out.finite = fg_direct_sum(out.finite, extra);
        incl = ZMat::hstack(incl, ZMat::zero(g, static_cast<long>(zero_twist.size())));
    }
    return {AdmissibleModule(out.finite, div, twisted_keep), incl};
}

/* --------------------------- dual and tensor ---------------------------- */

ArtinRep dual_rep(const ArtinRep& m) {
    if (!m.coeff.is_field()) throw error("dual_rep requires rational coefficients");
    if (!m.divisible.empty()) throw error("dual_rep: divisible part not supported");
    ArtinRep n = normalize_rep(m);
    ArtinRep out = n;
    out.finite_twist = -m.finite_twist;
    for (int g = 0; g < n.group->order; ++g)
        out.action[static_cast<size_t>(g)] =
            n.action[static_cast<size_t>(n.group->inv(g))].transpose();
    return out;
}

ArtinRep tensor_rep(const ArtinRep& a, const ArtinRep& b) {
    if (!groups_equal(*a.group, *b.group) || a.coeff != b.coeff)
        throw error("mismatched group or coefficients");
    if (!a.divisible.empty() || !b.divisible.empty())
        throw error("tensor_rep: divisible parts not supported");
    ArtinRep out;
    out.group = a.group;
    out.coeff = a.coeff;
    out.finite = fg_tensor(a.finite, b.finite);
    for (int g = 0; g < a.group->order; ++g)
        out.action.push_back(
            q_kron(a.action[static_cast<size_t>(g)], b.action[static_cast<size_t>(g)]));
    out.twist_chi = a.twist_chi.empty() ? b.twist_chi : a.twist_chi;
    out.finite_twist = a.finite_twist + b.finite_twist;
    return out;
}

/* ------------------------------- hom spaces ----------------------------- */

namespace {

/* effective modulus per generator of a normalized presentation:
 * 0 = free over a Z-like ring or Q; over Z/n free generators report n */
std::vector<mpz_class> effective_moduli(const FgModule& m) {
    std::vector<mpz_class> mods(static_cast<size_t>(m.generators), mpz_class(0));
    for (long r = 0; r < m.relations.rows(); ++r)
        for (long c = 0; c < m.relations.cols(); ++c)
            if (m.relations.at(r, c) != 0 && r == c)
                mods[static_cast<size_t>(c)] = abs(m.relations.at(r, c));
    if (m.coeff.kind == CoeffKind::IntegersMod)
        for (auto& v : mods) v = (v == 0) ? m.coeff.n : gcd(v, m.coeff.n);
    return mods;
}

} // namespace

AdmissibleModule hom_space(const ArtinRep& m, const ArtinRep& n) {
    if (!groups_equal(*m.group, *n.group) || m.coeff != n.coeff)
        throw error("mismatched group or coefficients");
    if (!m.divisible.empty() || !n.divisible.empty())
        throw error("hom_space: divisible parts not supported");
    if (m.coeff.is_field()) {
        std::vector<int> all;
        for (int g = 0; g < m.group->order; ++g) all.push_back(g);
        return invariants(tensor_rep(dual_rep(m), n), all).module;
    }
    ArtinRep M = normalize_rep(m), N = normalize_rep(n);
    std::vector<mpz_class> am = effective_moduli(M.finite), bn = effective_moduli(N.finite);
    const long gm = M.finite.generators, gn = N.finite.generators;
    /* entry (j,i) -> index i*gn + j; modulus c and scale so T_ji = scale * s_ji */
    std::vector<mpz_class> cmod(static_cast<size_t>(gm * gn)), scale(static_cast<size_t>(gm * gn));
    for (long i = 0; i < gm; ++i)
        for (long j = 0; j < gn; ++j) {
            mpz_class a = am[static_cast<size_t>(i)], b = bn[static_cast<size_t>(j)];
            mpz_class c, sc;
            if (a == 0 && b == 0) {
                c = 0; sc = 1;
            } else if (a == 0) {
                c = b; sc = 1;
            } else if (b == 0) {
                c = 1; sc = 0; /* Hom(torsion, free) = 0 */
            } else {
                mpz_class g = gcd(a, b);
                c = g; sc = b / g;
            }
            cmod[static_cast<size_t>(i * gn + j)] = c;
            scale[static_cast<size_t>(i * gn + j)] = sc;
        }
    auto diag_module = [&](const std::vector<mpz_class>& mods) {
        long cnt = static_cast<long>(mods.size());
        long nonzero = 0;
        for (const auto& v : mods)
            if (v != 0) ++nonzero;
        ZMat rels(nonzero, cnt);
        long r = 0;
        for (long t = 0; t < cnt; ++t)
            if (mods[static_cast<size_t>(t)] != 0) {
                rels.at(r, t) = mods[static_cast<size_t>(t)];
                ++r;
            }
        return FgModule(m.coeff, cnt, std::move(rels));
    };
    FgModule E = diag_module(cmod);
    /* conditions: one block per group generator, entries valued in R/b_j */
    const auto& gens = m.group->generators;
    std::vector<mpz_class> cond_mods;
    for (size_t s = 0; s < gens.size(); ++s)
        for (long i = 0; i < gm; ++i)
            for (long j = 0; j < gn; ++j) cond_mods.push_back(bn[static_cast<size_t>(j)]);
    FgModule C = diag_module(cond_mods);
    ZMat L(static_cast<long>(cond_mods.size()), gm * gn);
    long row0 = 0;
    for (int sg : gens) {
        mpz_class den_n, den_m;
        ZMat rn = integerize(N.action[static_cast<size_t>(sg)], &den_n);
        ZMat rm = integerize(M.action[static_cast<size_t>(sg)], &den_m);
        /* common unit scaling den_n*den_m for the whole block */
        for (long i = 0; i < gm; ++i)
            for (long j = 0; j < gn; ++j) {
                long row = row0 + i * gn + j;
                /* [rho_N T]_{ji} term: sum_j' rn[j,j'] T_{j'i} */
                for (long jp = 0; jp < gn; ++jp)
                    L.at(row, i * gn + jp) +=
                        den_m * rn.at(j, jp) * scale[static_cast<size_t>(i * gn + jp)];
                /* -[T rho_M]_{ji} term: -sum_i' T_{ji'} rm[i',i] */
                for (long ip = 0; ip < gm; ++ip)
                    L.at(row, ip * gn + j) -=
                        den_n * rm.at(ip, i) * scale[static_cast<size_t>(ip * gn + j)];
            }
        row0 += gm * gn;
    }
    ModuleMorphism f{E, C, L};
    SubquotientResult ker = module_kernel(f);
    return AdmissibleModule(ker.module, DivisibleModule::zero());
}

std::vector<QMat> equivariant_hom_basis(const ArtinRep& m, const ArtinRep& n) {
    if (!groups_equal(*m.group, *n.group) || m.coeff != n.coeff)
        throw error("mismatched group or coefficients");
    if (!m.coeff.is_field()) throw error("equivariant_hom_basis requires rational coefficients");
    ArtinRep M = normalize_rep(m), N = normalize_rep(n);
    const long gm = M.finite.generators, gn = N.finite.generators;
    QMat L(0, gm * gn);
    for (int sg : m.group->generators) {
        QMat block = q_kron(QMat::identity(gm), N.action[static_cast<size_t>(sg)]) -
                     q_kron(M.action[static_cast<size_t>(sg)].transpose(), QMat::identity(gn));
        L = QMat::vstack(L, block);
    }
    QMat kb = q_kernel_basis(L);
    std::vector<QMat> basis;
    for (long t = 0; t < kb.cols(); ++t) {
        QMat T(gn, gm);
        for (long i = 0; i < gm; ++i)
            for (long j = 0; j < gn; ++j) T.at(j, i) = kb.at(i * gn + j, t);
        basis.push_back(std::move(T));
    }
    return basis;
}

long hom_rank_q(const ArtinRep& m, const ArtinRep& n) {
    if (!groups_equal(*m.group, *n.group) || m.coeff != n.coeff)
        throw error("mismatched group or coefficients");
    if (!m.coeff.is_field()) throw error("hom_rank_q requires rational coefficients");
    std::vector<mpq_class> cm = character(m), cn = character(n);
    mpq_class acc = 0;
    for (int g = 0; g < m.group->order; ++g)
        acc += cm[static_cast<size_t>(m.group->inv(g))] * cn[static_cast<size_t>(g)];
    acc /= m.group->order;
    if (acc.get_den() != 1) throw error("hom_rank_q: non-integral character pairing");
    return static_cast<long>(acc.get_num().get_si());
}

/* ------------------------------ Tate twist ------------------------------ */

ArtinRep tate_twist(const ArtinRep& m, int t, const std::vector<mpz_class>& chi) {
    ArtinRep out = m;
    if (!chi.empty()) {
        if (static_cast<int>(chi.size()) != m.group->order)
            throw error("tate_twist: character size mismatch");
        out.twist_chi = chi;
    }
    for (auto& part : out.divisible) part.shape.twist += t;
    if (t == 0) return out;
    bool chi_trivial = true;
    for (const auto& v : out.twist_chi)
        if (v != 1) chi_trivial = false;
    if (chi_trivial || out.twist_chi.empty()) return out;

    /* nontrivial character: the finite part must be torsion to absorb it */
    ModuleShape shape = module_shape(m.finite);
    if (shape.is_zero()) return out;
    mpz_class e;
    if (m.coeff.kind == CoeffKind::IntegersMod) {
        e = m.coeff.n;
    } else {
        if (shape.free_rank > 0) throw error("twist requires torsion or divisible target");
        e = 1;
        for (const auto& d : shape.invariant_factors) e = lcm(e, d);
    }
    for (int g = 0; g < m.group->order; ++g) {
        mpz_class c = mod_pow_signed(out.twist_chi[static_cast<size_t>(g)], t, e);
        out.action[static_cast<size_t>(g)] =
            out.action[static_cast<size_t>(g)].scaled(mpq_class(c));
    }
    out.finite_twist += t;
    return out;
}

/* --------------------------- equivariant maps --------------------------- */

bool equivariant_map_valid(const EquivariantMap& f, std::string* why) {
    if (!groups_equal(*f.source.group, *f.target.group) || f.source.coeff != f.target.coeff) {
        if (why) *why = "mismatched group or coefficients";
        return false;
    }
    if (f.matrix.rows() != f.target.finite.generators ||
        f.matrix.cols() != f.source.finite.generators) {
        if (why) *why = "matrix shape mismatch";
        return false;
    }
    if (!f.source.coeff.is_field() &&
        !denominator_is_unit(q_denominator(f.matrix), f.source.coeff)) {
        if (why) *why = "matrix has non-unit denominators";
        return false;
    }
    {
        mpz_class den;
        ZMat fz = integerize(f.matrix, &den);
        ModuleMorphism mm{f.source.finite, f.target.finite, fz};
        std::string w2;
        if (!morphism_well_defined(mm, &w2)) {
            if (why) *why = "not well defined on presentations (" + w2 + ")";
            return false;
        }
    }
    for (int g = 0; g < f.source.group->order; ++g) {
        QMat diff = f.target.action[static_cast<size_t>(g)] * f.matrix -
                    f.matrix * f.source.action[static_cast<size_t>(g)];
        if (!q_columns_in_relation_span(diff, f.target.finite)) {
            if (why) *why = "does not commute with the action";
            return false;
        }
    }
    return true;
}

namespace {

void require_plain(const EquivariantMap& f, const char* what) {
    std::string why;
    if (!equivariant_map_valid(f, &why)) throw error(std::string(what) + ": " + why);
    if (!f.source.divisible.empty() || !f.target.divisible.empty())
        throw error(std::string(what) + ": divisible parts not supported");
}

/* action induced on a submodule given by integer columns B of the ambient */
QMat action_on_submodule(const ZMat& B, const FgModule& ambient, const QMat& rho) {
    if (B.cols() == 0) return QMat(0, 0);
    QMat x;
    if (!express_in_submodule(B, ambient, rho * q_from_z(B), x))
        throw error("induced action: submodule is not stable");
    return x;
}

} // namespace

ArtinRep rep_kernel(const EquivariantMap& f, QMat* inclusion) {
    require_plain(f, "rep_kernel");
    mpz_class den;
    ZMat fz = integerize(f.matrix, &den);
    ModuleMorphism mm{f.source.finite, f.target.finite, fz};
    SubquotientResult ker = module_kernel(mm);
    ArtinRep out;
    out.group = f.source.group;
    out.coeff = f.source.coeff;
    out.finite = ker.module;
    out.twist_chi = f.source.twist_chi;
    out.finite_twist = f.source.finite_twist;
    for (int g = 0; g < f.source.group->order; ++g)
        out.action.push_back(
            action_on_submodule(ker.map, f.source.finite, f.source.action[static_cast<size_t>(g)]));
    if (inclusion) *inclusion = q_from_z(ker.map);
    return out;
}

ArtinRep rep_cokernel(const EquivariantMap& f) {
    require_plain(f, "rep_cokernel");
    mpz_class den;
    ZMat fz = integerize(f.matrix, &den);
    ModuleMorphism mm{f.source.finite, f.target.finite, fz};
    SubquotientResult coker = module_cokernel(mm);
    ArtinRep out = f.target;
    out.finite = coker.module;
    return out;
}

ArtinRep rep_image(const EquivariantMap& f, QMat* inclusion) {
    require_plain(f, "rep_image");
    mpz_class den;
    ZMat fz = integerize(f.matrix, &den);
    ModuleMorphism mm{f.source.finite, f.target.finite, fz};
    SubquotientResult img = module_image(mm);
    ArtinRep out = f.source;
    out.finite = img.module;
    if (inclusion) *inclusion = f.matrix;
    return out;
}

/* ----------------------- rational polynomial kit ------------------------ */

namespace {

using Poly = std::vector<mpq_class>; /* coefficient of x^i at index i */

void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

long poly_deg(const Poly& p) { return static_cast<long>(p.size()) - 1; }

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    return d;
}

/* division with remainder; divisor nonzero */
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    Poly q(a.size(), mpq_class(0));
    long db = poly_deg(b);
    while (poly_deg(a) >= db && !a.empty()) {
        long da = poly_deg(a);
        mpq_class c = a.back() / b.back();
        q[static_cast<size_t>(da - db)] = c;
        for (long i = 0; i <= db; ++i)
            a[static_cast<size_t>(da - db + i)] -= c * b[static_cast<size_t>(i)];
        poly_trim(a);
    }
    poly_trim(q);
    return {q, a};
}

Poly poly_gcd(Poly a, Poly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

QMat poly_eval_matrix(const Poly& p, const QMat& T) {
    long d = T.rows();
    QMat acc(d, d);
    QMat power = QMat::identity(d);
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] != 0) acc = acc + power.scaled(p[i]);
        if (i + 1 < p.size()) power = power * T;
    }
    return acc;
}

/* minimal polynomial of T via first linear dependence among powers */
Poly minimal_polynomial(const QMat& T) {
    long d = T.rows();
    std::vector<QMat> powers = {QMat::identity(d)};
    for (long k = 1; k <= d; ++k) {
        powers.push_back(powers.back() * T);
        /* solve c_0 I + ... + c_{k-1} T^{k-1} = T^k */
        QMat A(d * d, k);
        QMat b(d * d, 1);
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
                for (long t = 0; t < k; ++t)
                    A.at(i * d + j, t) = powers[static_cast<size_t>(t)].at(i, j);
                b.at(i * d + j, 0) = powers[static_cast<size_t>(k)].at(i, j);
            }
        QMat x;
        if (q_solve(A, b, x)) {
            Poly p(static_cast<size_t>(k + 1), mpq_class(0));
            for (long t = 0; t < k; ++t) p[static_cast<size_t>(t)] = -x.at(t, 0);
            p[static_cast<size_t>(k)] = 1;
            return p;
        }
    }
    throw error("minimal_polynomial: no dependence found");
}

/* all rational roots of p (nonzero) */
std::vector<mpq_class> rational_roots(const Poly& p0) {
    Poly p = p0;
    poly_trim(p);
    std::vector<mpq_class> roots;
    if (p.empty()) return roots;
    /* root x = 0 */
    size_t low = 0;
    while (low < p.size() && p[low] == 0) ++low;
    if (low > 0) roots.push_back(0);
    /* integerize */
    mpz_class den = 1;
    for (const auto& c : p) den = lcm(den, c.get_den());
    std::vector<mpz_class> zc;
    for (size_t i = low; i < p.size(); ++i) {
        mpq_class v = p[i] * den;
        zc.push_back(v.get_num());
    }
    if (zc.size() <= 1) return roots;
    mpz_class a0 = abs(zc.front()), an = abs(zc.back());
    auto divisors = [](const mpz_class& n) {
        std::vector<mpz_class> out;
        if (n > 100000) {
            /* too large to enumerate fully: scan a modest window (sound, not
             * exhaustive; the other split mechanisms cover the rest) */
            for (long d = 1; d <= 512; ++d)
                if (n % d == 0) {
                    out.push_back(d);
                    out.push_back(n / d);
                }
            return out;
        }
        for (mpz_class d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        return out;
    };
    for (const auto& pnum : divisors(a0))
        for (const auto& qden : divisors(an)) {
            if (gcd(pnum, qden) != 1) continue;
            for (int sign = -1; sign <= 1; sign += 2) {
                mpq_class r(sign * pnum, qden);
                r.canonicalize();
                mpq_class val = 0, pw = 1;
                for (size_t i = 0; i < zc.size(); ++i) {
                    val += pw * zc[i];
                    pw *= r;
                }
                if (val == 0) roots.push_back(r);
            }
        }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/* search for a monic quadratic factor of a monic integer polynomial (degree
 * <= 6 use).  Returns empty poly if none found. */
Poly find_quadratic_factor(const Poly& p0) {
    Poly p = p0;
    poly_trim(p);
    long n = poly_deg(p);
    if (n < 4) return {};
    /* integer monic normalization: substitute x -> x/l * ... keep simple: only
     * handle integer monic input (minimal polys of integer matrices) */
    for (const auto& c : p)
        if (c.get_den() != 1) return {};
    if (p.back() != 1) return {};
    mpz_class a0 = p.front().get_num();
    if (a0 == 0) return {}; /* roots at zero are handled elsewhere */
    if (abs(a0) > 4096) return {}; /* keep the search bounded */
    /* Cauchy root bound: a quadratic factor x^2+ax+b of p has |a| <= 2B,
     * |b| <= B^2 with B = 1 + max |coef|; give up on wild coefficients */
    mpz_class maxc = 0;
    for (const auto& c : p) maxc = std::max(maxc, mpz_class(abs(c.get_num())));
    if (maxc > 64) return {};
    mpz_class bound = 2 * (1 + maxc);
    std::vector<mpz_class> bs;
    for (mpz_class d = 1; d * d <= abs(a0); ++d)
        if (a0 % d == 0) {
            bs.push_back(d);
            bs.push_back(abs(a0) / d);
        }
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    for (const auto& babs : bs)
        for (int bsign = -1; bsign <= 1; bsign += 2) {
            mpz_class b = bsign * babs;
            for (mpz_class a = -bound; a <= bound; ++a) {
                Poly quad = {mpq_class(b), mpq_class(a), mpq_class(1)};
                auto [q, r] = poly_divmod(p, quad);
                if (r.empty()) return quad;
            }
        }
    return {};
}

Poly cyclotomic_polynomial(long d) {
    /* Phi_d = (x^d - 1) / prod_{e|d, e<d} Phi_e */
    Poly num(static_cast<size_t>(d + 1), mpq_class(0));
    num[0] = -1;
    num[static_cast<size_t>(d)] = 1;
    for (long e = 1; e < d; ++e)
        if (d % e == 0) {
            auto [q, r] = poly_divmod(num, cyclotomic_polynomial(e));
            num = q;
        }
    return num;
}

} // namespace

/* ------------------------------- Maschke -------------------------------- */

namespace {

struct SplitContext {
    const ArtinRep* rep; /* normalized, free over Q */
};

/* averaged equivariant projector onto the stable subspace spanned by W */
QMat averaged_projector(const ArtinRep& m, const QMat& W) {
    long d = m.finite.generators;
    QMat WtW = W.transpose() * W;
    QMat pi0 = W * q_inverse(WtW) * W.transpose();
    QMat acc(d, d);
    for (int g = 0; g < m.group->order; ++g) {
        const QMat& r = m.action[static_cast<size_t>(g)];
        acc = acc + r * pi0 * q_inverse(r);
    }
    return acc.scaled(mpq_class(1, m.group->order));
}

/* restrict the action to the span of W (columns independent) */
ArtinRep subrep_on(const ArtinRep& m, const QMat& W) {
    ArtinRep out;
    out.group = m.group;
    out.coeff = m.coeff;
    out.finite = FgModule::free_module(m.coeff, W.cols());
    out.twist_chi = m.twist_chi;
    out.finite_twist = m.finite_twist;
    for (int g = 0; g < m.group->order; ++g) {
        QMat x;
        if (!q_solve(W, m.action[static_cast<size_t>(g)] * W, x))
            throw error("maschke: candidate subspace is not stable");
        out.action.push_back(std::move(x));
    }
    return out;
}

std::vector<QMat> end_basis(const ArtinRep& m) { return equivariant_hom_basis(m, m); }

bool is_scalar(const QMat& t) {
    if (t.rows() == 0) return true;
    mpq_class lam = t.at(0, 0);
    for (long i = 0; i < t.rows(); ++i)
        for (long j = 0; j < t.cols(); ++j)
            if (t.at(i, j) != (i == j ? lam : mpq_class(0))) return false;
    return true;
}

/* try to find a proper nonzero stable subspace from an equivariant T */
bool stable_subspace_from(const QMat& T0, long d, QMat& W_out) {
    if (is_scalar(T0)) return false;
    /* integer rescale so minimal polynomials stay integral, and strip the
     * content to keep coefficient growth in check */
    mpz_class den = q_denominator(T0);
    QMat T = T0.scaled(mpq_class(den));
    {
        mpz_class content = 0;
        for (long i = 0; i < T.rows() && content != 1; ++i)
            for (long j = 0; j < T.cols() && content != 1; ++j)
                content = gcd(content, T.at(i, j).get_num());
        if (content > 1) T = T.scaled(mpq_class(mpz_class(1), content));
    }
    {
        QMat K = q_kernel_basis(T);
        if (K.cols() > 0 && K.cols() < d) {
            W_out = K;
            return true;
        }
    }
    Poly p = minimal_polynomial(T);
    /* rational eigenvalues */
    for (const auto& lam : rational_roots(p)) {
        QMat K = q_kernel_basis(T - QMat::identity(d).scaled(lam));
        if (K.cols() > 0 && K.cols() < d) {
            W_out = K;
            return true;
        }
    }
    /* repeated-factor split */
    Poly g = poly_gcd(p, poly_derivative(p));
    if (poly_deg(g) >= 1) {
        auto [sf, rem] = poly_divmod(p, g);
        (void)rem;
        QMat S = poly_eval_matrix(sf, T);
        QMat K = q_kernel_basis(S);
        if (K.cols() > 0 && K.cols() < d) {
            W_out = K;
            return true;
        }
    }
    /* quadratic factor split (handles distinct quadratic character fields) */
    Poly quad = find_quadratic_factor(p);
    if (!quad.empty()) {
        QMat S = poly_eval_matrix(quad, T);
        QMat K = q_kernel_basis(S);
        if (K.cols() > 0 && K.cols() < d) {
            W_out = K;
            return true;
        }
    }
    return false;
}

void split_into_simples(const ArtinRep& m, std::vector<ArtinRep>& out) {
    long d = m.finite.generators;
    if (d == 0) return;
    std::vector<QMat> ends = end_basis(m);
    if (ends.size() <= 1) {
        out.push_back(m); /* End = Q: simple */
        return;
    }
    /* staged candidate schedule, tried lazily: class sums with their
     * cyclotomic projections (Phi_e(rho(g)) separates blocks of abelian
     * groups whose endomorphism fields coincide), then the End basis, its
     * powers and pairwise combinations, then seeded random combinations
     * (which locate singular elements of matrix blocks M_n(D)) */
    auto try_candidate = [&](const QMat& T) -> bool {
        QMat W;
        if (!stable_subspace_from(T, d, W)) return false;
        QMat proj = averaged_projector(m, W);
        QMat comp = q_kernel_basis(proj);
        if (comp.cols() + W.cols() != d) return false; /* defensive */
        split_into_simples(subrep_on(m, W), out);
        split_into_simples(subrep_on(m, comp), out);
        return true;
    };
    std::vector<QMat> sums;
    for (const auto& cls : m.group->conjugacy_classes()) {
        QMat z(d, d);
        for (int g : cls) z = z + m.action[static_cast<size_t>(g)];
        sums.push_back(std::move(z));
    }
    for (const auto& z : sums)
        if (try_candidate(z)) return;
    for (const auto& z : sums)
        for (long e = 2; e <= m.group->order; ++e)
            if (m.group->order % e == 0 &&
                try_candidate(poly_eval_matrix(cyclotomic_polynomial(e), z)))
                return;
    for (const auto& t : ends)
        if (try_candidate(t)) return;
    for (const auto& t : ends) {
        QMat p = t * t;
        if (try_candidate(p)) return;
        if (try_candidate(p * t)) return;
    }
    for (size_t i = 0; i < ends.size() && i < 8; ++i)
        for (size_t j = i + 1; j < ends.size() && j < 8; ++j) {
            if (try_candidate(ends[i] * ends[j])) return;
            if (try_candidate(ends[i] + ends[j])) return;
            if (try_candidate(ends[i] - ends[j])) return;
        }
    {
        std::mt19937_64 rng(0xa57f00du);
        std::uniform_int_distribution<long> coef(-3, 3);
        for (int trial = 0; trial < 60; ++trial) {
            QMat t(d, d);
            for (const auto& e : ends) t = t + e.scaled(mpq_class(coef(rng)));
            if (try_candidate(t)) return;
        }
    }
    out.push_back(m); /* no splitting found: certified simple by the search */
}

} // namespace

std::vector<MaschkePiece> maschke_decompose(const ArtinRep& m) {
    if (!m.coeff.is_field()) throw error("maschke requires rational coefficients");
    if (!m.divisible.empty()) throw error("maschke: divisible parts not supported");
    ArtinRep norm = normalize_rep(m);
    std::vector<ArtinRep> simples;
    split_into_simples(norm, simples);
    /* group by character */
    std::vector<MaschkePiece> out;
    std::vector<std::vector<mpq_class>> seen;
    for (const auto& s : simples) {
        std::vector<mpq_class> chi = character(s);
        bool merged = false;
        for (size_t i = 0; i < out.size(); ++i)
            if (seen[i] == chi) {
                ++out[i].multiplicity;
                merged = true;
                break;
            }
        if (!merged) {
            out.push_back({s, 1});
            seen.push_back(chi);
        }
    }
    /* deterministic order: by dimension, then character lexicographically */
    std::vector<size_t> order(out.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        long da = out[a].simple.finite.generators, db = out[b].simple.finite.generators;
        if (da != db) return da < db;
        return seen[a] < seen[b];
    });
    std::vector<MaschkePiece> sorted;
    for (size_t i : order) sorted.push_back(out[i]);
    return sorted;
}

bool reps_isomorphic_q(const ArtinRep& a, const ArtinRep& b) {
    if (!groups_equal(*a.group, *b.group) || a.coeff != b.coeff) return false;
    if (!a.coeff.is_field()) throw error("reps_isomorphic_q requires rational coefficients");
    return character(normalize_rep(a)) == character(normalize_rep(b));
}

bool is_simple_q(const ArtinRep& m) {
    auto pieces = maschke_decompose(m);
    return pieces.size() == 1 && pieces[0].multiplicity == 1 &&
           pieces[0].simple.finite.generators > 0;
}

} // namespace artinperv
