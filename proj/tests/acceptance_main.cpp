/* Acceptance suite: one line per criterion, [PASS]/[FAIL], exit code equal to
 * the number of unexpected failures.  Criterion 7 is split into three lines;
 * 7b states a property that the category genuinely does not have over Q (the
 * right-hand extension of a local system is already intermediate, hence
 * simple) and is therefore reported as an expected failure.  The suite is
 * deterministic; set ARTINPERV_SEED to rerun the randomized parts on a
 * different stream. */

#include "artinperv/heart.hpp"
#include "artinperv/snc.hpp"
#include "artinperv/workspace.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace artinperv;
using nlohmann::json;

namespace {

Coefficients Q() { return Coefficients::rationals(); }
Coefficients Z() { return Coefficients::integers(); }

/* ------------------------- reporting scaffolding ------------------------- */

struct Checker {
    bool ok = true;
    long checks = 0;
    std::vector<std::string> notes; /* first few failed sub-checks */

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            if (notes.size() < 4) notes.push_back(what);
        }
    }
};

int g_unexpected = 0;

void report(const std::string& tag, const std::string& text, const Checker& c,
            bool expected_to_fail = false) {
    std::printf("[%s] criterion %s: %s (%ld checks)\n", c.ok ? "PASS" : "FAIL", tag.c_str(),
                text.c_str(), c.checks);
    for (const std::string& n : c.notes) std::printf("         - failed: %s\n", n.c_str());
    if (!c.ok && !expected_to_fail) ++g_unexpected;
    if (expected_to_fail && c.ok) {
        std::printf("         - note: this criterion was expected to fail; revisit the notes\n");
        ++g_unexpected;
    }
    std::fflush(stdout);
}

void report_exception(const std::string& tag, const std::string& text, const std::string& what) {
    std::printf("[FAIL] criterion %s: %s (exception: %s)\n", tag.c_str(), text.c_str(),
                what.c_str());
    ++g_unexpected;
    std::fflush(stdout);
}

/* ------------------------------ generators ------------------------------- */

BaseField closed_field(unsigned long p = 1) {
    BaseField k;
    k.galois.quotient = cyclic_group(1);
    k.characteristic_exponent = p;
    return k;
}

DivisibleSummand qz_summand(int twist, long rank, std::set<unsigned long> inv = {}) {
    return DivisibleSummand{twist, rank, DivSupport::AllBut, std::move(inv)};
}

mpq_class char_pair(const FiniteGroup& g, const std::vector<mpq_class>& a,
                    const std::vector<mpq_class>& b) {
    mpq_class acc = 0;
    for (int x = 0; x < g.order; ++x)
        acc += a[static_cast<size_t>(g.inv(x))] * b[static_cast<size_t>(x)];
    return acc / g.order;
}

ArtinRep conjugate_rep(const ArtinRep& m, const QMat& t) {
    ArtinRep out = m;
    QMat ti = q_inverse(t);
    for (auto& a : out.action) a = t * a * ti;
    return out;
}

QMat random_invertible(std::mt19937_64& rng, long n) {
    if (n == 0) return QMat(0, 0);
    std::uniform_int_distribution<long> val(-2, 2);
    for (;;) {
        QMat t(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) t.at(i, j) = val(rng);
        if (q_rank(t) == n) return t;
    }
}

/* random direct sum of simple constituents, hidden behind a base change */
ArtinRep random_rep(std::mt19937_64& rng, std::shared_ptr<const FiniteGroup> g, long maxdim,
                    bool allow_zero = true) {
    std::vector<MaschkePiece> pieces = maschke_decompose(ArtinRep::regular(g, Q()));
    std::uniform_int_distribution<long> dim(allow_zero ? 0 : 1, maxdim);
    const long target = dim(rng);
    ArtinRep acc = ArtinRep::zero_rep(g, Q());
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    int tries = 0;
    while (acc.finite.generators < target && ++tries < 16) {
        const ArtinRep& s = pieces[pick(rng)].simple;
        if (acc.finite.generators + s.finite.generators > target) continue;
        acc = rep_direct_sum(acc, s);
    }
    if (acc.finite.generators == 0) return acc;
    return conjugate_rep(acc, random_invertible(rng, acc.finite.generators));
}

std::pair<ArtinRep, QMat> random_subrep(std::mt19937_64& rng, const ArtinRep& amb) {
    const long n = amb.finite.generators;
    std::uniform_int_distribution<int> mode(0, 3);
    const int m = mode(rng);
    if (n == 0 || m == 0) return {ArtinRep::zero_rep(amb.group, amb.coeff), QMat(n, 0)};
    if (m == 1) return {amb, QMat::identity(n)};
    std::vector<QMat> basis = equivariant_hom_basis(amb, amb);
    std::uniform_int_distribution<long> val(-2, 2);
    QMat t(n, n);
    for (const QMat& e : basis) t = t + e.scaled(val(rng));
    QMat inc;
    ArtinRep sub = rep_kernel(EquivariantMap{amb, amb, t}, &inc);
    return {sub, inc};
}

/* random object of the heart (normalized shape hidden behind padding and a
 * base change at each point) */
NObject random_heart_object(std::mt19937_64& rng, std::shared_ptr<const CurveData> curve,
                            long maxrank, bool pad = true) {
    NObject out;
    out.curve = curve;
    out.coeff = Q();
    out.open_set = "U";
    for (std::size_t i = 0; i < curve->branches.size(); ++i)
        out.branch.push_back(random_rep(rng, branch_group(*curve, i), maxrank));
    for (std::size_t p = 0; p < curve->points.size(); ++p) {
        ArtinRep xi = xi_functor(*curve, p, out.branch);
        auto [v, inc] = random_subrep(rng, xi);
        ArtinRep w = random_rep(rng, residue_group(*curve, p), 2);
        NPointPart pt;
        pt.m0 = v;
        pt.m1 = w;
        pt.d = QMat(w.finite.generators, v.finite.generators);
        pt.f0 = inc;
        std::uniform_int_distribution<int> coin(0, 1);
        if (pad && coin(rng)) {
            ArtinRep pr = random_rep(rng, residue_group(*curve, p), 2, false);
            const long np = pr.finite.generators;
            const long nv = pt.m0.finite.generators, nw = pt.m1.finite.generators;
            pt.d = QMat::vstack(QMat::hstack(pt.d, QMat(nw, np)),
                                QMat::hstack(QMat(np, nv), QMat::identity(np)));
            pt.f0 = QMat::hstack(pt.f0, QMat(pt.f0.rows(), np));
            pt.m0 = rep_direct_sum(pt.m0, pr);
            pt.m1 = rep_direct_sum(pt.m1, pr);
            QMat tv = random_invertible(rng, pt.m0.finite.generators);
            QMat tw = random_invertible(rng, pt.m1.finite.generators);
            pt.m0 = conjugate_rep(pt.m0, tv);
            pt.m1 = conjugate_rep(pt.m1, tw);
            pt.d = tw * pt.d * q_inverse(tv);
            pt.f0 = pt.f0 * q_inverse(tv);
        }
        out.point.push_back(std::move(pt));
    }
    return out;
}

NMorphism random_heart_morphism(std::mt19937_64& rng, const NObject& x, const NObject& y) {
    std::vector<NMorphism> basis = heart_hom_basis(x, y);
    NMorphism f = nmorphism_zero(x, y);
    std::uniform_int_distribution<long> val(-2, 2);
    for (const NMorphism& b : basis) f = nmorphism_sum(f, nmorphism_scaled(b, val(rng)));
    return f;
}

std::vector<std::shared_ptr<const CurveData>> curve_palette() {
    static std::vector<std::shared_ptr<const CurveData>> pal = [] {
        std::vector<std::shared_ptr<const CurveData>> v;
        v.push_back(curve_p1(1, {"zero"}));
        v.push_back(curve_p1(1, {"zero", "inf"}));
        v.push_back(curve_gm_cyclic(1, 3));
        v.push_back(curve_nodal(1));
        FiniteGroup c4 = cyclic_group(4);
        FiniteGroup c2 = cyclic_group(2);
        FiniteGroup d4 = dihedral_group(4);
        v.push_back(curve_local(c4, 2, c2, {0, 1}, 1));
        v.push_back(curve_local(c2, 0, c2, {}, 1, {0}));
        v.push_back(curve_local(d4, 1, c2, {0, 1}, 1));
        return v;
    }();
    return pal;
}

bool object_is_zero(const NObject& m) {
    for (const auto& b : m.branch)
        if (b.finite.generators != 0) return false;
    for (const auto& p : m.point)
        if (p.m0.finite.generators != 0 || p.m1.finite.generators != 0) return false;
    return true;
}

/* two components meeting in a single point, no mu data on the intersection */
SNCData meet_in_point(const GeomDatum& a, const GeomDatum& b) {
    SNCData s;
    s.components = {a, b};
    SncIntersection inter;
    inter.scheme = geom_point(a.base);
    inter.from_first.pi0_map = {0};
    inter.from_second.pi0_map = {0};
    s.pairwise[{0, 1}] = inter;
    return s;
}

bool complexes_equal(const DiscreteComplex& a, const DiscreteComplex& b) {
    if (a.graded.size() != b.graded.size()) return false;
    for (const auto& [deg, rep] : a.graded) {
        if (!b.has(deg)) return false;
        const ArtinRep& o = b.at(deg);
        if (!(admissible_module(rep) == admissible_module(o))) return false;
        if (rep.action != o.action) return false;
        if (rep.divisible.size() != o.divisible.size()) return false;
        for (size_t i = 0; i < rep.divisible.size(); ++i)
            if (rep.divisible[i].action != o.divisible[i].action) return false;
    }
    return true;
}

long free_rank_of(const ArtinRep& m) { return module_shape(m.finite).free_rank; }

long divisible_rank_sum(const json& arr) {
    long r = 0;
    for (const json& d : arr) r += d.at("rank").get<long>();
    return r;
}

/* the workspace document driving criteria 1-3 through the command layer */
const char* kAcceptanceDoc = R"({
  "groups": [{"id": "c1", "kind": "cyclic", "n": 1}],
  "base_fields": [
    {"id": "k5", "quotient": "c1", "char_exponent": 5},
    {"id": "k1", "quotient": "c1", "char_exponent": 1}
  ],
  "geometries": [
    {"id": "P1", "kind": "projective_space", "base": "k5", "n": 1},
    {"id": "E", "kind": "curve", "base": "k1", "genus": 1},
    {"id": "A2", "kind": "abelian_variety", "base": "k1", "g": 2}
  ]
})";

/* ------------------------------ criteria --------------------------------- */

Checker criterion1() {
    Checker c;
    Workspace ws;
    load_document_text(ws, "<acceptance>", kAcceptanceDoc);
    CliReport r = run_omega0(ws, "P1", Z(), std::nullopt);
    const json& table = r.doc.at("table");
    c.expect(table.size() == 2 && table.contains("0") && table.contains("3"),
             "table has exactly degrees 0 and 3");
    const json& t0 = table.at("0");
    c.expect(t0.at("finite").at("free_rank") == 1, "H^0 free rank 1");
    c.expect(t0.at("finite").at("torsion").empty(), "H^0 torsion-free");
    c.expect(t0.at("coeff") == Z().localize_away(5).to_string(), "H^0 lives over Z[1/p]");
    c.expect(t0.at("divisible").empty(), "H^0 has no divisible part");
    c.expect(t0.at("action_trivial") == true, "H^0 action trivial");
    const json& t3 = table.at("3");
    c.expect(t3.at("finite").at("free_rank") == 0 && t3.at("finite").at("torsion").empty(),
             "H^3 has no finite part");
    c.expect(t3.at("divisible").size() == 1, "H^3 is one divisible summand");
    const json& d3 = t3.at("divisible").at(0);
    c.expect(d3.at("rank") == 1 && d3.at("twist") == -1 && d3.at("mode") == "all_but" &&
                 d3.at("primes") == json::array({5}),
             "H^3 = Q/Z[1/p](-1), rank 1");
    c.expect(r.doc.at("verdict").at("constructible") == false &&
                 r.doc.at("verdict").at("witness") == 3,
             "verdict NotConstructible(3)");

    /* library-level golden, both in characteristic exponent 1 and 5 */
    for (unsigned long p : {1ul, 5ul}) {
        BaseField k = closed_field(p);
        GeomDatum x = geom_projective_space(k, 1);
        std::set<unsigned long> inv = p == 1 ? std::set<unsigned long>{}
                                             : std::set<unsigned long>{p};
        DiscreteComplex dc = omega0_pushforward(x, Z());
        std::set<long> degs;
        for (const auto& [deg, rep] : dc.graded) degs.insert(deg);
        c.expect(degs == std::set<long>{0, 3}, "pushforward concentrated in degrees 0, 3");
        AdmissibleModule h0 = admissible_module(dc.at(0));
        c.expect(h0.finite == FgModule::from_invariants(Z().localize_away(p), 1, {}),
                 "H^0 = Z[1/p], rank 1");
        c.expect(h0.divisible.is_zero() && h0.twisted_torsion.empty(), "H^0 purely finite");
        c.expect(dc.at(0).action[0].is_identity(), "H^0 action is the identity");
        AdmissibleModule h3 = admissible_module(dc.at(3));
        c.expect(h3.finite == FgModule::zero(Z().localize_away(p)), "H^3 finite part zero");
        c.expect(h3.divisible == DivisibleModule{{qz_summand(-1, 1, inv)}},
                 "H^3 = Q/Z[1/p](-1)");
        ConstructVerdict v = constructibility_verdict(x, Z());
        c.expect(!v.constructible && v.witness == 3 && v.to_string() == "NotConstructible(3)",
                 "verdict string NotConstructible(3)");
    }
    return c;
}

Checker criterion2() {
    Checker c;
    Workspace ws;
    load_document_text(ws, "<acceptance>", kAcceptanceDoc);
    CliReport r = run_omega0(ws, "P1", Q(), std::nullopt);
    const json& table = r.doc.at("table");
    c.expect(table.size() == 1 && table.contains("0"), "table collapses to degree 0");
    c.expect(table.at("0").at("finite").at("free_rank") == 1, "H^0 = Q, rank 1");
    c.expect(table.at("0").at("divisible").empty(), "no divisible part over Q");
    c.expect(r.doc.at("verdict").at("constructible") == true, "verdict Constructible");
    DiscreteComplex dc = omega0_pushforward(geom_projective_space(closed_field(5), 1), Q());
    c.expect(dc.graded.size() == 1 && dc.has(0), "library table collapses to degree 0");
    c.expect(admissible_module(dc.at(0)).finite == FgModule::from_invariants(Q(), 1, {}),
             "library H^0 = Q");
    return c;
}

Checker criterion3() {
    Checker c;
    Workspace ws;
    load_document_text(ws, "<acceptance>", kAcceptanceDoc);
    CliReport re = run_cone(ws, "E", 5, 1, Z());
    c.expect(re.doc.at("divisible_rank") == 2, "elliptic curve: divisible rank 2 in H^3");
    c.expect(re.doc.at("constructible") == false, "elliptic curve: not constructible");
    c.expect(re.doc.at("b1") == 2, "elliptic curve: b1 = 2");
    c.expect(divisible_rank_sum(re.doc.at("h3").at("divisible")) == 2,
             "H^3 carries total divisible rank 2");
    CliReport ra = run_cone(ws, "A2", 5, 1, Z());
    c.expect(ra.doc.at("divisible_rank") == 4, "abelian surface: divisible rank 4");
    c.expect(ra.doc.at("constructible") == false, "abelian surface: not constructible");
    /* library level */
    ConeReport cr = cone_pipeline(geom_curve(closed_field(1), 1), 5);
    c.expect(cr.divisible_rank == 2 && !cr.constructible, "pipeline report matches");
    return c;
}

Checker criterion4() {
    Checker c;
    std::mt19937_64 rng(env_seed(0xF0B));
    for (const auto& name : catalog_names()) {
        FiniteGroup G = catalog_group(name);
        auto subs = G.all_subgroups();
        for (const auto& elems : subs) {
            SubgroupPair pr = subgroup_group(G, elems);
            GroupHom incl = pr.inclusion(G);
            const FiniteGroup& H = pr.group;
            /* character pool: coset permutation characters of random cyclic
             * subgroups (exact hom-space ranks are their inner products) */
            auto random_char = [&](const FiniteGroup& grp) {
                std::uniform_int_distribution<int> pick(0, grp.order - 1);
                std::vector<int> sub = grp.subgroup_closure({pick(rng)});
                SubgroupPair kp = subgroup_group(grp, sub);
                ArtinRep triv = ArtinRep::trivial(share_group(kp.group), Q());
                return induced_character(triv, kp.inclusion(grp));
            };
            std::map<int, int> pre;
            for (int h = 0; h < H.order; ++h) pre[incl.apply(h)] = h;
            auto trans = left_transversal(G, incl);
            auto induce_char = [&](const std::vector<mpq_class>& chi) {
                std::vector<mpq_class> out(static_cast<size_t>(G.order), mpq_class(0));
                for (int g = 0; g < G.order; ++g)
                    for (int t : trans) {
                        int conj = G.mul(G.mul(G.inv(t), g), t);
                        auto it = pre.find(conj);
                        if (it != pre.end())
                            out[static_cast<size_t>(g)] += chi[static_cast<size_t>(it->second)];
                    }
                return out;
            };
            bool frob_ok = true, proj_ok = true;
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<mpq_class> chiM = random_char(H);
                std::vector<mpq_class> chiN = random_char(G);
                std::vector<mpq_class> chiInd = induce_char(chiM);
                std::vector<mpq_class> chiResN(static_cast<size_t>(H.order));
                for (int h = 0; h < H.order; ++h)
                    chiResN[static_cast<size_t>(h)] = chiN[static_cast<size_t>(incl.apply(h))];
                /* Frobenius reciprocity: rank Hom(Ind M, N) = rank Hom(M, Res N) */
                frob_ok = frob_ok &&
                          char_pair(G, chiInd, chiN) == char_pair(H, chiM, chiResN);
                /* projection formula: Ind(Res N * M) = N * Ind M */
                std::vector<mpq_class> prod(static_cast<size_t>(H.order));
                for (int h = 0; h < H.order; ++h)
                    prod[static_cast<size_t>(h)] =
                        chiResN[static_cast<size_t>(h)] * chiM[static_cast<size_t>(h)];
                std::vector<mpq_class> lhs = induce_char(prod);
                for (int g = 0; g < G.order; ++g)
                    proj_ok = proj_ok && lhs[static_cast<size_t>(g)] ==
                                             chiN[static_cast<size_t>(g)] *
                                                 chiInd[static_cast<size_t>(g)];
            }
            c.expect(frob_ok, std::string("Frobenius reciprocity on ") + name);
            c.expect(proj_ok, std::string("projection formula on ") + name);
            /* matrix-level tie-down on the small groups: the character
             * pairing above equals the literal equivariant hom rank */
            if (G.order <= 8) {
                auto Gp = share_group(G);
                auto Hp = share_group(H);
                for (int trial = 0; trial < 2; ++trial) {
                    ArtinRep M = random_rep(rng, Hp, 2, false);
                    ArtinRep N = random_rep(rng, Gp, 2, false);
                    ArtinRep indM = induce_rep(M, incl);
                    ArtinRep resN = restrict_rep(N, incl);
                    c.expect(hom_rank_q(indM, N) == hom_rank_q(M, resN),
                             std::string("matrix-level rank equality on ") + name);
                }
            }
        }
    }
    return c;
}

Checker criterion5() {
    Checker c;
    std::mt19937_64 rng(env_seed(0xABE1));
    const auto pal = curve_palette();
    for (int t = 0; t < 200; ++t) {
        auto curve = pal[static_cast<std::size_t>(t) % pal.size()];
        NObject x = random_heart_object(rng, curve, 3);
        NObject y = random_heart_object(rng, curve, 3);
        NMorphism f = random_heart_morphism(rng, x, y);
        KernelResult kr = heart_kernel_full(f);
        CokernelResult ck = heart_cokernel_full(f);
        c.expect(validate_nmorphism(kr.inclusion).ok() && validate_nmorphism(ck.projection).ok(),
                 "kernel inclusion / cokernel projection validate");
        c.expect(nmorphism_is_null_homotopic(nmorphism_compose(f, kr.inclusion)),
                 "f vanishes on its kernel");
        c.expect(nmorphism_is_null_homotopic(nmorphism_compose(ck.projection, f)),
                 "cokernel projection kills the image");
        c.expect(object_is_zero(heart_kernel(kr.inclusion)), "kernel inclusion is monic");
        c.expect(object_is_zero(heart_cokernel(ck.projection)), "cokernel projection is epic");
        /* universal properties */
        NObject tsrc = random_heart_object(rng, curve, 2);
        NMorphism rho = random_heart_morphism(rng, tsrc, kr.kernel);
        NMorphism psi = nmorphism_compose(kr.inclusion, rho);
        auto xi = factor_through_kernel(kr, psi);
        c.expect(xi.has_value() &&
                     nmorphisms_homotopic(nmorphism_compose(kr.inclusion, *xi), psi),
                 "maps killed by f factor through ker(f)");
        NObject tdst = random_heart_object(rng, curve, 2);
        NMorphism rho2 = random_heart_morphism(rng, ck.cokernel, tdst);
        NMorphism psi2 = nmorphism_compose(rho2, ck.projection);
        auto xi2 = factor_through_cokernel(ck, psi2);
        c.expect(xi2.has_value() &&
                     nmorphisms_homotopic(nmorphism_compose(*xi2, ck.projection), psi2),
                 "maps killing im(f) descend along coker(f)");
        /* im = coim */
        c.expect(nobjects_isomorphic(heart_image(f), heart_coimage(f)), "im(f) = coim(f)");
        /* six-term recollement sequence of the source object */
        SixTermSequence st = six_term_sequence(normalize_nobject(x));
        c.expect(validate_nmorphism(st.a).ok() && validate_nmorphism(st.b).ok() &&
                     validate_nmorphism(st.c).ok(),
                 "six-term maps validate");
        c.expect(object_is_zero(heart_kernel(st.a)), "six-term: a is monic");
        c.expect(object_is_zero(heart_cokernel(st.c)), "six-term: c is epic");
        c.expect(nobjects_isomorphic(heart_image(st.a), heart_kernel(st.b)),
                 "six-term: exact at j_! j^* M");
        c.expect(nobjects_isomorphic(heart_image(st.b), heart_kernel(st.c)),
                 "six-term: exact at M");
    }
    return c;
}

Checker criterion6() {
    Checker c;
    std::mt19937_64 rng(env_seed(0x6A11));
    const auto pal = curve_palette();
    auto random_glued = [&](std::shared_ptr<const CurveData> curve) {
        std::uniform_int_distribution<int> mode(0, 2);
        std::uniform_int_distribution<int> off(-1, 1);
        const int m = mode(rng);
        if (m == 0)
            return glued_shift(glued_from_nobject(random_heart_object(rng, curve, 2)), off(rng));
        NObject x = random_heart_object(rng, curve, 2);
        NObject y = random_heart_object(rng, curve, 2);
        GluedComplex z =
            glued_cone(glued_morphism_from_nmorphism(random_heart_morphism(rng, x, y)));
        if (m == 1) return glued_shift(z, off(rng));
        std::vector<GluedMorphism> hb = glued_hom_basis(
            glued_shift(glued_from_nobject(random_heart_object(rng, curve, 2)), off(rng)), z);
        if (hb.empty()) return z;
        std::uniform_int_distribution<std::size_t> pick(0, hb.size() - 1);
        return glued_cone(hb[pick(rng)]);
    };
    for (int t = 0; t < 110; ++t) { /* two fresh complexes per round: 220 total */
        auto curve = pal[static_cast<std::size_t>(t) % pal.size()];
        GluedComplex x = random_glued(curve);
        GluedComplex y = random_glued(curve);
        auto [xlo, xhi] = perverse_truncate(x);
        auto [ylo, yhi] = perverse_truncate(y);
        c.expect([&] {
            validate_glued(xlo);
            validate_glued(xhi);
            validate_glued(ylo);
            validate_glued(yhi);
            return true;
        }(), "truncations validate");
        /* orthogonality */
        c.expect(glued_hom_rank(xlo, yhi) == 0, "Hom(X^{<=0}, Y^{>=1}) = 0");
        /* idempotency */
        auto again_lo = perverse_truncate(xlo);
        auto again_hi = perverse_truncate(xhi);
        c.expect(glued_data_equal(again_lo.first, xlo) && glued_is_zero(again_lo.second),
                 "lower truncation idempotent");
        c.expect(glued_is_zero(again_hi.first) && glued_data_equal(again_hi.second, xhi),
                 "upper truncation idempotent");
        /* triangle exactness: the minimal model splits degreewise */
        GluedComplex mm = glued_minimalize(x);
        bool additive = true;
        for (std::size_t i = 0; i < mm.a.size(); ++i)
            for (int n = -5; n <= 5; ++n)
                additive = additive &&
                           mm.a[i].rank_at(n) == xlo.a[i].rank_at(n) + xhi.a[i].rank_at(n);
        for (std::size_t p = 0; p < mm.b.size(); ++p)
            for (int n = -5; n <= 5; ++n)
                additive = additive &&
                           mm.b[p].b.rank_at(n) == xlo.b[p].b.rank_at(n) + xhi.b[p].b.rank_at(n);
        c.expect(additive, "truncation triangle is exact degreewise");
        /* j_shriek of a local system lands in the heart */
        if (t % 4 == 0) {
            std::vector<ArtinRep> fam;
            for (std::size_t i = 0; i < curve->branches.size(); ++i)
                fam.push_back(random_rep(rng, branch_group(*curve, i), 2, false));
            NObject js = j_shriek(curve, fam);
            c.expect(validate_nobject(js).ok(), "j_shriek output validates as heart object");
            auto [jlo, jhi] = perverse_truncate(glued_from_nobject(js));
            c.expect(glued_is_zero(jhi) && !glued_is_zero(jlo),
                     "j_shriek sits in perverse degree <= 0");
            c.expect(object_is_zero(perverse_cohomology(glued_from_nobject(js), -1)),
                     "j_shriek has no perverse H^{-1}");
        }
    }
    return c;
}

Checker criterion7a() {
    Checker c;
    std::mt19937_64 rng(env_seed(0xCA7));
    const auto pal = curve_palette();
    int done = 0;
    for (int t = 0; done < 50; ++t) {
        auto curve = pal[static_cast<std::size_t>(t) % pal.size()];
        if (curve->branches.size() != 1) continue;
        auto g = branch_group(*curve, 0);
        std::vector<MaschkePiece> pieces = maschke_decompose(ArtinRep::regular(g, Q()));
        std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
        ArtinRep simple = pieces[pick(rng)].simple;
        if (simple.finite.generators > 0)
            simple = conjugate_rep(simple, random_invertible(rng, simple.finite.generators));
        NObject m = intermediate_extension(curve, {simple});
        c.expect(satisfies_carext(m), "intermediate extension satisfies carext");
        /* the two conditions, read off the glued model: i^* in perverse
         * degrees < 0, and w0 i^! in perverse degrees > 0 */
        GluedComplex gm = glued_from_nobject(m);
        bool cond1 = true, cond2 = true;
        for (std::size_t p = 0; p < m.point.size(); ++p) {
            PointShapes sh = glued_point_shapes(gm, p);
            for (const auto& [deg, rank] : sh.istar) cond1 = cond1 && (rank == 0 || deg < 0);
            for (const auto& [deg, rank] : sh.omega_shriek)
                cond2 = cond2 && (rank == 0 || deg > 0);
        }
        c.expect(cond1, "i^* concentrated in perverse degrees < 0");
        c.expect(cond2, "w0 i^! concentrated in perverse degrees > 0");
        c.expect(is_simple(m), "intermediate extension of a simple local system is simple");
        c.expect(composition_series(m).size() == 1, "composition length 1");
        ++done;
    }
    return c;
}

Checker criterion7b() {
    Checker c;
    auto p1 = curve_p1(1, {"zero"});
    ArtinRep triv = ArtinRep::trivial(branch_group(*p1, 0), Q());
    NObject os = omega0_j_star(p1, {triv});
    std::vector<NObject> fac = composition_series(os);
    c.expect(fac.size() == 2, "composition length 2");
    bool has_iext = false, has_point = false;
    NObject iext = intermediate_extension(p1, {triv});
    NObject ist = i_star(p1, Q(), {ArtinRep::trivial(residue_group(*p1, 0), Q())});
    for (const NObject& f : fac) {
        has_iext = has_iext || nobjects_isomorphic(f, iext);
        has_point = has_point || nobjects_isomorphic(f, ist);
    }
    c.expect(has_iext, "one factor is j_!*(1_U[1])");
    c.expect(has_point, "one factor is i_*(1)");
    return c;
}

Checker criterion7c() {
    Checker c;
    auto p1 = curve_p1(1, {"zero"});
    ArtinRep triv = ArtinRep::trivial(branch_group(*p1, 0), Q());
    std::vector<NObject> fac = composition_series(j_shriek(p1, {triv}));
    c.expect(fac.size() == 2, "composition length 2");
    if (fac.size() == 2) {
        c.expect(nobjects_isomorphic(
                     fac[0], i_star(p1, Q(), {ArtinRep::trivial(residue_group(*p1, 0), Q())})),
                 "socle is i_*(1)");
        c.expect(nobjects_isomorphic(fac[1], intermediate_extension(p1, {triv})),
                 "top factor is j_!*(1_U[1])");
    }
    /* and the right-hand extension is itself already intermediate */
    NObject os = omega0_j_star(p1, {triv});
    c.expect(is_simple(os) && composition_series(os).size() == 1,
             "omega0_j_star(1_U[1]) is simple of length 1");
    c.expect(nobjects_data_equal(normalize_nobject(os),
                                 normalize_nobject(intermediate_extension(p1, {triv}))),
             "omega0_j_star(1_U[1]) equals j_!*(1_U[1])");
    return c;
}

Checker criterion8() {
    Checker c;
    auto u = curve_p1(1, {"zero", "inf"});
    NObject wm = weightless_motive(u);
    ArtinRep triv = ArtinRep::trivial(branch_group(*u, 0), Q());
    NObject iext = intermediate_extension(u, {triv});
    c.expect(nobjects_data_equal(normalize_nobject(wm), normalize_nobject(iext)),
             "weightless motive equals the intermediate extension (data equality)");
    c.expect(is_simple(wm), "weightless motive is simple");
    c.expect(satisfies_carext(wm), "weightless motive satisfies carext");
    return c;
}

Checker criterion9() {
    Checker c;
    std::mt19937_64 rng(env_seed(0x9EA1));
    const auto pal = curve_palette();
    for (int t = 0; t < 100; ++t) {
        auto curve = pal[static_cast<std::size_t>(t) % pal.size()];
        NObject a = random_heart_object(rng, curve, 2);
        NObject b = random_heart_object(rng, curve, 2);
        NMorphism f = random_heart_morphism(rng, a, b);
        RealizedMorphism rf = realize_v(f, 5);
        c.expect(realized_data_equal(realized_heart_kernel(rf), realize_v(heart_kernel(f), 5)),
                 "theta_v commutes with heart_kernel");
        c.expect(realized_data_equal(realized_heart_cokernel(rf),
                                     realize_v(heart_cokernel(f), 5)),
                 "theta_v commutes with heart_cokernel");
    }
    return c;
}

Checker criterion10() {
    Checker c;
    /* single component: the spectral sequence collapses onto the pushforward */
    for (unsigned long p : {1ul, 7ul}) {
        BaseField k = closed_field(p);
        for (const Coefficients& R : {Z(), Q()}) {
            for (long n : {1l, 2l}) {
                GeomDatum x = geom_projective_space(k, n);
                SNCData s;
                s.components = {x};
                c.expect(complexes_equal(abutment(s, R), omega0_pushforward(x, R)),
                         "single-component abutment equals the pushforward");
                BigradedPage e1 = e1_page(s, R);
                c.expect(page_d_squared_zero(e1), "d^2 = 0 on E1");
                c.expect(page_d_squared_zero(e2_page(s, R)), "d^2 = 0 on E2");
            }
        }
    }
    /* two projective lines meeting in one point: derived E2 table */
    BaseField k = closed_field(1);
    GeomDatum p1 = geom_projective_space(k, 1);
    SNCData s = meet_in_point(p1, p1);
    BigradedPage e1 = e1_page(s, Z());
    c.expect(e1.has(0, 0) && free_rank_of(e1.at(0, 0)) == 2, "E1(0,0) = Z^2");
    c.expect(e1.has(1, 0) && free_rank_of(e1.at(1, 0)) == 1, "E1(1,0) = Z");
    c.expect(e1.has(0, 3) &&
                 admissible_module(e1.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 2)}},
             "E1(0,3) = (Q/Z(-1))^2");
    c.expect(!e1.has(1, 3), "E1(1,3) = 0: the point has no H^3");
    c.expect(page_d_squared_zero(e1), "d^2 = 0 on E1");
    BigradedPage e2 = e2_page(s, Z());
    c.expect(e2.degenerate, "two-column E2 degenerates");
    c.expect(page_d_squared_zero(e2), "d^2 = 0 on E2");
    c.expect(e2.has(0, 0) && free_rank_of(e2.at(0, 0)) == 1, "E2(0,0) = Z");
    c.expect(!e2.has(1, 0), "E2(1,0) = 0: the Cech codifferential is onto");
    c.expect(e2.has(0, 3) &&
                 admissible_module(e2.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 2)}},
             "E2(0,3) = (Q/Z(-1))^2");
    DiscreteComplex ab = abutment(s, Z());
    std::set<long> degs;
    for (const auto& [deg, rep] : ab.graded) degs.insert(deg);
    c.expect(degs == std::set<long>{0, 3}, "abutment concentrated in degrees 0 and 3");
    c.expect(free_rank_of(ab.at(0)) == 1, "H^0 = Z");
    c.expect(admissible_module(ab.at(3)).divisible == DivisibleModule{{qz_summand(-1, 2)}},
             "H^3 = (Q/Z(-1))^2");
    return c;
}

template <typename F>
void run(const std::string& tag, const std::string& text, F fn, bool expected_to_fail = false) {
    try {
        report(tag, text, fn(), expected_to_fail);
    } catch (const std::exception& e) {
        report_exception(tag, text, e.what());
    }
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("acceptance suite (seed %llu)\n", env_seed(1));
    run("1", "omega0 of P^1 over Z: H^0 = Z[1/p], H^3 = Q/Z[1/p](-1), NotConstructible(3)",
        criterion1);
    run("2", "omega0 of P^1 over Q collapses to H^0 = Q, Constructible", criterion2);
    run("3", "cone pipeline: elliptic curve gives divisible rank 2 in H^3, abelian surface 4",
        criterion3);
    run("4", "Frobenius reciprocity + projection formula, full catalog, 50 pairs per subgroup",
        criterion4);
    run("5", "abelian axioms on 200 random heart objects/morphisms", criterion5);
    run("6", "recollement t-structure on 220 random bounded glued complexes", criterion6);
    run("7a", "intermediate extensions of 50 random simple local systems: carext + simple",
        criterion7a);
    run("7b", "omega0_j_star(1_U[1]) on P^1 minus a point has composition length 2",
        criterion7b, /*expected_to_fail=*/true);
    std::printf("         - note: expected failure; over Q the right-hand extension is already\n"
                "           intermediate (simple, length 1), so the length-2 series belongs to\n"
                "           j_shriek, which criterion 7c checks\n");
    run("7c", "j_shriek(1_U[1]) on P^1 minus a point: length 2, factors i_*(1) and j_!*(1_U[1])",
        criterion7c);
    run("8", "weightless motive of P^1 minus {0,inf} equals the intermediate extension, simple",
        criterion8);
    run("9", "l-adic realization commutes with heart kernels/cokernels on 100 random morphisms",
        criterion9);
    run("10", "descent spectral sequence: abutment, two-component E2 table, d^2 = 0",
        criterion10);
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    std::printf("acceptance: %d unexpected failure(s), wall time %.1f s\n", g_unexpected,
                static_cast<double>(dt.count()) / 1000.0);
    return g_unexpected;
}
