/* Curves as finite data, the residue functor ∂_y, the gluing functor Ξ_x, and
 * the validated category N(C,R) of quadruples with lax morphisms. */
#include "artinperv/curve.hpp"

#include <set>
#include <sstream>

namespace artinperv {

namespace {

std::string part_path(const char* base, std::size_t i) {
    std::ostringstream os;
    os << base << '[' << i << ']';
    return os.str();
}

/* is t inside the cyclic subgroup generated by g? */
bool in_cyclic(const FiniteGroup& q, int g, int t) {
    int cur = q.identity;
    for (int i = 0; i < q.order; ++i) {
        if (cur == t) return true;
        cur = q.mul(cur, g);
    }
    return false;
}

long xi_rank(const NObject& m, std::size_t point) {
    return xi_functor(*m.curve, point, m.branch).finite.generators;
}

/* shared validation of one plain (untwisted, finite-part-only) representation */
bool check_plain_rep(const ArtinRep& m, const FiniteGroup& grp, const Coefficients& R,
                     const std::string& path, std::vector<Violation>& out) {
    bool ok = true;
    auto add = [&](const std::string& msg) {
        out.push_back({path, msg});
        ok = false;
    };
    if (!m.group) {
        add("missing group");
        return false;
    }
    if (!groups_equal(*m.group, grp)) add("wrong group");
    if (m.coeff != R) add("coefficient mismatch (expected " + R.to_string() + ")");
    if (!m.divisible.empty()) add("divisible summands are not allowed here");
    if (m.finite_twist != 0) add("twisted finite part is not allowed here");
    for (const auto& v : m.twist_chi)
        if (v != 1) {
            add("nontrivial twist character is not allowed here");
            break;
        }
    if (!ok) return false;
    try {
        validate_rep(m);
    } catch (const error& e) {
        add(e.what());
    }
    return ok;
}

} // namespace

/* ------------------------------ curve data ------------------------------ */

void CurveData::validate() const {
    if (branches.empty()) throw error("curve: at least one branch is required");
    std::set<std::string> branch_names;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const std::string where = part_path("branch", i);
        if (branches[i].name.empty()) throw error(where + ": branch needs a name");
        if (!branch_names.insert(branches[i].name).second)
            throw error(where + ": duplicate branch name '" + branches[i].name + "'");
        try {
            branches[i].pi1.validate();
        } catch (const error& e) {
            throw error(where + ": " + e.what());
        }
    }
    std::set<std::string> point_names;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const ClosedPoint& x = points[i];
        const std::string where = part_path("point", i);
        if (x.name.empty()) throw error(where + ": point needs a name");
        if (!point_names.insert(x.name).second)
            throw error(where + ": duplicate point name '" + x.name + "'");
        try {
            x.residue.validate();
        } catch (const error& e) {
            throw error(where + ": " + e.what());
        }
        if (x.char_exponent != 1 && !is_prime_ul(x.char_exponent))
            throw error(where + ": characteristic exponent must be 1 or a prime");
        const FiniteGroup& gx = x.residue.quotient;
        std::set<std::string> fiber_names;
        for (std::size_t j = 0; j < x.fiber.size(); ++j) {
            const FiberPoint& y = x.fiber[j];
            const std::string fwhere = where + "." + part_path("fiber", j);
            if (y.name.empty()) throw error(fwhere + ": fiber point needs a name");
            if (!fiber_names.insert(y.name).second)
                throw error(fwhere + ": duplicate fiber point name '" + y.name + "'");
            if (y.branch >= branches.size())
                throw error(fwhere + ": branch index out of range");
            const FiniteGroup& q = branches[y.branch].pi1.quotient;
            if (y.inertia_mark < 0 || y.inertia_mark >= q.order)
                throw error(fwhere + ": inertia mark out of range");
            /* the residue subgroup must be a faithful copy inside G_{k(x)} */
            const SubgroupPair& sp = y.residue;
            if (static_cast<int>(sp.elements.size()) != sp.group.order)
                throw error(fwhere + ": residue subgroup element count mismatch");
            for (int e : sp.elements)
                if (e < 0 || e >= gx.order)
                    throw error(fwhere + ": residue element out of range");
            if (!gx.is_subgroup(sp.elements))
                throw error(fwhere + ": residue elements do not form a subgroup");
            for (int a = 0; a < sp.group.order; ++a)
                for (int b = 0; b < sp.group.order; ++b)
                    if (sp.elements[static_cast<size_t>(sp.group.mul(a, b))] !=
                        gx.mul(sp.elements[static_cast<size_t>(a)],
                               sp.elements[static_cast<size_t>(b)]))
                        throw error(fwhere + ": residue subgroup table mismatch");
            std::string why;
            GroupHom incl = sp.inclusion(gx);
            if (!incl.validate(&why) || !incl.injective())
                throw error(fwhere + ": residue inclusion invalid (" + why + ")");
            /* decomposition lifts: one per generator, each normalizing <g_y>,
             * with a homomorphic class map modulo inertia */
            if (y.decomp_lifts.size() != sp.group.generators.size())
                throw error(fwhere + ": need one decomposition lift per residue generator");
            for (int w : y.decomp_lifts)
                if (w < 0 || w >= q.order)
                    throw error(fwhere + ": decomposition lift out of range");
            for (int w : y.decomp_lifts) {
                int conj = q.mul(q.mul(w, y.inertia_mark), q.inv(w));
                if (!in_cyclic(q, y.inertia_mark, conj))
                    throw error(fwhere +
                                ": decomposition lift does not normalize the inertia subgroup");
            }
            for (int a = 0; a < sp.group.order; ++a)
                for (int b = 0; b < sp.group.order; ++b) {
                    int wa = decomposition_lift(i, j, a);
                    int wb = decomposition_lift(i, j, b);
                    int wab = decomposition_lift(i, j, sp.group.mul(a, b));
                    int defect = q.mul(q.mul(wa, wb), q.inv(wab));
                    if (!in_cyclic(q, y.inertia_mark, defect))
                        throw error(fwhere +
                                    ": decomposition lifts are not a homomorphism modulo inertia");
                }
        }
    }
}

int CurveData::decomposition_lift(std::size_t point, std::size_t fiber_index, int h) const {
    if (point >= points.size()) throw error("decomposition_lift: point index out of range");
    const ClosedPoint& x = points[point];
    if (fiber_index >= x.fiber.size())
        throw error("decomposition_lift: fiber index out of range");
    const FiberPoint& y = x.fiber[fiber_index];
    const FiniteGroup& hgrp = y.residue.group;
    const FiniteGroup& q = branches[y.branch].pi1.quotient;
    if (h < 0 || h >= hgrp.order) throw error("decomposition_lift: element out of range");
    if (y.decomp_lifts.size() != hgrp.generators.size())
        throw error("decomposition_lift: lift data size mismatch");
    const auto words = hgrp.generator_words();
    int out = q.identity;
    for (int gi : words[static_cast<size_t>(h)])
        out = q.mul(out, y.decomp_lifts[static_cast<size_t>(gi)]);
    return out;
}

std::shared_ptr<const FiniteGroup> branch_group(const CurveData& c, std::size_t branch) {
    if (branch >= c.branches.size()) throw error("branch_group: index out of range");
    return std::make_shared<const FiniteGroup>(c.branches[branch].pi1.quotient);
}

std::shared_ptr<const FiniteGroup> residue_group(const CurveData& c, std::size_t point) {
    if (point >= c.points.size()) throw error("residue_group: index out of range");
    return std::make_shared<const FiniteGroup>(c.points[point].residue.quotient);
}

/* ------------------------------ ∂ and Ξ --------------------------------- */

PartialResult partial_y_full(const CurveData& c, std::size_t point, std::size_t fiber_index,
                             const ArtinRep& m) {
    if (point >= c.points.size()) throw error("partial: point index out of range");
    const ClosedPoint& x = c.points[point];
    if (fiber_index >= x.fiber.size()) throw error("partial: fiber index out of range");
    const FiberPoint& y = x.fiber[fiber_index];
    const FiniteGroup& q = c.branches[y.branch].pi1.quotient;
    if (!m.group || !groups_equal(*m.group, q))
        throw error("partial: representation does not live on the branch quotient");
    if (!m.divisible.empty())
        throw error("partial: divisible summands are not supported on curves");
    if (m.finite_twist != 0)
        throw error("partial: twisted coefficients are not supported on curves");
    for (const auto& v : m.twist_chi)
        if (v != 1) throw error("partial: nontrivial twist characters are not supported on curves");

    Coefficients rp = m.coeff.localize_away(x.char_exponent);
    auto hgrp = std::make_shared<const FiniteGroup>(y.residue.group);
    if (rp.is_zero_ring())
        return {ArtinRep::zero_rep(hgrp, rp), ZMat(m.finite.generators, 0)};

    InvariantsResult inv = invariants(m, {y.inertia_mark});
    ZMat incl = inv.inclusion;

    ArtinRep out;
    out.group = hgrp;
    out.coeff = rp;
    out.finite = FgModule(rp, inv.module.finite.generators, inv.module.finite.relations);
    FgModule amb(rp, m.finite.generators, m.finite.relations);
    for (int h = 0; h < hgrp->order; ++h) {
        int w = c.decomposition_lift(point, fiber_index, h);
        QMat rho;
        if (!express_in_submodule(incl, amb, m.action[static_cast<size_t>(w)] * q_from_z(incl),
                                  rho))
            throw error("partial: invariants are not stable over the localized ring");
        out.action.push_back(std::move(rho));
    }
    validate_rep(out);
    return {std::move(out), std::move(incl)};
}

ArtinRep partial_y(const CurveData& c, std::size_t point, std::size_t fiber_index,
                   const ArtinRep& m) {
    return partial_y_full(c, point, fiber_index, m).rep;
}

QMat partial_map(const CurveData& c, std::size_t point, std::size_t fiber_index,
                 const ArtinRep& src, const ArtinRep& tgt, const QMat& f) {
    if (f.rows() != tgt.finite.generators || f.cols() != src.finite.generators)
        throw error("partial_map: matrix shape mismatch");
    PartialResult ps = partial_y_full(c, point, fiber_index, src);
    PartialResult pt = partial_y_full(c, point, fiber_index, tgt);
    Coefficients rp = pt.rep.coeff;
    if (rp.is_zero_ring()) return QMat(0, 0);
    FgModule amb(rp, tgt.finite.generators, tgt.finite.relations);
    QMat out;
    if (!express_in_submodule(pt.inclusion, amb, f * q_from_z(ps.inclusion), out))
        throw error("partial_map: map does not preserve inertia invariants");
    return out;
}

ArtinRep xi_functor(const CurveData& c, std::size_t point,
                    const std::vector<ArtinRep>& branch_reps) {
    if (point >= c.points.size()) throw error("xi: point index out of range");
    if (branch_reps.empty() || branch_reps.size() != c.branches.size())
        throw error("xi: need one representation per branch");
    Coefficients r = branch_reps.front().coeff;
    for (const auto& m : branch_reps)
        if (m.coeff != r) throw error("xi: branch representations must share coefficients");
    const ClosedPoint& x = c.points[point];
    auto gx = residue_group(c, point);
    ArtinRep out = ArtinRep::zero_rep(gx, r.localize_away(x.char_exponent));
    for (std::size_t j = 0; j < x.fiber.size(); ++j) {
        const FiberPoint& y = x.fiber[j];
        ArtinRep d = partial_y(c, point, j, branch_reps[y.branch]);
        GroupHom incl = y.residue.inclusion(x.residue.quotient);
        out = rep_direct_sum(out, induce_rep(d, incl));
    }
    return out;
}

QMat xi_map(const CurveData& c, std::size_t point, const std::vector<ArtinRep>& src,
            const std::vector<ArtinRep>& tgt, const std::vector<QMat>& branch_maps) {
    if (point >= c.points.size()) throw error("xi_map: point index out of range");
    if (src.size() != c.branches.size() || tgt.size() != src.size() ||
        branch_maps.size() != src.size())
        throw error("xi_map: need one map per branch");
    const ClosedPoint& x = c.points[point];
    const FiniteGroup& gx = x.residue.quotient;
    QMat out(0, 0);
    for (std::size_t j = 0; j < x.fiber.size(); ++j) {
        const FiberPoint& y = x.fiber[j];
        QMat pf = partial_map(c, point, j, src[y.branch], tgt[y.branch], branch_maps[y.branch]);
        long copies = gx.order / y.residue.group.order;
        for (long i = 0; i < copies; ++i) out = QMat::block_diag(out, pf);
    }
    return out;
}

/* ------------------------------- N(C,R) --------------------------------- */

NObject nobject_zero(std::shared_ptr<const CurveData> c, const Coefficients& R) {
    if (!c) throw error("nobject: missing curve data");
    NObject out;
    out.curve = c;
    out.coeff = R;
    for (std::size_t i = 0; i < c->branches.size(); ++i)
        out.branch.push_back(ArtinRep::zero_rep(branch_group(*c, i), R));
    for (std::size_t i = 0; i < c->points.size(); ++i) {
        Coefficients rp = R.localize_away(c->points[i].char_exponent);
        NPointPart part;
        part.m0 = ArtinRep::zero_rep(residue_group(*c, i), rp);
        part.m1 = part.m0;
        part.d = QMat(0, 0);
        part.f0 = QMat(0, 0);
        out.point.push_back(std::move(part));
    }
    return out;
}

NMorphism nmorphism_zero(const NObject& src, const NObject& tgt) {
    if (!src.curve || src.curve != tgt.curve)
        throw error("nmorphism: objects live on different curves");
    NMorphism f;
    f.source = src;
    f.target = tgt;
    for (std::size_t i = 0; i < src.branch.size(); ++i)
        f.branch_map.push_back(
            QMat(tgt.branch[i].finite.generators, src.branch[i].finite.generators));
    for (std::size_t i = 0; i < src.point.size(); ++i) {
        NPointMap pm;
        pm.phi0 = QMat(tgt.point[i].m0.finite.generators, src.point[i].m0.finite.generators);
        pm.phi1 = QMat(tgt.point[i].m1.finite.generators, src.point[i].m1.finite.generators);
        pm.h = QMat(xi_rank(tgt, i), src.point[i].m1.finite.generators);
        f.point_map.push_back(std::move(pm));
    }
    return f;
}

NMorphism nmorphism_identity(const NObject& m) {
    NMorphism f = nmorphism_zero(m, m);
    for (std::size_t i = 0; i < m.branch.size(); ++i)
        f.branch_map[i] = QMat::identity(m.branch[i].finite.generators);
    for (std::size_t i = 0; i < m.point.size(); ++i) {
        f.point_map[i].phi0 = QMat::identity(m.point[i].m0.finite.generators);
        f.point_map[i].phi1 = QMat::identity(m.point[i].m1.finite.generators);
    }
    return f;
}

NMorphism nmorphism_compose(const NMorphism& g, const NMorphism& f) {
    if (f.target.curve != g.source.curve) throw error("compose: morphisms live on different curves");
    NMorphism out;
    out.source = f.source;
    out.target = g.target;
    for (std::size_t i = 0; i < f.branch_map.size(); ++i)
        out.branch_map.push_back(g.branch_map[i] * f.branch_map[i]);
    for (std::size_t i = 0; i < f.point_map.size(); ++i) {
        NPointMap pm;
        pm.phi0 = g.point_map[i].phi0 * f.point_map[i].phi0;
        pm.phi1 = g.point_map[i].phi1 * f.point_map[i].phi1;
        QMat xia = xi_map(*g.source.curve, i, g.source.branch, g.target.branch, g.branch_map);
        pm.h = g.point_map[i].h * f.point_map[i].phi1 + xia * f.point_map[i].h;
        out.point_map.push_back(std::move(pm));
    }
    return out;
}

NMorphism nmorphism_sum(const NMorphism& a, const NMorphism& b) {
    NMorphism out = a;
    for (std::size_t i = 0; i < out.branch_map.size(); ++i)
        out.branch_map[i] = a.branch_map[i] + b.branch_map[i];
    for (std::size_t i = 0; i < out.point_map.size(); ++i) {
        out.point_map[i].phi0 = a.point_map[i].phi0 + b.point_map[i].phi0;
        out.point_map[i].phi1 = a.point_map[i].phi1 + b.point_map[i].phi1;
        out.point_map[i].h = a.point_map[i].h + b.point_map[i].h;
    }
    return out;
}

NMorphism nmorphism_scaled(const NMorphism& a, const mpq_class& s) {
    NMorphism out = a;
    for (auto& m : out.branch_map) m = m.scaled(s);
    for (auto& pm : out.point_map) {
        pm.phi0 = pm.phi0.scaled(s);
        pm.phi1 = pm.phi1.scaled(s);
        pm.h = pm.h.scaled(s);
    }
    return out;
}

NMorphism nmorphism_difference(const NMorphism& a, const NMorphism& b) {
    return nmorphism_sum(a, nmorphism_scaled(b, mpq_class(-1)));
}

/* ----------------------------- validation ------------------------------- */

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << '\n';
        os << violations[i].path << ": " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate_nobject(const NObject& m) {
    ValidationReport report;
    auto add = [&](const std::string& path, const std::string& msg) {
        report.violations.push_back({path, msg});
    };
    if (!m.curve) {
        add("curve", "missing curve data");
        return report;
    }
    try {
        m.curve->validate();
    } catch (const error& e) {
        add("curve", e.what());
        return report;
    }
    if (m.coeff.is_zero_ring()) {
        add("coeff", "the zero ring is not an admissible coefficient ring");
        return report;
    }
    if (m.branch.size() != m.curve->branches.size()) {
        add("branch", "need one representation per branch");
        return report;
    }
    if (m.point.size() != m.curve->points.size()) {
        add("point", "need one datum per closed point");
        return report;
    }
    bool branches_ok = true;
    for (std::size_t i = 0; i < m.branch.size(); ++i)
        branches_ok &= check_plain_rep(m.branch[i], m.curve->branches[i].pi1.quotient, m.coeff,
                                       part_path("branch", i), report.violations);
    for (std::size_t i = 0; i < m.point.size(); ++i) {
        const ClosedPoint& x = m.curve->points[i];
        const NPointPart& part = m.point[i];
        const std::string base = part_path("point", i);
        Coefficients rp = m.coeff.localize_away(x.char_exponent);
        bool ok0 = check_plain_rep(part.m0, x.residue.quotient, rp, base + ".m0",
                                   report.violations);
        bool ok1 = check_plain_rep(part.m1, x.residue.quotient, rp, base + ".m1",
                                   report.violations);
        if (!ok0 || !ok1) continue;
        if (part.d.rows() != part.m1.finite.generators ||
            part.d.cols() != part.m0.finite.generators) {
            add(base + ".d", "shape mismatch");
            continue;
        }
        if (!denominator_is_unit(q_denominator(part.d), rp)) {
            add(base + ".d", "entries are not defined over the localized ring");
            continue;
        }
        if (!q_columns_in_relation_span(part.d * q_from_z(part.m0.finite.relations.transpose()),
                                        part.m1.finite))
            add(base + ".d", "does not respect the module relations");
        for (int g = 0; g < part.m0.grp().order; ++g) {
            QMat diff = part.d * part.m0.action[static_cast<size_t>(g)] -
                        part.m1.action[static_cast<size_t>(g)] * part.d;
            if (!q_columns_in_relation_span(diff, part.m1.finite)) {
                add(base + ".d", "is not equivariant");
                break;
            }
        }
        if (!branches_ok) continue; /* the gluing target needs valid branch data */
        ArtinRep xi;
        try {
            xi = xi_functor(*m.curve, i, m.branch);
        } catch (const error& e) {
            add(base + ".f0", std::string("gluing target unavailable: ") + e.what());
            continue;
        }
        if (part.f0.rows() != xi.finite.generators ||
            part.f0.cols() != part.m0.finite.generators) {
            add(base + ".f0", "shape mismatch");
            continue;
        }
        if (!denominator_is_unit(q_denominator(part.f0), rp)) {
            add(base + ".f0", "entries are not defined over the localized ring");
            continue;
        }
        if (!q_columns_in_relation_span(part.f0 * q_from_z(part.m0.finite.relations.transpose()),
                                        xi.finite))
            add(base + ".f0", "does not respect the module relations");
        for (int g = 0; g < part.m0.grp().order; ++g) {
            QMat diff = part.f0 * part.m0.action[static_cast<size_t>(g)] -
                        xi.action[static_cast<size_t>(g)] * part.f0;
            if (!q_columns_in_relation_span(diff, xi.finite)) {
                add(base + ".f0", "is not equivariant");
                break;
            }
        }
        /* the defining condition of the category: H0(f_x) is injective */
        mpz_class dden = q_denominator(part.d);
        ZMat dz = z_from_q(part.d.scaled(dden));
        SubquotientResult ker = module_kernel({part.m0.finite, part.m1.finite, dz});
        QMat comp = part.f0 * q_from_z(ker.map);
        mpz_class cden = q_denominator(comp);
        ZMat cz = z_from_q(comp.scaled(cden));
        SubquotientResult kk = module_kernel({ker.module, xi.finite, cz});
        if (!module_is_zero(kk.module)) add(base + ".f0", "H0(f_x) is not injective");
    }
    return report;
}

ValidationReport validate_nmorphism(const NMorphism& f) {
    ValidationReport report;
    auto add = [&](const std::string& path, const std::string& msg) {
        report.violations.push_back({path, msg});
    };
    ValidationReport s = validate_nobject(f.source);
    for (const auto& v : s.violations)
        report.violations.push_back({"source." + v.path, v.message});
    ValidationReport t = validate_nobject(f.target);
    for (const auto& v : t.violations)
        report.violations.push_back({"target." + v.path, v.message});
    if (!report.ok()) return report;
    if (f.source.curve != f.target.curve) {
        add("curve", "source and target live on different curves");
        return report;
    }
    if (f.source.coeff != f.target.coeff) {
        add("coeff", "source and target coefficients differ");
        return report;
    }
    if (f.branch_map.size() != f.source.branch.size()) {
        add("branch_map", "need one matrix per branch");
        return report;
    }
    if (f.point_map.size() != f.source.point.size()) {
        add("point_map", "need one datum per closed point");
        return report;
    }
    const CurveData& c = *f.source.curve;
    for (std::size_t i = 0; i < f.branch_map.size(); ++i) {
        const ArtinRep& sm = f.source.branch[i];
        const ArtinRep& tm = f.target.branch[i];
        const QMat& a = f.branch_map[i];
        const std::string base = part_path("branch_map", i);
        if (a.rows() != tm.finite.generators || a.cols() != sm.finite.generators) {
            add(base, "shape mismatch");
            return report;
        }
        if (!denominator_is_unit(q_denominator(a), f.source.coeff)) {
            add(base, "entries are not defined over the coefficient ring");
            return report;
        }
        if (!q_columns_in_relation_span(a * q_from_z(sm.finite.relations.transpose()), tm.finite))
            add(base, "does not respect the module relations");
        for (int g = 0; g < sm.grp().order; ++g) {
            QMat diff = a * sm.action[static_cast<size_t>(g)] -
                        tm.action[static_cast<size_t>(g)] * a;
            if (!q_columns_in_relation_span(diff, tm.finite)) {
                add(base, "is not equivariant");
                break;
            }
        }
    }
    if (!report.ok()) return report; /* Ξ of the branch maps needs equivariance */
    for (std::size_t i = 0; i < f.point_map.size(); ++i) {
        const NPointPart& sp = f.source.point[i];
        const NPointPart& tp = f.target.point[i];
        const NPointMap& pm = f.point_map[i];
        const std::string base = part_path("point_map", i);
        Coefficients rp = f.source.coeff.localize_away(c.points[i].char_exponent);
        ArtinRep xit = xi_functor(c, i, f.target.branch);
        auto check_map = [&](const QMat& mat, const ArtinRep& msrc, const ArtinRep& mtgt,
                             const std::string& path) {
            bool ok = true;
            if (mat.rows() != mtgt.finite.generators || mat.cols() != msrc.finite.generators) {
                add(path, "shape mismatch");
                return false;
            }
            if (!denominator_is_unit(q_denominator(mat), rp)) {
                add(path, "entries are not defined over the localized ring");
                return false;
            }
            if (!q_columns_in_relation_span(mat * q_from_z(msrc.finite.relations.transpose()),
                                            mtgt.finite)) {
                add(path, "does not respect the module relations");
                ok = false;
            }
            for (int g = 0; g < msrc.grp().order; ++g) {
                QMat diff = mat * msrc.action[static_cast<size_t>(g)] -
                            mtgt.action[static_cast<size_t>(g)] * mat;
                if (!q_columns_in_relation_span(diff, mtgt.finite)) {
                    add(path, "is not equivariant");
                    ok = false;
                    break;
                }
            }
            return ok;
        };
        bool ok0 = check_map(pm.phi0, sp.m0, tp.m0, base + ".phi0");
        bool ok1 = check_map(pm.phi1, sp.m1, tp.m1, base + ".phi1");
        bool okh = check_map(pm.h, sp.m1, xit, base + ".h");
        if (!ok0 || !ok1 || !okh) continue;
        QMat chain = pm.phi1 * sp.d - tp.d * pm.phi0;
        if (!q_columns_in_relation_span(chain, tp.m1.finite))
            add(base, "chain condition fails");
        QMat xia = xi_map(c, i, f.source.branch, f.target.branch, f.branch_map);
        QMat square = tp.f0 * pm.phi0 - xia * sp.f0 - pm.h * sp.d;
        if (!q_columns_in_relation_span(square, xit.finite))
            add(base, "gluing square fails up to the given homotopy");
    }
    return report;
}

/* ------------------------------ builders -------------------------------- */

namespace {

MarkedProfinite trivial_profinite() {
    MarkedProfinite p;
    p.quotient = cyclic_group(1);
    return p;
}

FiberPoint plain_fiber_point(const std::string& name, std::size_t branch, int mark,
                             const FiniteGroup& gx) {
    FiberPoint y;
    y.name = name;
    y.branch = branch;
    y.inertia_mark = mark;
    std::vector<int> all;
    for (int i = 0; i < gx.order; ++i) all.push_back(i);
    y.residue = subgroup_group(gx, all, gx.name);
    y.decomp_lifts.assign(y.residue.group.generators.size(), 0);
    return y;
}

std::shared_ptr<const CurveData> finish(CurveData c) {
    auto out = std::make_shared<CurveData>(std::move(c));
    out->validate();
    return out;
}

} // namespace

std::shared_ptr<const CurveData> curve_p1(unsigned long char_exponent,
                                          const std::vector<std::string>& removed_points) {
    CurveData c;
    c.name = "P1";
    Branch b;
    b.name = "eta";
    b.pi1 = trivial_profinite();
    c.branches.push_back(b);
    for (const auto& nm : removed_points) {
        ClosedPoint x;
        x.name = nm;
        x.residue = trivial_profinite();
        x.char_exponent = char_exponent;
        x.fiber.push_back(plain_fiber_point(nm, 0, 0, x.residue.quotient));
        c.points.push_back(std::move(x));
    }
    return finish(std::move(c));
}

std::shared_ptr<const CurveData> curve_gm_cyclic(unsigned long char_exponent, int n) {
    if (n < 1) throw error("curve_gm_cyclic: the quotient order must be positive");
    CurveData c;
    c.name = "Gm-C" + std::to_string(n);
    Branch b;
    b.name = "eta";
    b.pi1.quotient = cyclic_group(n);
    b.pi1.inertia_marks["0"] = 1 % n;
    b.pi1.inertia_marks["inf"] = (n - 1) % n;
    c.branches.push_back(b);
    const char* names[2] = {"0", "inf"};
    int marks[2] = {1 % n, (n - 1) % n};
    for (int i = 0; i < 2; ++i) {
        ClosedPoint x;
        x.name = names[i];
        x.residue = trivial_profinite();
        x.char_exponent = char_exponent;
        FiberPoint y = plain_fiber_point(names[i], 0, 0, x.residue.quotient);
        y.inertia_mark = marks[i];
        x.fiber.push_back(std::move(y));
        c.points.push_back(std::move(x));
    }
    return finish(std::move(c));
}

std::shared_ptr<const CurveData> curve_nodal(unsigned long char_exponent) {
    CurveData c;
    c.name = "nodal";
    for (int i = 0; i < 2; ++i) {
        Branch b;
        b.name = "eta" + std::to_string(i + 1);
        b.pi1 = trivial_profinite();
        c.branches.push_back(std::move(b));
    }
    ClosedPoint x;
    x.name = "node";
    x.residue = trivial_profinite();
    x.char_exponent = char_exponent;
    x.fiber.push_back(plain_fiber_point("y1", 0, 0, x.residue.quotient));
    x.fiber.push_back(plain_fiber_point("y2", 1, 0, x.residue.quotient));
    c.points.push_back(std::move(x));
    return finish(std::move(c));
}

std::shared_ptr<const CurveData> curve_local(const FiniteGroup& Q, int inertia_mark,
                                             const FiniteGroup& G,
                                             const std::vector<int>& decomp_lifts,
                                             unsigned long char_exponent,
                                             const std::vector<int>& residue_subgroup) {
    CurveData c;
    c.name = "local";
    Branch b;
    b.name = "eta";
    b.pi1.quotient = Q;
    b.pi1.inertia_marks["y"] = inertia_mark;
    c.branches.push_back(std::move(b));
    ClosedPoint x;
    x.name = "x";
    x.residue.quotient = G;
    x.char_exponent = char_exponent;
    FiberPoint y;
    y.name = "y";
    y.branch = 0;
    y.inertia_mark = inertia_mark;
    std::vector<int> elems = residue_subgroup;
    if (elems.empty())
        for (int i = 0; i < G.order; ++i) elems.push_back(i);
    y.residue = subgroup_group(G, elems, "k(y)");
    if (decomp_lifts.empty())
        y.decomp_lifts.assign(y.residue.group.generators.size(), Q.identity);
    else
        y.decomp_lifts = decomp_lifts;
    x.fiber.push_back(std::move(y));
    c.points.push_back(std::move(x));
    return finish(std::move(c));
}

} // namespace artinperv
