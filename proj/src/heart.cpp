/* The glued model (A, B, θ) and the heart operations over Q.
 *
 * Conventions, fixed once and used everywhere:
 *   - mapping-complex differential on a degree-n collection u = {u^k}:
 *         (Du)^k = d_Y ∘ u^k - (-1)^n u^{k+1} ∘ d_X;
 *   - glued hom complex: a degree-n element is a triple (a, b, h) with
 *     h^k : B_X^k -> Ξ(A_Y)^{k+n-1} and differential
 *         D(a, b, h) = (Da, Db, θ_Y∘b - Ξ(a)∘θ_X - Dh),
 *     so degree-0 cocycles are exactly the glued morphisms and degree -1
 *     coboundaries the null-homotopic ones;
 *   - minimal-model homotopy: id - ι∘p = d∘s + s∘d with s supported on the
 *     image part of each splitting term = im ⊕ harmonic ⊕ complement;
 *   - shift: (X[k])^n = X^{n+k}, d[k] = (-1)^k d, and the homotopy slot of a
 *     shifted morphism picks up the same (-1)^k. */
#include "artinperv/heart.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>

namespace artinperv {

namespace {

/* --------------------------- small utilities ---------------------------- */

void require_field(const Coefficients& R, const char* what) {
    if (!R.is_field()) throw error(std::string(what) + ": rational coefficients required");
}

void require_free(const ArtinRep& m, const char* what) {
    if (m.finite.relations.rows() != 0)
        throw error(std::string(what) + ": free presentations required");
}

void check_plain(const ArtinRep& m, const std::string& what) {
    if (!m.divisible.empty()) throw error(what + ": divisible parts are not allowed here");
    if (m.finite_twist != 0) throw error(what + ": twisted finite parts are not allowed here");
    for (const auto& c : m.twist_chi)
        if (c != 1) throw error(what + ": nontrivial cyclotomic twists are not allowed here");
}

bool q_equal(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a - b).is_zero();
}

QMat map_or_zero(const std::map<int, QMat>& m, int n, long rows, long cols) {
    auto it = m.find(n);
    return it != m.end() ? it->second : QMat(rows, cols);
}

/* representation on the column span of basis, coordinates via proj */
ArtinRep subspace_rep_of(const ArtinRep& t, const QMat& basis, const QMat& proj) {
    ArtinRep out;
    out.group = t.group;
    out.coeff = t.coeff;
    out.finite = FgModule::free_module(t.coeff, basis.cols());
    out.action.reserve(t.action.size());
    for (const QMat& act : t.action) out.action.push_back(proj * act * basis);
    return out;
}

/* equivariant projector with image the column span of basis (Q only) */
QMat averaged_projector(const ArtinRep& m, const QMat& basis) {
    const long r = m.finite.generators;
    if (basis.cols() == 0) return QMat(r, r);
    QMat bt = basis.transpose();
    QMat p0 = basis * q_inverse(bt * basis) * bt;
    QMat acc(r, r);
    for (int g = 0; g < m.grp().order; ++g)
        acc = acc + m.action[static_cast<std::size_t>(g)] * p0 *
                    m.action[static_cast<std::size_t>(m.grp().inv(g))];
    return acc.scaled(mpq_class(1, m.grp().order));
}

/* ------------------------- glued shape accessors ------------------------ */

std::vector<ArtinRep> branch_terms_at(const GluedComplex& x, int n) {
    std::vector<ArtinRep> out;
    out.reserve(x.a.size());
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        if (x.a[i].has_degree(n))
            out.push_back(x.a[i].term(n));
        else
            out.push_back(ArtinRep::zero_rep(branch_group(*x.curve, i), x.coeff));
    }
    return out;
}

std::vector<QMat> branch_diffs_at(const GluedComplex& x, int n) {
    std::vector<QMat> out;
    out.reserve(x.a.size());
    for (const auto& c : x.a) out.push_back(c.diff(n));
    return out;
}

long xi_rank_at(const GluedComplex& x, std::size_t point, int n) {
    return glued_xi_term(x, point, n).finite.generators;
}

/* Ξ applied to the branch differentials in degree n */
QMat xi_diff(const GluedComplex& x, std::size_t point, int n) {
    return xi_map(*x.curve, point, branch_terms_at(x, n), branch_terms_at(x, n + 1),
                  branch_diffs_at(x, n));
}

QMat theta_component(const GluedComplex& x, std::size_t point, int n) {
    const RepComplex& bc = x.b[point].b;
    if (bc.has_degree(n)) return x.b[point].theta[static_cast<std::size_t>(n - bc.min_degree)];
    return QMat(xi_rank_at(x, point, n), 0);
}

/* ----------------------- morphism component access ---------------------- */

QMat a_component(const GluedMorphism& f, std::size_t branch, int n) {
    const RepComplex& src = f.source.a[branch];
    if (src.has_degree(n)) return f.a[branch][static_cast<std::size_t>(n - src.min_degree)];
    return QMat(f.target.a[branch].rank_at(n), 0);
}

std::vector<QMat> a_components_at(const GluedMorphism& f, int n) {
    std::vector<QMat> out;
    out.reserve(f.source.a.size());
    for (std::size_t i = 0; i < f.source.a.size(); ++i) out.push_back(a_component(f, i, n));
    return out;
}

QMat b_component(const GluedMorphism& f, std::size_t point, int n) {
    const RepComplex& src = f.source.b[point].b;
    if (src.has_degree(n)) return f.pts[point].b[static_cast<std::size_t>(n - src.min_degree)];
    return QMat(f.target.b[point].b.rank_at(n), 0);
}

QMat h_component(const GluedMorphism& f, std::size_t point, int n) {
    const RepComplex& src = f.source.b[point].b;
    if (src.has_degree(n)) return f.pts[point].h[static_cast<std::size_t>(n - src.min_degree)];
    return QMat(xi_rank_at(f.target, point, n - 1), 0);
}

/* all-zero morphism between two complexes over the same curve */
GluedMorphism glued_morphism_zero_gl(const GluedComplex& x, const GluedComplex& y) {
    GluedMorphism f;
    f.source = x;
    f.target = y;
    f.a.resize(x.a.size());
    for (std::size_t i = 0; i < x.a.size(); ++i)
        for (int n = x.a[i].min_degree; !x.a[i].empty() && n <= x.a[i].max_degree(); ++n)
            f.a[i].push_back(QMat(y.a[i].rank_at(n), x.a[i].rank_at(n)));
    f.pts.resize(x.b.size());
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& bc = x.b[p].b;
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            f.pts[p].b.push_back(QMat(y.b[p].b.rank_at(n), bc.rank_at(n)));
            f.pts[p].h.push_back(QMat(xi_rank_at(y, p, n - 1), bc.rank_at(n)));
        }
    }
    return f;
}

bool complexes_data_equal(const RepComplex& a, const RepComplex& b) {
    auto rep_eq = [](const ArtinRep& u, const ArtinRep& v) {
        if (!(u.coeff == v.coeff) || u.finite.generators != v.finite.generators) return false;
        if (!(u.finite == v.finite) || u.finite_twist != v.finite_twist) return false;
        if (u.action.size() != v.action.size()) return false;
        for (std::size_t g = 0; g < u.action.size(); ++g)
            if (!q_equal(u.action[g], v.action[g])) return false;
        return true;
    };
    bool ea = true, eb = true;
    for (const auto& t : a.terms) ea = ea && t.finite.generators == 0;
    for (const auto& t : b.terms) eb = eb && t.finite.generators == 0;
    if (ea && eb) return true; /* both zero, placement irrelevant */
    if (a.min_degree != b.min_degree || a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (!rep_eq(a.terms[i], b.terms[i])) return false;
    for (std::size_t i = 0; i < a.diffs.size(); ++i)
        if (!q_equal(a.diffs[i], b.diffs[i])) return false;
    return true;
}

/* drop zero-rank terms at both ends of a complex (theta kept aligned) */
RepComplex strip_complex(const RepComplex& c, std::vector<QMat>* theta = nullptr) {
    long lo = 0, hi = static_cast<long>(c.terms.size()) - 1;
    while (lo <= hi && c.terms[static_cast<std::size_t>(lo)].finite.generators == 0) ++lo;
    while (hi >= lo && c.terms[static_cast<std::size_t>(hi)].finite.generators == 0) --hi;
    RepComplex out;
    out.group = c.group;
    out.coeff = c.coeff;
    if (lo > hi) {
        out.min_degree = 0;
        if (theta) theta->clear();
        return out;
    }
    out.min_degree = c.min_degree + static_cast<int>(lo);
    for (long i = lo; i <= hi; ++i) out.terms.push_back(c.terms[static_cast<std::size_t>(i)]);
    for (long i = lo; i < hi; ++i) out.diffs.push_back(c.diffs[static_cast<std::size_t>(i)]);
    if (theta) {
        std::vector<QMat> kept;
        for (long i = lo; i <= hi; ++i) kept.push_back((*theta)[static_cast<std::size_t>(i)]);
        *theta = std::move(kept);
    }
    return out;
}

GluedPoint strip_point(const GluedPoint& gp) {
    GluedPoint out;
    out.theta = gp.theta;
    out.b = strip_complex(gp.b, &out.theta);
    return out;
}

/* ------------------------------ hom spaces ------------------------------ */

QMat vec_rm(const QMat& m) {
    QMat v(m.rows() * m.cols(), 1);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) v.at(i * m.cols() + j, 0) = m.at(i, j);
    return v;
}

struct HomSlot {
    int kind = 0;        /* 0 = branch map, 1 = point b, 2 = point h */
    std::size_t idx = 0; /* branch or point index */
    int k = 0;           /* source degree */
    long rows = 0, cols = 0;
    std::vector<QMat> basis;
    QMat bmat{0, 0}; /* columns = vec of the basis elements */
    long offset = 0;
};

struct HomSpace {
    GluedComplex x, y;
    int n = 0;
    std::vector<HomSlot> slots;
    long dim = 0;
    std::map<std::tuple<int, std::size_t, int>, std::size_t> lookup;
};

HomSpace hom_space(const GluedComplex& x, const GluedComplex& y, int n) {
    HomSpace hs;
    hs.x = x;
    hs.y = y;
    hs.n = n;
    auto add = [&hs](int kind, std::size_t idx, int k, const ArtinRep& s, const ArtinRep& t) {
        if (s.finite.generators == 0 || t.finite.generators == 0) return;
        HomSlot sl;
        sl.kind = kind;
        sl.idx = idx;
        sl.k = k;
        sl.rows = t.finite.generators;
        sl.cols = s.finite.generators;
        sl.basis = equivariant_hom_basis(s, t);
        sl.bmat = QMat(sl.rows * sl.cols, static_cast<long>(sl.basis.size()));
        for (std::size_t j = 0; j < sl.basis.size(); ++j) {
            QMat v = vec_rm(sl.basis[j]);
            for (long r = 0; r < v.rows(); ++r) sl.bmat.at(r, static_cast<long>(j)) = v.at(r, 0);
        }
        sl.offset = hs.dim;
        hs.dim += static_cast<long>(sl.basis.size());
        hs.lookup[{kind, idx, k}] = hs.slots.size();
        hs.slots.push_back(std::move(sl));
    };
    for (std::size_t i = 0; i < x.a.size(); ++i)
        for (int k = x.a[i].min_degree; !x.a[i].empty() && k <= x.a[i].max_degree(); ++k)
            if (y.a[i].has_degree(k + n)) add(0, i, k, x.a[i].term(k), y.a[i].term(k + n));
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& bc = x.b[p].b;
        for (int k = bc.min_degree; !bc.empty() && k <= bc.max_degree(); ++k) {
            if (y.b[p].b.has_degree(k + n)) add(1, p, k, bc.term(k), y.b[p].b.term(k + n));
            if (bc.rank_at(k) > 0) add(2, p, k, bc.term(k), glued_xi_term(y, p, k + n - 1));
        }
    }
    return hs;
}

QMat slot_coords(const HomSlot& sl, const QMat& m, const char* what) {
    if (sl.basis.empty()) {
        if (!m.is_zero()) throw error(std::string(what) + ": component outside the equivariant span");
        return QMat(0, 1);
    }
    QMat c;
    if (!q_solve(sl.bmat, vec_rm(m), c))
        throw error(std::string(what) + ": component outside the equivariant span");
    return c;
}

/* matrix of D^n : hom degree n -> hom degree n+1, in the slot coordinates */
QMat hom_differential(const HomSpace& src, const HomSpace& dst) {
    QMat d(dst.dim, src.dim);
    const GluedComplex& x = src.x;
    const GluedComplex& y = src.y;
    const mpq_class sgn = (src.n % 2 == 0) ? 1 : -1;
    for (const HomSlot& s : src.slots) {
        for (std::size_t j = 0; j < s.basis.size(); ++j) {
            const long col = s.offset + static_cast<long>(j);
            const QMat& e = s.basis[j];
            std::map<std::size_t, QMat> contrib;
            auto add_to = [&](int kind, std::size_t idx, int k, const QMat& m) {
                if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) return;
                auto it = dst.lookup.find({kind, idx, k});
                if (it == dst.lookup.end())
                    throw error("hom differential: contribution outside the slot grid");
                auto ins = contrib.find(it->second);
                if (ins == contrib.end())
                    contrib.emplace(it->second, m);
                else
                    ins->second = ins->second + m;
            };
            if (s.kind == 0) {
                const std::size_t i = s.idx;
                const int k = s.k;
                add_to(0, i, k, y.a[i].diff(k + src.n) * e);
                add_to(0, i, k - 1, (e * x.a[i].diff(k - 1)).scaled(-sgn));
                for (std::size_t p = 0; p < x.b.size(); ++p) {
                    if (x.b[p].b.rank_at(k) == 0) continue;
                    std::vector<QMat> maps;
                    std::vector<ArtinRep> st = branch_terms_at(x, k), tt = branch_terms_at(y, k + src.n);
                    for (std::size_t l = 0; l < x.a.size(); ++l)
                        maps.push_back(l == i ? e
                                              : QMat(tt[l].finite.generators, st[l].finite.generators));
                    QMat xie = xi_map(*x.curve, p, st, tt, maps);
                    add_to(2, p, k, (xie * theta_component(x, p, k)).scaled(-1));
                }
            } else if (s.kind == 1) {
                const std::size_t p = s.idx;
                const int k = s.k;
                add_to(1, p, k, y.b[p].b.diff(k + src.n) * e);
                add_to(1, p, k - 1, (e * x.b[p].b.diff(k - 1)).scaled(-sgn));
                add_to(2, p, k, theta_component(y, p, k + src.n) * e);
            } else {
                const std::size_t p = s.idx;
                const int k = s.k;
                add_to(2, p, k, (xi_diff(y, p, k + src.n - 1) * e).scaled(-1));
                add_to(2, p, k - 1, (e * x.b[p].b.diff(k - 1)).scaled(-sgn));
            }
            for (const auto& [ti, m] : contrib) {
                QMat c = slot_coords(dst.slots[ti], m, "hom differential");
                for (long r = 0; r < c.rows(); ++r) d.at(dst.slots[ti].offset + r, col) = c.at(r, 0);
            }
        }
    }
    return d;
}

QMat encode_morphism(const HomSpace& hs, const GluedMorphism& f) {
    QMat v(hs.dim, 1);
    for (const HomSlot& sl : hs.slots) {
        QMat comp;
        if (sl.kind == 0)
            comp = a_component(f, sl.idx, sl.k);
        else if (sl.kind == 1)
            comp = b_component(f, sl.idx, sl.k);
        else
            comp = h_component(f, sl.idx, sl.k);
        QMat c = slot_coords(sl, comp, "encode morphism");
        for (long r = 0; r < c.rows(); ++r) v.at(sl.offset + r, 0) = c.at(r, 0);
    }
    return v;
}

GluedMorphism decode_glued(const HomSpace& hs, const QMat& coords) {
    GluedMorphism f = glued_morphism_zero_gl(hs.x, hs.y);
    for (const HomSlot& sl : hs.slots) {
        QMat acc(sl.rows, sl.cols);
        for (std::size_t j = 0; j < sl.basis.size(); ++j) {
            mpq_class c = coords.at(sl.offset + static_cast<long>(j), 0);
            if (c != 0) acc = acc + sl.basis[j].scaled(c);
        }
        if (sl.kind == 0)
            f.a[sl.idx][static_cast<std::size_t>(sl.k - hs.x.a[sl.idx].min_degree)] = acc;
        else if (sl.kind == 1)
            f.pts[sl.idx].b[static_cast<std::size_t>(sl.k - hs.x.b[sl.idx].b.min_degree)] = acc;
        else
            f.pts[sl.idx].h[static_cast<std::size_t>(sl.k - hs.x.b[sl.idx].b.min_degree)] = acc;
    }
    return f;
}

/* read a heart-shaped glued morphism back as an NMorphism between the given
 * heart objects (whose glued forms coincide with the morphism's endpoints) */
NMorphism nmorphism_from_heart_glued(const GluedMorphism& g, const NObject& src,
                                     const NObject& tgt) {
    NMorphism out = nmorphism_zero(src, tgt);
    for (std::size_t i = 0; i < src.branch.size(); ++i) out.branch_map[i] = a_component(g, i, -1);
    for (std::size_t p = 0; p < src.point.size(); ++p) {
        out.point_map[p].phi0 = b_component(g, p, -1);
        out.point_map[p].phi1 = b_component(g, p, 0);
        out.point_map[p].h = h_component(g, p, 0);
    }
    return out;
}

NMorphism decode_heart(const HomSpace& hs, const QMat& coords, const NObject& src,
                       const NObject& tgt) {
    return nmorphism_from_heart_glued(decode_glued(hs, coords), src, tgt);
}

/* ----------------------------- minimal models --------------------------- */

struct MinData {
    RepComplex min;
    std::map<int, QMat> iota; /* term_n <- min_n (harmonic basis) */
    std::map<int, QMat> proj; /* min_n <- term_n */
    std::map<int, QMat> hot;  /* homotopy s_n : term_n -> term_{n-1} */
};

MinData minimalize_complex(const RepComplex& c) {
    MinData out;
    out.min.group = c.group;
    out.min.coeff = c.coeff;
    out.min.min_degree = 0;
    if (c.empty()) return out;
    struct DegData {
        QMat ib{0, 0}, hb{0, 0}, cb{0, 0}, minv{0, 0};
        long r = 0;
    };
    std::map<int, DegData> dd;
    for (int n = c.min_degree; n <= c.max_degree(); ++n) {
        const ArtinRep& t = c.term(n);
        DegData d;
        d.r = t.finite.generators;
        d.ib = q_column_space_basis(c.diff(n - 1));
        QMat kb = q_kernel_basis(c.diff(n));
        QMat id = QMat::identity(d.r);
        d.hb = q_column_space_basis((id - averaged_projector(t, d.ib)) * kb);
        d.cb = q_column_space_basis(id - averaged_projector(t, kb));
        QMat m = QMat::hstack(QMat::hstack(d.ib, d.hb), d.cb);
        if (m.cols() != d.r) throw error("minimalize: splitting does not fill the term");
        if (d.r > 0) d.minv = q_inverse(m);
        dd[n] = std::move(d);
    }
    for (int n = c.min_degree; n <= c.max_degree(); ++n) {
        const DegData& d = dd[n];
        out.iota[n] = d.hb;
        out.proj[n] = d.r > 0 ? d.minv.submatrix(d.ib.cols(), 0, d.hb.cols(), d.r)
                              : QMat(d.hb.cols(), 0);
        QMat s(c.rank_at(n - 1), d.r);
        if (d.ib.cols() > 0) {
            const DegData& pd = dd[n - 1];
            QMat dc = c.diff(n - 1) * pd.cb;
            QMat w;
            if (!q_solve(dc, d.ib, w)) throw error("minimalize: homotopy solve failed");
            s = pd.cb * w * d.minv.submatrix(0, 0, d.ib.cols(), d.r);
        }
        out.hot[n] = s;
    }
    int lo = INT_MAX, hi = INT_MIN;
    for (int n = c.min_degree; n <= c.max_degree(); ++n)
        if (dd[n].hb.cols() > 0) {
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
    if (lo > hi) return out; /* exact complex: empty minimal model */
    out.min.min_degree = lo;
    for (int n = lo; n <= hi; ++n)
        out.min.terms.push_back(subspace_rep_of(c.term(n), out.iota.at(n), out.proj.at(n)));
    for (int n = lo; n < hi; ++n)
        out.min.diffs.push_back(QMat(out.min.rank_at(n + 1), out.min.rank_at(n)));
    return out;
}

struct MinimalModel {
    GluedComplex model;
    GluedMorphism to_orig;   /* model -> x, components ι with h = Ξ(s_A)∘θ∘ι_B */
    GluedMorphism from_orig; /* x -> model, components p with h = -Ξ(p_A)∘θ∘s_B */
};

MinimalModel glued_minimal_model(const GluedComplex& x) {
    require_field(x.coeff, "glued minimal model");
    MinimalModel mm;
    mm.model.curve = x.curve;
    mm.model.coeff = x.coeff;
    std::vector<MinData> ma, mb;
    for (const auto& c : x.a) {
        ma.push_back(minimalize_complex(c));
        mm.model.a.push_back(ma.back().min);
    }
    auto proj_at = [&](int n) {
        std::vector<QMat> out;
        for (std::size_t i = 0; i < x.a.size(); ++i)
            out.push_back(map_or_zero(ma[i].proj, n, mm.model.a[i].rank_at(n), x.a[i].rank_at(n)));
        return out;
    };
    auto hot_at = [&](int n) {
        std::vector<QMat> out;
        for (std::size_t i = 0; i < x.a.size(); ++i)
            out.push_back(map_or_zero(ma[i].hot, n, x.a[i].rank_at(n - 1), x.a[i].rank_at(n)));
        return out;
    };
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        mb.push_back(minimalize_complex(x.b[p].b));
        GluedPoint gp;
        gp.b = mb.back().min;
        for (int n = gp.b.min_degree; !gp.b.empty() && n <= gp.b.max_degree(); ++n) {
            QMat xip = xi_map(*x.curve, p, branch_terms_at(x, n), branch_terms_at(mm.model, n),
                              proj_at(n));
            gp.theta.push_back(xip * theta_component(x, p, n) * mb.back().iota.at(n));
        }
        mm.model.b.push_back(std::move(gp));
    }
    mm.to_orig = glued_morphism_zero_gl(mm.model, x);
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        const RepComplex& mc = mm.model.a[i];
        for (int n = mc.min_degree; !mc.empty() && n <= mc.max_degree(); ++n)
            mm.to_orig.a[i][static_cast<std::size_t>(n - mc.min_degree)] = ma[i].iota.at(n);
    }
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& mc = mm.model.b[p].b;
        for (int n = mc.min_degree; !mc.empty() && n <= mc.max_degree(); ++n) {
            const std::size_t k = static_cast<std::size_t>(n - mc.min_degree);
            mm.to_orig.pts[p].b[k] = mb[p].iota.at(n);
            QMat xis = xi_map(*x.curve, p, branch_terms_at(x, n), branch_terms_at(x, n - 1),
                              hot_at(n));
            mm.to_orig.pts[p].h[k] = xis * theta_component(x, p, n) * mb[p].iota.at(n);
        }
    }
    mm.from_orig = glued_morphism_zero_gl(x, mm.model);
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        const RepComplex& xc = x.a[i];
        for (int n = xc.min_degree; !xc.empty() && n <= xc.max_degree(); ++n)
            mm.from_orig.a[i][static_cast<std::size_t>(n - xc.min_degree)] = ma[i].proj.at(n);
    }
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& xc = x.b[p].b;
        for (int n = xc.min_degree; !xc.empty() && n <= xc.max_degree(); ++n) {
            const std::size_t k = static_cast<std::size_t>(n - xc.min_degree);
            mm.from_orig.pts[p].b[k] = mb[p].proj.at(n);
            QMat xip = xi_map(*x.curve, p, branch_terms_at(x, n - 1),
                              branch_terms_at(mm.model, n - 1), proj_at(n - 1));
            mm.from_orig.pts[p].h[k] =
                (xip * theta_component(x, p, n - 1) * mb[p].hot.at(n)).scaled(-1);
        }
    }
    return mm;
}

/* ------------------ θ splittings and perverse summands ------------------ */

struct ThetaSplit {
    QMat kb{0, 0}, sb{0, 0};     /* kernel / complement bases inside B^n */
    QMat kproj{0, 0}, sproj{0, 0};
};

ThetaSplit theta_split(const GluedComplex& mm, std::size_t p, int n) {
    ThetaSplit ts;
    const long r = mm.b[p].b.rank_at(n);
    if (r == 0) return ts;
    const ArtinRep& t = mm.b[p].b.term(n);
    ts.kb = q_kernel_basis(theta_component(mm, p, n));
    ts.sb = q_column_space_basis(QMat::identity(r) - averaged_projector(t, ts.kb));
    QMat m = QMat::hstack(ts.kb, ts.sb);
    if (m.cols() != r) throw error("theta split: kernel complement does not fill the term");
    QMat minv = q_inverse(m);
    ts.kproj = minv.submatrix(0, 0, ts.kb.cols(), r);
    ts.sproj = minv.submatrix(ts.kb.cols(), 0, ts.sb.cols(), r);
    return ts;
}

/* the pH^n summand of a minimal model, in place: A in degree n-1, the
 * θ-complement part of B^{n-1} and the θ-kernel part of B^n */
struct PieceData {
    GluedComplex piece;
    GluedMorphism include; /* piece -> model, strict */
    GluedMorphism project; /* model -> piece, strict */
};

PieceData perverse_piece(const GluedComplex& mm, int n) {
    PieceData pd;
    pd.piece.curve = mm.curve;
    pd.piece.coeff = mm.coeff;
    for (std::size_t i = 0; i < mm.a.size(); ++i) {
        if (mm.a[i].has_degree(n - 1))
            pd.piece.a.push_back(rep_complex_single(mm.a[i].term(n - 1), n - 1));
        else
            pd.piece.a.push_back(rep_complex_zero(branch_group(*mm.curve, i), mm.coeff));
    }
    std::vector<ThetaSplit> vs, ws;
    for (std::size_t p = 0; p < mm.b.size(); ++p) {
        vs.push_back(theta_split(mm, p, n - 1));
        ws.push_back(theta_split(mm, p, n));
        const Coefficients& rp = mm.b[p].b.coeff;
        auto rg = residue_group(*mm.curve, p);
        ArtinRep vrep = mm.b[p].b.has_degree(n - 1)
                            ? subspace_rep_of(mm.b[p].b.term(n - 1), vs[p].sb, vs[p].sproj)
                            : ArtinRep::zero_rep(rg, rp);
        ArtinRep wrep = mm.b[p].b.has_degree(n)
                            ? subspace_rep_of(mm.b[p].b.term(n), ws[p].kb, ws[p].kproj)
                            : ArtinRep::zero_rep(rg, rp);
        GluedPoint gp;
        gp.b.group = rg;
        gp.b.coeff = rp;
        gp.b.min_degree = n - 1;
        gp.b.terms = {vrep, wrep};
        gp.b.diffs = {QMat(wrep.finite.generators, vrep.finite.generators)};
        gp.theta = {theta_component(mm, p, n - 1) * vs[p].sb,
                    QMat(0, wrep.finite.generators)};
        pd.piece.b.push_back(std::move(gp));
    }
    pd.include = glued_morphism_zero_gl(pd.piece, mm);
    pd.project = glued_morphism_zero_gl(mm, pd.piece);
    for (std::size_t i = 0; i < mm.a.size(); ++i) {
        if (!pd.piece.a[i].empty()) {
            const long r = pd.piece.a[i].rank_at(n - 1);
            pd.include.a[i][0] = QMat::identity(r);
            pd.project.a[i][static_cast<std::size_t>(n - 1 - mm.a[i].min_degree)] =
                QMat::identity(r);
        }
    }
    for (std::size_t p = 0; p < mm.b.size(); ++p) {
        pd.include.pts[p].b[0] = vs[p].sb.cols() > 0 ? vs[p].sb
                                                     : QMat(mm.b[p].b.rank_at(n - 1), 0);
        pd.include.pts[p].b[1] = ws[p].kb.cols() > 0 ? ws[p].kb : QMat(mm.b[p].b.rank_at(n), 0);
        const RepComplex& xc = mm.b[p].b;
        if (xc.has_degree(n - 1))
            pd.project.pts[p].b[static_cast<std::size_t>(n - 1 - xc.min_degree)] =
                vs[p].sproj.rows() > 0 ? vs[p].sproj : QMat(0, xc.rank_at(n - 1));
        if (xc.has_degree(n))
            pd.project.pts[p].b[static_cast<std::size_t>(n - xc.min_degree)] =
                ws[p].kproj.rows() > 0 ? ws[p].kproj : QMat(0, xc.rank_at(n));
    }
    return pd;
}

/* ------------------------ glued morphism helpers ------------------------ */

/* strict triangle maps for z = cone(f : x -> y) */
GluedMorphism cone_inclusion(const GluedMorphism& f, const GluedComplex& z) {
    const GluedComplex& x = f.source;
    const GluedComplex& y = f.target;
    GluedMorphism m = glued_morphism_zero_gl(y, z);
    for (std::size_t i = 0; i < y.a.size(); ++i)
        for (int n = y.a[i].min_degree; !y.a[i].empty() && n <= y.a[i].max_degree(); ++n) {
            const long ry = y.a[i].rank_at(n);
            m.a[i][static_cast<std::size_t>(n - y.a[i].min_degree)] =
                QMat::vstack(QMat(x.a[i].rank_at(n + 1), ry), QMat::identity(ry));
        }
    for (std::size_t p = 0; p < y.b.size(); ++p) {
        const RepComplex& bc = y.b[p].b;
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            const long ry = bc.rank_at(n);
            m.pts[p].b[static_cast<std::size_t>(n - bc.min_degree)] =
                QMat::vstack(QMat(x.b[p].b.rank_at(n + 1), ry), QMat::identity(ry));
        }
    }
    return m;
}

GluedMorphism cone_delta_shifted(const GluedMorphism& f, const GluedComplex& z) {
    const GluedComplex& x = f.source;
    const GluedComplex& y = f.target;
    GluedComplex zs = glued_shift(z, -1); /* zs^n = X^n ⊕ Y^{n-1} */
    GluedMorphism m = glued_morphism_zero_gl(zs, x);
    for (std::size_t i = 0; i < zs.a.size(); ++i)
        for (int n = zs.a[i].min_degree; !zs.a[i].empty() && n <= zs.a[i].max_degree(); ++n) {
            const long rx = x.a[i].rank_at(n);
            m.a[i][static_cast<std::size_t>(n - zs.a[i].min_degree)] =
                QMat::hstack(QMat::identity(rx), QMat(rx, y.a[i].rank_at(n - 1)));
        }
    for (std::size_t p = 0; p < zs.b.size(); ++p) {
        const RepComplex& bc = zs.b[p].b;
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            const long rx = x.b[p].b.rank_at(n);
            m.pts[p].b[static_cast<std::size_t>(n - bc.min_degree)] =
                QMat::hstack(QMat::identity(rx), QMat(rx, y.b[p].b.rank_at(n - 1)));
        }
    }
    return m;
}

/* ------------------------- heart-object plumbing ------------------------ */

NObject nobject_from_heart_glued(const GluedComplex& g, const std::string& open_set) {
    NObject out;
    out.curve = g.curve;
    out.coeff = g.coeff;
    out.open_set = open_set;
    for (std::size_t i = 0; i < g.a.size(); ++i) {
        const RepComplex& c = g.a[i];
        for (int n = c.min_degree; !c.empty() && n <= c.max_degree(); ++n)
            if (n != -1 && c.rank_at(n) != 0)
                throw error("heart object: branch data outside degree -1");
        out.branch.push_back(c.has_degree(-1)
                                 ? c.term(-1)
                                 : ArtinRep::zero_rep(branch_group(*g.curve, i), g.coeff));
    }
    for (std::size_t p = 0; p < g.b.size(); ++p) {
        const RepComplex& c = g.b[p].b;
        for (int n = c.min_degree; !c.empty() && n <= c.max_degree(); ++n)
            if ((n < -1 || n > 0) && c.rank_at(n) != 0)
                throw error("heart object: point data outside degrees [-1,0]");
        NPointPart pt;
        pt.m0 = c.has_degree(-1) ? c.term(-1)
                                 : ArtinRep::zero_rep(residue_group(*g.curve, p), c.coeff);
        pt.m1 = c.has_degree(0) ? c.term(0)
                                : ArtinRep::zero_rep(residue_group(*g.curve, p), c.coeff);
        pt.d = c.diff(-1);
        pt.f0 = c.has_degree(-1)
                    ? g.b[p].theta[static_cast<std::size_t>(-1 - c.min_degree)]
                    : QMat(xi_functor(*g.curve, p, out.branch).finite.generators, 0);
        out.point.push_back(std::move(pt));
    }
    return out;
}

void require_heart_object(const NObject& m, const char* what) {
    require_field(m.coeff, what);
    for (const auto& b : m.branch) require_free(b, what);
    for (const auto& p : m.point) {
        require_free(p.m0, what);
        require_free(p.m1, what);
    }
    ValidationReport r = validate_nobject(m);
    if (!r.ok()) throw error(std::string(what) + ": " + r.to_string());
}

void require_heart_morphism(const NMorphism& f, const char* what) {
    require_field(f.source.coeff, what);
    for (const auto& b : f.source.branch) require_free(b, what);
    for (const auto& b : f.target.branch) require_free(b, what);
    for (const auto& p : f.source.point) {
        require_free(p.m0, what);
        require_free(p.m1, what);
    }
    for (const auto& p : f.target.point) {
        require_free(p.m0, what);
        require_free(p.m1, what);
    }
    ValidationReport r = validate_nmorphism(f);
    if (!r.ok()) throw error(std::string(what) + ": " + r.to_string());
}

bool nobject_is_zero(const NObject& m) {
    for (const auto& b : m.branch)
        if (b.finite.generators != 0) return false;
    for (const auto& p : m.point)
        if (p.m0.finite.generators != 0 || p.m1.finite.generators != 0) return false;
    return true;
}

void check_branch_family(const std::shared_ptr<const CurveData>& c, const std::vector<ArtinRep>& l,
                         const char* what) {
    if (!c) throw error(std::string(what) + ": missing curve");
    if (l.size() != c->branches.size())
        throw error(std::string(what) + ": one representation per branch required");
    if (l.empty()) throw error(std::string(what) + ": the curve has no branches");
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (!groups_equal(l[i].grp(), c->branches[i].pi1.quotient))
            throw error(std::string(what) + ": representation group does not match the branch");
        if (!(l[i].coeff == l[0].coeff))
            throw error(std::string(what) + ": mixed coefficients across branches");
        check_plain(l[i], what);
        validate_rep(l[i]);
    }
}

bool reps_data_equal(const ArtinRep& u, const ArtinRep& v) {
    if (!(u.coeff == v.coeff) || u.finite.generators != v.finite.generators) return false;
    if (!(u.finite == v.finite) || u.finite_twist != v.finite_twist) return false;
    if (u.divisible.size() != v.divisible.size() || u.action.size() != v.action.size())
        return false;
    for (std::size_t g = 0; g < u.action.size(); ++g)
        if (!q_equal(u.action[g], v.action[g])) return false;
    return true;
}

} // namespace

/* ------------------------ complexes of representations ------------------ */

const ArtinRep& RepComplex::term(int n) const {
    if (!has_degree(n)) throw error("rep complex: degree outside the support");
    return terms[static_cast<std::size_t>(n - min_degree)];
}

long RepComplex::rank_at(int n) const {
    return has_degree(n) ? terms[static_cast<std::size_t>(n - min_degree)].finite.generators : 0;
}

QMat RepComplex::diff(int n) const {
    if (has_degree(n) && has_degree(n + 1)) return diffs[static_cast<std::size_t>(n - min_degree)];
    return QMat(rank_at(n + 1), rank_at(n));
}

RepComplex rep_complex_zero(std::shared_ptr<const FiniteGroup> g, const Coefficients& R) {
    RepComplex c;
    c.group = std::move(g);
    c.coeff = R;
    return c;
}

RepComplex rep_complex_single(const ArtinRep& m, int degree) {
    RepComplex c;
    c.group = m.group;
    c.coeff = m.coeff;
    c.min_degree = degree;
    c.terms = {m};
    return c;
}

void validate_rep_complex(const RepComplex& c) {
    if (!c.group) throw error("rep complex: missing group");
    if (c.terms.empty()) {
        if (!c.diffs.empty()) throw error("rep complex: differentials without terms");
        return;
    }
    if (c.diffs.size() + 1 != c.terms.size())
        throw error("rep complex: need one differential per consecutive pair of terms");
    for (const ArtinRep& t : c.terms) {
        if (!t.group || !groups_equal(*t.group, *c.group))
            throw error("rep complex: term group mismatch");
        if (!(t.coeff == c.coeff)) throw error("rep complex: term coefficient mismatch");
        check_plain(t, "rep complex");
        validate_rep(t);
    }
    for (std::size_t i = 0; i < c.diffs.size(); ++i) {
        const ArtinRep& s = c.terms[i];
        const ArtinRep& t = c.terms[i + 1];
        const QMat& d = c.diffs[i];
        if (d.rows() != t.finite.generators || d.cols() != s.finite.generators)
            throw error("rep complex: differential shape mismatch");
        if (!denominator_is_unit(q_denominator(d), c.coeff))
            throw error("rep complex: differential has a non-unit denominator");
        if (!q_columns_in_relation_span(d * q_from_z(s.finite.relations.transpose()), t.finite))
            throw error("rep complex: differential is not defined on the presentation");
        for (int g : c.group->generators) {
            QMat diffm = d * s.action[static_cast<std::size_t>(g)] -
                         t.action[static_cast<std::size_t>(g)] * d;
            if (!q_columns_in_relation_span(diffm, t.finite))
                throw error("rep complex: differential is not equivariant");
        }
    }
    for (std::size_t i = 0; i + 1 < c.diffs.size(); ++i)
        if (!q_columns_in_relation_span(c.diffs[i + 1] * c.diffs[i], c.terms[i + 2].finite))
            throw error("rep complex: d squared is nonzero");
}

/* ------------------------------ glued complexes ------------------------- */

void validate_glued(const GluedComplex& x) {
    if (!x.curve) throw error("glued: missing curve");
    x.curve->validate();
    if (x.a.size() != x.curve->branches.size())
        throw error("glued: one branch complex per branch required");
    if (x.b.size() != x.curve->points.size())
        throw error("glued: one point complex per closed point required");
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        validate_rep_complex(x.a[i]);
        if (!x.a[i].group || !groups_equal(*x.a[i].group, x.curve->branches[i].pi1.quotient))
            throw error("glued: branch complex group mismatch");
        if (!(x.a[i].coeff == x.coeff)) throw error("glued: branch complex coefficient mismatch");
    }
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const GluedPoint& gp = x.b[p];
        validate_rep_complex(gp.b);
        const Coefficients rp = x.coeff.localize_away(x.curve->points[p].char_exponent);
        if (!(gp.b.coeff == rp)) throw error("glued: point complex coefficient mismatch");
        if (!gp.b.group || !groups_equal(*gp.b.group, x.curve->points[p].residue.quotient))
            throw error("glued: point complex group mismatch");
        if (gp.theta.size() != gp.b.terms.size())
            throw error("glued: one theta component per point term required");
        for (std::size_t k = 0; k < gp.theta.size(); ++k) {
            const int n = gp.b.min_degree + static_cast<int>(k);
            ArtinRep xi = glued_xi_term(x, p, n);
            const QMat& th = gp.theta[k];
            if (th.rows() != xi.finite.generators || th.cols() != gp.b.rank_at(n))
                throw error("glued: theta shape mismatch");
            if (!denominator_is_unit(q_denominator(th), gp.b.coeff))
                throw error("glued: theta has a non-unit denominator");
            for (int g : gp.b.group->generators) {
                QMat diffm = th * gp.b.term(n).action[static_cast<std::size_t>(g)] -
                             xi.action[static_cast<std::size_t>(g)] * th;
                if (!q_columns_in_relation_span(diffm, xi.finite))
                    throw error("glued: theta is not equivariant");
            }
            QMat chain = theta_component(x, p, n + 1) * gp.b.diff(n) - xi_diff(x, p, n) * th;
            if (!q_columns_in_relation_span(chain, glued_xi_term(x, p, n + 1).finite))
                throw error("glued: theta is not a chain map");
        }
    }
}

GluedComplex glued_zero(std::shared_ptr<const CurveData> c, const Coefficients& R) {
    if (!c) throw error("glued_zero: missing curve");
    GluedComplex x;
    x.curve = c;
    x.coeff = R;
    for (std::size_t i = 0; i < c->branches.size(); ++i)
        x.a.push_back(rep_complex_zero(branch_group(*c, i), R));
    for (std::size_t p = 0; p < c->points.size(); ++p) {
        GluedPoint gp;
        gp.b = rep_complex_zero(residue_group(*c, p), R.localize_away(c->points[p].char_exponent));
        x.b.push_back(std::move(gp));
    }
    return x;
}

GluedComplex glued_shift(const GluedComplex& x, int k) {
    GluedComplex out = x;
    const bool flip = (k % 2) != 0;
    for (auto& c : out.a) {
        c.min_degree -= k;
        if (flip)
            for (auto& d : c.diffs) d = d.scaled(-1);
    }
    for (auto& gp : out.b) {
        gp.b.min_degree -= k;
        if (flip)
            for (auto& d : gp.b.diffs) d = d.scaled(-1);
    }
    return out;
}

bool glued_is_zero(const GluedComplex& x) {
    for (const auto& c : x.a)
        for (const auto& t : c.terms)
            if (t.finite.generators != 0) return false;
    for (const auto& gp : x.b)
        for (const auto& t : gp.b.terms)
            if (t.finite.generators != 0) return false;
    return true;
}

bool glued_data_equal(const GluedComplex& x, const GluedComplex& y) {
    if (x.curve != y.curve || !(x.coeff == y.coeff)) return false;
    if (x.a.size() != y.a.size() || x.b.size() != y.b.size()) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!complexes_data_equal(x.a[i], y.a[i])) return false;
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        if (!complexes_data_equal(x.b[p].b, y.b[p].b)) return false;
        bool xz = true, yz = true;
        for (const auto& t : x.b[p].b.terms) xz = xz && t.finite.generators == 0;
        for (const auto& t : y.b[p].b.terms) yz = yz && t.finite.generators == 0;
        if (xz && yz) continue;
        if (x.b[p].theta.size() != y.b[p].theta.size()) return false;
        for (std::size_t k = 0; k < x.b[p].theta.size(); ++k)
            if (!q_equal(x.b[p].theta[k], y.b[p].theta[k])) return false;
    }
    return true;
}

ArtinRep glued_xi_term(const GluedComplex& x, std::size_t point, int n) {
    return xi_functor(*x.curve, point, branch_terms_at(x, n));
}

GluedComplex glued_from_nobject(const NObject& m) {
    GluedComplex g;
    g.curve = m.curve;
    g.coeff = m.coeff;
    for (const ArtinRep& l : m.branch) g.a.push_back(rep_complex_single(l, -1));
    for (const NPointPart& pt : m.point) {
        GluedPoint gp;
        gp.b.group = pt.m0.group;
        gp.b.coeff = pt.m0.coeff;
        gp.b.min_degree = -1;
        gp.b.terms = {pt.m0, pt.m1};
        gp.b.diffs = {pt.d};
        gp.theta = {pt.f0, QMat(0, pt.m1.finite.generators)};
        g.b.push_back(std::move(gp));
    }
    return g;
}

NObject heart_object_from_glued(const GluedComplex& x) {
    NObject out = nobject_from_heart_glued(glued_minimal_model(x).model, "U");
    ValidationReport r = validate_nobject(out);
    if (!r.ok()) throw error("heart object: " + r.to_string());
    return out;
}

/* ------------------------------ glued morphisms ------------------------- */

void validate_glued_morphism(const GluedMorphism& f) {
    validate_glued(f.source);
    validate_glued(f.target);
    const GluedComplex& x = f.source;
    const GluedComplex& y = f.target;
    if (x.curve != y.curve) throw error("glued morphism: source and target on different curves");
    if (!(x.coeff == y.coeff)) throw error("glued morphism: coefficient mismatch");
    if (f.a.size() != x.a.size() || f.pts.size() != x.b.size())
        throw error("glued morphism: component count mismatch");
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        if (f.a[i].size() != x.a[i].terms.size())
            throw error("glued morphism: one branch component per source degree required");
        for (int n = x.a[i].min_degree; !x.a[i].empty() && n <= x.a[i].max_degree(); ++n) {
            const QMat& m = a_component(f, i, n);
            if (m.rows() != y.a[i].rank_at(n) || m.cols() != x.a[i].rank_at(n))
                throw error("glued morphism: branch component shape mismatch");
            if (x.a[i].rank_at(n) == 0 || y.a[i].rank_at(n) == 0) continue;
            const ArtinRep& t = y.a[i].term(n);
            for (int g : x.a[i].group->generators)
                if (!q_columns_in_relation_span(
                        m * x.a[i].term(n).action[static_cast<std::size_t>(g)] -
                            t.action[static_cast<std::size_t>(g)] * m,
                        t.finite))
                    throw error("glued morphism: branch component is not equivariant");
        }
        for (int n = x.a[i].min_degree; !x.a[i].empty() && n < x.a[i].max_degree(); ++n) {
            QMat chain = a_component(f, i, n + 1) * x.a[i].diff(n) -
                         y.a[i].diff(n) * a_component(f, i, n);
            if (!chain.is_zero() &&
                !(y.a[i].has_degree(n + 1) &&
                  q_columns_in_relation_span(chain, y.a[i].term(n + 1).finite)))
                throw error("glued morphism: branch components do not commute with d");
        }
    }
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& bc = x.b[p].b;
        if (f.pts[p].b.size() != bc.terms.size() || f.pts[p].h.size() != bc.terms.size())
            throw error("glued morphism: one point component pair per source degree required");
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            const QMat& m = b_component(f, p, n);
            if (m.rows() != y.b[p].b.rank_at(n) || m.cols() != bc.rank_at(n))
                throw error("glued morphism: point component shape mismatch");
            const QMat& h = h_component(f, p, n);
            ArtinRep xih = glued_xi_term(y, p, n - 1);
            if (h.rows() != xih.finite.generators || h.cols() != bc.rank_at(n))
                throw error("glued morphism: homotopy component shape mismatch");
            if (bc.rank_at(n) > 0 && y.b[p].b.rank_at(n) > 0) {
                const ArtinRep& t = y.b[p].b.term(n);
                for (int g : bc.group->generators)
                    if (!q_columns_in_relation_span(
                            m * bc.term(n).action[static_cast<std::size_t>(g)] -
                                t.action[static_cast<std::size_t>(g)] * m,
                            t.finite))
                        throw error("glued morphism: point component is not equivariant");
            }
            if (bc.rank_at(n) > 0 && xih.finite.generators > 0)
                for (int g : bc.group->generators)
                    if (!q_columns_in_relation_span(
                            h * bc.term(n).action[static_cast<std::size_t>(g)] -
                                xih.action[static_cast<std::size_t>(g)] * h,
                            xih.finite))
                        throw error("glued morphism: homotopy component is not equivariant");
        }
        for (int n = bc.min_degree; !bc.empty() && n < bc.max_degree(); ++n) {
            QMat chain = b_component(f, p, n + 1) * bc.diff(n) -
                         y.b[p].b.diff(n) * b_component(f, p, n);
            if (!chain.is_zero() &&
                !(y.b[p].b.has_degree(n + 1) &&
                  q_columns_in_relation_span(chain, y.b[p].b.term(n + 1).finite)))
                throw error("glued morphism: point components do not commute with d");
        }
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            QMat xia = xi_map(*x.curve, p, branch_terms_at(x, n), branch_terms_at(y, n),
                              a_components_at(f, n));
            QMat lhs = theta_component(y, p, n) * b_component(f, p, n) -
                       xia * theta_component(x, p, n);
            QMat rhs = xi_diff(y, p, n - 1) * h_component(f, p, n) +
                       h_component(f, p, n + 1) * bc.diff(n);
            if (!q_columns_in_relation_span(lhs - rhs, glued_xi_term(y, p, n).finite))
                throw error("glued morphism: theta square fails against the homotopy");
        }
    }
}

GluedMorphism glued_morphism_from_nmorphism(const NMorphism& f) {
    GluedMorphism out;
    out.source = glued_from_nobject(f.source);
    out.target = glued_from_nobject(f.target);
    for (const QMat& m : f.branch_map) out.a.push_back({m});
    for (std::size_t p = 0; p < f.point_map.size(); ++p) {
        GluedPointMap pm;
        pm.b = {f.point_map[p].phi0, f.point_map[p].phi1};
        pm.h = {QMat(0, f.source.point[p].m0.finite.generators), f.point_map[p].h};
        out.pts.push_back(std::move(pm));
    }
    return out;
}

GluedMorphism glued_compose(const GluedMorphism& g, const GluedMorphism& f) {
    if (!glued_data_equal(f.target, g.source))
        throw error("glued compose: middle complexes do not agree");
    GluedMorphism out = glued_morphism_zero_gl(f.source, g.target);
    const GluedComplex& x = f.source;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        for (int n = x.a[i].min_degree; !x.a[i].empty() && n <= x.a[i].max_degree(); ++n)
            out.a[i][static_cast<std::size_t>(n - x.a[i].min_degree)] =
                a_component(g, i, n) * a_component(f, i, n);
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& bc = x.b[p].b;
        for (int n = bc.min_degree; !bc.empty() && n <= bc.max_degree(); ++n) {
            const std::size_t k = static_cast<std::size_t>(n - bc.min_degree);
            out.pts[p].b[k] = b_component(g, p, n) * b_component(f, p, n);
            QMat xiag = xi_map(*x.curve, p, branch_terms_at(f.target, n - 1),
                               branch_terms_at(g.target, n - 1), a_components_at(g, n - 1));
            out.pts[p].h[k] =
                xiag * h_component(f, p, n) + h_component(g, p, n) * b_component(f, p, n);
        }
    }
    return out;
}

GluedMorphism glued_shift_morphism(const GluedMorphism& f, int k) {
    GluedMorphism out;
    out.source = glued_shift(f.source, k);
    out.target = glued_shift(f.target, k);
    out.a = f.a;
    out.pts = f.pts;
    if (k % 2 != 0)
        for (auto& pm : out.pts)
            for (auto& h : pm.h) h = h.scaled(-1);
    return out;
}

GluedComplex glued_cone(const GluedMorphism& f) {
    const GluedComplex& x = f.source;
    const GluedComplex& y = f.target;
    GluedComplex z;
    z.curve = x.curve;
    z.coeff = x.coeff;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        auto g = branch_group(*x.curve, i);
        RepComplex c;
        c.group = g;
        c.coeff = x.coeff;
        int lo = INT_MAX, hi = INT_MIN;
        if (!x.a[i].empty()) {
            lo = std::min(lo, x.a[i].min_degree - 1);
            hi = std::max(hi, x.a[i].max_degree() - 1);
        }
        if (!y.a[i].empty()) {
            lo = std::min(lo, y.a[i].min_degree);
            hi = std::max(hi, y.a[i].max_degree());
        }
        if (lo <= hi) {
            c.min_degree = lo;
            auto term_of = [&](const RepComplex& w, int n) {
                return w.has_degree(n) ? w.term(n) : ArtinRep::zero_rep(g, x.coeff);
            };
            for (int n = lo; n <= hi; ++n)
                c.terms.push_back(rep_direct_sum(term_of(x.a[i], n + 1), term_of(y.a[i], n)));
            for (int n = lo; n < hi; ++n) {
                QMat top = QMat::hstack(x.a[i].diff(n + 1).scaled(-1),
                                        QMat(x.a[i].rank_at(n + 2), y.a[i].rank_at(n)));
                QMat bot = QMat::hstack(a_component(f, i, n + 1), y.a[i].diff(n));
                c.diffs.push_back(QMat::vstack(top, bot));
            }
        }
        z.a.push_back(std::move(c));
    }
    for (std::size_t p = 0; p < x.b.size(); ++p) {
        const RepComplex& bx = x.b[p].b;
        const RepComplex& by = y.b[p].b;
        auto g = residue_group(*x.curve, p);
        GluedPoint gp;
        gp.b.group = g;
        gp.b.coeff = bx.terms.empty() ? by.coeff : bx.coeff;
        int lo = INT_MAX, hi = INT_MIN;
        if (!bx.empty()) {
            lo = std::min(lo, bx.min_degree - 1);
            hi = std::max(hi, bx.max_degree() - 1);
        }
        if (!by.empty()) {
            lo = std::min(lo, by.min_degree);
            hi = std::max(hi, by.max_degree());
        }
        if (lo <= hi) {
            gp.b.min_degree = lo;
            auto term_of = [&](const RepComplex& w, int n) {
                return w.has_degree(n) ? w.term(n) : ArtinRep::zero_rep(g, gp.b.coeff);
            };
            for (int n = lo; n <= hi; ++n)
                gp.b.terms.push_back(rep_direct_sum(term_of(bx, n + 1), term_of(by, n)));
            for (int n = lo; n < hi; ++n) {
                QMat top = QMat::hstack(bx.diff(n + 1).scaled(-1),
                                        QMat(bx.rank_at(n + 2), by.rank_at(n)));
                QMat bot = QMat::hstack(b_component(f, p, n + 1), by.diff(n));
                gp.b.diffs.push_back(QMat::vstack(top, bot));
            }
            for (int n = lo; n <= hi; ++n) {
                std::vector<ArtinRep> tx = branch_terms_at(x, n + 1), ty = branch_terms_at(y, n),
                                      tz = branch_terms_at(z, n);
                std::vector<QMat> iox, ioy;
                for (std::size_t i = 0; i < tz.size(); ++i) {
                    const long rx = tx[i].finite.generators, ry = ty[i].finite.generators;
                    iox.push_back(QMat::vstack(QMat::identity(rx), QMat(ry, rx)));
                    ioy.push_back(QMat::vstack(QMat(rx, ry), QMat::identity(ry)));
                }
                QMat xix = xi_map(*x.curve, p, tx, tz, iox);
                QMat xiy = xi_map(*x.curve, p, ty, tz, ioy);
                QMat left = xix * theta_component(x, p, n + 1) + xiy * h_component(f, p, n + 1);
                QMat right = xiy * theta_component(y, p, n);
                gp.theta.push_back(QMat::hstack(left, right));
            }
        }
        z.b.push_back(std::move(gp));
    }
    return z;
}

long glued_hom_rank(const GluedComplex& x, const GluedComplex& y) {
    require_field(x.coeff, "glued_hom_rank");
    require_field(y.coeff, "glued_hom_rank");
    HomSpace h0 = hom_space(x, y, 0);
    HomSpace hm = hom_space(x, y, -1);
    HomSpace h1 = hom_space(x, y, 1);
    return (h0.dim - q_rank(hom_differential(h0, h1))) - q_rank(hom_differential(hm, h0));
}

std::vector<GluedMorphism> glued_hom_basis(const GluedComplex& x, const GluedComplex& y) {
    require_field(x.coeff, "glued_hom_basis");
    require_field(y.coeff, "glued_hom_basis");
    HomSpace h0 = hom_space(x, y, 0);
    if (h0.dim == 0) return {};
    HomSpace hm = hom_space(x, y, -1);
    HomSpace h1 = hom_space(x, y, 1);
    QMat ker = q_kernel_basis(hom_differential(h0, h1));
    if (ker.cols() == 0) return {};
    QMat dm = hom_differential(hm, h0);
    std::vector<long> pivots;
    q_rref(QMat::hstack(dm, ker), &pivots);
    std::vector<GluedMorphism> out;
    for (long p : pivots)
        if (p >= dm.cols())
            out.push_back(decode_glued(h0, ker.submatrix(0, p - dm.cols(), h0.dim, 1)));
    return out;
}

/* ------------------------- truncation and cohomology -------------------- */

GluedComplex glued_minimalize(const GluedComplex& x) { return glued_minimal_model(x).model; }

std::pair<GluedComplex, GluedComplex> perverse_truncate_at(const GluedComplex& x, int n) {
    GluedComplex mm = glued_minimalize(x);
    GluedComplex lo, hi;
    lo.curve = hi.curve = mm.curve;
    lo.coeff = hi.coeff = mm.coeff;
    auto slice = [](const RepComplex& c, int from, int to) {
        RepComplex out;
        out.group = c.group;
        out.coeff = c.coeff;
        out.min_degree = 0;
        if (c.empty()) return out;
        from = std::max(from, c.min_degree);
        to = std::min(to, c.max_degree());
        if (from > to) return out;
        out.min_degree = from;
        for (int k = from; k <= to; ++k) out.terms.push_back(c.term(k));
        for (int k = from; k < to; ++k) out.diffs.push_back(c.diff(k));
        return out;
    };
    for (const auto& c : mm.a) {
        lo.a.push_back(strip_complex(slice(c, INT_MIN + 1, n - 1)));
        hi.a.push_back(strip_complex(slice(c, n, INT_MAX - 1)));
    }
    for (std::size_t p = 0; p < mm.b.size(); ++p) {
        const RepComplex& bc = mm.b[p].b;
        ThetaSplit ts = theta_split(mm, p, n);
        const Coefficients& rp = bc.coeff;
        auto rg = residue_group(*mm.curve, p);
        /* lower part: B^{<= n-1} plus the theta-kernel summand of B^n */
        GluedPoint glo;
        glo.b = slice(bc, INT_MIN + 1, n - 1);
        if (glo.b.empty() && !bc.empty()) {
            glo.b.group = rg;
            glo.b.coeff = rp;
        }
        for (int k = glo.b.min_degree; !glo.b.empty() && k <= glo.b.max_degree(); ++k)
            glo.theta.push_back(theta_component(mm, p, k));
        if (bc.has_degree(n)) {
            ArtinRep krep = subspace_rep_of(bc.term(n), ts.kb, ts.kproj);
            if (glo.b.empty()) {
                glo.b.group = rg;
                glo.b.coeff = rp;
                glo.b.min_degree = n;
            } else {
                glo.b.diffs.push_back(QMat(krep.finite.generators, glo.b.rank_at(n - 1)));
            }
            glo.b.terms.push_back(krep);
            glo.theta.push_back(QMat(0, krep.finite.generators));
        }
        lo.b.push_back(strip_point(glo));
        /* upper part: the theta-complement summand of B^n plus B^{>= n+1} */
        GluedPoint ghi;
        ghi.b.group = rg;
        ghi.b.coeff = rp;
        ghi.b.min_degree = n;
        if (bc.has_degree(n)) {
            ghi.b.terms.push_back(subspace_rep_of(bc.term(n), ts.sb, ts.sproj));
            ghi.theta.push_back(theta_component(mm, p, n) * ts.sb);
        }
        RepComplex rest = slice(bc, n + 1, INT_MAX - 1);
        if (!rest.empty()) {
            if (ghi.b.terms.empty()) ghi.b.min_degree = rest.min_degree;
            for (int k = rest.min_degree; k <= rest.max_degree(); ++k) {
                ghi.b.terms.push_back(rest.term(k));
                ghi.theta.push_back(theta_component(mm, p, k));
            }
            for (std::size_t t = 0; t + 1 < ghi.b.terms.size(); ++t)
                ghi.b.diffs.push_back(QMat(ghi.b.terms[t + 1].finite.generators,
                                           ghi.b.terms[t].finite.generators));
        }
        hi.b.push_back(strip_point(ghi));
    }
    return {lo, hi};
}

std::pair<GluedComplex, GluedComplex> perverse_truncate(const GluedComplex& x) {
    return perverse_truncate_at(x, 0);
}

NObject perverse_cohomology(const GluedComplex& x, int n) {
    require_field(x.coeff, "perverse_cohomology");
    GluedComplex mm = glued_minimalize(x);
    PieceData pd = perverse_piece(mm, n);
    return nobject_from_heart_glued(glued_shift(pd.piece, n), "U");
}

PointShapes glued_point_shapes(const GluedComplex& x, std::size_t point) {
    require_field(x.coeff, "glued_point_shapes");
    if (point >= x.b.size()) throw error("glued_point_shapes: point index out of range");
    GluedComplex mm = glued_minimalize(x);
    PointShapes out;
    const RepComplex& bc = mm.b[point].b;
    int lo = INT_MAX, hi = INT_MIN;
    if (!bc.empty()) {
        lo = std::min(lo, bc.min_degree);
        hi = std::max(hi, bc.max_degree());
    }
    for (const auto& c : mm.a)
        if (!c.empty()) {
            lo = std::min(lo, c.min_degree);
            hi = std::max(hi, c.max_degree() + 1);
        }
    if (lo > hi) return out;
    for (int k = lo; k <= hi; ++k) {
        const long br = bc.rank_at(k);
        if (br > 0) out.istar[k] = br;
        QMat thk = theta_component(mm, point, k);
        QMat thp = theta_component(mm, point, k - 1);
        const long v = (br - q_rank(thk)) + (thp.rows() - q_rank(thp));
        if (v > 0) out.omega_shriek[k] = v;
    }
    return out;
}

bool satisfies_carext(const NObject& p) {
    require_heart_object(p, "satisfies_carext");
    NObject nm = normalize_nobject(p);
    for (const auto& pt : nm.point) {
        if (pt.m1.finite.generators != 0) return false; /* i* reaches degree 0 */
        if (q_rank(pt.f0) != pt.f0.rows()) return false; /* ω⁰i^! reaches degree 0 */
    }
    return true;
}

/* ----------------------------- heart operations ------------------------- */

NObject j_shriek(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l) {
    check_branch_family(c, l, "j_shriek");
    NObject out;
    out.curve = c;
    out.coeff = l[0].coeff;
    out.open_set = "U";
    out.branch = l;
    for (std::size_t p = 0; p < c->points.size(); ++p) {
        ArtinRep xi = xi_functor(*c, p, l);
        NPointPart pt;
        pt.m0 = xi;
        pt.m1 = xi;
        pt.d = QMat::identity(xi.finite.generators);
        pt.f0 = QMat::identity(xi.finite.generators);
        out.point.push_back(std::move(pt));
    }
    return out;
}

NObject omega0_j_star(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l) {
    check_branch_family(c, l, "omega0_j_star");
    NObject out;
    out.curve = c;
    out.coeff = l[0].coeff;
    out.open_set = "U";
    out.branch = l;
    for (std::size_t p = 0; p < c->points.size(); ++p) {
        ArtinRep xi = xi_functor(*c, p, l);
        NPointPart pt;
        pt.m0 = xi;
        pt.m1 = ArtinRep::zero_rep(residue_group(*c, p), xi.coeff);
        pt.d = QMat(0, xi.finite.generators);
        pt.f0 = QMat::identity(xi.finite.generators);
        out.point.push_back(std::move(pt));
    }
    return out;
}

NMorphism shriek_to_star(std::shared_ptr<const CurveData> c, const std::vector<ArtinRep>& l) {
    NMorphism f;
    f.source = j_shriek(c, l);
    f.target = omega0_j_star(c, l);
    for (const ArtinRep& m : l) f.branch_map.push_back(QMat::identity(m.finite.generators));
    for (std::size_t p = 0; p < c->points.size(); ++p) {
        const long r = f.source.point[p].m0.finite.generators;
        NPointMap pm;
        pm.phi0 = QMat::identity(r);
        pm.phi1 = QMat(0, r);
        pm.h = QMat(r, r);
        f.point_map.push_back(std::move(pm));
    }
    return f;
}

NObject i_star(std::shared_ptr<const CurveData> c, const Coefficients& R,
               const std::vector<ArtinRep>& point_reps) {
    if (!c) throw error("i_star: missing curve");
    c->validate();
    if (point_reps.size() != c->points.size())
        throw error("i_star: one representation per closed point required");
    NObject out;
    out.curve = c;
    out.coeff = R;
    out.open_set = "U";
    for (std::size_t i = 0; i < c->branches.size(); ++i)
        out.branch.push_back(ArtinRep::zero_rep(branch_group(*c, i), R));
    for (std::size_t p = 0; p < c->points.size(); ++p) {
        const ArtinRep& n = point_reps[p];
        const Coefficients rp = R.localize_away(c->points[p].char_exponent);
        if (!(n.coeff == rp)) throw error("i_star: representation coefficients must be R[1/p(x)]");
        if (!groups_equal(n.grp(), c->points[p].residue.quotient))
            throw error("i_star: representation group does not match the residue quotient");
        check_plain(n, "i_star");
        validate_rep(n);
        NPointPart pt;
        pt.m0 = ArtinRep::zero_rep(residue_group(*c, p), rp);
        pt.m1 = n;
        pt.d = QMat(n.finite.generators, 0);
        pt.f0 = QMat(xi_functor(*c, p, out.branch).finite.generators, 0);
        out.point.push_back(std::move(pt));
    }
    return out;
}

ArtinRep point_h0(const NObject& m, std::size_t point) {
    require_field(m.coeff, "point_h0");
    if (point >= m.point.size()) throw error("point_h0: point index out of range");
    const NPointPart& p = m.point[point];
    return normalize_rep(rep_kernel(EquivariantMap{p.m0, p.m1, p.d}));
}

ArtinRep point_h1(const NObject& m, std::size_t point) {
    require_field(m.coeff, "point_h1");
    if (point >= m.point.size()) throw error("point_h1: point index out of range");
    const NPointPart& p = m.point[point];
    return normalize_rep(rep_cokernel(EquivariantMap{p.m0, p.m1, p.d}));
}

KernelResult heart_kernel_full(const NMorphism& f) {
    require_heart_morphism(f, "heart_kernel");
    GluedMorphism fg = glued_morphism_from_nmorphism(f);
    GluedComplex z = glued_cone(fg);
    MinimalModel zm = glued_minimal_model(z);
    PieceData pd = perverse_piece(zm.model, -1);
    KernelResult out;
    out.kernel = nobject_from_heart_glued(glued_shift(pd.piece, -1), f.source.open_set);
    GluedMorphism inc = glued_shift_morphism(pd.include, -1);
    GluedMorphism toz = glued_shift_morphism(zm.to_orig, -1);
    GluedMorphism delta = cone_delta_shifted(fg, z);
    GluedMorphism total = glued_compose(delta, glued_compose(toz, inc));
    out.inclusion = nmorphism_from_heart_glued(total, out.kernel, f.source);
    return out;
}

CokernelResult heart_cokernel_full(const NMorphism& f) {
    require_heart_morphism(f, "heart_cokernel");
    GluedMorphism fg = glued_morphism_from_nmorphism(f);
    GluedComplex z = glued_cone(fg);
    MinimalModel zm = glued_minimal_model(z);
    PieceData pd = perverse_piece(zm.model, 0);
    CokernelResult out;
    out.cokernel = nobject_from_heart_glued(pd.piece, f.target.open_set);
    GluedMorphism ytoz = cone_inclusion(fg, z);
    GluedMorphism total = glued_compose(pd.project, glued_compose(zm.from_orig, ytoz));
    out.projection = nmorphism_from_heart_glued(total, f.target, out.cokernel);
    return out;
}

NObject heart_kernel(const NMorphism& f) { return heart_kernel_full(f).kernel; }
NObject heart_cokernel(const NMorphism& f) { return heart_cokernel_full(f).cokernel; }

NObject heart_image(const NMorphism& f) {
    return heart_kernel_full(heart_cokernel_full(f).projection).kernel;
}

NObject heart_coimage(const NMorphism& f) {
    return heart_cokernel_full(heart_kernel_full(f).inclusion).cokernel;
}

NObject intermediate_extension(std::shared_ptr<const CurveData> c,
                               const std::vector<ArtinRep>& l) {
    check_branch_family(c, l, "intermediate_extension");
    require_field(l[0].coeff, "intermediate_extension");
    return heart_image(shriek_to_star(c, l));
}

NObject weightless_motive(std::shared_ptr<const CurveData> c) {
    if (!c) throw error("weightless_motive: missing curve");
    std::vector<ArtinRep> l;
    for (std::size_t i = 0; i < c->branches.size(); ++i)
        l.push_back(ArtinRep::trivial(branch_group(*c, i), Coefficients::rationals(), 1));
    return intermediate_extension(c, l);
}

NObject normalize_nobject(const NObject& m) {
    require_heart_object(m, "normalize_nobject");
    GluedComplex mm = glued_minimalize(glued_from_nobject(m));
    return nobject_from_heart_glued(mm, m.open_set);
}

bool nobjects_data_equal(const NObject& a, const NObject& b) {
    if (a.curve != b.curve || !(a.coeff == b.coeff)) return false;
    if (a.branch.size() != b.branch.size() || a.point.size() != b.point.size()) return false;
    for (std::size_t i = 0; i < a.branch.size(); ++i)
        if (!reps_data_equal(a.branch[i], b.branch[i])) return false;
    for (std::size_t p = 0; p < a.point.size(); ++p) {
        if (!reps_data_equal(a.point[p].m0, b.point[p].m0)) return false;
        if (!reps_data_equal(a.point[p].m1, b.point[p].m1)) return false;
        if (!q_equal(a.point[p].d, b.point[p].d) || !q_equal(a.point[p].f0, b.point[p].f0))
            return false;
    }
    return true;
}

bool nobjects_isomorphic(const NObject& a0, const NObject& b0) {
    require_heart_object(a0, "nobjects_isomorphic");
    require_heart_object(b0, "nobjects_isomorphic");
    if (a0.curve != b0.curve || !(a0.coeff == b0.coeff)) return false;
    NObject a = normalize_nobject(a0), b = normalize_nobject(b0);
    for (std::size_t i = 0; i < a.branch.size(); ++i)
        if (a.branch[i].finite.generators != b.branch[i].finite.generators) return false;
    for (std::size_t p = 0; p < a.point.size(); ++p)
        if (a.point[p].m0.finite.generators != b.point[p].m0.finite.generators ||
            a.point[p].m1.finite.generators != b.point[p].m1.finite.generators)
            return false;
    if (nobject_is_zero(a) && nobject_is_zero(b)) return true;
    std::vector<NMorphism> basis = heart_hom_basis(a, b);
    if (basis.empty()) return false;
    auto invertible = [](const NMorphism& f) {
        for (const QMat& m : f.branch_map)
            if (q_rank(m) != m.rows()) return false;
        for (const NPointMap& pm : f.point_map) {
            if (q_rank(pm.phi0) != pm.phi0.rows()) return false;
            if (q_rank(pm.phi1) != pm.phi1.rows()) return false;
        }
        return true;
    };
    for (const NMorphism& f : basis)
        if (invertible(f)) return true;
    std::mt19937_64 rng(0x41525459u);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int t = 0; t < 64; ++t) {
        NMorphism combo = nmorphism_zero(a, b);
        for (const NMorphism& f : basis)
            combo = nmorphism_sum(combo, nmorphism_scaled(f, coef(rng)));
        if (invertible(combo)) return true;
    }
    return false;
}

/* ----------------------------- hom spaces ------------------------------- */

std::vector<NMorphism> heart_hom_basis(const NObject& x, const NObject& y) {
    require_heart_object(x, "heart_hom_basis");
    require_heart_object(y, "heart_hom_basis");
    GluedComplex xg = glued_from_nobject(x), yg = glued_from_nobject(y);
    HomSpace h0 = hom_space(xg, yg, 0);
    if (h0.dim == 0) return {};
    HomSpace hm = hom_space(xg, yg, -1);
    HomSpace h1 = hom_space(xg, yg, 1);
    QMat ker = q_kernel_basis(hom_differential(h0, h1));
    if (ker.cols() == 0) return {};
    QMat dm = hom_differential(hm, h0);
    std::vector<long> pivots;
    q_rref(QMat::hstack(dm, ker), &pivots);
    std::vector<NMorphism> out;
    for (long p : pivots)
        if (p >= dm.cols())
            out.push_back(decode_heart(h0, ker.submatrix(0, p - dm.cols(), h0.dim, 1), x, y));
    return out;
}

bool nmorphism_is_null_homotopic(const NMorphism& f) {
    require_heart_morphism(f, "nmorphism_is_null_homotopic");
    GluedMorphism fg = glued_morphism_from_nmorphism(f);
    HomSpace h0 = hom_space(fg.source, fg.target, 0);
    HomSpace hm = hom_space(fg.source, fg.target, -1);
    QMat sol;
    return q_solve(hom_differential(hm, h0), encode_morphism(h0, fg), sol);
}

bool nmorphisms_homotopic(const NMorphism& f, const NMorphism& g) {
    return nmorphism_is_null_homotopic(nmorphism_difference(f, g));
}

std::optional<NMorphism> factor_through_kernel(const KernelResult& k, const NMorphism& psi) {
    require_heart_morphism(psi, "factor_through_kernel");
    require_heart_morphism(k.inclusion, "factor_through_kernel");
    if (!nobjects_data_equal(psi.target, k.inclusion.target))
        throw error("factor_through_kernel: psi must land in the inclusion target");
    GluedComplex tg = glued_from_nobject(psi.source);
    GluedComplex kg = glued_from_nobject(k.kernel);
    GluedComplex xg = glued_from_nobject(psi.target);
    GluedMorphism kap = glued_morphism_from_nmorphism(k.inclusion);
    HomSpace tk0 = hom_space(tg, kg, 0), tk1 = hom_space(tg, kg, 1);
    HomSpace tx0 = hom_space(tg, xg, 0), txm = hom_space(tg, xg, -1);
    QMat comp(tx0.dim, tk0.dim);
    for (long j = 0; j < tk0.dim; ++j) {
        QMat e(tk0.dim, 1);
        e.at(j, 0) = 1;
        QMat col = encode_morphism(tx0, glued_compose(kap, decode_glued(tk0, e)));
        for (long r = 0; r < col.rows(); ++r) comp.at(r, j) = col.at(r, 0);
    }
    QMat d0 = hom_differential(tk0, tk1);
    QMat dm = hom_differential(txm, tx0);
    QMat lhs = QMat::vstack(QMat::hstack(d0, QMat(d0.rows(), dm.cols())),
                            QMat::hstack(comp, dm.scaled(-1)));
    QMat rhs = QMat::vstack(QMat(d0.rows(), 1),
                            encode_morphism(tx0, glued_morphism_from_nmorphism(psi)));
    QMat sol;
    if (!q_solve(lhs, rhs, sol)) return std::nullopt;
    return decode_heart(tk0, sol.submatrix(0, 0, tk0.dim, 1), psi.source, k.kernel);
}

std::optional<NMorphism> factor_through_cokernel(const CokernelResult& c, const NMorphism& psi) {
    require_heart_morphism(psi, "factor_through_cokernel");
    require_heart_morphism(c.projection, "factor_through_cokernel");
    if (!nobjects_data_equal(psi.source, c.projection.source))
        throw error("factor_through_cokernel: psi must start at the projection source");
    GluedComplex yg = glued_from_nobject(psi.source);
    GluedComplex qg = glued_from_nobject(c.cokernel);
    GluedComplex tg = glued_from_nobject(psi.target);
    GluedMorphism pig = glued_morphism_from_nmorphism(c.projection);
    HomSpace qt0 = hom_space(qg, tg, 0), qt1 = hom_space(qg, tg, 1);
    HomSpace yt0 = hom_space(yg, tg, 0), ytm = hom_space(yg, tg, -1);
    QMat comp(yt0.dim, qt0.dim);
    for (long j = 0; j < qt0.dim; ++j) {
        QMat e(qt0.dim, 1);
        e.at(j, 0) = 1;
        QMat col = encode_morphism(yt0, glued_compose(decode_glued(qt0, e), pig));
        for (long r = 0; r < col.rows(); ++r) comp.at(r, j) = col.at(r, 0);
    }
    QMat d0 = hom_differential(qt0, qt1);
    QMat dm = hom_differential(ytm, yt0);
    QMat lhs = QMat::vstack(QMat::hstack(d0, QMat(d0.rows(), dm.cols())),
                            QMat::hstack(comp, dm.scaled(-1)));
    QMat rhs = QMat::vstack(QMat(d0.rows(), 1),
                            encode_morphism(yt0, glued_morphism_from_nmorphism(psi)));
    QMat sol;
    if (!q_solve(lhs, rhs, sol)) return std::nullopt;
    return decode_heart(qt0, sol.submatrix(0, 0, qt0.dim, 1), c.cokernel, psi.target);
}

/* ------------------------- simples and series --------------------------- */

bool is_simple(const NObject& m0) {
    require_heart_object(m0, "is_simple");
    NObject m = normalize_nobject(m0);
    std::size_t nb = 0, branch_at = 0;
    for (std::size_t i = 0; i < m.branch.size(); ++i)
        if (m.branch[i].finite.generators > 0) {
            ++nb;
            branch_at = i;
        }
    std::size_t nw = 0, point_at = 0;
    for (std::size_t p = 0; p < m.point.size(); ++p) {
        if (m.point[p].m1.finite.generators > 0) {
            ++nw;
            point_at = p;
        }
    }
    if (nb == 0) {
        if (nw != 1) return false;
        for (const auto& p : m.point)
            if (p.m0.finite.generators != 0) return false;
        return is_simple_q(m.point[point_at].m1);
    }
    if (nb != 1 || nw != 0) return false;
    for (const auto& p : m.point) {
        if (p.f0.rows() != p.f0.cols()) return false;
        if (q_rank(p.f0) != p.f0.rows()) return false; /* v must be an isomorphism */
    }
    return is_simple_q(m.branch[branch_at]);
}

std::vector<NObject> composition_series(const NObject& m0) {
    require_heart_object(m0, "composition_series");
    NObject cur = normalize_nobject(m0);
    const auto curve = cur.curve;
    std::vector<NObject> factors;
    int guard = 0;
    while (!nobject_is_zero(cur)) {
        if (++guard > 512) throw error("composition_series: failed to terminate");
        std::vector<NObject> cands;
        for (std::size_t p = 0; p < cur.point.size(); ++p) {
            ArtinRep coker = rep_cokernel(
                EquivariantMap{cur.point[p].m0, xi_functor(*curve, p, cur.branch),
                               cur.point[p].f0});
            ArtinRep socle_src = rep_direct_sum(cur.point[p].m1, coker);
            for (const MaschkePiece& mp : maschke_decompose(socle_src)) {
                std::vector<ArtinRep> fam;
                for (std::size_t q = 0; q < cur.point.size(); ++q)
                    fam.push_back(q == p ? mp.simple
                                         : ArtinRep::zero_rep(residue_group(*curve, q),
                                                              cur.point[q].m0.coeff));
                cands.push_back(i_star(curve, cur.coeff, fam));
            }
        }
        for (std::size_t i = 0; i < cur.branch.size(); ++i) {
            for (const MaschkePiece& mp : maschke_decompose(cur.branch[i])) {
                std::vector<ArtinRep> fam;
                for (std::size_t j = 0; j < cur.branch.size(); ++j)
                    fam.push_back(j == i ? mp.simple
                                         : ArtinRep::zero_rep(branch_group(*curve, j), cur.coeff));
                cands.push_back(intermediate_extension(curve, fam));
            }
        }
        bool found = false;
        for (const NObject& s : cands) {
            std::vector<NMorphism> basis = heart_hom_basis(s, cur);
            if (basis.empty()) continue;
            factors.push_back(s);
            cur = heart_cokernel_full(basis.front()).cokernel;
            found = true;
            break;
        }
        if (!found) throw error("composition_series: no simple subobject found");
    }
    return factors;
}

RankProfile rank_profile(const NObject& m) {
    RankProfile out;
    for (const auto& b : m.branch) out.branch.push_back(b.finite.generators);
    for (const auto& p : m.point)
        out.point_euler.push_back(p.m0.finite.generators - p.m1.finite.generators);
    return out;
}

/* --------------------------- six-term sequence --------------------------- */

SixTermSequence six_term_sequence(const NObject& m0) {
    require_heart_object(m0, "six_term_sequence");
    NObject m = normalize_nobject(m0);
    const auto c = m.curve;
    std::vector<ArtinRep> vparts, wparts;
    for (const auto& p : m.point) {
        vparts.push_back(p.m0);
        wparts.push_back(p.m1);
    }
    SixTermSequence out;
    out.sub_point = i_star(c, m.coeff, vparts);
    out.shriek = j_shriek(c, m.branch);
    out.target = m;
    out.quot_point = i_star(c, m.coeff, wparts);
    out.a = nmorphism_zero(out.sub_point, out.shriek);
    for (std::size_t p = 0; p < m.point.size(); ++p) out.a.point_map[p].phi1 = m.point[p].f0;
    out.b = nmorphism_zero(out.shriek, out.target);
    for (std::size_t i = 0; i < m.branch.size(); ++i)
        out.b.branch_map[i] = QMat::identity(m.branch[i].finite.generators);
    for (std::size_t p = 0; p < m.point.size(); ++p) {
        const long r = out.shriek.point[p].m1.finite.generators;
        out.b.point_map[p].h = QMat::identity(r).scaled(-1);
    }
    out.c = nmorphism_zero(out.target, out.quot_point);
    for (std::size_t p = 0; p < m.point.size(); ++p)
        out.c.point_map[p].phi1 = QMat::identity(m.point[p].m1.finite.generators);
    return out;
}

/* ----------------------------- realization ------------------------------ */

RealizedObject realize_v(const NObject& m, unsigned long ell) {
    if (!is_prime_ul(ell)) throw error("realize_v: ell must be a prime");
    if (!m.curve) throw error("realize_v: missing curve");
    for (const auto& pt : m.curve->points)
        if (pt.char_exponent == ell)
            throw error("realize_v: ell equals the residue characteristic at " + pt.name);
    return {ell, m};
}

RealizedMorphism realize_v(const NMorphism& f, unsigned long ell) {
    realize_v(f.source, ell);
    realize_v(f.target, ell);
    return {ell, f};
}

RealizedObject realized_heart_kernel(const RealizedMorphism& f) {
    return {f.ell, heart_kernel(f.map)};
}

RealizedObject realized_heart_cokernel(const RealizedMorphism& f) {
    return {f.ell, heart_cokernel(f.map)};
}

bool realized_data_equal(const RealizedObject& a, const RealizedObject& b) {
    if (a.ell != b.ell) return false;
    return nobjects_data_equal(normalize_nobject(a.data), normalize_nobject(b.data));
}

} // namespace artinperv
