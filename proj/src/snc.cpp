#include "artinperv/snc.hpp"

#include <algorithm>
#include <sstream>

namespace artinperv {

long total_divisible_rank(const ArtinRep& m) {
    long r = 0;
    for (const auto& part : m.divisible) r += part.shape.rank;
    return r;
}

namespace {

bool same_base(const BaseField& a, const BaseField& b) {
    return a.galois.quotient.table == b.galois.quotient.table &&
           a.characteristic_exponent == b.characteristic_exponent;
}

/* twist + support class of a divisible coordinate; differentials must be
 * block forms with respect to these classes */
struct ClassKey {
    int twist = 0;
    DivSupport mode = DivSupport::AllBut;
    std::set<unsigned long> primes;
    auto operator<=>(const ClassKey&) const = default;
};

ClassKey key_of(const DivisibleSummand& s) { return {s.twist, s.mode, s.primes}; }

std::vector<ClassKey> coord_classes(const ArtinRep& m) {
    std::vector<ClassKey> out;
    for (const auto& part : m.divisible)
        for (long i = 0; i < part.shape.rank; ++i) out.push_back(key_of(part.shape));
    return out;
}

/* block-diagonal action on the concatenated divisible coordinates */
std::vector<ZMat> divisible_block_action(const ArtinRep& m) {
    long n = total_divisible_rank(m);
    std::vector<ZMat> out;
    for (int g = 0; g < m.group->order; ++g) {
        ZMat a(n, n);
        long off = 0;
        for (const auto& part : m.divisible) {
            const ZMat& b = part.action[static_cast<size_t>(g)];
            for (long i = 0; i < b.rows(); ++i)
                for (long j = 0; j < b.cols(); ++j) a.at(off + i, off + j) = b.at(i, j);
            off += part.shape.rank;
        }
        out.push_back(std::move(a));
    }
    return out;
}

/* coordinates of a purely divisible rep that survive ⊗R (parts are dropped
 * whole; surviving parts keep their rank) */
std::vector<long> surviving_coords(const ArtinRep& mu, const Coefficients& R) {
    std::vector<long> out;
    long off = 0;
    for (const auto& part : mu.divisible) {
        DivisibleModule t = divisible_tensor_coeff(DivisibleModule{{part.shape}}, R);
        if (!t.summands.empty())
            for (long i = 0; i < part.shape.rank; ++i) out.push_back(off + i);
        off += part.shape.rank;
    }
    return out;
}

ZMat submatrix_select(const ZMat& m, const std::vector<long>& rows,
                      const std::vector<long>& cols) {
    ZMat out(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
    for (long i = 0; i < out.rows(); ++i)
        for (long j = 0; j < out.cols(); ++j)
            out.at(i, j) = m.at(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
    return out;
}

std::vector<long> range_coords(long n) {
    std::vector<long> out;
    for (long i = 0; i < n; ++i) out.push_back(i);
    return out;
}

/* pullback of functions along a component map pi0(T) -> pi0(C) */
ZMat pi0_pullback(const std::vector<int>& pi0_map, long source_components) {
    ZMat m(static_cast<long>(pi0_map.size()), source_components);
    for (long c = 0; c < m.rows(); ++c) m.at(c, pi0_map[static_cast<size_t>(c)]) = 1;
    return m;
}

const ArtinRep* mu_entry(const GeomDatum& x, long mu_degree, ArtinRep& scratch) {
    if (mu_degree == 0) {
        scratch = divisible_pi0_rep(x);
        return &scratch;
    }
    auto it = x.mu.find(mu_degree);
    return it == x.mu.end() ? nullptr : &it->second;
}

void check_class_blocks(const ZMat& m, const std::vector<ClassKey>& row_classes,
                        const std::vector<ClassKey>& col_classes, int twist_shift,
                        const std::string& what) {
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            if (m.at(i, j) == 0) continue;
            ClassKey want = col_classes[static_cast<size_t>(j)];
            want.twist += twist_shift;
            if (row_classes[static_cast<size_t>(i)] != want)
                throw error("snc: " + what + " mixes twist/support classes");
        }
}

void check_z_equivariance(const ZMat& m, const std::vector<ZMat>& target_action,
                          const std::vector<ZMat>& source_action, const std::string& what) {
    for (size_t g = 0; g < source_action.size(); ++g)
        if (m * source_action[g] != target_action[g] * m)
            throw error("snc: " + what + " is not equivariant");
}

void check_restriction(const GeomDatum& target, const GeomDatum& source,
                       const SncRestriction& r) {
    if (static_cast<long>(r.pi0_map.size()) != target.components())
        throw error("snc: restriction pi0 map has the wrong size");
    for (int v : r.pi0_map)
        if (v < 0 || v >= source.components())
            throw error("snc: restriction pi0 map is out of range");
    const FiniteGroup& G = target.base.galois.quotient;
    for (int g = 0; g < G.order; ++g)
        for (long c = 0; c < target.components(); ++c)
            if (r.pi0_map[static_cast<size_t>(
                    target.pi0[static_cast<size_t>(g)][static_cast<size_t>(c)])] !=
                source.pi0[static_cast<size_t>(g)]
                          [static_cast<size_t>(r.pi0_map[static_cast<size_t>(c)])])
                throw error("snc: restriction pi0 map is not equivariant");
    for (const auto& [deg, rep] : source.mu) {
        if (target.mu.count(deg) && !r.mu_maps.count(deg))
            throw error("snc: missing restriction map for a shared mu degree");
    }
    for (const auto& [deg, m] : r.mu_maps) {
        auto st = source.mu.find(deg);
        auto tt = target.mu.find(deg);
        if (st == source.mu.end() || tt == target.mu.end())
            throw error("snc: restriction map given for an absent mu degree");
        if (m.rows() != total_divisible_rank(tt->second) ||
            m.cols() != total_divisible_rank(st->second))
            throw error("snc: restriction map has the wrong shape");
        check_class_blocks(m, coord_classes(tt->second), coord_classes(st->second), 0,
                           "restriction map");
        check_z_equivariance(m, divisible_block_action(tt->second),
                             divisible_block_action(st->second), "restriction map");
    }
    for (const auto& [deg, m] : r.residue_maps) {
        if (deg < 2) throw error("snc: residue map from mu degree below 2");
        auto st = source.mu.find(deg);
        if (st == source.mu.end())
            throw error("snc: residue map given for an absent mu degree");
        ArtinRep scratch;
        const ArtinRep* tgt = mu_entry(target, deg - 2, scratch);
        if (!tgt) throw error("snc: residue map into an absent mu degree");
        if (m.rows() != total_divisible_rank(*tgt) ||
            m.cols() != total_divisible_rank(st->second))
            throw error("snc: residue map has the wrong shape");
        check_class_blocks(m, coord_classes(*tgt), coord_classes(st->second), 1,
                           "residue map");
        check_z_equivariance(m, divisible_block_action(*tgt),
                             divisible_block_action(st->second), "residue map");
    }
}

bool rep_is_zero(const ArtinRep& m) {
    return module_is_zero(m.finite) && total_divisible_rank(m) == 0;
}

/* degreewise direct sum of a list of pushforward complexes */
DiscreteComplex combine_columns(const std::vector<DiscreteComplex>& units) {
    DiscreteComplex out;
    std::set<long> degs;
    for (const auto& u : units)
        for (const auto& [deg, rep] : u.graded) degs.insert(deg);
    for (long deg : degs) {
        const ArtinRep* acc = nullptr;
        ArtinRep sum;
        for (const auto& u : units) {
            auto it = u.graded.find(deg);
            if (it == u.graded.end() || rep_is_zero(it->second)) continue;
            if (!acc) {
                sum = it->second;
            } else {
                sum = rep_direct_sum(sum, it->second);
            }
            acc = &sum;
        }
        if (acc) out.graded[deg] = std::move(sum);
    }
    return out;
}

std::vector<std::pair<long, long>> sorted_pairs(const SNCData& s) {
    std::vector<std::pair<long, long>> keys;
    for (const auto& [key, inter] : s.pairwise) keys.push_back(key);
    return keys; /* map iteration is already sorted */
}

/* offsets of each unit's block inside the concatenated finite generators of
 * degree 0, or divisible coordinates of degree m; width 0 for absent slots */
std::vector<long> unit_widths(const std::vector<DiscreteComplex>& units, long deg,
                              bool finite) {
    std::vector<long> w;
    for (const auto& u : units) {
        auto it = u.graded.find(deg);
        if (it == u.graded.end()) {
            w.push_back(0);
        } else if (finite) {
            w.push_back(it->second.finite.generators);
        } else {
            w.push_back(total_divisible_rank(it->second));
        }
    }
    return w;
}

long width_sum(const std::vector<long>& w) {
    long t = 0;
    for (long x : w) t += x;
    return t;
}

long offset_before(const std::vector<long>& w, long idx) {
    long t = 0;
    for (long i = 0; i < idx; ++i) t += w[static_cast<size_t>(i)];
    return t;
}

void add_block(ZMat& m, long roff, long coff, const ZMat& b, int sign) {
    for (long i = 0; i < b.rows(); ++i)
        for (long j = 0; j < b.cols(); ++j) m.at(roff + i, coff + j) += sign * b.at(i, j);
}

} // namespace

/* ------------------------------- validation ----------------------------- */

void SNCData::validate() const {
    for (const auto& c : components) c.validate();
    if (components.empty()) {
        if (!pairwise.empty()) throw error("snc: intersections without components");
        return;
    }
    long n = static_cast<long>(components.size());
    for (long i = 1; i < n; ++i)
        if (!same_base(components[0].base, components[static_cast<size_t>(i)].base))
            throw error("snc: components over different base fields");
    for (const auto& [key, inter] : pairwise) {
        auto [i, j] = key;
        if (i < 0 || j <= i || j >= n) throw error("snc: intersection indices out of range");
        inter.scheme.validate();
        if (!same_base(inter.scheme.base, components[0].base))
            throw error("snc: intersection over a different base field");
        long dmin = std::min(components[static_cast<size_t>(i)].dimension,
                             components[static_cast<size_t>(j)].dimension);
        if (inter.scheme.dimension >= dmin)
            throw error("snc: intersection must have strictly smaller dimension");
        check_restriction(inter.scheme, components[static_cast<size_t>(i)],
                          inter.from_first);
        check_restriction(inter.scheme, components[static_cast<size_t>(j)],
                          inter.from_second);
    }
}

bool GradedMap::is_zero() const {
    if (!h0.is_zero()) return false;
    for (const auto& [deg, m] : divisible)
        if (!m.is_zero()) return false;
    return true;
}

bool DescentComplex::is_zero() const {
    for (const auto& c : columns)
        if (!c.is_zero()) return false;
    return true;
}

void DescentComplex::validate() const {
    if (columns.empty() ? !diffs.empty() : diffs.size() != columns.size() - 1)
        throw error("snc: descent complex has mismatched differential count");
    auto finite_gens = [](const DiscreteComplex& c) {
        auto it = c.graded.find(0);
        return it == c.graded.end() ? 0L : it->second.finite.generators;
    };
    auto div_rank = [](const DiscreteComplex& c, long m) {
        auto it = c.graded.find(m);
        return it == c.graded.end() ? 0L : total_divisible_rank(it->second);
    };
    for (size_t q = 0; q < diffs.size(); ++q) {
        const DiscreteComplex& src = columns[q];
        const DiscreteComplex& tgt = columns[q + 1];
        const GradedMap& d = diffs[q];
        if (d.h0.rows() != 0 || d.h0.cols() != 0) {
            if (d.h0.rows() != finite_gens(tgt) || d.h0.cols() != finite_gens(src))
                throw error("snc: degree-0 differential has the wrong shape");
            auto s0 = src.graded.find(0);
            auto t0 = tgt.graded.find(0);
            if (s0 != src.graded.end() && t0 != tgt.graded.end()) {
                QMat qm = q_from_z(d.h0);
                for (int g = 0; g < s0->second.group->order; ++g)
                    if (qm * s0->second.action[static_cast<size_t>(g)] !=
                        t0->second.action[static_cast<size_t>(g)] * qm)
                        throw error("snc: degree-0 differential is not equivariant");
            }
        }
        for (const auto& [m, mat] : d.divisible) {
            if (mat.rows() != div_rank(tgt, m) || mat.cols() != div_rank(src, m))
                throw error("snc: differential has the wrong shape");
            auto sm = src.graded.find(m);
            auto tm = tgt.graded.find(m);
            if (sm == src.graded.end() || tm == tgt.graded.end()) continue;
            check_class_blocks(mat, coord_classes(tm->second), coord_classes(sm->second),
                               0, "differential");
            check_z_equivariance(mat, divisible_block_action(tm->second),
                                 divisible_block_action(sm->second), "differential");
        }
    }
    for (size_t q = 0; q + 1 < diffs.size(); ++q) {
        const GradedMap& a = diffs[q];
        const GradedMap& b = diffs[q + 1];
        if (a.h0.rows() == b.h0.cols() && a.h0.rows() != 0)
            if (!(b.h0 * a.h0).is_zero()) throw error("snc: d^2 != 0 on degree 0");
        for (const auto& [m, mat] : a.divisible) {
            auto it = b.divisible.find(m);
            if (it == b.divisible.end()) continue;
            if (!(it->second * mat).is_zero()) throw error("snc: d^2 != 0");
        }
    }
}

/* ---------------------------- descent complex ---------------------------- */

DescentComplex descent_complex(const SNCData& s, const Coefficients& R) {
    s.validate();
    DescentComplex out;
    if (s.components.empty()) return out;

    std::vector<DiscreteComplex> col0_units;
    for (const auto& c : s.components) col0_units.push_back(omega0_pushforward(c, R));
    out.columns.push_back(combine_columns(col0_units));
    if (s.pairwise.empty()) return out;

    std::vector<std::pair<long, long>> pairs = sorted_pairs(s);
    std::vector<DiscreteComplex> col1_units;
    for (const auto& [i, j] : pairs)
        col1_units.push_back(omega0_pushforward(s.pairwise.at({i, j}).scheme, R));
    out.columns.push_back(combine_columns(col1_units));

    Coefficients Rp = R.localize_away(s.components[0].base.characteristic_exponent);
    GradedMap d;

    /* degree-0 block: pullback of functions, Čech signs (+ first, − second) */
    {
        std::vector<long> rw = unit_widths(col1_units, 0, true);
        std::vector<long> cw = unit_widths(col0_units, 0, true);
        d.h0 = ZMat(width_sum(rw), width_sum(cw));
        for (size_t p = 0; p < pairs.size(); ++p) {
            auto [i, j] = pairs[static_cast<size_t>(p)];
            const SncIntersection& inter = s.pairwise.at({i, j});
            long roff = offset_before(rw, static_cast<long>(p));
            add_block(d.h0, roff, offset_before(cw, i),
                      pi0_pullback(inter.from_first.pi0_map,
                                   s.components[static_cast<size_t>(i)].components()),
                      +1);
            add_block(d.h0, roff, offset_before(cw, j),
                      pi0_pullback(inter.from_second.pi0_map,
                                   s.components[static_cast<size_t>(j)].components()),
                      -1);
        }
    }

    /* positive degrees: user-supplied mu maps restricted to the coordinates
     * surviving ⊗R */
    std::set<long> degs;
    for (const auto& [deg, rep] : out.columns[1].graded)
        if (deg >= 2 && out.columns[0].graded.count(deg)) degs.insert(deg);
    for (long m : degs) {
        std::vector<long> rw = unit_widths(col1_units, m, false);
        std::vector<long> cw = unit_widths(col0_units, m, false);
        if (width_sum(rw) == 0 || width_sum(cw) == 0) continue;
        ZMat mat(width_sum(rw), width_sum(cw));
        for (size_t p = 0; p < pairs.size(); ++p) {
            auto [i, j] = pairs[static_cast<size_t>(p)];
            const SncIntersection& inter = s.pairwise.at({i, j});
            long roff = offset_before(rw, static_cast<long>(p));
            auto place = [&](long comp, const SncRestriction& r, int sign) {
                auto it = r.mu_maps.find(m - 1);
                if (it == r.mu_maps.end()) return;
                const GeomDatum& cgeom = s.components[static_cast<size_t>(comp)];
                std::vector<long> csel = surviving_coords(cgeom.mu.at(m - 1), Rp);
                std::vector<long> tsel =
                    surviving_coords(inter.scheme.mu.at(m - 1), Rp);
                add_block(mat, roff, offset_before(cw, comp),
                          submatrix_select(it->second, tsel, csel), sign);
            };
            place(i, inter.from_first, +1);
            place(j, inter.from_second, -1);
        }
        d.divisible[m] = std::move(mat);
    }
    out.diffs.push_back(std::move(d));
    out.validate();
    return out;
}

/* ------------------------------ page algebra ----------------------------- */

const ArtinRep& BigradedPage::at(long n, long m) const {
    auto it = entries.find({n, m});
    if (it == entries.end()) throw error("page: zero entry accessed");
    return it->second;
}

BigradedPage e1_page(const SNCData& s, const Coefficients& R) {
    DescentComplex dc = descent_complex(s, R);
    BigradedPage p;
    p.page = 1;
    for (size_t q = 0; q < dc.columns.size(); ++q)
        for (const auto& [deg, rep] : dc.columns[q].graded)
            p.entries[{static_cast<long>(q), deg}] = rep;
    for (size_t q = 0; q < dc.diffs.size(); ++q) {
        const GradedMap& d = dc.diffs[q];
        if (d.h0.rows() != 0 && d.h0.cols() != 0)
            p.diffs[{static_cast<long>(q), 0}] = {d.h0, ZMat(0, 0)};
        for (const auto& [m, mat] : d.divisible)
            if (mat.rows() != 0 && mat.cols() != 0)
                p.diffs[{static_cast<long>(q), m}] = {ZMat(0, 0), mat};
    }
    p.degenerate = dc.columns.size() <= 1;
    return p;
}

bool page_d_squared_zero(const BigradedPage& p) {
    for (const auto& [key, d] : p.diffs) {
        auto next = p.diffs.find({key.first + p.page, key.second - p.page + 1});
        if (next == p.diffs.end()) continue;
        if (next->second.finite.cols() == d.finite.rows() && d.finite.rows() != 0)
            if (!(next->second.finite * d.finite).is_zero()) return false;
        if (next->second.divisible.cols() == d.divisible.rows() && d.divisible.rows() != 0)
            if (!(next->second.divisible * d.divisible).is_zero()) return false;
    }
    return true;
}

namespace {

/* kernel of an equivariant map of purely divisible reps, with the induced
 * action: per twist/support class, y = Vinv x turns the map into its Smith
 * form; the maximal divisible subgroup of the kernel is the block of
 * coordinates past the Smith rank, and torsion factors are the nontrivial
 * invariant factors (support-normalized by divisible_map_kernel) */
ArtinRep divisible_kernel_rep(const ArtinRep& src, const ZMat& f) {
    ArtinRep out = ArtinRep::zero_rep(src.group, src.coeff);
    out.twist_chi = src.twist_chi;
    std::vector<ClassKey> classes = coord_classes(src);
    std::vector<ZMat> action = divisible_block_action(src);
    std::map<ClassKey, std::vector<long>> by_class;
    for (long c = 0; c < static_cast<long>(classes.size()); ++c)
        by_class[classes[static_cast<size_t>(c)]].push_back(c);
    std::vector<std::pair<int, mpz_class>> torsion;
    for (const auto& [key, coords] : by_class) {
        ZMat fc = submatrix_select(f, range_coords(f.rows()), coords);
        DivisibleSummand shape{key.twist, static_cast<long>(coords.size()), key.mode,
                               key.primes};
        DivisibleKernel dk = divisible_map_kernel(fc, shape);
        SnfResult snf = smith_normal_form(fc);
        long s = static_cast<long>(coords.size());
        if (dk.divisible_rank > 0) {
            DivisiblePart part;
            part.shape = DivisibleSummand{key.twist, dk.divisible_rank, key.mode, key.primes};
            for (int g = 0; g < src.group->order; ++g) {
                ZMat conj = snf.vinv *
                            submatrix_select(action[static_cast<size_t>(g)], coords, coords) *
                            snf.v;
                ZMat block(dk.divisible_rank, dk.divisible_rank);
                for (long i = 0; i < dk.divisible_rank; ++i)
                    for (long j = 0; j < dk.divisible_rank; ++j)
                        block.at(i, j) = conj.at(snf.rank + i, snf.rank + j);
                part.action.push_back(std::move(block));
            }
            out.divisible.push_back(std::move(part));
        }
        (void)s;
        for (const auto& d : dk.finite_factors) torsion.push_back({key.twist, d});
    }
    if (!torsion.empty()) {
        if (src.group->order > 1)
            throw error("snc: torsion kernel factors under a nontrivial Galois action "
                        "are not supported");
        int twist = torsion[0].first;
        std::vector<mpz_class> factors;
        for (const auto& [t, d] : torsion) {
            if (t != twist) throw error("snc: mixed torsion twists in one slot");
            factors.push_back(d);
        }
        out.finite = FgModule::from_invariants(src.coeff, 0, factors);
        out.finite_twist = twist;
        out.action.assign(1, QMat::identity(out.finite.generators));
    }
    return out;
}

/* cokernel of an equivariant map of purely divisible reps: z = U x puts the
 * map in Smith form; the image is the full divisible block below the rank,
 * so the cokernel is purely divisible on the remaining coordinates */
ArtinRep divisible_cokernel_rep(const ArtinRep& tgt, const ZMat& f) {
    ArtinRep out = ArtinRep::zero_rep(tgt.group, tgt.coeff);
    out.twist_chi = tgt.twist_chi;
    std::vector<ClassKey> classes = coord_classes(tgt);
    std::vector<ZMat> action = divisible_block_action(tgt);
    std::map<ClassKey, std::vector<long>> by_class;
    for (long c = 0; c < static_cast<long>(classes.size()); ++c)
        by_class[classes[static_cast<size_t>(c)]].push_back(c);
    for (const auto& [key, coords] : by_class) {
        ZMat fc = submatrix_select(f, coords, range_coords(f.cols()));
        SnfResult snf = smith_normal_form(fc);
        long t = static_cast<long>(coords.size());
        long rank = snf.rank;
        if (t - rank <= 0) continue;
        DivisiblePart part;
        part.shape = DivisibleSummand{key.twist, t - rank, key.mode, key.primes};
        for (int g = 0; g < tgt.group->order; ++g) {
            ZMat conj = snf.u *
                        submatrix_select(action[static_cast<size_t>(g)], coords, coords) *
                        snf.uinv;
            ZMat block(t - rank, t - rank);
            for (long i = 0; i < t - rank; ++i)
                for (long j = 0; j < t - rank; ++j)
                    block.at(i, j) = conj.at(rank + i, rank + j);
            part.action.push_back(std::move(block));
        }
        out.divisible.push_back(std::move(part));
    }
    return out;
}

bool slot_is_finite(const ArtinRep& m) { return m.divisible.empty(); }

} // namespace

BigradedPage e2_page(const SNCData& s, const Coefficients& R) {
    BigradedPage e1 = e1_page(s, R);
    for (const auto& [key, rep] : e1.entries)
        if (key.first > 1)
            throw error("snc: only two-column pages are materialized");
    BigradedPage p;
    p.page = 2;
    p.degenerate = true;
    for (const auto& [key, rep] : e1.entries) {
        auto [n, m] = key;
        ArtinRep entry = rep;
        if (n == 0) {
            auto d = e1.diffs.find({0, m});
            if (d != e1.diffs.end()) {
                if (slot_is_finite(rep)) {
                    EquivariantMap f{rep, e1.at(1, m), q_from_z(d->second.finite)};
                    entry = rep_kernel(f);
                } else {
                    entry = divisible_kernel_rep(rep, d->second.divisible);
                }
            }
        } else {
            auto d = e1.diffs.find({0, m});
            if (d != e1.diffs.end() && e1.has(0, m)) {
                if (slot_is_finite(rep)) {
                    EquivariantMap f{e1.at(0, m), rep, q_from_z(d->second.finite)};
                    entry = rep_cokernel(f);
                } else {
                    entry = divisible_cokernel_rep(rep, d->second.divisible);
                }
            }
        }
        if (!rep_is_zero(entry)) p.entries[{n, m}] = std::move(entry);
    }
    return p;
}

DiscreteComplex abutment(const SNCData& s, const Coefficients& R) {
    BigradedPage e2 = e2_page(s, R);
    DiscreteComplex out;
    for (const auto& [key, rep] : e2.entries) {
        long k = key.first + key.second;
        auto it = out.graded.find(k);
        if (it == out.graded.end())
            out.graded[k] = rep;
        else
            it->second = rep_direct_sum(it->second, rep);
    }
    return out;
}

/* ------------------------------ shriek colimit --------------------------- */

DescentComplex shriek_complex(const SNCData& s, long r, const Coefficients& R) {
    if (r < 0) throw error("snc: shriek colimit requires r >= 0");
    s.validate();
    DescentComplex out;
    if (s.components.empty()) return out;
    Coefficients Rp = R.localize_away(s.components[0].base.characteristic_exponent);
    const std::vector<mpz_class>& chi = s.components[0].base.galois.cyclo;

    auto term = [&](const GeomDatum& x, long level, long total_degree) -> ArtinRep {
        long mu_degree = total_degree - 2 * level - 3;
        ArtinRep scratch;
        const ArtinRep* mu = mu_degree >= 0 ? mu_entry(x, mu_degree, scratch) : nullptr;
        if (!mu)
            return ArtinRep::zero_rep(std::make_shared<const FiniteGroup>(
                                          x.base.galois.quotient),
                                      Rp);
        ArtinRep t = rep_tensor_coefficients(*mu, Rp);
        return tate_twist(t, static_cast<int>(-(level + 1 + r)), chi);
    };

    auto column = [&](const std::vector<const GeomDatum*>& units, long level) {
        DiscreteComplex c;
        long top = 0;
        for (const GeomDatum* x : units) top = std::max(top, 2 * x->dimension);
        for (long k = 2 * level + 3; k <= 2 * level + 3 + top; ++k) {
            const ArtinRep* acc = nullptr;
            ArtinRep sum;
            for (const GeomDatum* x : units) {
                ArtinRep t = term(*x, level, k);
                if (rep_is_zero(t)) continue;
                if (!acc)
                    sum = std::move(t);
                else
                    sum = rep_direct_sum(sum, t);
                acc = &sum;
            }
            if (acc) c.graded[k] = std::move(sum);
        }
        return c;
    };

    std::vector<const GeomDatum*> comp_units;
    for (const auto& c : s.components) comp_units.push_back(&c);
    out.columns.push_back(column(comp_units, 0));
    if (s.pairwise.empty()) return out;

    std::vector<std::pair<long, long>> pairs = sorted_pairs(s);
    std::vector<const GeomDatum*> pair_units;
    for (const auto& key : pairs) pair_units.push_back(&s.pairwise.at(key).scheme);
    out.columns.push_back(column(pair_units, 1));

    /* transition maps: residues mu^{k-3}(X_i)(-1-r) -> mu^{k-5}(X_ij)(-2-r) */
    GradedMap d;
    auto unit_width = [&](const GeomDatum& x, long level, long k) {
        long mu_degree = k - 2 * level - 3;
        if (mu_degree < 0) return 0L;
        ArtinRep scratch;
        const ArtinRep* mu = mu_entry(x, mu_degree, scratch);
        if (!mu) return 0L;
        return static_cast<long>(surviving_coords(*mu, Rp).size());
    };
    std::set<long> degs;
    for (const auto& [deg, rep] : out.columns[1].graded)
        if (out.columns[0].graded.count(deg)) degs.insert(deg);
    for (long k : degs) {
        std::vector<long> rw, cw;
        for (const GeomDatum* x : pair_units) rw.push_back(unit_width(*x, 1, k));
        for (const GeomDatum* x : comp_units) cw.push_back(unit_width(*x, 0, k));
        if (width_sum(rw) == 0 || width_sum(cw) == 0) continue;
        ZMat mat(width_sum(rw), width_sum(cw));
        for (size_t p = 0; p < pairs.size(); ++p) {
            auto [i, j] = pairs[static_cast<size_t>(p)];
            const SncIntersection& inter = s.pairwise.at({i, j});
            long roff = offset_before(rw, static_cast<long>(p));
            auto place = [&](long comp, const SncRestriction& rest, int sign) {
                auto it = rest.residue_maps.find(k - 3);
                if (it == rest.residue_maps.end()) return;
                ArtinRep scratch_s, scratch_t;
                const ArtinRep* smu =
                    mu_entry(s.components[static_cast<size_t>(comp)], k - 3, scratch_s);
                const ArtinRep* tmu = mu_entry(inter.scheme, k - 5, scratch_t);
                if (!smu || !tmu) return;
                add_block(mat, roff, offset_before(cw, comp),
                          submatrix_select(it->second, surviving_coords(*tmu, Rp),
                                           surviving_coords(*smu, Rp)),
                          sign);
            };
            place(i, inter.from_first, +1);
            place(j, inter.from_second, -1);
        }
        d.divisible[k] = std::move(mat);
    }
    out.diffs.push_back(std::move(d));
    out.validate();
    return out;
}

/* ------------------------------ cone pipeline ---------------------------- */

std::string ConeReport::to_string() const {
    std::ostringstream os;
    os << "cone over a dimension-" << dimension << " exceptional divisor: ";
    if (dimension < 1 || divisible_rank + static_cast<long>(h3.twisted_torsion.size()) == 0) {
        os << "H^3 = 0";
    } else {
        os << "0 -> " << h3_sub.to_string() << " -> H^3 -> " << h3_quotient.to_string()
           << " -> 0";
    }
    os << "; divisible rank " << divisible_rank;
    os << "; Z(" << ell << "^inf) corank " << b1;
    os << (constructible ? "; constructible" : "; NOT constructible");
    return os.str();
}

ConeReport cone_pipeline(const GeomDatum& e, unsigned long ell, long embedding_degree,
                         const Coefficients& R) {
    e.validate();
    if (!is_prime_ul(ell)) throw error("cone pipeline: ell must be prime");
    if (ell == e.base.characteristic_exponent)
        throw error("cone pipeline: ell must be invertible on the base");
    if (embedding_degree < 1)
        throw error("cone pipeline: embedding degree must be positive");
    if (e.components() != 1)
        throw error("cone pipeline: the exceptional divisor must be connected");

    ConeReport rep;
    rep.dimension = e.dimension;
    rep.ell = ell;
    Coefficients Rp = R.localize_away(e.base.characteristic_exponent);
    rep.h3_sub = AdmissibleModule::zero(Rp);
    rep.h3_quotient = AdmissibleModule::zero(Rp);
    rep.h3 = AdmissibleModule::zero(Rp);
    if (e.dimension < 1 || !e.mu.count(1)) {
        rep.constructible = true;
        return rep;
    }

    /* the submodule: mu_1(E) ⊗ R[1/p] */
    ArtinRep mu1 = rep_tensor_coefficients(e.mu.at(1), Rp);
    rep.h3_sub = admissible_module(mu1);
    for (const auto& part : mu1.divisible) {
        bool has_ell = part.shape.mode == DivSupport::AllBut
                           ? !part.shape.primes.count(ell)
                           : part.shape.primes.count(ell) != 0;
        if (has_ell) rep.b1 += part.shape.rank;
    }

    /* the quotient: M = ker(mu^0(E)(-1) -> mu^2(E)), cup with d·(hyperplane) */
    ArtinRep mu0 = rep_tensor_coefficients(divisible_pi0_rep(e), Rp);
    std::vector<LevelPiece> quot_torsion;
    long quot_div = 0;
    if (total_divisible_rank(mu0) > 0) {
        DivisibleSummand shape = mu0.divisible[0].shape;
        shape.twist -= 1;
        if (!e.mu.count(2)) {
            quot_div = shape.rank;
        } else {
            ArtinRep mu2 = rep_tensor_coefficients(e.mu.at(2), Rp);
            ZMat f(total_divisible_rank(mu2), shape.rank);
            if (f.rows() > 0) f.at(0, 0) = embedding_degree;
            DivisibleKernel dk = divisible_map_kernel(f, shape);
            quot_div = dk.divisible_rank;
            for (const auto& d : dk.finite_factors)
                quot_torsion.push_back({shape.twist, d, 1});
        }
        DivisibleModule qd;
        if (quot_div > 0)
            qd.summands.push_back(
                DivisibleSummand{shape.twist, quot_div, shape.mode, shape.primes});
        rep.h3_quotient = AdmissibleModule(FgModule::zero(Rp), qd, quot_torsion);
    }

    rep.h3 = AdmissibleModule(
        FgModule::zero(Rp),
        divisible_direct_sum(rep.h3_sub.divisible, rep.h3_quotient.divisible),
        quot_torsion);
    for (const auto& sEntry : rep.h3.divisible.summands) rep.divisible_rank += sEntry.rank;
    rep.constructible = is_finitely_presented(rep.h3);
    return rep;
}

} // namespace artinperv
