#include "artinperv/workspace.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace artinperv {

namespace {

using nlohmann::json;

/* ----------------------------- JSON helpers ----------------------------- */

template <typename F>
auto with_ctx(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const parse_error& e) {
        throw parse_error(where + ": " + e.what());
    }
}

const json& need(const json& obj, const char* key) {
    if (!obj.is_object()) throw parse_error(std::string("expected an object with '") + key + "'");
    auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(std::string("missing field '") + key + "'");
    return *it;
}

std::string need_string(const json& obj, const char* key) {
    const json& v = need(obj, key);
    if (!v.is_string()) throw parse_error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

long need_long(const json& obj, const char* key) {
    const json& v = need(obj, key);
    if (!v.is_number_integer()) throw parse_error(std::string("field '") + key + "' must be an integer");
    return v.get<long>();
}

long get_long(const json& obj, const char* key, long fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return need_long(obj, key);
}

unsigned long need_ulong(const json& obj, const char* key) {
    long v = need_long(obj, key);
    if (v < 0) throw parse_error(std::string("field '") + key + "' must be non-negative");
    return static_cast<unsigned long>(v);
}

std::vector<int> int_list(const json& v, const char* what) {
    if (!v.is_array()) throw parse_error(std::string(what) + " must be an array of integers");
    std::vector<int> out;
    for (const json& e : v) {
        if (!e.is_number_integer()) throw parse_error(std::string(what) + " must contain integers");
        out.push_back(e.get<int>());
    }
    return out;
}

mpz_class parse_mpz(const json& v) {
    if (v.is_number_integer()) return mpz_class(v.get<long>());
    if (v.is_string()) {
        try {
            return mpz_class(v.get<std::string>());
        } catch (const std::exception&) {
            throw parse_error("malformed integer string '" + v.get<std::string>() + "'");
        }
    }
    throw parse_error("expected an integer string");
}

mpq_class parse_mpq(const json& v) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_string()) {
        try {
            mpq_class q(v.get<std::string>());
            q.canonicalize();
            return q;
        } catch (const std::exception&) {
            throw parse_error("malformed rational string '" + v.get<std::string>() + "'");
        }
    }
    throw parse_error("expected an exact number string");
}

/* matrices travel as {"rows": r, "cols": c, "data": [row-major strings]} */
template <typename Mat, typename Entry>
Mat mat_from_json_impl(const json& v, Entry parse_entry) {
    long rows = need_long(v, "rows");
    long cols = need_long(v, "cols");
    if (rows < 0 || cols < 0) throw parse_error("matrix dimensions must be non-negative");
    const json& data = need(v, "data");
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
        throw parse_error("matrix data must hold rows*cols row-major entries");
    Mat m(rows, cols);
    long k = 0;
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m.at(i, j) = parse_entry(data[static_cast<std::size_t>(k++)]);
    return m;
}

ZMat zmat_from_json(const json& v) { return mat_from_json_impl<ZMat>(v, parse_mpz); }
QMat qmat_from_json(const json& v) { return mat_from_json_impl<QMat>(v, parse_mpq); }

json mat_json(const ZMat& m) {
    json data = json::array();
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) data.push_back(m.at(i, j).get_str());
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json mat_json(const QMat& m) {
    json data = json::array();
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) data.push_back(m.at(i, j).get_str());
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Coefficients coeff_from_text(const std::string& text) {
    try {
        return parse_coefficients(text);
    } catch (const error& e) {
        throw parse_error(e.what());
    }
}

Coefficients need_coeff(const json& obj, const char* key) {
    return coeff_from_text(need_string(obj, key));
}

/* group specifier: a group id, or a binding into a curve's own groups so the
 * representation shares the curve's group object exactly */
std::shared_ptr<const FiniteGroup> resolve_group(const Workspace& ws, const json& spec) {
    if (spec.is_string()) return ws.group(spec.get<std::string>());
    if (spec.is_object() && spec.contains("curve")) {
        auto c = ws.curve(need_string(spec, "curve"));
        if (spec.contains("branch")) {
            long i = need_long(spec, "branch");
            if (i < 0 || static_cast<std::size_t>(i) >= c->branches.size())
                throw parse_error("branch index out of range");
            return branch_group(*c, static_cast<std::size_t>(i));
        }
        if (spec.contains("residue")) {
            long p = need_long(spec, "residue");
            if (p < 0 || static_cast<std::size_t>(p) >= c->points.size())
                throw parse_error("residue index out of range");
            return residue_group(*c, static_cast<std::size_t>(p));
        }
        throw parse_error("curve group binding needs 'branch' or 'residue'");
    }
    throw parse_error("group must be an id or {curve, branch|residue}");
}

/* ----------------------------- entity loaders --------------------------- */

void build_group(Workspace& ws, const json& def, const std::string& id) {
    std::string kind = need_string(def, "kind");
    FiniteGroup g;
    if (kind == "cyclic") {
        g = cyclic_group(static_cast<int>(need_long(def, "n")));
    } else if (kind == "dihedral") {
        g = dihedral_group(static_cast<int>(need_long(def, "n")));
    } else if (kind == "quaternion") {
        g = quaternion_group(static_cast<int>(need_long(def, "order")));
    } else if (kind == "alternating4") {
        g = alternating4();
    } else if (kind == "symmetric3") {
        g = symmetric3();
    } else if (kind == "product") {
        g = direct_product(*ws.group(need_string(def, "left")),
                           *ws.group(need_string(def, "right")));
    } else if (kind == "table") {
        const json& rows = need(def, "table");
        if (!rows.is_array()) throw parse_error("field 'table' must be an array of rows");
        std::vector<std::vector<int>> table;
        for (const json& r : rows) table.push_back(int_list(r, "table row"));
        std::vector<int> gens;
        if (def.contains("generators")) gens = int_list(def.at("generators"), "generators");
        g = FiniteGroup::from_table(need_string(def, "name"), std::move(table), std::move(gens));
    } else {
        throw parse_error("unknown group kind '" + kind + "'");
    }
    ws.groups.emplace(id, share_group(std::move(g)));
}

void build_base_field(Workspace& ws, const json& def, const std::string& id) {
    BaseField k;
    k.galois.quotient = *ws.group(need_string(def, "quotient"));
    k.characteristic_exponent = def.contains("char_exponent") ? need_ulong(def, "char_exponent") : 1;
    if (def.contains("frobenius")) k.galois.frobenius = static_cast<int>(need_long(def, "frobenius"));
    if (def.contains("cyclo")) {
        const json& cy = def.at("cyclo");
        if (!cy.is_array()) throw parse_error("field 'cyclo' must be an array");
        for (const json& v : cy) k.galois.cyclo.push_back(parse_mpz(v));
    }
    if (def.contains("inertia_marks")) {
        const json& marks = def.at("inertia_marks");
        if (!marks.is_object()) throw parse_error("field 'inertia_marks' must be an object");
        for (auto it = marks.begin(); it != marks.end(); ++it) {
            if (!it.value().is_number_integer())
                throw parse_error("inertia marks must be integers");
            k.galois.inertia_marks[it.key()] = it.value().get<int>();
        }
    }
    ws.base_fields.emplace(id, std::move(k));
}

void build_curve(Workspace& ws, const json& def, const std::string& id) {
    std::string kind = need_string(def, "kind");
    unsigned long p = def.contains("char_exponent") ? need_ulong(def, "char_exponent") : 1;
    std::shared_ptr<const CurveData> c;
    if (kind == "p1") {
        const json& rm = need(def, "removed_points");
        if (!rm.is_array()) throw parse_error("field 'removed_points' must be an array");
        std::vector<std::string> names;
        for (const json& v : rm) {
            if (!v.is_string()) throw parse_error("removed point names must be strings");
            names.push_back(v.get<std::string>());
        }
        c = curve_p1(p, names);
    } else if (kind == "gm_cyclic") {
        c = curve_gm_cyclic(p, static_cast<int>(need_long(def, "n")));
    } else if (kind == "nodal") {
        c = curve_nodal(p);
    } else if (kind == "local") {
        std::vector<int> sub;
        if (def.contains("residue_subgroup"))
            sub = int_list(def.at("residue_subgroup"), "residue_subgroup");
        c = curve_local(*ws.group(need_string(def, "quotient")),
                        static_cast<int>(need_long(def, "inertia_mark")),
                        *ws.group(need_string(def, "residue")),
                        int_list(need(def, "decomp_lifts"), "decomp_lifts"), p, sub);
    } else {
        throw parse_error("unknown curve kind '" + kind + "'");
    }
    ws.curves.emplace(id, std::move(c));
}

void build_geometry(Workspace& ws, const json& def, const std::string& id) {
    std::string kind = need_string(def, "kind");
    GeomDatum x;
    if (kind == "point") {
        x = geom_point(ws.base_field(need_string(def, "base")));
    } else if (kind == "finite_etale") {
        const json& pi0 = need(def, "pi0");
        if (!pi0.is_array()) throw parse_error("field 'pi0' must be an array of permutations");
        std::vector<std::vector<int>> perms;
        for (const json& r : pi0) perms.push_back(int_list(r, "pi0 permutation"));
        x = geom_finite_etale(ws.base_field(need_string(def, "base")), perms);
    } else if (kind == "projective_space") {
        x = geom_projective_space(ws.base_field(need_string(def, "base")), need_long(def, "n"));
    } else if (kind == "curve") {
        std::vector<ZMat> h1;
        if (def.contains("h1_action")) {
            const json& acts = def.at("h1_action");
            if (!acts.is_array()) throw parse_error("field 'h1_action' must be an array");
            for (const json& a : acts) h1.push_back(zmat_from_json(a));
        }
        x = geom_curve(ws.base_field(need_string(def, "base")), need_long(def, "genus"), h1);
    } else if (kind == "abelian_variety") {
        x = geom_abelian_variety(ws.base_field(need_string(def, "base")), need_long(def, "g"));
    } else if (kind == "disjoint_union") {
        x = geom_disjoint_union(ws.geometry(need_string(def, "left")),
                                ws.geometry(need_string(def, "right")));
    } else if (kind == "product") {
        x = geom_product(ws.geometry(need_string(def, "left")),
                         ws.geometry(need_string(def, "right")));
    } else {
        throw parse_error("unknown geometry kind '" + kind + "'");
    }
    ws.geometries.emplace(id, std::move(x));
}

SncRestriction restriction_from_json(const json& def) {
    SncRestriction r;
    r.pi0_map = int_list(need(def, "pi0_map"), "pi0_map");
    auto read_maps = [&](const char* key, std::map<long, ZMat>& out) {
        if (!def.contains(key)) return;
        const json& maps = def.at(key);
        if (!maps.is_object())
            throw parse_error(std::string("field '") + key + "' must map degrees to matrices");
        for (auto it = maps.begin(); it != maps.end(); ++it) {
            long deg = 0;
            try {
                std::size_t used = 0;
                deg = std::stol(it.key(), &used);
                if (used != it.key().size()) throw std::invalid_argument("trailing text");
            } catch (const std::exception&) {
                throw parse_error(std::string(key) + ": malformed degree key '" + it.key() + "'");
            }
            out.emplace(deg, zmat_from_json(it.value()));
        }
    };
    read_maps("mu_maps", r.mu_maps);
    read_maps("residue_maps", r.residue_maps);
    return r;
}

void build_snc(Workspace& ws, const json& def, const std::string& id) {
    SNCData s;
    const json& comps = need(def, "components");
    if (!comps.is_array()) throw parse_error("field 'components' must be an array of geometry ids");
    for (const json& c : comps) {
        if (!c.is_string()) throw parse_error("component entries must be geometry ids");
        s.components.push_back(ws.geometry(c.get<std::string>()));
    }
    if (def.contains("pairwise")) {
        const json& pw = def.at("pairwise");
        if (!pw.is_array()) throw parse_error("field 'pairwise' must be an array");
        for (const json& e : pw) {
            long i = need_long(e, "first");
            long j = need_long(e, "second");
            if (i < 0 || j < 0 || i >= j || static_cast<std::size_t>(j) >= s.components.size())
                throw parse_error("pairwise indices must satisfy 0 <= first < second < #components");
            if (s.pairwise.count({i, j}))
                throw parse_error("duplicate pairwise entry");
            SncIntersection in;
            in.scheme = ws.geometry(need_string(e, "scheme"));
            in.from_first = restriction_from_json(need(e, "from_first"));
            in.from_second = restriction_from_json(need(e, "from_second"));
            s.pairwise.emplace(std::make_pair(i, j), std::move(in));
        }
    }
    ws.sncs.emplace(id, std::move(s));
}

void build_rep(Workspace& ws, const json& def, const std::string& id) {
    auto g = resolve_group(ws, need(def, "group"));
    Coefficients r = need_coeff(def, "coeff");
    std::string kind = need_string(def, "kind");
    ArtinRep m;
    if (kind == "trivial") {
        m = ArtinRep::trivial(g, r, get_long(def, "rank", 1));
    } else if (kind == "regular") {
        m = ArtinRep::regular(g, r);
    } else if (kind == "zero") {
        m = ArtinRep::zero_rep(g, r);
    } else if (kind == "permutation") {
        const json& pj = need(def, "perms");
        if (!pj.is_array()) throw parse_error("field 'perms' must be an array of permutations");
        std::vector<std::vector<int>> perms;
        for (const json& e : pj) perms.push_back(int_list(e, "permutation"));
        m = ArtinRep::permutation(g, r, perms);
    } else if (kind == "matrices") {
        const json& mod = need(def, "module");
        long gens = need_long(mod, "generators");
        ZMat rels(0, gens);
        if (mod.contains("relations")) rels = zmat_from_json(mod.at("relations"));
        if (rels.cols() != gens)
            throw parse_error("relation rows must have one column per generator");
        const json& acts = need(def, "generator_action");
        if (!acts.is_array() || acts.size() != g->generators.size())
            throw parse_error("generator_action needs one matrix per group generator");
        std::vector<QMat> action;
        for (const json& a : acts) {
            QMat q = qmat_from_json(a);
            if (q.rows() != gens || q.cols() != gens)
                throw parse_error("generator action matrices must be generators x generators");
            action.push_back(std::move(q));
        }
        m = ArtinRep::from_generator_matrices(g, r, FgModule(r, gens, rels), action);
        validate_rep(m);
    } else {
        throw parse_error("unknown rep kind '" + kind + "'");
    }
    ws.reps.emplace(id, std::move(m));
}

std::vector<ArtinRep> rep_list(const Workspace& ws, const json& v, const char* what) {
    if (!v.is_array()) throw parse_error(std::string(what) + " must be an array of rep ids");
    std::vector<ArtinRep> out;
    for (const json& e : v) {
        if (!e.is_string()) throw parse_error(std::string(what) + " entries must be rep ids");
        out.push_back(ws.rep(e.get<std::string>()));
    }
    return out;
}

void build_object(Workspace& ws, const json& def, const std::string& id) {
    std::string kind = need_string(def, "kind");
    NObject m;
    if (kind == "j_shriek") {
        m = j_shriek(ws.curve(need_string(def, "curve")), rep_list(ws, need(def, "branch"), "branch"));
    } else if (kind == "omega0_j_star") {
        m = omega0_j_star(ws.curve(need_string(def, "curve")),
                          rep_list(ws, need(def, "branch"), "branch"));
    } else if (kind == "intermediate_extension") {
        m = intermediate_extension(ws.curve(need_string(def, "curve")),
                                   rep_list(ws, need(def, "branch"), "branch"));
    } else if (kind == "i_star") {
        m = i_star(ws.curve(need_string(def, "curve")), need_coeff(def, "coeff"),
                   rep_list(ws, need(def, "point"), "point"));
    } else if (kind == "weightless") {
        m = weightless_motive(ws.curve(need_string(def, "curve")));
    } else if (kind == "zero") {
        m = nobject_zero(ws.curve(need_string(def, "curve")), need_coeff(def, "coeff"));
    } else if (kind == "explicit") {
        m.curve = ws.curve(need_string(def, "curve"));
        m.coeff = need_coeff(def, "coeff");
        m.open_set = def.contains("open_set") ? need_string(def, "open_set") : "U";
        m.branch = rep_list(ws, need(def, "branch"), "branch");
        if (m.branch.size() != m.curve->branches.size())
            throw parse_error("need one branch rep per curve branch");
        const json& pts = need(def, "points");
        if (!pts.is_array() || pts.size() != m.curve->points.size())
            throw parse_error("need one point datum per curve point");
        for (const json& p : pts) {
            NPointPart part;
            part.m0 = ws.rep(need_string(p, "m0"));
            part.m1 = ws.rep(need_string(p, "m1"));
            part.d = qmat_from_json(need(p, "d"));
            part.f0 = qmat_from_json(need(p, "f0"));
            m.point.push_back(std::move(part));
        }
    } else {
        throw parse_error("unknown object kind '" + kind + "'");
    }
    ws.objects.emplace(id, std::move(m));
}

void build_morphism(Workspace& ws, const json& def, const std::string& id) {
    std::string kind = need_string(def, "kind");
    NMorphism f;
    if (kind == "shriek_to_star") {
        f = shriek_to_star(ws.curve(need_string(def, "curve")),
                           rep_list(ws, need(def, "branch"), "branch"));
    } else if (kind == "identity") {
        f = nmorphism_identity(ws.object(need_string(def, "object")));
    } else if (kind == "zero") {
        f = nmorphism_zero(ws.object(need_string(def, "source")),
                           ws.object(need_string(def, "target")));
    } else if (kind == "explicit") {
        f.source = ws.object(need_string(def, "source"));
        f.target = ws.object(need_string(def, "target"));
        const json& bm = need(def, "branch_map");
        if (!bm.is_array() || bm.size() != f.source.curve->branches.size())
            throw parse_error("need one branch map per curve branch");
        for (const json& a : bm) f.branch_map.push_back(qmat_from_json(a));
        const json& pm = need(def, "point_maps");
        if (!pm.is_array() || pm.size() != f.source.curve->points.size())
            throw parse_error("need one point map per curve point");
        for (const json& p : pm) {
            NPointMap q;
            q.phi0 = qmat_from_json(need(p, "phi0"));
            q.phi1 = qmat_from_json(need(p, "phi1"));
            q.h = qmat_from_json(need(p, "h"));
            f.point_map.push_back(std::move(q));
        }
    } else {
        throw parse_error("unknown morphism kind '" + kind + "'");
    }
    ws.morphisms.emplace(id, std::move(f));
}

/* ---------------------------- report builders --------------------------- */

json shape_json(const ModuleShape& sh) {
    json torsion = json::array();
    for (const mpz_class& d : sh.invariant_factors) torsion.push_back(d.get_str());
    return json{{"free_rank", sh.free_rank}, {"torsion", std::move(torsion)}};
}

json summand_json(const DivisibleSummand& d) {
    json primes = json::array();
    for (unsigned long q : d.primes) primes.push_back(q);
    return json{{"twist", d.twist},
                {"rank", d.rank},
                {"mode", d.mode == DivSupport::AllBut ? "all_but" : "only"},
                {"primes", std::move(primes)}};
}

bool action_trivial(const ArtinRep& m) {
    for (const QMat& a : m.action)
        if (!a.is_identity()) return false;
    for (const DivisiblePart& d : m.divisible)
        for (const ZMat& a : d.action)
            if (!a.is_identity()) return false;
    return true;
}

json rep_summary_json(const ArtinRep& m) {
    json div = json::array();
    for (const DivisiblePart& d : m.divisible) div.push_back(summand_json(d.shape));
    return json{{"group", m.group ? m.group->name : ""},
                {"coeff", m.coeff.to_string()},
                {"finite", shape_json(module_shape(m.finite))},
                {"finite_twist", m.finite_twist},
                {"divisible", std::move(div)},
                {"action_trivial", action_trivial(m)}};
}

json rep_full_json(const ArtinRep& m) {
    json out = rep_summary_json(m);
    out["generators"] = m.finite.generators;
    out["relations"] = mat_json(m.finite.relations);
    json acts = json::array();
    for (const QMat& a : m.action) acts.push_back(mat_json(a));
    out["action"] = std::move(acts);
    return out;
}

json admissible_json(const AdmissibleModule& a) {
    json div = json::array();
    for (const DivisibleSummand& d : a.divisible.summands) div.push_back(summand_json(d));
    json tt = json::array();
    for (const LevelPiece& p : a.twisted_torsion)
        tt.push_back(json{{"modulus", p.modulus.get_str()}, {"rank", p.rank}, {"twist", p.twist}});
    return json{{"coeff", a.finite.coeff.to_string()},
                {"finite", shape_json(module_shape(a.finite))},
                {"divisible", std::move(div)},
                {"twisted_torsion", std::move(tt)}};
}

std::string rep_line(const ArtinRep& m) {
    std::vector<std::string> parts;
    ModuleShape sh = module_shape(m.finite);
    if (!sh.is_zero()) {
        std::string s = sh.to_string(m.coeff);
        if (m.finite_twist != 0) s += "(" + std::to_string(m.finite_twist) + ")";
        parts.push_back(std::move(s));
    }
    for (const DivisiblePart& d : m.divisible) parts.push_back(d.shape.to_string());
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
    return out;
}

json object_json(const NObject& m, bool full) {
    json branch = json::array();
    for (const ArtinRep& b : m.branch) branch.push_back(full ? rep_full_json(b) : rep_summary_json(b));
    json points = json::array();
    for (const NPointPart& p : m.point) {
        json e{{"m0", full ? rep_full_json(p.m0) : rep_summary_json(p.m0)},
               {"m1", full ? rep_full_json(p.m1) : rep_summary_json(p.m1)}};
        if (full) {
            e["d"] = mat_json(p.d);
            e["f0"] = mat_json(p.f0);
        }
        points.push_back(std::move(e));
    }
    json out{{"coeff", m.coeff.to_string()},
             {"open_set", m.open_set},
             {"curve", json{{"branches", m.curve ? m.curve->branches.size() : 0},
                            {"points", m.curve ? m.curve->points.size() : 0}}},
             {"branch", std::move(branch)},
             {"points", std::move(points)}};
    if (m.coeff.is_field()) {
        RankProfile rp = rank_profile(m);
        out["profile"] = json{{"branch", rp.branch}, {"point_euler", rp.point_euler}};
        out["simple"] = is_simple(m);
        out["carext"] = satisfies_carext(m);
    }
    return out;
}

json morphism_json(const NMorphism& f) {
    json bm = json::array();
    for (const QMat& a : f.branch_map) bm.push_back(mat_json(a));
    json pm = json::array();
    for (const NPointMap& p : f.point_map)
        pm.push_back(json{{"phi0", mat_json(p.phi0)}, {"phi1", mat_json(p.phi1)}, {"h", mat_json(p.h)}});
    return json{{"branch_map", std::move(bm)}, {"point_maps", std::move(pm)}};
}

std::string object_pretty(const NObject& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.branch.size(); ++i)
        os << "branch[" << i << "]: " << rep_line(m.branch[i]) << "\n";
    for (std::size_t p = 0; p < m.point.size(); ++p)
        os << "point[" << p << "]: m0 = " << rep_line(m.point[p].m0)
           << ", m1 = " << rep_line(m.point[p].m1) << "\n";
    if (m.coeff.is_field()) {
        os << "simple: " << (is_simple(m) ? "yes" : "no") << "\n";
        os << "carext: " << (satisfies_carext(m) ? "yes" : "no") << "\n";
    }
    return os.str();
}

json discrete_json(const DiscreteComplex& dc) {
    json table = json::object();
    for (const auto& [deg, rep] : dc.graded) table[std::to_string(deg)] = rep_summary_json(rep);
    return table;
}

json page_json(const BigradedPage& p) {
    json entries = json::object();
    for (const auto& [nm, rep] : p.entries)
        entries[std::to_string(nm.first) + "," + std::to_string(nm.second)] = rep_summary_json(rep);
    json diffs = json::object();
    for (const auto& [nm, d] : p.diffs) {
        ZMat fin = d.finite, div = d.divisible;
        diffs[std::to_string(nm.first) + "," + std::to_string(nm.second)] =
            json{{"finite", mat_json(fin)}, {"divisible", mat_json(div)}};
    }
    return json{{"page", p.page},
                {"degenerate", p.degenerate},
                {"d_squared_zero", page_d_squared_zero(p)},
                {"entries", std::move(entries)},
                {"differentials", std::move(diffs)}};
}

json gc_ranks_json(const GluedComplex& g) {
    auto complex_ranks = [](const RepComplex& c) {
        json out = json::object();
        if (!c.empty())
            for (int n = c.min_degree; n <= c.max_degree(); ++n)
                if (c.rank_at(n) != 0) out[std::to_string(n)] = c.rank_at(n);
        return out;
    };
    json branch = json::array();
    for (const RepComplex& c : g.a) branch.push_back(complex_ranks(c));
    json points = json::array();
    for (const GluedPoint& p : g.b) points.push_back(complex_ranks(p.b));
    return json{{"branch", std::move(branch)}, {"points", std::move(points)}};
}

} // namespace

/* ------------------------------- lookups -------------------------------- */

namespace {
template <typename M>
const typename M::mapped_type& find_in(const M& m, const std::string& id, const char* what) {
    auto it = m.find(id);
    if (it == m.end()) throw parse_error(std::string("unknown ") + what + " '" + id + "'");
    return it->second;
}
} // namespace

std::shared_ptr<const FiniteGroup> Workspace::group(const std::string& id) const {
    return find_in(groups, id, "group");
}
const BaseField& Workspace::base_field(const std::string& id) const {
    return find_in(base_fields, id, "base field");
}
std::shared_ptr<const CurveData> Workspace::curve(const std::string& id) const {
    return find_in(curves, id, "curve");
}
const GeomDatum& Workspace::geometry(const std::string& id) const {
    return find_in(geometries, id, "geometry");
}
const SNCData& Workspace::snc(const std::string& id) const { return find_in(sncs, id, "snc"); }
const ArtinRep& Workspace::rep(const std::string& id) const { return find_in(reps, id, "rep"); }
const NObject& Workspace::object(const std::string& id) const {
    return find_in(objects, id, "object");
}
const NMorphism& Workspace::morphism(const std::string& id) const {
    return find_in(morphisms, id, "morphism");
}

/* ------------------------------- loading -------------------------------- */

void load_document(Workspace& ws, const std::string& where, const nlohmann::json& doc) {
    if (!doc.is_object()) throw parse_error(where + ": document root must be a JSON object");
    static const std::vector<std::string> sections{"groups",     "base_fields", "curves",
                                                   "geometries", "sncs",        "reps",
                                                   "objects",    "morphisms"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find(sections.begin(), sections.end(), it.key()) == sections.end())
            throw parse_error(where + ": unknown section '" + it.key() + "'");
    if (ws.canonical.is_null()) ws.canonical = nlohmann::json::object();
    for (const std::string& section : sections) {
        if (!doc.contains(section)) continue;
        const nlohmann::json& arr = doc.at(section);
        if (!arr.is_array())
            throw parse_error(where + ": section '" + section + "' must be an array");
        for (std::size_t idx = 0; idx < arr.size(); ++idx) {
            const nlohmann::json& def = arr[idx];
            std::string pos = where + ": " + section + "[" + std::to_string(idx) + "]";
            std::string id = with_ctx(pos, [&] { return need_string(def, "id"); });
            pos += " '" + id + "'";
            bool dup = (section == "groups" && ws.groups.count(id)) ||
                       (section == "base_fields" && ws.base_fields.count(id)) ||
                       (section == "curves" && ws.curves.count(id)) ||
                       (section == "geometries" && ws.geometries.count(id)) ||
                       (section == "sncs" && ws.sncs.count(id)) ||
                       (section == "reps" && ws.reps.count(id)) ||
                       (section == "objects" && ws.objects.count(id)) ||
                       (section == "morphisms" && ws.morphisms.count(id));
            if (dup) throw parse_error(pos + ": duplicate identifier");
            with_ctx(pos, [&] {
                if (section == "groups") build_group(ws, def, id);
                else if (section == "base_fields") build_base_field(ws, def, id);
                else if (section == "curves") build_curve(ws, def, id);
                else if (section == "geometries") build_geometry(ws, def, id);
                else if (section == "sncs") build_snc(ws, def, id);
                else if (section == "reps") build_rep(ws, def, id);
                else if (section == "objects") build_object(ws, def, id);
                else build_morphism(ws, def, id);
            });
            ws.declarations.push_back({section, id, pos});
            ws.canonical[section].push_back(def);
        }
    }
}

void load_document_text(Workspace& ws, const std::string& where, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(where + ": " + e.what());
    }
    load_document(ws, where, doc);
}

void load_file(Workspace& ws, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_document_text(ws, path, buf.str());
}

std::string serialize_workspace(const Workspace& ws) {
    const nlohmann::json& doc =
        ws.canonical.is_null() ? nlohmann::json::object() : ws.canonical;
    return doc.dump(2) + "\n";
}

/* ------------------------------- commands ------------------------------- */

CliReport run_validate(const Workspace& ws) {
    json violations = json::array();
    std::ostringstream pretty;
    auto flag = [&](const std::string& where, const std::string& path, const std::string& msg) {
        json v{{"where", where}, {"message", msg}};
        if (!path.empty()) v["path"] = path;
        violations.push_back(std::move(v));
        pretty << where << (path.empty() ? "" : " " + path) << ": " << msg << "\n";
    };
    for (const Declaration& d : ws.declarations) {
        try {
            if (d.section == "base_fields") ws.base_field(d.id).validate();
            else if (d.section == "curves") ws.curve(d.id)->validate();
            else if (d.section == "geometries") ws.geometry(d.id).validate();
            else if (d.section == "sncs") ws.snc(d.id).validate();
            else if (d.section == "reps") validate_rep(ws.rep(d.id));
            else if (d.section == "objects") {
                ValidationReport r = validate_nobject(ws.object(d.id));
                for (const Violation& v : r.violations) flag(d.where, v.path, v.message);
            } else if (d.section == "morphisms") {
                ValidationReport r = validate_nmorphism(ws.morphism(d.id));
                for (const Violation& v : r.violations) flag(d.where, v.path, v.message);
            }
            /* groups are fully validated at construction time */
        } catch (const error& e) {
            flag(d.where, "", e.what());
        }
    }
    CliReport out;
    out.ok = violations.empty();
    out.doc = json{{"command", "validate"},
                   {"entities", ws.declarations.size()},
                   {"ok", out.ok},
                   {"violations", std::move(violations)}};
    if (out.ok)
        pretty << "workspace OK (" << ws.declarations.size() << " entities)\n";
    out.pretty = pretty.str();
    return out;
}

CliReport run_omega0(const Workspace& ws, const std::string& geometry_id, const Coefficients& r,
                     std::optional<int> twist) {
    const GeomDatum& x = ws.geometry(geometry_id);
    DiscreteComplex dc = twist ? omega0_pushforward_twisted(x, r, *twist)
                               : omega0_pushforward(x, r);
    ConstructVerdict verdict;
    if (twist) {
        /* verdict derived from the twisted table: a degree fails finite
         * presentation exactly when it keeps a divisible part */
        for (const auto& [deg, rep] : dc.graded)
            if (!rep.divisible.empty()) {
                verdict.constructible = false;
                verdict.witness = deg;
                break;
            }
    } else {
        verdict = constructibility_verdict(x, r);
    }
    CliReport out;
    out.doc = json{{"command", "omega0"},
                   {"geometry", geometry_id},
                   {"coeff", r.to_string()},
                   {"table", discrete_json(dc)},
                   {"verdict", json{{"constructible", verdict.constructible},
                                    {"witness", verdict.witness}}}};
    if (twist) out.doc["twist"] = *twist;
    std::ostringstream pretty;
    pretty << dc.to_string() << "\n" << verdict.to_string() << "\n";
    out.pretty = pretty.str();
    return out;
}

CliReport run_snc(const Workspace& ws, const std::string& snc_id, const Coefficients& r,
                  std::optional<long> shriek_r) {
    const SNCData& s = ws.snc(snc_id);
    BigradedPage e1 = e1_page(s, r);
    BigradedPage e2 = e2_page(s, r);
    DiscreteComplex ab = abutment(s, r);
    CliReport out;
    out.doc = json{{"command", "snc"},
                   {"snc", snc_id},
                   {"coeff", r.to_string()},
                   {"e1", page_json(e1)},
                   {"e2", page_json(e2)},
                   {"abutment", discrete_json(ab)}};
    std::ostringstream pretty;
    auto page_lines = [&](const char* label, const BigradedPage& p) {
        for (const auto& [nm, rep] : p.entries)
            pretty << label << "(" << nm.first << "," << nm.second << ") = " << rep_line(rep)
                   << "\n";
    };
    page_lines("E1", e1);
    page_lines("E2", e2);
    for (const auto& [deg, rep] : ab.graded)
        pretty << "abutment H^" << deg << " = " << rep_line(rep) << "\n";
    if (shriek_r) {
        DescentComplex sh = shriek_complex(s, *shriek_r, r);
        sh.validate();
        json cols = json::array();
        for (const DiscreteComplex& c : sh.columns) cols.push_back(discrete_json(c));
        out.doc["shriek"] = json{{"r", *shriek_r}, {"columns", std::move(cols)},
                                 {"is_zero", sh.is_zero()}};
        for (std::size_t q = 0; q < sh.columns.size(); ++q)
            pretty << "shriek column " << q << ": "
                   << (sh.columns[q].is_zero() ? "0" : sh.columns[q].to_string()) << "\n";
    }
    out.pretty = pretty.str();
    return out;
}

CliReport run_cone(const Workspace& ws, const std::string& geometry_id, unsigned long ell,
                   long embedding_degree, const Coefficients& r) {
    ConeReport cr = cone_pipeline(ws.geometry(geometry_id), ell, embedding_degree, r);
    CliReport out;
    out.doc = json{{"command", "cone"},
                   {"geometry", geometry_id},
                   {"ell", cr.ell},
                   {"dimension", cr.dimension},
                   {"b1", cr.b1},
                   {"divisible_rank", cr.divisible_rank},
                   {"constructible", cr.constructible},
                   {"h3", admissible_json(cr.h3)},
                   {"h3_sub", admissible_json(cr.h3_sub)},
                   {"h3_quotient", admissible_json(cr.h3_quotient)}};
    out.pretty = cr.to_string() + "\n";
    return out;
}

CliReport run_heart(const Workspace& ws, const std::string& subcommand, const std::string& id,
                    const HeartOptions& opt) {
    CliReport out;
    json doc{{"command", "heart." + subcommand}, {"id", id}};
    std::ostringstream pretty;
    if (subcommand == "kernel" || subcommand == "cokernel" || subcommand == "image") {
        const NMorphism& f = ws.morphism(id);
        NObject result;
        if (subcommand == "kernel") {
            KernelResult kr = heart_kernel_full(f);
            result = kr.kernel;
            doc["inclusion"] = morphism_json(kr.inclusion);
        } else if (subcommand == "cokernel") {
            CokernelResult ck = heart_cokernel_full(f);
            result = ck.cokernel;
            doc["projection"] = morphism_json(ck.projection);
        } else {
            result = heart_image(f);
        }
        doc["object"] = object_json(result, true);
        pretty << object_pretty(result);
    } else if (subcommand == "iext") {
        const NObject& m = ws.object(id);
        NObject result = intermediate_extension(m.curve, m.branch);
        doc["object"] = object_json(result, true);
        pretty << object_pretty(result);
    } else if (subcommand == "truncate") {
        GluedComplex g = glued_shift(glued_from_nobject(ws.object(id)), opt.shift);
        auto [lo, hi] = perverse_truncate(g);
        doc["shift"] = opt.shift;
        doc["lower"] = gc_ranks_json(lo);
        doc["upper"] = gc_ranks_json(hi);
        int dmin = 0, dmax = 0;
        auto widen = [&](const RepComplex& c) {
            if (c.empty()) return;
            dmin = std::min(dmin, c.min_degree);
            dmax = std::max(dmax, c.max_degree());
        };
        for (const RepComplex& c : g.a) widen(c);
        for (const GluedPoint& p : g.b) widen(p.b);
        json ph = json::object();
        for (int n = dmin - 1; n <= dmax + 1; ++n) {
            NObject h = perverse_cohomology(g, n);
            RankProfile rp = rank_profile(h);
            bool zero = true;
            for (long v : rp.branch) zero = zero && v == 0;
            for (const NPointPart& p : h.point)
                zero = zero && p.m0.finite.generators == 0 && p.m1.finite.generators == 0;
            ph[std::to_string(n)] = json{{"zero", zero},
                                         {"profile", json{{"branch", rp.branch},
                                                          {"point_euler", rp.point_euler}}}};
            pretty << "pH^" << n << ": " << (zero ? "0" : "nonzero") << "\n";
        }
        doc["perverse_cohomology"] = std::move(ph);
    } else if (subcommand == "simple") {
        const NObject& m = ws.object(id);
        bool simple = is_simple(m);
        bool carext = satisfies_carext(m);
        std::size_t length = composition_series(m).size();
        doc["simple"] = simple;
        doc["carext"] = carext;
        doc["length"] = length;
        pretty << "simple: " << (simple ? "yes" : "no") << "\n"
               << "carext: " << (carext ? "yes" : "no") << "\n"
               << "length: " << length << "\n";
    } else if (subcommand == "series") {
        std::vector<NObject> factors = composition_series(ws.object(id));
        doc["length"] = factors.size();
        json fac = json::array();
        for (std::size_t i = 0; i < factors.size(); ++i) {
            fac.push_back(object_json(factors[i], true));
            pretty << "factor " << i << ":\n" << object_pretty(factors[i]);
        }
        doc["factors"] = std::move(fac);
    } else if (subcommand == "realize") {
        if (opt.ell == 0) throw parse_error("heart realize requires --ell <prime>");
        RealizedObject r = realize_v(ws.object(id), opt.ell);
        doc["ell"] = r.ell;
        doc["object"] = object_json(r.data, true);
        pretty << "ell: " << r.ell << "\n" << object_pretty(r.data);
    } else {
        throw parse_error("unknown heart subcommand '" + subcommand +
                          "' (expected kernel | cokernel | image | iext | truncate | simple | "
                          "series | realize)");
    }
    out.doc = std::move(doc);
    out.pretty = pretty.str();
    return out;
}

unsigned long long env_seed(unsigned long long fallback) {
    const char* v = std::getenv("ARTINPERV_SEED");
    if (v == nullptr || *v == '\0') return fallback;
    std::string s(v);
    if (s.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("ARTINPERV_SEED must be a decimal non-negative integer");
    return std::stoull(s);
}

} // namespace artinperv
