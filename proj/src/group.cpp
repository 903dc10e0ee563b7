#include "artinperv/group.hpp"

#include <algorithm>
#include <set>

namespace artinperv {

FiniteGroup FiniteGroup::from_table(const std::string& name,
                                    std::vector<std::vector<int>> table,
                                    std::vector<int> generators) {
    FiniteGroup g;
    g.name = name;
    g.order = static_cast<int>(table.size());
    if (g.order == 0) throw error("group: empty table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != g.order) throw error("group: ragged table");
        for (int v : row)
            if (v < 0 || v >= g.order) throw error("group: entry out of range");
    }
    g.table = std::move(table);

    /* latin square */
    for (int i = 0; i < g.order; ++i) {
        std::vector<bool> seen_row(static_cast<size_t>(g.order), false);
        std::vector<bool> seen_col(static_cast<size_t>(g.order), false);
        for (int j = 0; j < g.order; ++j) {
            if (seen_row[static_cast<size_t>(g.mul(i, j))]) throw error("group: row not a permutation");
            seen_row[static_cast<size_t>(g.mul(i, j))] = true;
            if (seen_col[static_cast<size_t>(g.mul(j, i))]) throw error("group: column not a permutation");
            seen_col[static_cast<size_t>(g.mul(j, i))] = true;
        }
    }
    /* identity */
    g.identity = -1;
    for (int e = 0; e < g.order; ++e) {
        bool ok = true;
        for (int x = 0; x < g.order && ok; ++x)
            ok = (g.mul(e, x) == x && g.mul(x, e) == x);
        if (ok) {
            g.identity = e;
            break;
        }
    }
    if (g.identity < 0) throw error("group: no identity element");
    /* associativity (order <= 16 keeps this cheap) */
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b)
            for (int c = 0; c < g.order; ++c)
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
                    throw error("group: law is not associative");
    /* inverses */
    g.inverse.assign(static_cast<size_t>(g.order), -1);
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b)
            if (g.mul(a, b) == g.identity) {
                g.inverse[static_cast<size_t>(a)] = b;
                break;
            }
    for (int a = 0; a < g.order; ++a)
        if (g.inverse[static_cast<size_t>(a)] < 0) throw error("group: missing inverse");

    if (generators.empty()) {
        for (int a = 0; a < g.order; ++a) generators.push_back(a);
    }
    for (int s : generators)
        if (s < 0 || s >= g.order) throw error("group: generator out of range");
    g.generators = std::move(generators);
    /* generators must generate */
    if (static_cast<int>(g.subgroup_closure(g.generators).size()) != g.order)
        throw error("group: generators do not generate");
    return g;
}

int FiniteGroup::power(int g, long e) const {
    long m = e % order;
    if (m < 0) m += order; /* g^order may not be e, but g^(ord g) is; reduce safely below */
    int acc = identity;
    for (long i = 0; i < m; ++i) acc = mul(acc, g);
    /* adjust: the naive reduction mod |G| is fine since g^|G| = identity */
    return acc;
}

int FiniteGroup::element_order(int g) const {
    int acc = g, n = 1;
    while (acc != identity) {
        acc = mul(acc, g);
        ++n;
    }
    return n;
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < order; ++a)
        for (int b = a + 1; b < order; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

std::vector<std::vector<int>> FiniteGroup::conjugacy_classes() const {
    std::vector<bool> seen(static_cast<size_t>(order), false);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < order; ++a) {
        if (seen[static_cast<size_t>(a)]) continue;
        std::set<int> cls;
        for (int t = 0; t < order; ++t) cls.insert(mul(mul(t, a), inv(t)));
        std::vector<int> v(cls.begin(), cls.end());
        for (int x : v) seen[static_cast<size_t>(x)] = true;
        classes.push_back(std::move(v));
    }
    return classes;
}

void FiniteGroup::add_named_subgroup(const std::string& label, std::vector<int> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!is_subgroup(elems)) throw error("named subgroup '" + label + "' is not a subgroup");
    named_subgroups[label] = std::move(elems);
}

std::vector<int> FiniteGroup::subgroup_closure(std::vector<int> seed) const {
    std::set<int> s(seed.begin(), seed.end());
    s.insert(identity);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(s.begin(), s.end());
        for (int a : cur)
            for (int b : cur) {
                if (s.insert(mul(a, b)).second) grew = true;
                if (s.insert(inv(a)).second) grew = true;
            }
    }
    return std::vector<int>(s.begin(), s.end());
}

std::vector<std::vector<int>> FiniteGroup::all_subgroups() const {
    std::set<std::vector<int>> found;
    found.insert({identity});
    std::vector<std::vector<int>> queue = {{identity}};
    while (!queue.empty()) {
        std::vector<int> s = queue.back();
        queue.pop_back();
        std::set<int> in(s.begin(), s.end());
        for (int g = 0; g < order; ++g) {
            if (in.count(g)) continue;
            std::vector<int> seed = s;
            seed.push_back(g);
            std::vector<int> t = subgroup_closure(seed);
            if (found.insert(t).second) queue.push_back(t);
        }
    }
    return std::vector<std::vector<int>>(found.begin(), found.end());
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elems) const {
    std::set<int> s(elems.begin(), elems.end());
    if (s.size() != elems.size() || !s.count(identity)) return false;
    for (int a : s) {
        if (a < 0 || a >= order) return false;
        if (!s.count(inv(a))) return false;
        for (int b : s)
            if (!s.count(mul(a, b))) return false;
    }
    return true;
}

bool FiniteGroup::is_normal(const std::vector<int>& elems) const {
    if (!is_subgroup(elems)) return false;
    std::set<int> s(elems.begin(), elems.end());
    for (int t = 0; t < order; ++t)
        for (int a : s)
            if (!s.count(mul(mul(t, a), inv(t)))) return false;
    return true;
}

std::vector<std::vector<int>> FiniteGroup::generator_words() const {
    std::vector<std::vector<int>> words(static_cast<size_t>(order));
    std::vector<bool> seen(static_cast<size_t>(order), false);
    seen[static_cast<size_t>(identity)] = true;
    std::vector<int> frontier = {identity};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int g : frontier)
            for (size_t si = 0; si < generators.size(); ++si) {
                int h = mul(g, generators[si]);
                if (seen[static_cast<size_t>(h)]) continue;
                seen[static_cast<size_t>(h)] = true;
                words[static_cast<size_t>(h)] = words[static_cast<size_t>(g)];
                words[static_cast<size_t>(h)].push_back(static_cast<int>(si));
                next.push_back(h);
            }
        frontier = std::move(next);
    }
    for (bool b : seen)
        if (!b) throw error("group: generators do not generate");
    return words;
}

/* ------------------------------ GroupHom -------------------------------- */

bool GroupHom::validate(std::string* why) const {
    if (!source || !target) {
        if (why) *why = "missing groups";
        return false;
    }
    if (static_cast<int>(map.size()) != source->order) {
        if (why) *why = "map size mismatch";
        return false;
    }
    for (int v : map)
        if (v < 0 || v >= target->order) {
            if (why) *why = "image out of range";
            return false;
        }
    for (int a = 0; a < source->order; ++a)
        for (int b = 0; b < source->order; ++b)
            if (target->mul(apply(a), apply(b)) != apply(source->mul(a, b))) {
                if (why) *why = "map is not multiplicative";
                return false;
            }
    return true;
}

bool GroupHom::injective() const {
    std::set<int> img(map.begin(), map.end());
    return img.size() == map.size();
}

GroupHom GroupHom::identity_hom(const FiniteGroup& g) {
    GroupHom h;
    h.source = &g;
    h.target = &g;
    for (int i = 0; i < g.order; ++i) h.map.push_back(i);
    return h;
}

SubgroupPair subgroup_group(const FiniteGroup& parent, const std::vector<int>& elements,
                            const std::string& name) {
    if (!parent.is_subgroup(elements)) throw error("subgroup_group: not a subgroup");
    std::vector<int> elems = elements;
    std::sort(elems.begin(), elems.end());
    std::map<int, int> local;
    for (size_t i = 0; i < elems.size(); ++i) local[elems[i]] = static_cast<int>(i);
    int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(static_cast<size_t>(n),
                                        std::vector<int>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                local.at(parent.mul(elems[static_cast<size_t>(i)], elems[static_cast<size_t>(j)]));
    SubgroupPair sp;
    sp.group = FiniteGroup::from_table(name.empty() ? parent.name + "-sub" : name, std::move(table));
    sp.elements = elems;
    return sp;
}

GroupHom SubgroupPair::inclusion(const FiniteGroup& parent) const {
    GroupHom h;
    h.source = &group;
    h.target = &parent;
    h.map = elements;
    return h;
}

std::vector<int> left_transversal(const FiniteGroup& G, const GroupHom& incl) {
    if (!incl.injective()) throw error("left_transversal: inclusion not injective");
    std::set<int> img(incl.map.begin(), incl.map.end());
    std::vector<bool> covered(static_cast<size_t>(G.order), false);
    std::vector<int> reps;
    for (int g = 0; g < G.order; ++g) {
        if (covered[static_cast<size_t>(g)]) continue;
        reps.push_back(g);
        for (int h : img) covered[static_cast<size_t>(G.mul(g, h))] = true;
    }
    return reps;
}

/* --------------------------- MarkedProfinite ---------------------------- */

void MarkedProfinite::validate() const {
    if (frobenius && (*frobenius < 0 || *frobenius >= quotient.order))
        throw error("marked profinite: frobenius out of range");
    for (const auto& [label, g] : inertia_marks)
        if (g < 0 || g >= quotient.order)
            throw error("marked profinite: inertia mark '" + label + "' out of range");
    if (!cyclo.empty() && static_cast<int>(cyclo.size()) != quotient.order)
        throw error("marked profinite: cyclotomic data size mismatch");
}

bool MarkedProfinite::cyclo_trivial() const {
    for (const auto& v : cyclo)
        if (v != 1) return false;
    return true;
}

bool MarkedProfinite::cyclo_valid_at_level(const mpz_class& N, std::string* why) const {
    if (cyclo.empty()) return true;
    for (int g = 0; g < quotient.order; ++g) {
        if (gcd(cyclo_value(g), N) != 1) {
            if (why) *why = "cyclotomic value not invertible at this level";
            return false;
        }
        for (int h = 0; h < quotient.order; ++h) {
            mpz_class lhs = cyclo_value(g) * cyclo_value(h) - cyclo_value(quotient.mul(g, h));
            if (lhs % N != 0) {
                if (why) *why = "cyclotomic data not multiplicative at this level";
                return false;
            }
        }
    }
    return true;
}

/* ------------------------------- catalog -------------------------------- */

FiniteGroup cyclic_group(int n) {
    if (n < 1) throw error("cyclic_group: order must be positive");
    std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % n;
    return FiniteGroup::from_table("C" + std::to_string(n), std::move(t),
                                   n == 1 ? std::vector<int>{0} : std::vector<int>{1});
}

FiniteGroup dihedral_group(int n) {
    if (n < 2) throw error("dihedral_group: need n >= 2");
    int ord = 2 * n;
    /* element eps*n + a encodes s^eps r^a; (s^e1 r^a)(s^e2 r^b) = s^(e1+e2) r^(a(-1)^e2 + b) */
    auto idx = [n](int eps, int a) { return eps * n + ((a % n + n) % n); };
    std::vector<std::vector<int>> t(static_cast<size_t>(ord), std::vector<int>(static_cast<size_t>(ord)));
    for (int e1 = 0; e1 < 2; ++e1)
        for (int a = 0; a < n; ++a)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int b = 0; b < n; ++b)
                    t[static_cast<size_t>(idx(e1, a))][static_cast<size_t>(idx(e2, b))] =
                        idx((e1 + e2) % 2, (e2 ? -a : a) + b);
    return FiniteGroup::from_table("D" + std::to_string(n), std::move(t), {idx(0, 1), idx(1, 0)});
}

FiniteGroup quaternion_group(int order) {
    if (order != 8 && order != 16) throw error("quaternion_group: order 8 or 16");
    int m = order / 4; /* x^(2m) = 1, y^2 = x^m, y x y^{-1} = x^{-1} */
    int twom = 2 * m;
    auto idx = [twom](int eps, int a) { return eps * twom + ((a % twom + twom) % twom); };
    std::vector<std::vector<int>> t(static_cast<size_t>(order),
                                    std::vector<int>(static_cast<size_t>(order)));
    for (int e1 = 0; e1 < 2; ++e1)
        for (int a = 0; a < twom; ++a)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int b = 0; b < twom; ++b) {
                    int eps = (e1 + e2) % 2;
                    int expn = e2 ? (b - a + (e1 ? m : 0)) : (a + b);
                    t[static_cast<size_t>(idx(e1, a))][static_cast<size_t>(idx(e2, b))] =
                        idx(eps, expn);
                }
    return FiniteGroup::from_table("Q" + std::to_string(order), std::move(t),
                                   {idx(0, 1), idx(1, 0)});
}

FiniteGroup alternating4() {
    /* even permutations of {0,1,2,3}, composition (p*q)(i) = p[q[i]] */
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> p = {0, 1, 2, 3};
        do {
            int invs = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (p[static_cast<size_t>(i)] > p[static_cast<size_t>(j)]) ++invs;
            if (invs % 2 == 0) perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    std::sort(perms.begin(), perms.end());
    auto find = [&perms](const std::vector<int>& p) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
    };
    int n = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> comp(4);
            for (int k = 0; k < 4; ++k)
                comp[static_cast<size_t>(k)] =
                    perms[static_cast<size_t>(i)][static_cast<size_t>(
                        perms[static_cast<size_t>(j)][static_cast<size_t>(k)])];
            t[static_cast<size_t>(i)][static_cast<size_t>(j)] = find(comp);
        }
    int g1 = find({1, 0, 3, 2});  /* (01)(23) */
    int g2 = find({1, 2, 0, 3});  /* (012) */
    return FiniteGroup::from_table("A4", std::move(t), {g1, g2});
}

FiniteGroup symmetric3() {
    FiniteGroup g = dihedral_group(3);
    g.name = "S3";
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    int n = a.order * b.order;
    auto idx = [&b](int x, int y) { return x * b.order + y; };
    std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int x1 = 0; x1 < a.order; ++x1)
        for (int y1 = 0; y1 < b.order; ++y1)
            for (int x2 = 0; x2 < a.order; ++x2)
                for (int y2 = 0; y2 < b.order; ++y2)
                    t[static_cast<size_t>(idx(x1, y1))][static_cast<size_t>(idx(x2, y2))] =
                        idx(a.mul(x1, x2), b.mul(y1, y2));
    std::vector<int> gens;
    for (int s : a.generators) gens.push_back(idx(s, b.identity));
    for (int s : b.generators) gens.push_back(idx(a.identity, s));
    return FiniteGroup::from_table(a.name + "x" + b.name, std::move(t), gens);
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "C1",  "C2",  "C3",  "C4",  "C5",  "C6",  "C7",  "C8",
        "C9",  "C10", "C11", "C12", "C13", "C14", "C15", "C16",
        "V4",  "C2xC4", "C2xC2xC2", "C3xC3", "C2xC6",
        "S3",  "D4",  "D5",  "D6",  "D7",  "D8",  "Q8",  "Q16", "A4"};
    return names;
}

FiniteGroup catalog_group(const std::string& name) {
    if (name.size() >= 2 && name[0] == 'C' &&
        name.find('x') == std::string::npos) {
        std::string num = name.substr(1);
        if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
            int n = std::stoi(num);
            if (n >= 1 && n <= 16) return cyclic_group(n);
        }
    }
    if (name == "V4") {
        FiniteGroup g = direct_product(cyclic_group(2), cyclic_group(2));
        g.name = "V4";
        return g;
    }
    if (name == "C2xC4") return direct_product(cyclic_group(2), cyclic_group(4));
    if (name == "C2xC2xC2")
        return direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2));
    if (name == "C3xC3") return direct_product(cyclic_group(3), cyclic_group(3));
    if (name == "C2xC6") return direct_product(cyclic_group(2), cyclic_group(6));
    if (name == "S3") return symmetric3();
    if (name == "D3") return dihedral_group(3);
    if (name == "D4") return dihedral_group(4);
    if (name == "D5") return dihedral_group(5);
    if (name == "D6") return dihedral_group(6);
    if (name == "D7") return dihedral_group(7);
    if (name == "D8") return dihedral_group(8);
    if (name == "Q8") return quaternion_group(8);
    if (name == "Q16") return quaternion_group(16);
    if (name == "A4") return alternating4();
    throw error("catalog_group: unknown group '" + name + "'");
}

} // namespace artinperv
