/* Finite groups as validated multiplication tables, a catalog of all the
 * shapes of order <= 16 used by the property suites, subgroup enumeration,
 * and marked finite quotients of profinite Galois groups (Frobenius, inertia
 * marks, cyclotomic twist data). */
#pragma once

#include "artinperv/intmat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace artinperv {

struct FiniteGroup {
    std::string name;
    int order = 1;
    std::vector<std::vector<int>> table; /* table[g][h] = g * h */
    std::vector<int> generators;
    int identity = 0;
    std::vector<int> inverse;
    std::map<std::string, std::vector<int>> named_subgroups;

    static FiniteGroup from_table(const std::string& name,
                                  std::vector<std::vector<int>> table,
                                  std::vector<int> generators = {});

    int mul(int g, int h) const { return table[static_cast<size_t>(g)][static_cast<size_t>(h)]; }
    int inv(int g) const { return inverse[static_cast<size_t>(g)]; }
    int power(int g, long e) const;
    int element_order(int g) const;
    bool is_abelian() const;

    std::vector<std::vector<int>> conjugacy_classes() const; /* sorted canonical */
    void add_named_subgroup(const std::string& label, std::vector<int> elems);
    std::vector<int> subgroup_closure(std::vector<int> seed) const;
    std::vector<std::vector<int>> all_subgroups() const;
    bool is_subgroup(const std::vector<int>& elems) const;
    bool is_normal(const std::vector<int>& elems) const;

    /* word[g] = generator indices whose product (left to right) equals g */
    std::vector<std::vector<int>> generator_words() const;
};

struct GroupHom {
    const FiniteGroup* source = nullptr;
    const FiniteGroup* target = nullptr;
    std::vector<int> map; /* element-wise images */

    bool validate(std::string* why = nullptr) const;
    bool injective() const;
    int apply(int g) const { return map[static_cast<size_t>(g)]; }
    static GroupHom identity_hom(const FiniteGroup& g);
};

/* a subgroup realized as a group of its own plus the inclusion data */
struct SubgroupPair {
    FiniteGroup group;
    std::vector<int> elements; /* elements[i] = parent element of local element i */
    GroupHom inclusion(const FiniteGroup& parent) const;
};
SubgroupPair subgroup_group(const FiniteGroup& parent, const std::vector<int>& elements,
                            const std::string& name = "");

/* left cosets of the image of an injective hom; each coset lists a canonical
 * representative (its minimal element) first */
std::vector<int> left_transversal(const FiniteGroup& G, const GroupHom& incl);

struct MarkedProfinite {
    FiniteGroup quotient;
    std::optional<int> frobenius;
    std::map<std::string, int> inertia_marks;
    /* cyclotomic character data: integer value per element, read mod the
     * level in use; empty means the trivial character */
    std::vector<mpz_class> cyclo;

    void validate() const;
    mpz_class cyclo_value(int g) const {
        return cyclo.empty() ? mpz_class(1) : cyclo[static_cast<size_t>(g)];
    }
    bool cyclo_trivial() const;
    /* multiplicativity and invertibility of the character at a finite level */
    bool cyclo_valid_at_level(const mpz_class& N, std::string* why = nullptr) const;
};

/* ------------------------------- catalog -------------------------------- */

FiniteGroup cyclic_group(int n);
FiniteGroup dihedral_group(int n);          /* order 2n, n >= 2 */
FiniteGroup quaternion_group(int order);    /* generalized quaternion, order 8 or 16 */
FiniteGroup alternating4();
FiniteGroup symmetric3();                   /* = D3 with the usual labels */
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

/* every catalog name; all groups of order <= 16 needed by the test corpus */
const std::vector<std::string>& catalog_names();
FiniteGroup catalog_group(const std::string& name);

} // namespace artinperv
