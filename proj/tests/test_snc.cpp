#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "artinperv/snc.hpp"
#include "test_util.hpp"

#include <set>

using namespace artinperv;

namespace {

Coefficients Q() { return Coefficients::rationals(); }
Coefficients Z() { return Coefficients::integers(); }

BaseField closed_field(unsigned long p = 1) {
    BaseField k;
    k.galois.quotient = cyclic_group(1);
    k.characteristic_exponent = p;
    return k;
}

BaseField c2_field() {
    BaseField k;
    k.galois.quotient = cyclic_group(2);
    return k;
}

DivisibleSummand qz_summand(int twist, long rank, std::set<unsigned long> inv = {}) {
    return DivisibleSummand{twist, rank, DivSupport::AllBut, std::move(inv)};
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
        for (size_t i = 0; i < rep.divisible.size(); ++i)
            if (rep.divisible[i].action != o.divisible[i].action) return false;
    }
    return true;
}

long free_rank_of(const ArtinRep& m) { return module_shape(m.finite).free_rank; }

} // namespace

TEST_CASE("single component: descent degenerates to the pushforward") {
    BaseField k = closed_field(7);
    for (const Coefficients& R : {Z(), Q()}) {
        GeomDatum x = geom_projective_space(k, 2);
        SNCData s;
        s.components = {x};
        DescentComplex dc = descent_complex(s, R);
        REQUIRE(dc.columns.size() == 1);
        CHECK(dc.diffs.empty());
        CHECK(complexes_equal(dc.columns[0], omega0_pushforward(x, R)));

        BigradedPage e1 = e1_page(s, R);
        for (const auto& [key, rep] : e1.entries) CHECK(key.first == 0);
        CHECK(e1.degenerate);

        /* abutment equals the pushforward exactly */
        CHECK(complexes_equal(abutment(s, R), omega0_pushforward(x, R)));
    }
}

TEST_CASE("two components meeting in a point: Cech codifferential (1, -1)") {
    BaseField k = closed_field();
    SNCData s = meet_in_point(geom_projective_space(k, 1), geom_curve(k, 1));
    DescentComplex dc = descent_complex(s, Z());
    REQUIRE(dc.columns.size() == 2);
    CHECK(free_rank_of(dc.columns[0].at(0)) == 2);
    CHECK(free_rank_of(dc.columns[1].at(0)) == 1);
    CHECK(dc.diffs[0].h0 == tutil::from_rows({{1, -1}}));
    dc.validate();
}

TEST_CASE("empty pairwise data: direct sum with no differential") {
    BaseField k = closed_field();
    SNCData s;
    s.components = {geom_projective_space(k, 1), geom_point(k), geom_curve(k, 2)};
    DescentComplex dc = descent_complex(s, Z());
    REQUIRE(dc.columns.size() == 1);
    CHECK(dc.diffs.empty());
    CHECK(free_rank_of(dc.columns[0].at(0)) == 3);
    /* degree 2: only the genus-2 curve contributes */
    CHECK(admissible_module(dc.columns[0].at(2)).divisible ==
          DivisibleModule{{qz_summand(0, 4)}});
    DiscreteComplex ab = abutment(s, Z());
    CHECK(complexes_equal(ab, dc.columns[0]));
}

TEST_CASE("two projective lines meeting in one point: E1, E2, abutment") {
    BaseField k = closed_field();
    GeomDatum p1 = geom_projective_space(k, 1);
    SNCData s = meet_in_point(p1, p1);

    BigradedPage e1 = e1_page(s, Z());
    REQUIRE(e1.has(0, 0));
    REQUIRE(e1.has(1, 0));
    REQUIRE(e1.has(0, 3));
    CHECK(free_rank_of(e1.at(0, 0)) == 2);
    CHECK(free_rank_of(e1.at(1, 0)) == 1);
    CHECK(admissible_module(e1.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 2)}});
    CHECK_FALSE(e1.has(1, 3));
    CHECK(e1.diffs.count({0, 0}) == 1);
    CHECK(page_d_squared_zero(e1));

    BigradedPage e2 = e2_page(s, Z());
    CHECK(e2.degenerate);
    REQUIRE(e2.has(0, 0));
    CHECK(free_rank_of(e2.at(0, 0)) == 1);
    CHECK_FALSE(e2.has(1, 0)); /* (1, -1) is surjective */
    CHECK(admissible_module(e2.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 2)}});

    DiscreteComplex ab = abutment(s, Z());
    std::set<long> degs;
    for (const auto& [deg, rep] : ab.graded) degs.insert(deg);
    CHECK(degs == std::set<long>{0, 3});
    CHECK(free_rank_of(ab.at(0)) == 1);
    CHECK(admissible_module(ab.at(3)).divisible == DivisibleModule{{qz_summand(-1, 2)}});

    SUBCASE("rational collapse: abutment is the pi0 Cech cohomology") {
        DiscreteComplex abq = abutment(s, Q());
        std::set<long> dq;
        for (const auto& [deg, rep] : abq.graded) dq.insert(deg);
        CHECK(dq == std::set<long>{0});
        CHECK(free_rank_of(abq.at(0)) == 1);
    }
}

TEST_CASE("two projective planes meeting in a line: divisible differential") {
    BaseField k = closed_field();
    GeomDatum p2 = geom_projective_space(k, 2);
    SNCData s;
    s.components = {p2, p2};
    SncIntersection inter;
    inter.scheme = geom_projective_space(k, 1);
    inter.from_first.pi0_map = {0};
    inter.from_second.pi0_map = {0};
    /* hyperplane restriction is an isomorphism on mu^2 */
    inter.from_first.mu_maps[2] = tutil::from_rows({{1}});
    inter.from_second.mu_maps[2] = tutil::from_rows({{1}});
    s.pairwise[{0, 1}] = inter;

    BigradedPage e1 = e1_page(s, Z());
    CHECK(admissible_module(e1.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 2)}});
    CHECK(admissible_module(e1.at(1, 3)).divisible == DivisibleModule{{qz_summand(-1, 1)}});
    CHECK(admissible_module(e1.at(0, 5)).divisible == DivisibleModule{{qz_summand(-2, 2)}});
    REQUIRE(e1.diffs.count({0, 3}) == 1);
    CHECK(e1.diffs.at({0, 3}).divisible == tutil::from_rows({{1, -1}}));

    BigradedPage e2 = e2_page(s, Z());
    CHECK(admissible_module(e2.at(0, 3)).divisible == DivisibleModule{{qz_summand(-1, 1)}});
    CHECK_FALSE(e2.has(1, 3)); /* restriction difference is surjective */
    CHECK(admissible_module(e2.at(0, 5)).divisible == DivisibleModule{{qz_summand(-2, 2)}});

    DiscreteComplex ab = abutment(s, Z());
    CHECK(free_rank_of(ab.at(0)) == 1);
    CHECK(admissible_module(ab.at(3)).divisible == DivisibleModule{{qz_summand(-1, 1)}});
    CHECK(admissible_module(ab.at(5)).divisible == DivisibleModule{{qz_summand(-2, 2)}});

    SUBCASE("non-unimodular restriction produces twisted torsion in the kernel") {
        s.pairwise[{0, 1}].from_first.mu_maps[2] = tutil::from_rows({{2}});
        s.pairwise[{0, 1}].from_second.mu_maps[2] = tutil::from_rows({{0}});
        BigradedPage t2 = e2_page(s, Z());
        AdmissibleModule slot = admissible_module(t2.at(0, 3));
        CHECK(slot.divisible == DivisibleModule{{qz_summand(-1, 1)}});
        REQUIRE(slot.twisted_torsion.size() == 1);
        CHECK(slot.twisted_torsion[0] == LevelPiece{-1, 2, 1});
        CHECK(t2.at(0, 3).finite_twist == -1);
    }
}

TEST_CASE("Galois-equivariant configuration") {
    BaseField k = c2_field();
    GeomDatum two = geom_finite_etale(k, {{0, 1}, {1, 0}});
    SNCData s;
    s.components = {two, two};
    SncIntersection inter;
    inter.scheme = two;
    inter.from_first.pi0_map = {0, 1};
    inter.from_second.pi0_map = {0, 1};
    s.pairwise[{0, 1}] = inter;
    /* dimension rule: intersections must drop dimension; fake it by raising
     * the components' declared dimension */
    s.components[0].dimension = 1;
    s.components[1].dimension = 1;

    DescentComplex dc = descent_complex(s, Q());
    dc.validate();
    DiscreteComplex ab = abutment(s, Q());
    REQUIRE(ab.has(0));
    const ArtinRep& h0 = ab.at(0);
    CHECK(free_rank_of(h0) == 2);
    /* kernel of (I, -I) is the diagonal copy: still the regular C2 action */
    CHECK(h0.action[0].is_identity());
    CHECK(h0.action[1] == tutil::q_from_rows({{0, 1}, {1, 0}}));
}

TEST_CASE("Euler characteristics match between E1 and the abutment") {
    BaseField k = closed_field();
    GeomDatum p2 = geom_projective_space(k, 2);
    SNCData s;
    s.components = {p2, p2};
    SncIntersection inter;
    inter.scheme = geom_projective_space(k, 1);
    inter.from_first.pi0_map = {0};
    inter.from_second.pi0_map = {0};
    inter.from_first.mu_maps[2] = tutil::from_rows({{1}});
    inter.from_second.mu_maps[2] = tutil::from_rows({{1}});
    s.pairwise[{0, 1}] = inter;

    BigradedPage e1 = e1_page(s, Z());
    DiscreteComplex ab = abutment(s, Z());
    /* free ranks with sign (-1)^{n+m}, divisible ranks per twist with sign */
    long chi_free_e1 = 0;
    std::map<int, long> chi_div_e1;
    for (const auto& [key, rep] : e1.entries) {
        long sgn = ((key.first + key.second) % 2 == 0) ? 1 : -1;
        chi_free_e1 += sgn * free_rank_of(rep);
        for (const auto& part : rep.divisible)
            chi_div_e1[part.shape.twist] += sgn * part.shape.rank;
    }
    long chi_free_ab = 0;
    std::map<int, long> chi_div_ab;
    for (const auto& [deg, rep] : ab.graded) {
        long sgn = (deg % 2 == 0) ? 1 : -1;
        chi_free_ab += sgn * free_rank_of(rep);
        for (const auto& part : rep.divisible)
            chi_div_ab[part.shape.twist] += sgn * part.shape.rank;
    }
    CHECK(chi_free_e1 == chi_free_ab);
    for (const auto& [twist, r] : chi_div_e1) CHECK(chi_div_ab[twist] == r);
}

TEST_CASE("shriek colimit") {
    BaseField k = closed_field(3);
    SUBCASE("one component, r = 0: degree 3 is mu^0(-1)") {
        GeomDatum e = geom_curve(k, 1);
        SNCData s;
        s.components = {e};
        DescentComplex sh = shriek_complex(s, 0, Z());
        REQUIRE(sh.columns.size() == 1);
        const DiscreteComplex& c = sh.columns[0];
        REQUIRE(c.has(3));
        CHECK(admissible_module(c.at(3)).divisible ==
              DivisibleModule{{qz_summand(-1, 1, {3})}});
        /* degree 4 = mu^1(-1), degree 5 = mu^2(-1) */
        CHECK(admissible_module(c.at(4)).divisible ==
              DivisibleModule{{qz_summand(-1, 2, {3})}});
        CHECK(admissible_module(c.at(5)).divisible ==
              DivisibleModule{{qz_summand(-2, 1, {3})}});
        CHECK_FALSE(c.has(0));
        CHECK_FALSE(c.has(2));
    }
    SUBCASE("r = 1 shifts every twist down by one") {
        GeomDatum e = geom_curve(k, 1);
        SNCData s;
        s.components = {e};
        DescentComplex s0 = shriek_complex(s, 0, Z());
        DescentComplex s1 = shriek_complex(s, 1, Z());
        for (const auto& [deg, rep] : s0.columns[0].graded) {
            REQUIRE(s1.columns[0].has(deg));
            const ArtinRep& o = s1.columns[0].at(deg);
            REQUIRE(rep.divisible.size() == o.divisible.size());
            for (size_t i = 0; i < rep.divisible.size(); ++i)
                CHECK(o.divisible[i].shape.twist == rep.divisible[i].shape.twist - 1);
        }
    }
    SUBCASE("empty configuration gives the zero complex") {
        SNCData s;
        DescentComplex sh = shriek_complex(s, 0, Z());
        CHECK(sh.is_zero());
        CHECK(descent_complex(s, Z()).is_zero());
    }
    SUBCASE("rational coefficients kill the shriek colimit") {
        GeomDatum e = geom_curve(k, 1);
        SNCData s;
        s.components = {e};
        CHECK(shriek_complex(s, 0, Q()).is_zero());
    }
    SUBCASE("two components with a residue map") {
        GeomDatum p2 = geom_projective_space(k, 2);
        SNCData s;
        s.components = {p2, p2};
        SncIntersection inter;
        inter.scheme = geom_projective_space(k, 1);
        inter.from_first.pi0_map = {0};
        inter.from_second.pi0_map = {0};
        inter.from_first.mu_maps[2] = tutil::from_rows({{1}});
        inter.from_second.mu_maps[2] = tutil::from_rows({{1}});
        /* residue mu^2(P^2)(-1) -> mu^0(P^1): twist -1 -> 0 */
        inter.from_first.residue_maps[2] = tutil::from_rows({{1}});
        inter.from_second.residue_maps[2] = tutil::from_rows({{1}});
        s.pairwise[{0, 1}] = inter;
        DescentComplex sh = shriek_complex(s, 0, Z());
        REQUIRE(sh.columns.size() == 2);
        sh.validate();
        /* level-0 column: degrees 3 (mu^0), 5 (mu^2), 7 (mu^4); level-1: 5, 7 */
        CHECK(sh.columns[0].has(3));
        CHECK(sh.columns[0].has(5));
        CHECK(sh.columns[0].has(7));
        CHECK(sh.columns[1].has(5));
        CHECK(sh.columns[1].has(7));
        REQUIRE(sh.diffs.size() == 1);
        REQUIRE(sh.diffs[0].divisible.count(5) == 1);
        CHECK(sh.diffs[0].divisible.at(5) == tutil::from_rows({{1, -1}}));
        /* total twists line up: source mu^2(-1) has total -2, target mu^0(-2) */
        CHECK(sh.columns[0].at(5).divisible[0].shape.twist == -2);
        CHECK(sh.columns[1].at(5).divisible[0].shape.twist == -2);
    }
}

TEST_CASE("cone pipeline") {
    BaseField k = closed_field();
    SUBCASE("elliptic curve: divisible rank 2, not constructible") {
        ConeReport r = cone_pipeline(geom_abelian_variety(k, 1), 5);
        CHECK(r.b1 == 2);
        CHECK(r.divisible_rank == 2);
        CHECK_FALSE(r.constructible);
        CHECK(r.h3_sub.divisible == DivisibleModule{{qz_summand(0, 2)}});
        CHECK(r.h3_quotient.is_zero()); /* embedding degree 1: M = 0 */
        CHECK(r.to_string().find("NOT constructible") != std::string::npos);
    }
    SUBCASE("abelian surface: divisible rank 4") {
        ConeReport r = cone_pipeline(geom_abelian_variety(k, 2), 5);
        CHECK(r.b1 == 4);
        CHECK(r.divisible_rank == 4);
        CHECK_FALSE(r.constructible);
    }
    SUBCASE("plane cubic: the quotient M is Z/3(-1)") {
        ConeReport r = cone_pipeline(geom_abelian_variety(k, 1), 5, 3);
        CHECK(r.divisible_rank == 2);
        REQUIRE(r.h3_quotient.twisted_torsion.size() == 1);
        CHECK(r.h3_quotient.twisted_torsion[0] == LevelPiece{-1, 3, 1});
        CHECK_FALSE(r.constructible);
    }
    SUBCASE("genus 0 degenerates to a constructible report") {
        ConeReport r = cone_pipeline(geom_point(k), 5);
        CHECK(r.constructible);
        CHECK(r.divisible_rank == 0);
        CHECK(r.b1 == 0);
    }
    SUBCASE("rational coefficients are constructible (trichotomy)") {
        ConeReport r = cone_pipeline(geom_abelian_variety(k, 1), 5, 1, Q());
        CHECK(r.constructible);
        CHECK(r.divisible_rank == 0);
    }
    SUBCASE("characteristic-p bookkeeping: ell must stay invertible") {
        BaseField kp = closed_field(5);
        CHECK_THROWS(cone_pipeline(geom_abelian_variety(kp, 1), 5));
        ConeReport r = cone_pipeline(geom_abelian_variety(kp, 1), 7);
        CHECK(r.b1 == 2);
        CHECK_THROWS(cone_pipeline(geom_abelian_variety(kp, 1), 4)); /* not prime */
    }
}

TEST_CASE("snc validation errors") {
    BaseField k = closed_field();
    GeomDatum p2 = geom_projective_space(k, 2);
    GeomDatum p1 = geom_projective_space(k, 1);
    SUBCASE("missing restriction map for a shared mu degree") {
        SNCData s;
        s.components = {p2, p2};
        SncIntersection inter;
        inter.scheme = p1;
        inter.from_first.pi0_map = {0};
        inter.from_second.pi0_map = {0};
        /* mu^2 is shared but no map given */
        s.pairwise[{0, 1}] = inter;
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("missing restriction map"));
    }
    SUBCASE("intersection must drop dimension") {
        SNCData s = meet_in_point(p1, p1);
        s.pairwise[{0, 1}].scheme = p1;
        s.pairwise[{0, 1}].from_first.mu_maps[2] = tutil::from_rows({{1}});
        s.pairwise[{0, 1}].from_second.mu_maps[2] = tutil::from_rows({{1}});
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("smaller dimension"));
    }
    SUBCASE("pi0 map shape and range") {
        SNCData s = meet_in_point(p1, p1);
        s.pairwise[{0, 1}].from_first.pi0_map = {0, 0};
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("wrong size"));
        s.pairwise[{0, 1}].from_first.pi0_map = {3};
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("out of range"));
    }
    SUBCASE("restriction map shape") {
        SNCData s;
        s.components = {p2, p2};
        SncIntersection inter;
        inter.scheme = p1;
        inter.from_first.pi0_map = {0};
        inter.from_second.pi0_map = {0};
        inter.from_first.mu_maps[2] = tutil::from_rows({{1, 1}});
        inter.from_second.mu_maps[2] = tutil::from_rows({{1}});
        s.pairwise[{0, 1}] = inter;
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("wrong shape"));
    }
    SUBCASE("intersections need components") {
        SNCData s;
        SncIntersection inter;
        inter.scheme = geom_point(k);
        s.pairwise[{0, 1}] = inter;
        CHECK_THROWS(s.validate());
    }
    SUBCASE("non-equivariant pi0 restriction") {
        BaseField k2 = c2_field();
        GeomDatum two = geom_finite_etale(k2, {{0, 1}, {1, 0}});
        GeomDatum one = geom_point(k2);
        SNCData s;
        s.components = {two, two};
        s.components[0].dimension = 1;
        s.components[1].dimension = 1;
        SncIntersection inter;
        inter.scheme = one;
        inter.from_first.pi0_map = {0}; /* the point maps to a swapped component */
        inter.from_second.pi0_map = {0};
        s.pairwise[{0, 1}] = inter;
        CHECK_THROWS_WITH(s.validate(), doctest::Contains("not equivariant"));
    }
}
