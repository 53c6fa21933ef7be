#include "support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

RatMatrix rows(std::vector<std::vector<Rational>> r) {
    return RatMatrix::from_rows(r, r.empty() ? 0 : r[0].size());
}

IntMatrix irows(std::vector<std::vector<Integer>> r) { return IntMatrix::from_rows(r, r[0].size()); }

} // namespace

TEST_CASE("hermite normal form") {
    HermiteForm h = hermite_form(irows({{2, 0}, {1, 1}}));
    CHECK(h.basis == irows({{1, 1}, {0, 2}}));
    CHECK(hermite_form(IntMatrix::identity(4)).basis == IntMatrix::identity(4));
    CHECK(hermite_form(IntMatrix(3, 3)).basis.rows() == 0);
    CHECK(rank(RatMatrix(3, 3)) == 0);
    // the transform is unimodular and reproduces the basis
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        IntMatrix a = convert<Integer>(rng.int_matrix(4, 3, 9));
        HermiteForm f = hermite_form(a, true);
        CHECK(mp::abs(bareiss_det([&] {
                  std::vector<std::vector<Integer>> u(4, std::vector<Integer>(4));
                  for (std::size_t i = 0; i < 4; ++i)
                      for (std::size_t j = 0; j < 4; ++j) u[i][j] = f.transform(i, j);
                  return u;
              }())) == 1);
        IntMatrix ua = f.transform * a;
        for (std::size_t i = 0; i < f.basis.rows(); ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(ua(i, j) == f.basis(i, j));
    }
}

TEST_CASE("sinnott index: hand cases") {
    CHECK(sinnott_index(RationalLattice::standard(2), RationalLattice(2, rows({{2, 0}, {0, 3}}))) == 6);
    CHECK(sinnott_index(RationalLattice::standard(1), RationalLattice(1, rows({{Rational(3, 2)}}))) == Rational(3, 2));
    CHECK(sinnott_index(RationalLattice(1, rows({{Rational(3, 2)}})), RationalLattice::standard(1)) == Rational(2, 3));
    CHECK(sinnott_index_p(RationalLattice::standard(2), RationalLattice(2, rows({{6, 0}, {0, 2}})), Integer(2)) == 4);
    CHECK(sinnott_index(RationalLattice(2, RatMatrix(0, 2)), RationalLattice(2, RatMatrix(0, 2))) == 1);
}

TEST_CASE("sinnott index: multiplicativity on 200 random triples") {
    Rng rng(2024);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
        RationalLattice l(n, rng.full_rank(n, 6, 4)), m(n, rng.full_rank(n, 6, 4)), k(n, rng.full_rank(n, 6, 4));
        CHECK(sinnott_index(l, k) == sinnott_index(l, m) * sinnott_index(m, k));
        CHECK(sinnott_index(l, m) * sinnott_index(m, l) == 1);
    }
}

TEST_CASE("sinnott index: (M : gamma M) = |det gamma| on 200 random gamma") {
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
        RationalLattice m(n, rng.full_rank(n, 5, 3));
        RatMatrix gamma = rng.full_rank(n, 7, t % 2 ? 3 : 1);
        CHECK(sinnott_index(m, m.image(gamma)) == mp::abs(rational_det(gamma)));
    }
}

TEST_CASE("sinnott index: real mode agrees with exact mode") {
    PrecisionContext ctx(60);
    ScopedPrecision guard(ctx);
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
        RationalLattice a(n, rng.full_rank(n, 6, 3)), b(n, rng.full_rank(n, 6, 3));
        RealIndex ri = sinnott_index(RealLattice::from_exact(a), RealLattice::from_exact(b), ctx);
        Rational ex = sinnott_index(a, b);
        CHECK(mp::abs(ri.value - to_real(ex)) < ctx.tolerance() * (1 + mp::abs(to_real(ex))));
        REQUIRE(ri.rationalized);
        CHECK(*ri.rationalized == ex);
    }
    // different spans are refused
    RealLattice x(to_real(rows({{1, 0, 0}, {0, 1, 0}}))), y(to_real(rows({{1, 0, 0}, {0, 0, 1}})));
    CHECK_THROWS_AS(sinnott_index(x, y, ctx), IncomparableLattices);
}

TEST_CASE("tate cohomology: hand cases") {
    FiniteAbelianGroup c2({2});
    Subgroup g = Subgroup::whole(c2);
    auto chars = enumerate_characters(c2);
    CHECK(tate_h0(g, sign_module(c2, chars[0])) == 2);
    CHECK(tate_h0(g, GModuleLattice::regular(c2)) == 1);
    CHECK(tate_h0(g, permutation_module(c2, Subgroup::trivial(c2))) == 1);  // swap on Z^2
}

TEST_CASE("tate cohomology: brute-force enumeration on 50 random small modules") {
    Rng rng(31337);
    std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup({2}), FiniteAbelianGroup({3}), FiniteAbelianGroup({4}),
                                           FiniteAbelianGroup({2, 2})};
    for (int t = 0; t < 50; ++t) {
        const auto& g = groups[static_cast<std::size_t>(t) % groups.size()];
        GModuleLattice m = random_small_module(rng, g);
        auto subs = all_subgroups(g);
        const Subgroup& h = subs[rng.uniform(0, subs.size() - 1)];
        CHECK_MESSAGE(tate_h0(h, m) == brute_force_h0(h, m), "module " << t << ", |H| = " << h.order());
    }
}

TEST_CASE("semisimplification: hand cases") {
    FiniteAbelianGroup c2({2}), triv;
    CHECK(semisimplify(GModuleLattice::regular(c2)).index == 2);
    CHECK(semisimplify(GModuleLattice::regular(triv, 3)).index == 1);
    // already decomposed: Z(1+s) + Z(1-s)
    GModuleLattice dec = GModuleLattice::regular(c2).submodule(rows({{1, 1}, {1, -1}}));
    CHECK(semisimplify(dec).index == 1);
}

TEST_CASE("semisimplification: (S(M):M) divides |G|^rank on 50 random lattices") {
    Rng rng(99);
    std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup({2}), FiniteAbelianGroup({3}), FiniteAbelianGroup({4}),
                                           FiniteAbelianGroup({2, 2}), FiniteAbelianGroup({6})};
    for (int t = 0; t < 50; ++t) {
        const auto& g = groups[static_cast<std::size_t>(t) % groups.size()];
        GModuleLattice m = t % 2 ? random_small_module(rng, g) : random_module(rng, g, 1 + t % 3 / 2);
        Rational idx = semisimplify(m).index;
        REQUIRE(mp::denominator(idx) == 1);
        Integer bound = mp::pow(Integer(g.order()), static_cast<unsigned>(m.rank()));
        CHECK_MESSAGE(bound % mp::numerator(idx) == 0, "index " << to_string(idx) << " on module " << t);
    }
}

TEST_CASE("exterior powers: hand cases") {
    FiniteAbelianGroup c2({2}), triv;
    // r = 1: the wedge image of Z[G] is a copy of Z[G], already saturated
    WedgeSpace w1 = wedge_image(GModuleLattice::regular(c2), 1);
    CHECK(w1.dimension == 2);
    CHECK(w1.wedge_lattice.lattice() == w1.wedge_lattice.lattice().saturation());
    // G trivial, M = Z^2, r = 2: spanned by e1 ^ e2
    WedgeSpace w2 = wedge_image(GModuleLattice::regular(triv, 2), 2);
    CHECK(w2.dimension == 1);
    CHECK(w2.wedge_lattice.lattice() == RationalLattice::standard(1));
    // G = C2, M = Z[G]^2, r = 2: one dimension per character
    WedgeSpace w3 = wedge_image(GModuleLattice::regular(c2, 2), 2);
    CHECK(w3.dimension == 2);
    CHECK(w3.orbit_dimensions == std::vector<std::size_t>{1, 1});
    CHECK(w3.dimension == w3.predicted_dimension);
}

TEST_CASE("exterior powers: isotypic dimension count on random modules") {
    Rng rng(4);
    for (const auto& g : {FiniteAbelianGroup({2}), FiniteAbelianGroup({3}), FiniteAbelianGroup({2, 2})})
        for (std::size_t copies = 1; copies <= 2; ++copies)
            for (std::size_t r = 1; r <= copies; ++r) {
                WedgeSpace w = wedge_image(random_module(rng, g, copies), r);
                CHECK(w.dimension == w.predicted_dimension);
                CHECK(w.orbit_dimensions == w.orbit_predictions);
            }
}

TEST_CASE("Rubin lattice: degree one of Z[G] is Z[G] for every group of order <= 12") {
    for (const auto& g : abelian_groups_up_to(12)) {
        GModuleLattice m = GModuleLattice::regular(g);
        GModuleLattice rubin = rubin_lattice(m, 1);
        CHECK(rubin.lattice() == wedge_image(m, 1).wedge_lattice.lattice());
        CHECK(rubin.rank() == static_cast<std::size_t>(g.order()));
        CHECK(rubin_vs_wedge_index(m, 1, group_ring_one(g)) == 1);
    }
    FiniteAbelianGroup triv;
    CHECK(rubin_vs_wedge_index(GModuleLattice::regular(triv, 2), 1, group_ring_one(triv)) == 1);
}

TEST_CASE("Rubin lattice: C2, M = Z(2,0) + Z(1,1)") {
    FiniteAbelianGroup c2({2});
    GModuleLattice m = GModuleLattice::regular(c2).submodule(rows({{2, 0}, {1, 1}}));
    REQUIRE(m.rank() == 2);
    WedgeSpace w = wedge_image(m, 1);
    GModuleLattice rubin = rubin_lattice(w);
    // oracle: gcd of maximal minors of the Psi generators
    Integer oracle = gcd_of_maximal_minors(independent_rows(w.generators));
    CHECK(rubin_vs_wedge_index(m, 1, group_ring_one(c2)) == Rational(oracle));
    CHECK(oracle == 1);  // a lattice is its own double dual
}

TEST_CASE("Rubin lattice: contains the wedge lattice with the brute-force index on 30 modules") {
    Rng rng(8675309);
    struct Shape {
        FiniteAbelianGroup g;
        std::size_t copies, r;
    };
    std::vector<Shape> shapes{{FiniteAbelianGroup({2}), 2, 2}, {FiniteAbelianGroup({2}), 2, 1},
                              {FiniteAbelianGroup({3}), 1, 1}, {FiniteAbelianGroup({2, 2}), 1, 1},
                              {FiniteAbelianGroup(), 3, 2},    {FiniteAbelianGroup({4}), 1, 1}};
    for (int t = 0; t < 30; ++t) {
        const Shape& s = shapes[static_cast<std::size_t>(t) % shapes.size()];
        GModuleLattice m = random_module(rng, s.g, s.copies, 3);
        WedgeSpace w = wedge_image(m, s.r);
        GModuleLattice rubin = rubin_lattice(w);
        CHECK(rubin.lattice().contains(w.wedge_lattice.lattice()));
        Rational idx = rubin_vs_wedge_index(m, s.r, group_ring_one(s.g));
        CHECK(idx >= 1);
        Integer g = rubin_index_oracle(w);
        CHECK_MESSAGE(idx == Rational(g), "module " << t << ": engine " << to_string(idx) << ", oracle " << g);
    }
}

TEST_CASE("Rubin lattice: strictly larger than the wedge lattice on 30 non-free modules") {
    Rng rng(271828);
    for (int t = 0; t < 30; ++t) {
        auto [m, r] = constructed_module(rng, t);
        WedgeSpace w = wedge_image(m, r);
        CHECK(rubin_lattice(w).lattice().contains(w.wedge_lattice.lattice()));
        Rational idx = rubin_vs_wedge_index(m, r, group_ring_one(m.group()));
        Integer oracle = rubin_index_oracle(w);
        CHECK(idx > 1);
        CHECK_MESSAGE(idx == Rational(oracle), "module " << t << ": engine " << to_string(idx) << ", oracle " << oracle);
    }
}

TEST_CASE("Rubin lattice: trivial action on Z^2 gives index |G|") {
    // Phi(e1 ^ e2) = det(a) N^2 = |G| det(a) N, so half (third, ...) of e1 ^ e2 pairs integrally
    for (const auto& g : {FiniteAbelianGroup({2}), FiniteAbelianGroup({3}), FiniteAbelianGroup({4})}) {
        GModuleLattice t = permutation_module(g, Subgroup::whole(g));
        CHECK(rubin_vs_wedge_index(direct_sum({t, t}), 2, group_ring_one(g)) == g.order());
    }
}

TEST_CASE("exterior powers: index of a sublattice survives the top wedge on 30 random pairs") {
    Rng rng(1234);
    std::vector<std::pair<FiniteAbelianGroup, std::size_t>> shapes{
        {FiniteAbelianGroup({2}), 2}, {FiniteAbelianGroup({2}), 1}, {FiniteAbelianGroup({3}), 1},
        {FiniteAbelianGroup({4}), 1}, {FiniteAbelianGroup({2, 2}), 1}, {FiniteAbelianGroup(), 4}};
    for (int t = 0; t < 30; ++t) {
        const auto& [g, copies] = shapes[static_cast<std::size_t>(t) % shapes.size()];
        GModuleLattice m = random_module(rng, g, copies, 2);
        GModuleLattice n;
        while (true) {
            n = m.submodule(rng.int_matrix(copies + 1, m.rank(), 3) * m.lattice().basis());
            if (n.rank() == m.rank()) break;
        }
        WedgeCoordinates coords(m, copies);
        WedgeSpace wm = wedge_image(coords, m), wn = wedge_image(coords, n);
        CHECK_MESSAGE(sinnott_index(m.lattice(), n.lattice()) ==
                          sinnott_index(wm.wedge_lattice.lattice(), wn.wedge_lattice.lattice()),
                      "pair " << t);
    }
}
