// Identities whose expected value is known without computation. Run by `rstark selftest`.

#include "rstark/verify.hpp"

#include <random>

namespace rstark {

namespace mp = boost::multiprecision;

namespace {

// Q(sqrt 5)/Q with S = {inf, 5, 7}, T = {3}: 7 and 3 are inert, 5 ramifies totally
ExtensionData sqrt5_data(std::vector<PlaceData> extra = {}) {
    FiniteAbelianGroup c2({2});
    Subgroup g = Subgroup::whole(c2), one = Subgroup::trivial(c2);
    ExtensionData ext;
    ext.group = c2;
    ext.r = 1;
    ext.ramified = {{"5", Integer(5), g, g, {0}}};
    ext.s_prime = {{"7", Integer(7), one, g, {1}}};
    for (auto& p : extra) ext.s_prime.push_back(p);
    ext.t = {{"3", Integer(3), one, g, {1}}};
    ext.torsion_order = 2;
    return ext;
}

RationalGroupRing c2_element(const Rational& a, const Rational& b) {
    return RationalGroupRing(FiniteAbelianGroup({2}), std::vector<Rational>{a, b});
}

GModuleLattice rank_one(const FiniteAbelianGroup& g, int sign) {
    std::vector<RatMatrix> acts;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        RatMatrix a(1, 1);
        a(0, 0) = sign;
        acts.push_back(a);
    }
    return GModuleLattice(g, acts, RationalLattice::standard(1));
}

struct Suite {
    ReportSection sec;
    void expect(const std::string& id, bool ok, const std::string& detail = "") {
        sec.check(id, "consistency", id, ok, detail);
    }
    template <class F>
    void run(const std::string& id, F f) {
        try {
            f();
        } catch (const std::exception& e) {
            sec.check(id, "consistency", id, false, std::string("threw: ") + e.what());
        }
    }
};

void algebra_suite(Suite& s) {
    FiniteAbelianGroup c2({2}), c4({4}), v4({2, 2}), c6({6});
    s.run("characters of C2", [&] {
        auto ch = enumerate_characters(c2);
        s.expect("characters of C2", ch.size() == 2 && ch[0].is_trivial() && ch[1].exponent_at({1}) == 1);
    });
    s.run("characters of C2 x C2 are real", [&] {
        auto ch = enumerate_characters(v4);
        bool ok = ch.size() == 4;
        for (const auto& c : ch) ok = ok && c.is_real();
        s.expect("characters of C2 x C2 are real", ok);
    });
    s.run("quotient C4 / C2", [&] {
        Quotient q = quotient_and_projection(c4, Subgroup(c4, {{2}}));
        s.expect("quotient C4 / C2", q.target.order() == 2 && q.coset_reps.size() == 2 && q.kernel.order() == 2 &&
                                         c4.is_identity(q.coset_reps[0]));
    });
    s.run("quotient by the whole group", [&] {
        Quotient q = quotient_and_projection(c6, Subgroup::whole(c6));
        s.expect("quotient by the whole group", q.target.order() == 1 && q.coset_reps.size() == 1);
    });
    s.run("rational orbits of C6", [&] {
        auto o = rational_orbits(c6);
        std::vector<std::size_t> sizes;
        for (const auto& x : o) sizes.push_back(x.size());
        std::sort(sizes.begin(), sizes.end());
        s.expect("rational orbits of C6", sizes == std::vector<std::size_t>{1, 1, 2, 2});
    });
    s.run("idempotents of C2", [&] {
        auto ch = enumerate_characters(c2);
        bool ok = rational_part(idempotent(ch[0])) == c2_element(Rational(1, 2), Rational(1, 2)) &&
                  rational_part(idempotent(ch[1])) == c2_element(Rational(1, 2), Rational(-1, 2));
        s.expect("idempotents of C2", ok);
    });
    s.run("orbit idempotents sum to 1", [&] {
        for (const auto& g : {c2, c4, v4, c6}) {
            RationalGroupRing sum = group_ring_zero(g);
            for (const auto& o : rational_orbits(g)) sum += orbit_idempotent(o);
            if (sum != group_ring_one(g)) {
                s.expect("orbit idempotents sum to 1", false, "fails on a group of order " + std::to_string(g.order()));
                return;
            }
        }
        s.expect("orbit idempotents sum to 1", true);
    });
    s.run("inertia idempotents", [&] {
        bool ok = inertia_idempotent(Subgroup::trivial(c2)) == group_ring_one(c2) &&
                  inertia_idempotent(Subgroup::whole(c2)) == c2_element(Rational(1, 2), Rational(1, 2)) &&
                  norm_element(Subgroup::whole(c2)) == c2_element(1, 1);
        s.expect("inertia idempotents", ok);
    });
    s.run("projection to the trivial quotient", [&] {
        Quotient q = quotient_and_projection(c2, Subgroup::whole(c2));
        RationalGroupRing x = project_to_quotient(c2_element(3, 4), q);
        s.expect("projection to the trivial quotient", x[0] == 7);
    });
    s.run("sinnott index of diag(2, 3)", [&] {
        RatMatrix d(2, 2);
        d(0, 0) = 2;
        d(1, 1) = 3;
        s.expect("sinnott index of diag(2, 3)",
                 sinnott_index(RationalLattice::standard(2), RationalLattice(2, d)) == 6);
    });
    s.run("sinnott index of a superlattice", [&] {
        RatMatrix d(1, 1);
        d(0, 0) = Rational(1, 3);
        s.expect("sinnott index of a superlattice",
                 sinnott_index(RationalLattice::standard(1), RationalLattice(1, d)) == Rational(1, 3));
    });
    s.run("sinnott index of empty lattices", [&] {
        s.expect("sinnott index of empty lattices",
                 sinnott_index(RationalLattice(3, RatMatrix(0, 3)), RationalLattice(3, RatMatrix(0, 3))) == 1);
    });
    s.run("tate cohomology of Z, Z(-1), Z[C2]", [&] {
        Subgroup g = Subgroup::whole(c2);
        bool ok = tate_h0(g, rank_one(c2, 1)) == 2 && tate_h0(g, rank_one(c2, -1)) == 1 &&
                  tate_h0(g, GModuleLattice::regular(c2)) == 1;
        s.expect("tate cohomology of Z, Z(-1), Z[C2]", ok);
    });
    s.run("semisimplification", [&] {
        bool ok = semisimplify(rank_one(c2, 1)).index == 1 && semisimplify(GModuleLattice::regular(c2)).index == 2;
        s.expect("semisimplification", ok, "(S(Z):Z) = 1, (S(Z[C2]):Z[C2]) = 2");
    });
    s.run("Rubin lattice of Z[G] in degree 1", [&] {
        bool ok = true;
        for (const auto& g : {c2, v4, c6}) {
            GModuleLattice m = GModuleLattice::regular(g);
            ok = ok && rubin_lattice(m, 1).lattice().rank() == m.rank() &&
                 rubin_vs_wedge_index(m, 1, group_ring_one(g)) == 1;
        }
        s.expect("Rubin lattice of Z[G] in degree 1", ok);
    });
    s.run("hermite form of the identity", [&] {
        IntMatrix id = IntMatrix::identity(3);
        s.expect("hermite form of the identity", hermite_form(id).basis == id);
    });
}

void arithmetic_suite(Suite& s, const PrecisionContext& ctx) {
    ExtensionData ext = sqrt5_data();
    const auto& c2 = ext.group;
    auto ch = enumerate_characters(c2);
    s.run("order of vanishing", [&] {
        FiniteAbelianGroup g = c2;
        ExtensionData bigger = sqrt5_data({{"11", Integer(11), Subgroup::trivial(g), Subgroup::trivial(g), {0}}});
        bool ok = order_of_vanishing(ch[0], ext) == 2 && order_of_vanishing(ch[1], ext) == 1 &&
                  order_of_vanishing(ch[1], bigger) == 2;
        s.expect("order of vanishing", ok, "r_S(1) = |S| - 1; a split prime raises r_S(chi)");
    });
    s.run("e_{S,r}", [&] {
        bool ok = e_S_r(ext, 1) == c2_element(Rational(1, 2), Rational(-1, 2)) &&
                  e_S_r(ext, 5) == group_ring_zero(c2);
        s.expect("e_{S,r}", ok);
    });
    s.run("delta_T", [&] { s.expect("delta_T", delta_T(ext) == c2_element(1, -3), "1 - 3 sigma"); });
    s.run("hypotheses", [&] {
        ExtensionData no_t = ext;
        no_t.t.clear();
        HypothesisReport bad = check_hypotheses(no_t, 1);
        s.expect("hypotheses", check_hypotheses(ext, 1).passed() && !bad.passed(),
                 "T empty fails: " + bad.first_failure());
    });
    s.run("inertia span", [&] {
        s.expect("inertia span", inertia_span(CycleDivisor::of({"5"}), ext).order() == 2 &&
                                     inertia_span(CycleDivisor::of({}), ext).order() == 1);
    });
    s.run("divisors of the radical", [&] {
        auto d = divisors_of_radical(ext);
        s.expect("divisors of the radical", d.size() == 2 && d[0].primes.empty());
    });
    s.run("subfields K_g and K_I", [&] {
        bool ok = subfield_K_g(CycleDivisor::of({"5"}), ext).h.order() == 1 &&
                  subfield_K_g(CycleDivisor::of({}), ext).h.order() == 2 && subfield_K_I({0}, ext).h.order() == 2;
        s.expect("subfields K_g and K_I", ok);
    });
    s.run("primitive parts", [&] {
        auto all = dirichlet_characters(15);
        bool ok = primitive_part(all[0]).conductor == 1;
        auto q5 = quadratic_character(5);
        ok = ok && q5 && primitive_part(*q5).conductor == 5;
        s.expect("primitive parts", ok);
    });
    s.run("zeta at 0", [&] {
        ScopedPrecision guard(ctx);
        Real a = zeta_at_0();
        Real b = zeta_star_from_class_number(Integer(1), Real(1), 2);
        s.expect("zeta at 0", a == Real(-1) / 2 && b == a, "zeta(0) = -1/2 = -h Reg / w for Q");
    });
    s.run("trivial group ring determinant", [&] {
        ScopedPrecision guard(ctx);
        RealGroupRing z(c2, Real(0));
        RealGroupRing d = group_ring_determinant({{z}});
        s.expect("trivial group ring determinant", d[0] == 0 && d[1] == 0);
    });
}

void instance_suite(Suite& s, const FieldInstance& fi) {
    ScopedPrecision guard(fi.ctx);
    const auto& g = fi.group();
    s.run("instance: hypotheses", [&] { s.expect("instance: hypotheses", fi.hypotheses().passed()); });
    s.run("instance: e is idempotent", [&] {
        RationalGroupRing e = e_S_r(fi.ext, fi.r);
        s.expect("instance: e is idempotent", e * e == e);
    });
    s.run("instance: log embedding of 1", [&] {
        auto v = log_embedding(fi, RatVector(fi.unit_rank, Rational(0)));
        bool ok = true;
        for (const auto& x : v) ok = ok && x == 0;
        s.expect("instance: log embedding of 1", ok);
    });
    s.run("instance: restriction with trivial H", [&] {
        std::mt19937_64 rng(7);
        auto rc = restricted_regulator_check(fi, Subgroup::trivial(g), 5, rng);
        s.expect("instance: restriction with trivial H", rc.residual < fi.ctx.tolerance());
    });
    s.run("instance: H^0 of the trivial subgroup", [&] {
        s.expect("instance: H^0 of the trivial subgroup", tate_h0_with_torsion(fi, Subgroup::trivial(g)) == 1);
    });
    if (fi.genuine) {
        s.run("instance: Reg of the base field", [&] {
            s.expect("instance: Reg of the base field", classical_regulator(fi, Subgroup::whole(g)).value == 1);
        });
    }
}

} // namespace

VerificationReport selftest_report(const PrecisionContext& ctx, const FieldInstance* fi) {
    ScopedPrecision guard(ctx);
    VerificationReport rep;
    rep.command = "selftest";
    rep.instance = fi ? fi->name : "built-in";
    rep.precision = ctx.digits;
    Suite a, b;
    a.sec.id = "algebra";
    a.sec.title = "groups, group rings and lattices";
    algebra_suite(a);
    b.sec.id = "arithmetic";
    b.sec.title = "extension data and L-function bookkeeping";
    arithmetic_suite(b, ctx);
    rep.sections.push_back(a.sec);
    rep.sections.push_back(b.sec);
    if (fi) {
        Suite c;
        c.sec.id = "instance";
        c.sec.title = "instance-level identities";
        instance_suite(c, *fi);
        rep.sections.push_back(c.sec);
    }
    return rep;
}

} // namespace rstark
