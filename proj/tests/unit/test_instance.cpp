#include "support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

Real log_eps5() { return mp::log((1 + mp::sqrt(Real(5))) / 2); }

std::string replace_after(std::string text, const std::string& anchor, const std::string& from, const std::string& to) {
    std::size_t a = text.find(anchor);
    REQUIRE(a != std::string::npos);
    std::size_t p = text.find(from, a);
    REQUIRE(p != std::string::npos);
    return text.replace(p, from.size(), to);
}

std::string load_error(const std::string& text) {
    try {
        parse_field_instance(text, PrecisionContext(60));
    } catch (const InstanceError& e) {
        return e.what();
    }
    return "";
}

RatVector unit_vector(std::size_t n, std::size_t i) {
    RatVector v(n, Rational(0));
    v[i] = 1;
    return v;
}

} // namespace

TEST_CASE("loading Q(sqrt 5)") {
    const FieldInstance& fi = instance("q-sqrt5.json");
    CHECK(fi.genuine);
    CHECK(fi.order() == 2);
    CHECK(fi.r == 1);
    CHECK(fi.unit_rank == 3);  // eps, sqrt 5, 7
    CHECK(fi.hypotheses().passed());
    CHECK(fi.u_inf.rank() == 1);
    CHECK(fi.t_torsion_free);
    CHECK(fi.class_number(Subgroup::trivial(fi.group())) == Integer(1));
}

TEST_CASE("loader rejects a non-unit") {
    const std::string good = slurp(data_path("q-sqrt5.json"));
    CHECK(load_error(good).empty());
    // "seven" becomes 2, which is not a unit away from 5 and 7
    std::string bad = replace_after(good, "\"seven\"", "\"7\"", "\"2\"");
    std::string err = load_error(bad);
    CHECK(err.find("not an S-unit") != std::string::npos);
}

TEST_CASE("loader rejects a Frobenius that disagrees with the embeddings") {
    const std::string good = slurp(data_path("q-sqrt5.json"));
    // 7 is inert, so claiming Frob_7 = 1 must fail
    std::string bad = replace_after(good, "\"s_prime\"", "\"norm\": \"7\"", "\"norm\": \"7\", \"frobenius\": 1");
    std::string err = load_error(bad);
    CHECK(err.find("Frobenius at 7") != std::string::npos);
}

TEST_CASE("log embedding and R_w on Q(sqrt 5)") {
    const FieldInstance& fi = instance("q-sqrt5.json", 60);
    ScopedPrecision guard(fi.ctx);
    const Real tol = fi.ctx.tolerance();
    RatVector eps = unit_vector(fi.unit_rank, 0);
    std::vector<Real> l = log_embedding(fi, eps);
    REQUIRE(l.size() == 2 + fi.finite_places.size());
    // coordinates carry the regulator sign: -log|sigma_t^-1 eps|
    CHECK(mp::abs(l[0] + log_eps5()) < tol);
    CHECK(mp::abs(l[1] - log_eps5()) < tol);
    for (std::size_t i = 2; i < l.size(); ++i) CHECK(mp::abs(l[i]) < tol);
    // product formula for 7: 2 log 7 at infinity against -log 49 at the place above 7
    std::vector<Real> l7 = log_embedding(fi, unit_vector(fi.unit_rank, 2));
    Real sum = 0;
    for (const auto& x : l7) sum += x;
    CHECK(mp::abs(sum) < tol);

    // R(eps) = -log|eps| - log|eps^sigma| sigma = -log eps (1 - sigma)
    std::vector<RealGroupRing> r = regulator_components(fi, eps);
    REQUIRE(r.size() == 1);
    CHECK(mp::abs(r[0][0] + log_eps5()) < tol);
    CHECK(mp::abs(r[0][1] - log_eps5()) < tol);
}

TEST_CASE("classical regulators") {
    const FieldInstance& f5 = instance("q-sqrt5.json", 60);
    const FieldInstance& f2 = instance("q-sqrt2.json", 60);
    ScopedPrecision guard(f5.ctx);
    const Real tol = f5.ctx.tolerance();
    CHECK(classical_regulator(f5, Subgroup::whole(f5.group())).value == 1);
    SubfieldRegulator k5 = classical_regulator(f5, Subgroup::trivial(f5.group()));
    CHECK(mp::abs(k5.value - log_eps5()) < tol);
    CHECK(mp::abs(k5.minor_determinant - log_eps5()) < tol);
    SubfieldRegulator k2 = classical_regulator(f2, Subgroup::trivial(f2.group()));
    CHECK(mp::abs(k2.value - mp::log(1 + mp::sqrt(Real(2)))) < tol);
}

TEST_CASE("restriction of R_w to subfields") {
    const FieldInstance& fi = instance("q-sqrt5.json", 60);
    std::mt19937_64 rng(7);
    for (const auto& h : all_subgroups(fi.group())) {
        RestrictionCheck c = restricted_regulator_check(fi, h, 20, rng);
        CHECK(c.residual < fi.ctx.tolerance());
    }
}

TEST_CASE("c constants of Q(sqrt 5)") {
    const FieldInstance& fi = instance("q-sqrt5.json", 60);
    CHECK(tate_h0_with_torsion(fi, Subgroup::trivial(fi.group())) == 1);
    CConstant one = c_constant(fi, Subgroup::trivial(fi.group()));
    CHECK(one.value > 0);
    // U_{S_inf} = +-eps^Z: the invariants +-1 are all norms (N eps = -1), so H^0 is trivial
    CHECK(tate_h0_with_torsion(fi, Subgroup::whole(fi.group())) == 1);
}

TEST_CASE("Stark elements of the quadratic instances") {
    struct Expect {
        std::string file, label;
        std::vector<Integer> exponents;
        bool negative;
    };
    const std::vector<Expect> table = {
        {"q-sqrt5.json", "(1)", {0, 0, -1}, false},
        {"q-sqrt5.json", "5", {-4, 0, 0}, true},
        {"q-sqrt2.json", "(1)", {0, 0, -2}, true},
        {"q-sqrt2.json", "2", {-6, 0, 0}, true},
    };
    for (const auto& t : table) {
        const FieldInstance& fi = instance(t.file);
        CycleDivisor g = t.label == "(1)" ? CycleDivisor::of({}) : CycleDivisor::of({t.label});
        StarkElement eta = solve_stark_element(fi, g);
        INFO(t.file << " g = " << t.label);
        CHECK(eta.exact);
        CHECK(eta.exponents == t.exponents);
        CHECK(eta.negative == t.negative);
        CHECK(eta.residual < fi.ctx.tolerance());
        CHECK(eta.rounding_distance < fi.ctx.tolerance());
    }
}

TEST_CASE("synthetic instance") {
    const FieldInstance& fi = instance("synthetic-c2xc2-r2.json");
    CHECK(!fi.genuine);
    CHECK(fi.r == 2);
    CHECK(fi.order() == 4);
    CHECK(fi.hypotheses().passed());
    CHECK_THROWS_AS(classical_regulator(fi, Subgroup::trivial(fi.group())), std::invalid_argument);
    for (const auto& g : divisors_of_radical(fi.ext)) {
        StarkElement eta = solve_stark_element(fi, g);
        CHECK(!eta.exact);
        CHECK(eta.residual < fi.ctx.tolerance());
    }
}

TEST_CASE("bad torsion instance fails hypothesis (4)") {
    const FieldInstance& fi = instance("bad-torsion.json");
    HypothesisReport h = fi.hypotheses();
    CHECK(!h.passed());
    CHECK(h.first_failure().find("(4)") != std::string::npos);
}
