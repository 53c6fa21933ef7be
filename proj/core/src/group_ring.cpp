#include "rstark/group_ring.hpp"

namespace rstark {

RationalGroupRing group_ring_zero(const FiniteAbelianGroup& g) { return RationalGroupRing(g, Rational(0)); }

RationalGroupRing group_ring_one(const FiniteAbelianGroup& g) { return group_element(g, g.identity()); }

RationalGroupRing group_element(const FiniteAbelianGroup& g, const Element& a) {
    RationalGroupRing x(g, Rational(0));
    x.at(a) = 1;
    return x;
}

CyclotomicGroupRing idempotent(const Character& chi) {
    const auto& g = chi.group();
    const std::int64_t m = g.exponent();
    CyclotomicGroupRing e(g, Cyclotomic(m));
    Rational inv_order(1, g.order());
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.order()); ++i) {
        Element s = g.element_at(i);
        // coefficient of sigma^{-1} is chi(sigma)/|G|
        e.at(g.negate(s)) = Cyclotomic::zeta_power(m, chi.exponent_at(s)) * inv_order;
    }
    return e;
}

RationalGroupRing rational_part(const CyclotomicGroupRing& x) {
    return x.map<Rational>([](const Cyclotomic& c) { return c.to_rational(); });
}

RationalGroupRing orbit_idempotent(const RationalCharacterOrbit& orbit) {
    const auto& g = orbit.representative.group();
    CyclotomicGroupRing sum(g, Cyclotomic(g.exponent()));
    for (const auto& chi : orbit.members) sum += idempotent(chi);
    return rational_part(sum);
}

RationalGroupRing norm_element(const Subgroup& t) {
    RationalGroupRing x(t.parent(), Rational(0));
    for (auto i : t.element_indices()) x[i] = 1;
    return x;
}

RationalGroupRing inertia_idempotent(const Subgroup& i) {
    RationalGroupRing x = norm_element(i);
    x.scale(Rational(1, static_cast<long>(i.order())));
    return x;
}

Cyclotomic character_value(const RationalGroupRing& x, const Character& chi) {
    const auto& g = x.group();
    const std::int64_t m = g.exponent();
    std::vector<Rational> by_power(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.order()); ++i)
        if (x[i] != 0) by_power[static_cast<std::size_t>(chi.exponent_at(g.element_at(i)))] += x[i];
    Cyclotomic v(m);
    for (std::size_t j = 0; j < by_power.size(); ++j)
        if (by_power[j] != 0) v += Cyclotomic::zeta_power(m, static_cast<std::int64_t>(j)) * by_power[j];
    return v;
}

Cyclotomic character_value(const CyclotomicGroupRing& x, const Character& chi) {
    const auto& g = x.group();
    const std::int64_t m = g.exponent();
    Cyclotomic v(m);
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.order()); ++i)
        if (!x[i].is_zero()) v += x[i] * Cyclotomic::zeta_power(m, chi.exponent_at(g.element_at(i)));
    return v;
}

Complex character_value(const RealGroupRing& x, const Character& chi) {
    const auto& g = x.group();
    Complex v;
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.order()); ++i) {
        if (x[i] == 0) continue;
        Complex z = chi.evaluate(g.element_at(i));
        v += Complex(z.re * x[i], z.im * x[i]);
    }
    return v;
}

RatMatrix multiplication_matrix(const RationalGroupRing& x) {
    const auto& g = x.group();
    const std::size_t n = static_cast<std::size_t>(g.order());
    RatMatrix a(n, n);
    for (std::size_t gi = 0; gi < n; ++gi) {
        Element ge = g.element_at(gi);
        for (std::size_t xi = 0; xi < n; ++xi)
            if (x[xi] != 0) a(gi, g.index_of(g.add(ge, g.element_at(xi)))) += x[xi];
    }
    return a;
}

RealMatrix multiplication_matrix(const RealGroupRing& x) {
    const auto& g = x.group();
    const std::size_t n = static_cast<std::size_t>(g.order());
    RealMatrix a(n, n);
    for (std::size_t gi = 0; gi < n; ++gi) {
        Element ge = g.element_at(gi);
        for (std::size_t xi = 0; xi < n; ++xi)
            if (x[xi] != 0) a(gi, g.index_of(g.add(ge, g.element_at(xi)))) += x[xi];
    }
    return a;
}

RationalGroupRing inverse(const RationalGroupRing& x) {
    RatMatrix a = multiplication_matrix(x);
    RatMatrix one(1, a.cols());
    one(0, 0) = 1;  // identity is enumerated first
    RatMatrix y = one * rstark::inverse(a);
    return RationalGroupRing(x.group(), y.row(0));
}

RealGroupRing to_real(const RationalGroupRing& x) {
    return x.map<Real>([](const Rational& q) { return to_real(q); });
}

namespace {
std::string element_label(const FiniteAbelianGroup& g, std::size_t i) {
    Element e = g.element_at(i);
    std::string s = "[";
    for (std::size_t k = 0; k < e.size(); ++k) s += (k ? "," : "") + std::to_string(e[k]);
    return s + "]";
}
} // namespace

std::string to_string(const RationalGroupRing& x) {
    std::string out;
    for (std::size_t i = 0; i < x.coefficients().size(); ++i) {
        if (x[i] == 0) continue;
        if (!out.empty()) out += " + ";
        out += "(" + to_string(x[i]) + ")" + element_label(x.group(), i);
    }
    return out.empty() ? "0" : out;
}

std::string to_string(const RealGroupRing& x, unsigned digits) {
    std::string out;
    for (std::size_t i = 0; i < x.coefficients().size(); ++i) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(x[i], digits) + ")" + element_label(x.group(), i);
    }
    return out.empty() ? "0" : out;
}

} // namespace rstark
