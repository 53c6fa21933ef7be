#include "rstark/stark.hpp"

#include <algorithm>
#include <sstream>

namespace rstark {

namespace mp = boost::multiprecision;

namespace {

Real max_abs(const std::vector<Real>& v) {
    Real m = 0;
    for (const auto& x : v) m = std::max(m, Real(mp::abs(x)));
    return m;
}

} // namespace

RationalGroupRing lift_from_quotient(const RationalGroupRing& x, const Quotient& q) {
    const auto& g = q.source;
    RationalGroupRing out = group_ring_zero(g);
    const Rational h(static_cast<std::int64_t>(q.kernel.order()));
    for (std::size_t t = 0; t < static_cast<std::size_t>(g.order()); ++t)
        out[t] = x.at(q.project(g.element_at(t))) / h;
    return out;
}

std::vector<std::vector<Real>> orbit_vectors(const RealGroupRing& x, const RationalGroupRing& e) {
    const auto& g = x.group();
    RealGroupRing ex = to_real(e) * x;
    std::vector<std::vector<Real>> out;
    for (const auto& s : g.elements()) out.push_back((to_real(group_element(g, s)) * ex).coefficients());
    return out;
}

RecognizedSpan recognize_span(const RealMatrix& ref, const std::vector<std::vector<Real>>& gens,
                              const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const Real tau = ctx.tolerance();
    const std::size_t d = ref.rows();
    RecognizedSpan out;
    out.fit_residual = 0;
    RatMatrix coords(0, d);
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const auto& v = gens[j];
        std::vector<Real> c = least_squares_left(ref, v);
        std::vector<Real> back(ref.cols(), Real(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t t = 0; t < ref.cols(); ++t) back[t] += c[i] * ref(i, t);
        for (std::size_t t = 0; t < back.size(); ++t) back[t] -= v[t];
        Real rel = max_abs(back) / std::max(Real(1), max_abs(v));
        out.fit_residual = std::max(out.fit_residual, rel);
        if (rel >= tau) {
            out.detail = "generator " + std::to_string(j) + " lies outside the reference span (residual " +
                         to_string(rel, 3) + ")";
            return out;
        }
        RatVector row(d);
        for (std::size_t i = 0; i < d; ++i) {
            auto q = rationalize(c[i], tau * std::max(Real(1), Real(mp::abs(c[i]))));
            if (!q) {
                out.detail = "coordinate " + std::to_string(i) + " of generator " + std::to_string(j) +
                             " is not recognized as a rational number (" + to_string(c[i], 20) + ")";
                return out;
            }
            row[i] = *q;
        }
        coords.append_row(row);
    }
    out.coordinates = RationalLattice(d, coords);
    if (out.coordinates.rank() != d) {
        out.detail = "span has rank " + std::to_string(out.coordinates.rank()) + " < " + std::to_string(d);
        return out;
    }
    out.basis = to_real(out.coordinates.basis()) * ref;
    out.index_in_reference = sinnott_index(RationalLattice::standard(d), out.coordinates);
    out.ok = true;
    return out;
}

StarkElement solve_stark_element(const FieldInstance& fi, const CycleDivisor& g) {
    ScopedPrecision guard(fi.ctx);
    const Real tau = fi.ctx.tolerance();
    const auto& grp = fi.group();
    const std::size_t n = fi.order();
    SubExtension sub = subfield_K_g(g, fi.ext);

    StarkElement out;
    out.g = g;
    out.subfield = sub.label;
    out.h = sub.h;
    LContext lc{fi.lvalues.get(), &sub.quotient};
    out.theta_f = stickelberger_leading(sub.ext, fi.r, lc, fi.ctx);
    const Real hpow = mp::pow(Real(sub.h.order()), static_cast<int>(fi.r) - 1);
    out.target = RealGroupRing(grp, Real(0));
    for (std::size_t t = 0; t < n; ++t) out.target[t] = hpow * out.theta_f.at(sub.quotient.project(grp.element_at(t)));

    if (!fi.genuine) {
        out.regulator = out.target;
        out.residual = 0;
        out.rounding_distance = 0;
        out.certificate = "built from the supplied leading values; no rounding involved";
        return out;
    }
    if (fi.r != 1) throw StarkError("genuine Stark elements are only solved for r = 1");

    const std::size_t k = fi.unit_rank;
    RationalLattice b = fi.subfield_st_units(sub);
    const std::size_t m = b.rank();
    if (m == 0) throw StarkError(sub.label + ": U_{S_g,T} is trivial");
    // eta must lie in the e_{S_g,r}-part, where the infinite logarithm is injective
    RationalGroupRing e = lift_from_quotient(e_S_r(sub.ext, fi.r), sub.quotient);
    RatMatrix off = RatMatrix::identity(k) - fi.module(fi.u_st).action(e);
    RatMatrix bo = b.basis() * off;
    RealMatrix bl = to_real(b.basis()) * fi.log_inf;
    RealMatrix a(m, n + k);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t t = 0; t < n; ++t) a(i, t) = bl(i, t);
        for (std::size_t c = 0; c < k; ++c) a(i, n + c) = to_real(bo(i, c));
    }
    std::vector<Real> rhs(n + k, Real(0));
    for (std::size_t t = 0; t < n; ++t) rhs[t] = out.target[t];
    std::vector<Real> y;
    try {
        y = least_squares_left(a, rhs);
    } catch (const std::domain_error&) {
        throw StarkError(sub.label + ": regulator is not injective on the e-part of U_{S_g,T}");
    }
    out.rounding_distance = 0;
    RatVector yi(m);
    for (std::size_t i = 0; i < m; ++i) {
        Integer z = round_to_integer(y[i]);
        out.rounding_distance = std::max(out.rounding_distance, Real(mp::abs(y[i] - Real(z))));
        yi[i] = Rational(z);
    }
    RatVector x = b.basis().left_apply(yi);
    for (const auto& c : x) {
        if (mp::denominator(c) != 1) throw StarkError(sub.label + ": non-integral exponent vector");
        out.exponents.push_back(mp::numerator(c));
    }
    for (const auto& z : out.exponents)
        if (mp::abs(z) > 20)
            throw StarkError(sub.label + ": exponent " + z.str() + " exceeds the sanity bound 20");
    auto sign = fi.t_sign(out.exponents);
    if (!sign) throw StarkError(sub.label + ": neither sign makes the element congruent to 1 modulo T");
    out.negative = *sign;
    out.exact = true;

    NumberField::Elt eta = fi.unit_element(out.exponents, out.negative);
    for (const auto& h : sub.h.generators()) {
        NumberField::Elt moved = fi.field.compose(eta, fi.sigma_theta[grp.index_of(h)]);
        if (!fi.field.is_zero(fi.field.sub(moved, eta)))
            throw StarkError(sub.label + ": recognized element is not fixed by Gal(K/" + sub.label + ")");
    }
    out.regulator = RealGroupRing(grp, Real(0));
    for (std::size_t t = 0; t < n; ++t)
        out.regulator[t] = -mp::log(mp::abs(fi.embed(eta, grp.index_of(grp.negate(grp.element_at(t))))));
    RealGroupRing diff = out.regulator - out.target;
    out.residual = max_abs(diff.coefficients()) / std::max(Real(1), max_abs(out.target.coefficients()));

    std::ostringstream cert;
    cert << "coordinates on a basis of U_{S_g,T}(" << sub.label << ") rounded at distance "
         << to_string(out.rounding_distance, 3) << "; exact element fixed by Gal(K/" << sub.label
         << ") and congruent to 1 modulo T; R_w residual " << to_string(out.residual, 3);
    out.certificate = cert.str();
    if (out.rounding_distance >= tau || out.residual >= tau)
        throw StarkError(sub.label + ": Stark element not recognized at this precision (rounding distance " +
                         to_string(out.rounding_distance, 3) + ", residual " + to_string(out.residual, 3) +
                         "); raise the precision and retry");
    return out;
}

StarkModule build_stark_module(const FieldInstance& fi, const RegulatorMap& reg) {
    StarkModule st;
    for (const auto& g : divisors_of_radical(fi.ext)) st.elements.push_back(solve_stark_element(fi, g));
    st.exact = fi.genuine;
    if (!st.exact) return st;
    st.psi_generators = RatMatrix(0, reg.coords().dimension());
    for (const auto& el : st.elements) {
        RatVector x(el.exponents.begin(), el.exponents.end());
        st.psi_generators.append_row(reg.coords().psi({x}));
    }
    st.lattice = reg.wedges().wedge_lattice.submodule(st.psi_generators);
    return st;
}

} // namespace rstark
