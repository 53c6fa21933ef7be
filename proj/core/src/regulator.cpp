#include "rstark/regulator.hpp"

#include <algorithm>

namespace rstark {

namespace mp = boost::multiprecision;

namespace {

std::vector<Real> times(const RatVector& x, const RealMatrix& m) {
    std::vector<Real> out(m.cols(), Real(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Real c = to_real(x[i]);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += c * m(i, j);
    }
    return out;
}

Real max_coefficient(const RealGroupRing& x) {
    Real m = 0;
    for (const auto& c : x.coefficients()) m = std::max(m, Real(mp::abs(c)));
    return m;
}

} // namespace

std::vector<Real> log_embedding(const FieldInstance& fi, const RatVector& x) {
    ScopedPrecision guard(fi.ctx);
    std::vector<Real> out = times(x, fi.log_inf);
    std::vector<Real> fin = times(x, fi.log_fin);
    out.insert(out.end(), fin.begin(), fin.end());
    return out;
}

std::vector<RealGroupRing> regulator_components(const FieldInstance& fi, const RatVector& x) {
    ScopedPrecision guard(fi.ctx);
    const std::size_t n = fi.order();
    std::vector<Real> v = times(x, fi.log_inf);
    std::vector<RealGroupRing> out;
    for (std::size_t j = 0; j < fi.r; ++j)
        out.emplace_back(fi.group(), std::vector<Real>(v.begin() + static_cast<std::ptrdiff_t>(j * n),
                                                       v.begin() + static_cast<std::ptrdiff_t>((j + 1) * n)));
    return out;
}

RealGroupRing group_ring_determinant(const std::vector<std::vector<RealGroupRing>>& m) {
    const std::size_t r = m.size();
    if (r == 0) throw std::invalid_argument("empty determinant needs a group");
    if (r == 1) return m[0][0];
    RealGroupRing acc(m[0][0].group(), Real(0));
    for (std::size_t c = 0; c < r; ++c) {
        std::vector<std::vector<RealGroupRing>> minor;
        for (std::size_t i = 1; i < r; ++i) {
            std::vector<RealGroupRing> row;
            for (std::size_t j = 0; j < r; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(row);
        }
        RealGroupRing term = m[0][c] * group_ring_determinant(minor);
        if (c % 2) acc -= term;
        else acc += term;
    }
    return acc;
}

// ---------------- RegulatorMap ----------------

RegulatorMap::RegulatorMap(const FieldInstance& fi, const GModuleLattice& m, std::size_t r)
    : fi_(&fi), r_(r), coords_(m, r), wedges_(wedge_image(coords_, m)) {
    ScopedPrecision guard(fi.ctx);
    const RatMatrix& gens = wedges_.generators;
    const RatMatrix& basis = m.lattice().basis();
    independent_ = RatMatrix(0, gens.cols());
    std::size_t rk = 0;
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        RatMatrix trial = independent_;
        trial.append_row(gens.row(i));
        std::size_t nr = rank(trial);
        if (nr == rk) continue;
        independent_ = trial;
        rk = nr;
        std::vector<RatVector> vs;
        for (auto b : wedges_.basis_subsets[i]) vs.push_back(basis.row(b));
        values_.push_back(of_vectors(vs));
    }
}

RealGroupRing RegulatorMap::of_vectors(const std::vector<RatVector>& v) const {
    ScopedPrecision guard(fi_->ctx);
    if (v.size() != r_) throw std::invalid_argument("R_w needs exactly r vectors");
    std::vector<std::vector<RealGroupRing>> m;
    for (const auto& x : v) m.push_back(regulator_components(*fi_, x));
    // rows are the units, columns the places w_j
    return group_ring_determinant(m);
}

RealGroupRing RegulatorMap::of_psi(const RatVector& psi) const {
    ScopedPrecision guard(fi_->ctx);
    RealGroupRing out(fi_->group(), Real(0));
    if (independent_.rows() == 0) {
        for (const auto& x : psi)
            if (x != 0) throw std::domain_error("element outside Q wedge^r M");
        return out;
    }
    RatMatrix rhs(1, psi.size());
    rhs.set_row(0, psi);
    RatMatrix c = solve_left(independent_, rhs);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (c(0, i) == 0) continue;
        RealGroupRing term = values_[i];
        term.scale(to_real(c(0, i)));
        out += term;
    }
    return out;
}

RealLattice RegulatorMap::image(const RatMatrix& psi_rows) const {
    std::vector<RealGroupRing> rows;
    for (std::size_t i = 0; i < psi_rows.rows(); ++i) rows.push_back(of_psi(psi_rows.row(i)));
    return real_lattice(rows);
}

RealLattice real_lattice(const std::vector<RealGroupRing>& rows) {
    if (rows.empty()) return RealLattice(RealMatrix(0, 0));
    const std::size_t n = rows[0].coefficients().size();
    RealMatrix m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return RealLattice(m);
}

// ---------------- restriction identity ----------------

RestrictionCheck restricted_regulator_check(const FieldInstance& fi, const Subgroup& h, std::size_t samples,
                                            std::mt19937_64& rng) {
    ScopedPrecision guard(fi.ctx);
    RestrictionCheck out;
    out.subfield = fi.genuine ? fi.subfield_key(h) : "K^H, |H| = " + std::to_string(h.order());
    out.residual = 0;
    const auto& g = fi.group();
    Quotient q = quotient_and_projection(g, h);
    const std::size_t nf = static_cast<std::size_t>(q.target.order());
    RationalLattice units = fi.fixed_units(h);
    if (units.rank() < fi.r) return out;
    RegulatorMap reg(fi, fi.module(fi.u_s), fi.r);
    std::uniform_int_distribution<int> coef(-3, 3);
    const Real hr = mp::pow(Real(h.order()), static_cast<int>(fi.r));
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<RatVector> us;
        for (std::size_t a = 0; a < fi.r; ++a) {
            RatVector y(units.rank());
            for (auto& c : y) c = coef(rng);
            us.push_back(units.basis().left_apply(y));
        }
        RealGroupRing lhs = project_to_quotient(reg.of_vectors(us), q);
        // R_{w'} over F directly
        std::vector<std::vector<RealGroupRing>> m;
        for (const auto& x : us) {
            std::vector<RealGroupRing> row;
            std::vector<RealGroupRing> comps;
            if (!fi.genuine) comps = regulator_components(fi, x);
            std::optional<NumberField::Elt> exact;
            if (fi.genuine) {
                std::vector<Integer> xi;
                for (const auto& c : x) xi.push_back(mp::numerator(c));
                exact = fi.unit_element(xi, false);
            }
            for (std::size_t j = 0; j < fi.r; ++j) {
                RealGroupRing rf(q.target, Real(0));
                for (std::size_t d = 0; d < nf; ++d) {
                    const Element& lift = q.coset_reps[d];
                    if (fi.genuine) {
                        // coefficient of delta: -log|u^{delta^{-1}}|_{w'} = -log|iota_{delta^{-1}}(u)|
                        rf[d] = -mp::log(mp::abs(fi.embed(*exact, g.index_of(g.negate(lift)))));
                    } else {
                        rf[d] = comps[j][g.index_of(lift)];
                    }
                }
                row.push_back(rf);
            }
            m.push_back(row);
        }
        RealGroupRing rhs = group_ring_determinant(m);
        rhs.scale(hr);
        Real scale = std::max(Real(1), max_coefficient(rhs));
        RealGroupRing diff = lhs - rhs;
        out.residual = std::max(out.residual, Real(max_coefficient(diff) / scale));
        ++out.samples;
    }
    return out;
}

// ---------------- regulators and constants ----------------

RationalLattice degree_zero_divisors(std::size_t places) {
    RatMatrix b(0, places);
    for (std::size_t d = 1; d < places; ++d) {
        RatVector v(places, Rational(0));
        v[0] = -1;
        v[d] = 1;
        b.append_row(v);
    }
    return RationalLattice(places, b);
}

SubfieldRegulator classical_regulator(const FieldInstance& fi, const Subgroup& h) {
    ScopedPrecision guard(fi.ctx);
    if (!fi.genuine || fi.r != 1) throw std::invalid_argument("classical regulators need a genuine instance");
    const auto& g = fi.group();
    Quotient q = quotient_and_projection(g, h);
    const std::size_t nf = static_cast<std::size_t>(q.target.order());
    RationalLattice units = fi.subfield_units_inf(h);
    SubfieldRegulator out;
    out.rank = units.rank();
    if (units.rank() + 1 != nf)
        throw std::domain_error("units of " + fi.subfield_key(h) + " have rank " + std::to_string(units.rank()) +
                                ", expected " + std::to_string(nf - 1));
    if (nf == 1) {
        out.value = 1;
        out.minor_determinant = 1;
        return out;
    }
    RealMatrix lam(units.rank(), nf);
    for (std::size_t i = 0; i < units.rank(); ++i) {
        std::vector<Real> v = times(units.basis().row(i), fi.log_inf);
        for (std::size_t d = 0; d < nf; ++d) lam(i, d) = v[g.index_of(q.coset_reps[d])];
    }
    RealLattice x = RealLattice::from_exact(degree_zero_divisors(nf));
    out.value = sinnott_index(x, RealLattice(lam), fi.ctx).value;
    std::vector<std::size_t> cols;
    for (std::size_t d = 1; d < nf; ++d) cols.push_back(d);
    out.minor_determinant = mp::abs(determinant(lam.select_cols(cols)));
    return out;
}

Integer tate_h0_with_torsion(const FieldInstance& fi, const Subgroup& h) {
    if (h.is_trivial()) return 1;
    if (!fi.genuine) throw std::invalid_argument("torsion data needs a genuine instance");
    const std::size_t k = fi.unit_rank;
    // L = Z e0 + U_{S_inf} inside Z^{1+k}
    const RatMatrix& ub = fi.u_inf.basis();
    IntMatrix bl(1 + ub.rows(), 1 + k);
    bl(0, 0) = 1;
    for (std::size_t i = 0; i < ub.rows(); ++i)
        for (std::size_t c = 0; c < k; ++c) bl(i + 1, c + 1) = mp::numerator(ub(i, c));
    const std::size_t m = bl.rows();
    const auto& gens = h.generators();
    const std::size_t nh = gens.size();
    // z bl (A_h - 1) in 2 Z e0 for every generator
    IntMatrix sys(m + nh, nh * (1 + k));
    for (std::size_t b = 0; b < nh; ++b) {
        IntMatrix d = bl * (fi.signed_action(gens[b]) - IntMatrix::identity(1 + k));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c <= k; ++c) sys(i, b * (1 + k) + c) = d(i, c);
        sys(m + b, b * (1 + k)) = 2;
    }
    IntMatrix ker = integer_left_kernel(sys);
    RatMatrix fixed(0, 1 + k);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        std::vector<Integer> z(m);
        for (std::size_t c = 0; c < m; ++c) z[c] = ker(i, c);
        std::vector<Integer> y = bl.left_apply(z);
        RatVector yr(y.begin(), y.end());
        fixed.append_row(yr);
    }
    IntMatrix nrm(1 + k, 1 + k);
    for (const auto& a : h.elements()) nrm = nrm + fi.signed_action(a);
    IntMatrix img = bl * nrm;
    RatMatrix norms = convert<Rational>(img);
    RatVector two(1 + k, Rational(0));
    two[0] = 2;
    norms.append_row(two);
    fixed.append_row(two);
    RationalLattice a(1 + k, fixed), b(1 + k, norms);
    if (!a.contains(b)) throw std::logic_error("norms are not fixed points");
    Rational idx = sinnott_index(a, b);
    if (mp::denominator(idx) != 1) throw std::logic_error("non-integral Tate cohomology order");
    return mp::numerator(idx);
}

CConstant c_constant(const FieldInstance& fi, const Subgroup& h) {
    ScopedPrecision guard(fi.ctx);
    if (!fi.genuine) throw std::invalid_argument("c_F needs a genuine instance");
    const auto& g = fi.group();
    RationalGroupRing nh = norm_element(h);
    GModuleLattice un = fi.module(fi.u_inf).apply(nh);
    Semisimplification su = semisimplify(un);
    CConstant out;
    out.unit_index.exact = su.index;
    out.unit_index.numeric = sinnott_index(RealLattice::from_exact(su.module.lattice(), fi.log_inf),
                                           RealLattice::from_exact(un.lattice(), fi.log_inf), fi.ctx);
    GModuleLattice x = GModuleLattice::regular(g).with_lattice(degree_zero_divisors(fi.order())).apply(nh);
    out.divisor_index = semisimplify(x).index;
    out.h0 = tate_h0_with_torsion(fi, h);
    out.value = out.unit_index.exact / out.divisor_index / Rational(out.h0);
    return out;
}

CKrConstant c_K_r(const FieldInstance& fi, const RationalGroupRing& e) {
    ScopedPrecision guard(fi.ctx);
    if (!fi.genuine) throw std::invalid_argument("c_{K,r} needs a genuine instance");
    GModuleLattice eu = fi.module(fi.u_inf).apply(e);
    Semisimplification su = semisimplify(eu);
    CKrConstant out;
    out.unit_index.exact = su.index;
    out.unit_index.numeric = sinnott_index(RealLattice::from_exact(su.module.lattice(), fi.log_inf),
                                           RealLattice::from_exact(eu.lattice(), fi.log_inf), fi.ctx);
    GModuleLattice ex = GModuleLattice::regular(fi.group()).with_lattice(degree_zero_divisors(fi.order())).apply(e);
    out.divisor_index = semisimplify(ex).index;
    out.value = out.unit_index.exact / out.divisor_index;
    return out;
}

} // namespace rstark
