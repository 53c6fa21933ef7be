#include "rstark/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rstark {

namespace mp = boost::multiprecision;

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    if (r > n) return out;
    std::vector<std::size_t> cur(r);
    std::iota(cur.begin(), cur.end(), 0);
    for (;;) {
        out.push_back(cur);
        std::size_t i = r;
        while (i > 0 && cur[i - 1] == n - r + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t b = 1;
    for (std::size_t i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

RatMatrix matrix_power(const RatMatrix& a, std::int64_t e) {
    RatMatrix result = RatMatrix::identity(a.rows());
    RatMatrix base = a;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

} // namespace

// ---------------- RationalLattice ----------------

RationalLattice::RationalLattice(std::size_t ambient, const RatMatrix& generators) : n_(ambient) {
    if (generators.rows() > 0 && generators.cols() != ambient) throw std::invalid_argument("generator width != ambient dimension");
    if (generators.rows() == 0) {
        basis_ = RatMatrix(0, ambient);
        return;
    }
    auto [d, ints] = clear_denominators(generators);
    auto h = hermite_form(ints).basis;
    basis_ = RatMatrix(h.rows(), ambient);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < ambient; ++j) basis_(i, j) = Rational(h(i, j), d);
}

RationalLattice RationalLattice::standard(std::size_t n) { return RationalLattice(n, RatMatrix::identity(n)); }

std::optional<RatVector> RationalLattice::coordinates(const RatVector& v) const {
    RatMatrix b(1, n_);
    b.set_row(0, v);
    try {
        return solve_left(basis_, b).row(0);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

bool RationalLattice::contains(const RatVector& v) const {
    auto c = coordinates(v);
    if (!c) return false;
    return std::all_of(c->begin(), c->end(), [](const Rational& x) { return mp::denominator(x) == 1; });
}

bool RationalLattice::contains(const RationalLattice& o) const {
    for (std::size_t i = 0; i < o.rank(); ++i)
        if (!contains(o.basis_.row(i))) return false;
    return true;
}

bool RationalLattice::same_span(const RationalLattice& o) const {
    if (rank() != o.rank() || n_ != o.n_) return false;
    RatMatrix both = basis_;
    for (std::size_t i = 0; i < o.rank(); ++i) both.append_row(o.basis_.row(i));
    return rstark::rank(both) == rank();
}

RationalLattice RationalLattice::operator+(const RationalLattice& o) const {
    RatMatrix both = basis_;
    for (std::size_t i = 0; i < o.rank(); ++i) both.append_row(o.basis_.row(i));
    return RationalLattice(n_, both);
}

RationalLattice RationalLattice::image(const RatMatrix& a) const {
    if (rank() == 0) return RationalLattice(a.cols(), RatMatrix(0, a.cols()));
    return RationalLattice(a.cols(), basis_ * a);
}

RationalLattice RationalLattice::scaled(const Rational& c) const { return RationalLattice(n_, basis_.scaled(c)); }

RationalLattice RationalLattice::saturation() const {
    if (rank() == 0) return *this;
    auto [d, ints] = clear_denominators(basis_);
    auto s = smith_form(ints);
    return RationalLattice(n_, convert<Rational>(s.v_inverse.submatrix_rows(0, rank())));
}

// ---------------- RealLattice ----------------

RealLattice RealLattice::from_exact(const RationalLattice& l, const RealMatrix& map) {
    if (l.rank() == 0) return RealLattice(RealMatrix(0, map.cols()));
    return RealLattice(to_real(l.basis()) * map);
}

RealLattice RealLattice::from_exact(const RationalLattice& l) { return RealLattice(to_real(l.basis())); }

// ---------------- GModuleLattice ----------------

GModuleLattice::GModuleLattice(FiniteAbelianGroup g, std::vector<RatMatrix> actions, RationalLattice lattice)
    : g_(std::move(g)), actions_(std::move(actions)), lattice_(std::move(lattice)) {
    if (actions_.size() != g_.rank()) throw std::invalid_argument("one action matrix per group generator required");
    const std::size_t n = lattice_.ambient();
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i].rows() != n || actions_[i].cols() != n) throw std::invalid_argument("action matrix shape mismatch");
        if (!(matrix_power(actions_[i], g_.invariants()[i]) == RatMatrix::identity(n)))
            throw std::invalid_argument("action matrix violates the group relation");
        for (std::size_t j = 0; j < i; ++j)
            if (!(actions_[i] * actions_[j] == actions_[j] * actions_[i])) throw std::invalid_argument("action matrices do not commute");
        if (!lattice_.contains(lattice_.image(actions_[i]))) throw std::invalid_argument("lattice is not G-stable");
    }
}

GModuleLattice GModuleLattice::regular(const FiniteAbelianGroup& g, std::size_t copies) {
    const std::size_t order = static_cast<std::size_t>(g.order());
    const std::size_t n = order * copies;
    std::vector<RatMatrix> actions;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        RatMatrix a(n, n);
        Element gen = g.generator(i);
        for (std::size_t c = 0; c < copies; ++c)
            for (std::size_t h = 0; h < order; ++h) a(c * order + h, c * order + g.index_of(g.add(g.element_at(h), gen))) = 1;
        actions.push_back(a);
    }
    return GModuleLattice(g, actions, RationalLattice::standard(n));
}

GModuleLattice GModuleLattice::submodule(const RatMatrix& generators) const {
    RatMatrix all(0, ambient());
    for (std::size_t k = 0; k < static_cast<std::size_t>(g_.order()); ++k) {
        RatMatrix img = generators * action(g_.element_at(k));
        for (std::size_t i = 0; i < img.rows(); ++i) all.append_row(img.row(i));
    }
    return GModuleLattice(g_, actions_, RationalLattice(ambient(), all));
}

GModuleLattice GModuleLattice::with_lattice(const RationalLattice& l) const { return GModuleLattice(g_, actions_, l); }

RatMatrix GModuleLattice::action(const Element& a) const {
    RatMatrix m = RatMatrix::identity(ambient());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (mod(a[i], g_.invariants()[i]) != 0) m = m * matrix_power(actions_[i], mod(a[i], g_.invariants()[i]));
    return m;
}

RatMatrix GModuleLattice::action(const RationalGroupRing& x) const {
    RatMatrix m(ambient(), ambient());
    for (std::size_t k = 0; k < static_cast<std::size_t>(g_.order()); ++k)
        if (x[k] != 0) m = m + action(g_.element_at(k)).scaled(x[k]);
    return m;
}

IntMatrix GModuleLattice::basis_action(const Element& a) const {
    const auto& b = lattice_.basis();
    if (b.rows() == 0) return IntMatrix(0, 0);
    RatMatrix c = solve_left(b, b * action(a));
    IntMatrix out(c.rows(), c.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) {
            if (mp::denominator(c(i, j)) != 1) throw std::logic_error("basis action not integral");
            out(i, j) = mp::numerator(c(i, j));
        }
    return out;
}

GModuleLattice GModuleLattice::apply(const RationalGroupRing& x) const {
    return GModuleLattice(g_, actions_, lattice_.image(action(x)));
}

std::int64_t GModuleLattice::multiplicity(const Character& chi) const {
    const std::int64_t m = g_.exponent();
    Cyclotomic sum(m);
    for (std::size_t k = 0; k < static_cast<std::size_t>(g_.order()); ++k) {
        Element a = g_.element_at(k);
        IntMatrix t = basis_action(a);
        Integer tr = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) tr += t(i, i);
        sum += Cyclotomic::zeta_power(m, -chi.exponent_at(a)) * Rational(tr);
    }
    Rational mult = sum.to_rational() / g_.order();
    if (mp::denominator(mult) != 1) throw std::logic_error("non-integral character multiplicity");
    return to_int64(mp::numerator(mult));
}

// ---------------- indices ----------------

Rational sinnott_index(const RationalLattice& m, const RationalLattice& n) {
    if (m.ambient() != n.ambient() || m.rank() != n.rank()) throw IncomparableLattices("incomparable lattices");
    if (m.rank() == 0) return 1;
    RatMatrix c;
    try {
        c = solve_left(m.basis(), n.basis());
    } catch (const std::domain_error&) {
        throw IncomparableLattices("incomparable lattices");
    }
    Rational d = determinant(c);
    if (d == 0) throw IncomparableLattices("incomparable lattices");
    return mp::abs(d);
}

Rational sinnott_index_p(const RationalLattice& m, const RationalLattice& n, const Integer& p) {
    Rational d = sinnott_index(m, n);
    int v = valuation(d, p);
    Integer pw = mp::pow(p, static_cast<unsigned>(v < 0 ? -v : v));
    return v < 0 ? Rational(Integer(1), pw) : Rational(pw);
}

RealIndex sinnott_index(const RealLattice& m, const RealLattice& n, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const Real tau = ctx.tolerance();
    if (m.ambient() != n.ambient() || m.rank() != n.rank()) throw IncomparableLattices("incomparable lattices");
    RealIndex out;
    if (m.rank() == 0) {
        out.value = 1;
        out.rationalized = Rational(1);
        out.span_defect = 0;
        return out;
    }
    auto fm = row_space_frame(m.basis(), tau);
    auto fn = row_space_frame(n.basis(), tau);
    if (fm.q.rows() != m.rank() || fn.q.rows() != n.rank()) throw PrecisionExhausted("precision exhausted: lattice numerically rank deficient");
    // principal angles: residual of N's frame after projection onto span(M)
    RealMatrix proj = fn.q * fm.q.transpose();
    Real defect = 0;
    for (std::size_t i = 0; i < fn.q.rows(); ++i)
        for (std::size_t j = 0; j < fn.q.cols(); ++j) {
            Real r = fn.q(i, j);
            for (std::size_t k = 0; k < fm.q.rows(); ++k) r -= proj(i, k) * fm.q(k, j);
            defect += r * r;
        }
    defect = mp::sqrt(defect);
    if (defect >= tau) throw IncomparableLattices("incomparable lattices: spans differ (principal angle " + to_string(defect, 5) + ")");
    RealMatrix cm = m.basis() * fm.q.transpose();
    RealMatrix cn = n.basis() * fm.q.transpose();
    auto sv = singular_values(cm);
    Real budget = mp::pow(Real(10), -static_cast<int>(ctx.digits / 2));
    if (sv.back() <= budget * sv.front()) throw PrecisionExhausted("precision exhausted: ill-conditioned lattice basis");
    out.value = mp::abs(determinant(cn) / determinant(cm));
    out.span_defect = defect;
    out.rationalized = rationalize(out.value, tau * std::max(Real(1), out.value));
    return out;
}

Integer tate_h0(const Subgroup& h, const GModuleLattice& m) {
    const std::size_t k = m.rank();
    if (k == 0) return 1;
    IntMatrix c(k, 0);
    IntMatrix stacked(k, k * h.generators().size());
    for (std::size_t gi = 0; gi < h.generators().size(); ++gi) {
        IntMatrix t = m.basis_action(h.generators()[gi]);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) stacked(i, gi * k + j) = t(i, j) - (i == j ? 1 : 0);
    }
    IntMatrix fixed = h.generators().empty() ? IntMatrix::identity(k) : integer_left_kernel(stacked);
    IntMatrix norm(k, k);
    for (const auto& a : h.elements()) norm = norm + m.basis_action(a);
    RationalLattice fixed_l(k, convert<Rational>(fixed));
    RationalLattice norm_l(k, convert<Rational>(norm));
    if (!fixed_l.contains(norm_l)) throw std::logic_error("norm image not inside the fixed module");
    Rational idx = sinnott_index(fixed_l, norm_l);
    if (mp::denominator(idx) != 1) throw std::logic_error("non-integral Tate index");
    return mp::numerator(idx);
}

Semisimplification semisimplify(const GModuleLattice& m) {
    RationalLattice s(m.ambient(), RatMatrix(0, m.ambient()));
    for (const auto& orbit : rational_orbits(m.group())) s = s + m.lattice().image(m.action(orbit_idempotent(orbit)));
    Semisimplification out{m.with_lattice(s), sinnott_index(s, m.lattice())};
    return out;
}

// ---------------- wedges ----------------

WedgeCoordinates::WedgeCoordinates(const GModuleLattice& reference, std::size_t degree)
    : ref_(reference), r_(degree), order_(static_cast<std::size_t>(reference.group().order())) {
    if (degree == 0) throw std::invalid_argument("wedge degree must be positive");
    subsets_ = subsets(reference.rank(), degree);
    const auto& g = reference.group();
    for (std::size_t k = 0; k < order_; ++k)
        inverse_actions_.push_back(convert<Rational>(reference.basis_action(g.negate(g.element_at(k)))));
}

RatVector WedgeCoordinates::psi(const std::vector<RatVector>& vectors) const {
    if (vectors.size() != r_) throw std::invalid_argument("wrong number of wedge factors");
    const auto& g = ref_.group();
    const std::size_t d = ref_.rank();
    // phi[b][j] = phi_j(v_b) in Q[G], phi_j(v) = sum_g f_j(g^{-1} v) g
    std::vector<std::vector<RatVector>> phi(r_, std::vector<RatVector>(d, RatVector(order_, Rational(0))));
    for (std::size_t b = 0; b < r_; ++b) {
        auto c = ref_.lattice().coordinates(vectors[b]);
        if (!c) throw std::domain_error("wedge factor outside Q M");
        for (std::size_t k = 0; k < order_; ++k) {
            RatVector f = inverse_actions_[k].left_apply(*c);
            for (std::size_t j = 0; j < d; ++j) phi[b][j][k] = f[j];
        }
    }
    std::vector<std::vector<std::size_t>> add(order_, std::vector<std::size_t>(order_));
    for (std::size_t a = 0; a < order_; ++a)
        for (std::size_t b = 0; b < order_; ++b) add[a][b] = g.index_of(g.add(g.element_at(a), g.element_at(b)));
    auto mul = [&](const RatVector& x, const RatVector& y) {
        RatVector z(order_, Rational(0));
        for (std::size_t a = 0; a < order_; ++a) {
            if (x[a] == 0) continue;
            for (std::size_t b = 0; b < order_; ++b)
                if (y[b] != 0) z[add[a][b]] += x[a] * y[b];
        }
        return z;
    };
    std::vector<std::size_t> perm(r_);
    RatVector out;
    out.reserve(dimension());
    for (const auto& J : subsets_) {
        RatVector det(order_, Rational(0));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            // sign of the permutation
            int sign = 1;
            for (std::size_t i = 0; i < r_; ++i)
                for (std::size_t j = i + 1; j < r_; ++j)
                    if (perm[i] > perm[j]) sign = -sign;
            RatVector term(order_, Rational(0));
            term[0] = sign;
            for (std::size_t a = 0; a < r_; ++a) term = mul(term, phi[perm[a]][J[a]]);
            for (std::size_t k = 0; k < order_; ++k) det[k] += term[k];
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.insert(out.end(), det.begin(), det.end());
    }
    return out;
}

RatMatrix WedgeCoordinates::action(const RationalGroupRing& x) const {
    RatMatrix block = multiplication_matrix(x);
    const std::size_t n = dimension();
    RatMatrix a(n, n);
    for (std::size_t s = 0; s < subsets_.size(); ++s)
        for (std::size_t i = 0; i < order_; ++i)
            for (std::size_t j = 0; j < order_; ++j) a(s * order_ + i, s * order_ + j) = block(i, j);
    return a;
}

std::vector<RatMatrix> WedgeCoordinates::generator_actions() const {
    std::vector<RatMatrix> out;
    const auto& g = ref_.group();
    for (std::size_t i = 0; i < g.rank(); ++i) out.push_back(action(group_element(g, g.generator(i))));
    return out;
}

WedgeSpace wedge_image(const WedgeCoordinates& coords, const GModuleLattice& n) {
    WedgeSpace w;
    w.degree = coords.degree();
    const auto& basis = n.lattice().basis();
    w.basis_subsets = subsets(n.rank(), w.degree);
    w.generators = RatMatrix(0, coords.dimension());
    for (const auto& I : w.basis_subsets) {
        std::vector<RatVector> vs;
        for (auto i : I) vs.push_back(basis.row(i));
        w.generators.append_row(coords.psi(vs));
    }
    RationalLattice l(coords.dimension(), w.generators);
    w.wedge_lattice = GModuleLattice(n.group(), coords.generator_actions(), l);
    w.dimension = l.rank();
    for (const auto& orbit : rational_orbits(n.group())) {
        RatMatrix e = coords.action(orbit_idempotent(orbit));
        w.orbit_dimensions.push_back(l.rank() ? rank(l.basis() * e) : 0);
        std::size_t mult = static_cast<std::size_t>(n.multiplicity(orbit.representative));
        w.orbit_predictions.push_back(binomial(mult, w.degree) * orbit.size());
        w.predicted_dimension += w.orbit_predictions.back();
    }
    return w;
}

WedgeSpace wedge_image(const GModuleLattice& m, std::size_t r) { return wedge_image(WedgeCoordinates(m, r), m); }

GModuleLattice rubin_lattice(const WedgeSpace& w) {
    return w.wedge_lattice.with_lattice(w.wedge_lattice.lattice().saturation());
}

GModuleLattice rubin_lattice(const GModuleLattice& m, std::size_t r) { return rubin_lattice(wedge_image(m, r)); }

Rational rubin_vs_wedge_index(const GModuleLattice& m, std::size_t r, const RationalGroupRing& e) {
    WedgeCoordinates coords(m, r);
    WedgeSpace w = wedge_image(coords, m);
    GModuleLattice big = rubin_lattice(w);
    RatMatrix act = coords.action(e);
    return sinnott_index(big.lattice().image(act), w.wedge_lattice.lattice().image(act));
}

std::string to_string(const RatMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

} // namespace rstark
