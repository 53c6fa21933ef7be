#include "rstark/lvalues.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rstark {

namespace mp = boost::multiprecision;

// ---------------- residue classes ----------------

ResidueClassGroup::ResidueClassGroup(std::int64_t modulus, std::vector<std::int64_t> kernel) : f_(modulus) {
    if (modulus < 1) throw std::invalid_argument("modulus must be positive");
    if (modulus > 1000000) throw std::invalid_argument("modulus too large");
    std::set<std::int64_t> ker;
    for (auto h : kernel) {
        h = mod(h, f_);
        if (gcd64(h, f_) != 1) throw std::invalid_argument("kernel element " + std::to_string(h) + " is not a unit mod " + std::to_string(f_));
        ker.insert(h);
    }
    ker.insert(mod(1, f_));
    for (auto a : ker)
        for (auto b : ker)
            if (!ker.count(mod(a * b, f_))) throw std::invalid_argument("kernel is not a subgroup of (Z/f)^x");
    kernel_.assign(ker.begin(), ker.end());

    auto key = [&](std::int64_t a) {
        std::int64_t best = f_;
        for (auto h : kernel_) best = std::min(best, mod(a * h, f_));
        return best;
    };
    auto mul = [&](std::int64_t a, std::int64_t b) { return mod(a * b, f_); };

    // greedy generators of the quotient
    std::vector<std::int64_t> gens;
    std::set<std::int64_t> reached{key(1 % f_)};
    for (std::int64_t a = 1; a < f_; ++a) {
        if (gcd64(a, f_) != 1 || reached.count(key(a))) continue;
        gens.push_back(a);
        std::vector<std::int64_t> frontier(reached.begin(), reached.end());
        while (!frontier.empty()) {
            std::vector<std::int64_t> next;
            for (auto x : frontier)
                for (auto g : gens) {
                    auto y = key(mul(x, g));
                    if (reached.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
    }
    std::map<std::int64_t, Element> table;
    if (gens.empty()) {
        group_ = FiniteAbelianGroup(std::vector<std::int64_t>{});
        table[key(1 % f_)] = group_.identity();
    } else {
        auto pres = present_by_enumeration<std::int64_t>(gens, 1 % f_, mul, key);
        group_ = pres.presentation.group;
        const auto& images = pres.presentation.gen_images;
        std::vector<std::int64_t> queue{key(1 % f_)};
        table[queue[0]] = group_.identity();
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::int64_t x = queue[head];
            for (std::size_t j = 0; j < gens.size(); ++j) {
                std::int64_t y = key(mul(x, gens[j]));
                if (table.count(y)) continue;
                table[y] = group_.add(table[x], images[j]);
                queue.push_back(y);
            }
        }
    }
    for (std::int64_t a = 0; a < f_; ++a) {
        if (gcd64(a, f_) != 1) continue;
        Element e = table.at(key(a));
        fibres_[group_.index_of(e)].push_back(a);
        log_[a] = std::move(e);
    }
}

Element ResidueClassGroup::element_of(std::int64_t a) const {
    auto it = log_.find(mod(a, f_));
    if (it == log_.end()) throw std::domain_error(std::to_string(a) + " is not a unit mod " + std::to_string(f_));
    return it->second;
}

std::int64_t ResidueClassGroup::representative(const Element& e) const { return fibres_.at(group_.index_of(e)).front(); }

std::vector<std::int64_t> ResidueClassGroup::residues_of(const Element& e) const { return fibres_.at(group_.index_of(e)); }

// ---------------- Dirichlet characters ----------------

DirichletCharacter::DirichletCharacter(std::int64_t modulus, std::int64_t m, std::map<std::int64_t, std::int64_t> exponents)
    : f_(modulus), m_(m), exp_(std::move(exponents)) {
    for (auto& [a, j] : exp_) j = mod(j, m_);
    for (std::int64_t a = 0; a < f_; ++a)
        if (gcd64(a, f_) == 1 && !exp_.count(a)) throw std::invalid_argument("character undefined at a unit residue");
}

DirichletCharacter DirichletCharacter::from_group(const Character& chi, const ResidueClassGroup& classes) {
    std::map<std::int64_t, std::int64_t> e;
    for (std::int64_t a = 0; a < classes.modulus(); ++a)
        if (gcd64(a, classes.modulus()) == 1) e[a] = chi.exponent_at(classes.element_of(a));
    return DirichletCharacter(classes.modulus(), chi.modulus(), std::move(e));
}

bool DirichletCharacter::coprime(std::int64_t a) const { return gcd64(mod(a, f_), f_) == 1; }

std::int64_t DirichletCharacter::exponent_at(std::int64_t a) const { return exp_.at(mod(a, f_)); }

Complex DirichletCharacter::value(std::int64_t a) const {
    if (!coprime(a)) return Complex();
    return root_of_unity(exponent_at(a), m_);
}

bool DirichletCharacter::is_trivial() const {
    return std::all_of(exp_.begin(), exp_.end(), [](const auto& kv) { return kv.second == 0; });
}

bool DirichletCharacter::is_even() const { return exponent_at(f_ - 1) == 0; }

std::int64_t DirichletCharacter::order() const {
    std::int64_t g = m_;
    for (const auto& [a, j] : exp_) g = gcd64(g, j);
    return m_ / g;
}

PrimitivePart primitive_part(const DirichletCharacter& psi) {
    const std::int64_t f = psi.modulus();
    for (std::int64_t d = 1; d <= f; ++d) {
        if (f % d) continue;
        bool trivial = true;
        for (const auto& [a, j] : psi.exponents())
            if (mod(a - 1, d) == 0 && j != 0) trivial = false;
        if (!trivial) continue;
        std::map<std::int64_t, std::int64_t> e;
        for (std::int64_t b = 0; b < d; ++b) {
            if (gcd64(b, d) != 1) continue;
            std::int64_t a = b;
            while (gcd64(a, f) != 1) a += d;
            e[b % d] = psi.exponent_at(a);
        }
        return {DirichletCharacter(d, psi.root_order(), std::move(e)), d};
    }
    throw std::logic_error("no conductor found");
}

std::vector<DirichletCharacter> dirichlet_characters(std::int64_t f) {
    ResidueClassGroup classes(f, {});
    std::vector<DirichletCharacter> out;
    for (const auto& chi : enumerate_characters(classes.group())) out.push_back(DirichletCharacter::from_group(chi, classes));
    return out;
}

std::optional<DirichletCharacter> quadratic_character(std::int64_t f) {
    std::optional<DirichletCharacter> found;
    for (const auto& chi : dirichlet_characters(f)) {
        if (chi.order() != 2 || !chi.is_even() || primitive_part(chi).conductor != f) continue;
        if (found) return std::nullopt;
        found = chi;
    }
    return found;
}

Real zeta_at_0() { return Real(-1) / 2; }

Real zeta_prime_at_0() { return -mp::log(2 * pi()) / 2; }

Complex l_derivative_at_0(const DirichletCharacter& chi, const PrecisionContext& ctx) {
    if (chi.is_trivial()) throw std::domain_error("L'(0, chi) oracle needs a nontrivial character");
    if (!chi.is_even()) throw std::domain_error("L'(0, chi) oracle needs an even character");
    if (primitive_part(chi).conductor != chi.modulus()) throw std::domain_error("L'(0, chi) oracle needs a primitive character");
    ScopedPrecision guard(ctx);
    const std::int64_t f = chi.modulus();
    const Real p = pi();
    Complex sum;
    for (std::int64_t a = 1; a < f; ++a) {
        if (gcd64(a, f) != 1) continue;
        // |1 - zeta_f^a| = 2 sin(pi a / f)
        Real l = mp::log(2 * mp::sin(p * Real(a) / Real(f)));
        Complex v = chi.value(a);
        sum += Complex(v.re * l, v.im * l);
    }
    return Complex(-sum.re / 2, -sum.im / 2);
}

// ---------------- sources ----------------

Complex DirichletLValues::primitive_leading(const Character& chi) const {
    ScopedPrecision guard(ctx_);
    if (chi.is_trivial()) return Complex(zeta_at_0());
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(chi.index());
    if (it != cache_.end()) return it->second;
    DirichletCharacter psi = DirichletCharacter::from_group(chi, classes_);
    Complex v = l_derivative_at_0(primitive_part(psi).character, ctx_);
    cache_.emplace(chi.index(), v);
    return v;
}

Complex DirichletLValues::trivial_rth_coefficient() const {
    ScopedPrecision guard(ctx_);
    return Complex(zeta_prime_at_0());
}

std::string DirichletLValues::provenance(const Character& chi) const {
    if (chi.is_trivial()) return "zeta(0) = -1/2";
    DirichletCharacter psi = DirichletCharacter::from_group(chi, classes_);
    return "finite sum over conductor " + std::to_string(primitive_part(psi).conductor);
}

Complex TableLValues::primitive_leading(const Character& chi) const {
    auto it = table_.find(chi.index());
    if (it == table_.end()) throw std::out_of_range("no supplied L-value for character " + std::to_string(chi.index()));
    return it->second;
}

Complex TableLValues::trivial_rth_coefficient() const {
    if (!trivial_rth_) throw std::out_of_range("no supplied s^r coefficient for the trivial character");
    return *trivial_rth_;
}

Complex LContext::primitive(const Character& psi) const {
    return source->primitive_leading(quotient ? quotient->inflate(psi) : psi);
}

Complex LContext::primitive_rth(const Character& psi) const {
    if (psi.is_trivial()) return source->trivial_rth_coefficient();
    return primitive(psi);
}

// ---------------- Stickelberger data ----------------

Complex l_ST_leading(const Character& psi, const ExtensionData& ext, const LContext& lc, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Complex v = lc.primitive(psi);
    const auto& g = ext.group;
    for (const auto& place : ext.s_finite()) {
        if (!psi.trivial_on(place.inertia)) continue;  // no Euler factor to remove
        if (psi.trivial_on(place.decomposition)) {
            // 1 - N v^{-s} = s log N v + O(s^2)
            v *= Complex(mp::log(to_real(Rational(place.norm))));
        } else {
            v *= Complex(Real(1)) - psi.evaluate(place.frobenius);
        }
    }
    for (const auto& q : ext.t) {
        Complex z = psi.evaluate(q.frobenius);
        Real n = to_real(Rational(q.norm));
        v *= Complex(Real(1) - z.re * n, -z.im * n);
    }
    (void)g;
    return v;
}

RealGroupRing assemble_idempotents(const FiniteAbelianGroup& g, const std::map<std::size_t, Complex>& values,
                                   const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const auto chars = enumerate_characters(g);
    const std::size_t n = static_cast<std::size_t>(g.order());
    std::vector<Complex> c(n);
    Real scale = 1;
    for (const auto& [idx, a] : values) {
        scale = std::max(scale, a.abs());
        const Character& chi = chars.at(idx);
        for (std::size_t t = 0; t < n; ++t) c[t] += a * chi.evaluate(g.element_at(t)).conj();
    }
    RealGroupRing out(g, Real(0));
    for (std::size_t t = 0; t < n; ++t) {
        if (mp::abs(c[t].im) > ctx.tolerance() * scale * Real(n))
            throw std::domain_error("assembled group ring element is not real");
        out[t] = c[t].re / Real(n);
    }
    return out;
}

RealGroupRing stickelberger_leading(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx) {
    std::map<std::size_t, Complex> vals;
    for (const auto& chi : enumerate_characters(ext.group))
        if (order_of_vanishing(chi, ext) == r) vals[chi.index()] = l_ST_leading(chi.conj(), ext, lc, ctx);
    return assemble_idempotents(ext.group, vals, ctx);
}

RealGroupRing omega_K(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx) {
    std::map<std::size_t, Complex> vals;
    for (const auto& chi : enumerate_characters(ext.group))
        if (order_of_vanishing(chi, ext) == r) vals[chi.conj().index()] = lc.primitive_rth(chi);
    return assemble_idempotents(ext.group, vals, ctx);
}

Complex omega_determinant(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Complex d(Real(1));
    for (const auto& chi : enumerate_characters(ext.group))
        if (order_of_vanishing(chi, ext) == r) d *= lc.primitive_rth(chi);
    return d;
}

Complex zeta_star_from_characters(const FiniteAbelianGroup& gal_f, const LContext& lc, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Complex z(Real(1));
    for (const auto& psi : enumerate_characters(gal_f)) z *= lc.primitive(psi);
    return z;
}

Real zeta_star_from_class_number(const Integer& h, const Real& reg, std::int64_t torsion) {
    return -Real(h) * reg / Real(torsion);
}

} // namespace rstark
