#include "rstark/instance.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace rstark {

namespace mp = boost::multiprecision;
using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw InstanceError(what); }

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// denominator supported on the given primes
bool s_integral(const Rational& q, const std::vector<std::int64_t>& primes) {
    Integer d = mp::denominator(q);
    for (auto p : primes)
        while (d % p == 0) d /= p;
    return d == 1;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, b = mod(a, m);
    while (b) {
        std::int64_t q = g / b;
        std::tie(g, b) = std::make_pair(b, g - q * b);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw std::domain_error("not invertible");
    return mod(x, m);
}

std::int64_t reduce_mod(const Rational& q, std::int64_t p) {
    Integer n = mp::numerator(q) % p;
    Integer d = mp::denominator(q) % p;
    if (d == 0) throw std::domain_error("denominator divisible by p");
    return mod(to_int64(n) * inverse_mod(to_int64(d), p), p);
}

// (Z[theta]/q)^x for several q at once, kept as concatenated coefficient vectors
struct ResidueRing {
    std::vector<std::int64_t> primes;
    std::vector<std::vector<std::int64_t>> moduli;  // monic minimal polynomial mod q, low to high
    std::size_t n = 0;

    using Value = std::vector<std::int64_t>;

    Value reduce(const NumberField::Elt& a) const {
        Value v;
        for (auto q : primes)
            for (std::size_t i = 0; i < n; ++i) v.push_back(reduce_mod(a[i], q));
        return v;
    }
    Value one() const {
        Value v(primes.size() * n, 0);
        for (std::size_t b = 0; b < primes.size(); ++b) v[b * n] = 1 % primes[b];
        return v;
    }
    Value mul(const Value& x, const Value& y) const {
        Value out(x.size(), 0);
        for (std::size_t b = 0; b < primes.size(); ++b) {
            const std::int64_t q = primes[b];
            std::vector<std::int64_t> prod(2 * n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + x[b * n + i] * y[b * n + j]) % q;
            for (std::size_t k = 2 * n - 1; k >= n; --k) {
                std::int64_t c = prod[k];
                if (!c) continue;
                prod[k] = 0;
                for (std::size_t i = 0; i < n; ++i) prod[k - n + i] = mod(prod[k - n + i] - c * moduli[b][i], q);
            }
            for (std::size_t i = 0; i < n; ++i) out[b * n + i] = prod[i];
        }
        return out;
    }
    bool is_zero_somewhere(const Value& v) const {
        for (std::size_t b = 0; b < primes.size(); ++b) {
            bool z = true;
            for (std::size_t i = 0; i < n; ++i) z = z && v[b * n + i] == 0;
            if (z) return true;
        }
        return false;
    }
};

Subgroup subgroup_from_json(const FiniteAbelianGroup& g, const json& gens) {
    std::vector<Element> out;
    for (const auto& e : gens) {
        std::vector<Integer> v;
        for (const auto& x : e) v.push_back(Integer(x.get<std::int64_t>()));
        out.push_back(g.reduce(v));
    }
    return Subgroup(g, out);
}

Element element_from_json(const FiniteAbelianGroup& g, const json& e) {
    std::vector<Integer> v;
    for (const auto& x : e) v.push_back(Integer(x.get<std::int64_t>()));
    if (v.size() != g.rank()) fail("group element of the wrong length");
    return g.reduce(v);
}

std::string text_of(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    fail("expected a string or integer, got " + j.dump());
}

Real real_of(const json& j) { return Real(text_of(j)); }

// ---- genuine places ----

std::int64_t p_part(std::int64_t f, std::int64_t p) {
    std::int64_t q = 1;
    while (f % p == 0) {
        f /= p;
        q *= p;
    }
    return q;
}

PlaceData genuine_place(const ResidueClassGroup& cl, std::int64_t p) {
    const std::int64_t f = cl.modulus();
    const auto& g = cl.group();
    PlaceData out;
    out.label = std::to_string(p);
    out.norm = p;
    const std::int64_t pv = p_part(f, p);
    const std::int64_t m = f / pv;
    if (pv == 1) {
        out.inertia = Subgroup::trivial(g);
        out.frobenius = cl.element_of(p);
        out.decomposition = Subgroup(g, {out.frobenius});
        return out;
    }
    // inertia: residues = 1 mod m; Frobenius: = p mod m and = 1 mod p^v
    std::vector<Element> inert;
    std::int64_t frob = 1;
    for (std::int64_t a = 1; a < f; ++a) {
        if (gcd64(a, f) != 1) continue;
        if (a % m == 1 % m) inert.push_back(cl.element_of(a));
        if (mod(a - p, m) == 0 && a % pv == 1) frob = a;
    }
    out.inertia = Subgroup(g, inert);
    out.frobenius = cl.element_of(frob);
    out.decomposition = out.inertia.join(Subgroup(g, {out.frobenius}));
    return out;
}

std::vector<Element> coset_representatives(const FiniteAbelianGroup& g, const Subgroup& d) {
    std::vector<Element> reps;
    std::set<std::vector<std::size_t>> seen;
    for (const auto& a : g.elements()) {
        std::vector<std::size_t> coset;
        for (const auto& h : d.elements()) coset.push_back(g.index_of(g.add(a, h)));
        std::sort(coset.begin(), coset.end());
        if (seen.insert(coset).second) reps.push_back(a);
    }
    return reps;
}

std::size_t coset_index(const FiniteAbelianGroup& g, const std::vector<Element>& reps, const Subgroup& d, const Element& a) {
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (d.contains(g.add(a, g.negate(reps[i])))) return i;
    throw std::logic_error("coset not found");
}

IntMatrix power(const IntMatrix& a, std::int64_t e) {
    IntMatrix acc = IntMatrix::identity(a.rows());
    for (std::int64_t i = 0; i < e; ++i) acc = acc * a;
    return acc;
}

void reduce_sign_column(IntMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, 0) = mod(to_int64(a(i, 0)), 2);
}

std::vector<Integer> round_vector(const std::vector<Real>& x, Real& worst) {
    std::vector<Integer> out;
    worst = 0;
    for (const auto& v : x) {
        Integer z = round_to_integer(v);
        worst = std::max(worst, Real(mp::abs(v - Real(z))));
        out.push_back(z);
    }
    return out;
}

void load_genuine(FieldInstance& fi, const json& j);
void load_synthetic(FieldInstance& fi, const json& j);

} // namespace

// ---------------- generic accessors ----------------

RatMatrix FieldInstance::action(const Element& g) const {
    const auto& grp = ext.group;
    RatMatrix acc = RatMatrix::identity(unit_rank);
    for (std::size_t j = 0; j < grp.rank(); ++j)
        for (std::int64_t e = 0; e < g[j]; ++e) acc = acc * generator_actions[j];
    return acc;
}

IntMatrix FieldInstance::signed_action(const Element& g) const {
    if (signed_generator_actions.empty()) fail("sign data is only available for genuine instances");
    const auto& grp = ext.group;
    IntMatrix acc = IntMatrix::identity(unit_rank + 1);
    for (std::size_t j = 0; j < grp.rank(); ++j) acc = acc * power(signed_generator_actions[j], g[j]);
    reduce_sign_column(acc);
    return acc;
}

GModuleLattice FieldInstance::module(const RationalLattice& l) const { return GModuleLattice(ext.group, generator_actions, l); }

HypothesisReport FieldInstance::hypotheses() const {
    HypothesisReport rep = check_hypotheses(ext, r);
    if (!genuine) return rep;
    for (auto& it : rep.items) {
        if (it.id != "(4)" || !it.ok) continue;
        // the structural parity test is superseded by the exact residue computation
        it.ok = t_torsion_free;
        it.detail = t_torsion_detail;
    }
    return rep;
}

RationalLattice FieldInstance::fixed_units(const Subgroup& h) const {
    const std::size_t k = unit_rank;
    if (h.is_trivial() || k == 0) return RationalLattice::standard(k);
    const auto& gens = h.generators();
    if (!genuine) {
        // no torsion is modelled for synthetic data
        RatMatrix stacked(k, k * gens.size());
        for (std::size_t b = 0; b < gens.size(); ++b) {
            RatMatrix a = action(gens[b]) - RatMatrix::identity(k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t c = 0; c < k; ++c) stacked(i, b * k + c) = a(i, c);
        }
        auto [d, m] = clear_denominators(stacked);
        (void)d;
        return RationalLattice(k, convert<Rational>(integer_left_kernel(m)));
    }
    // x (T_h - 1) = 0 and x.s_h even: extra variables absorb 2 * w_h in the sign column
    const std::size_t nh = gens.size();
    IntMatrix m(k + nh, nh * (k + 1));
    for (std::size_t b = 0; b < nh; ++b) {
        IntMatrix a = signed_action(gens[b]);
        for (std::size_t i = 0; i < k; ++i) {
            m(i, b * (k + 1)) = a(i + 1, 0);
            for (std::size_t c = 0; c < k; ++c) m(i, b * (k + 1) + 1 + c) = a(i + 1, c + 1) - (i == c ? 1 : 0);
        }
        m(k + b, b * (k + 1)) = 2;
    }
    IntMatrix ker = integer_left_kernel(m);
    RatMatrix rows(0, k);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        RatVector v(k);
        for (std::size_t c = 0; c < k; ++c) v[c] = Rational(ker(i, c));
        rows.append_row(v);
    }
    return RationalLattice(k, rows);
}

RationalLattice FieldInstance::subfield_st_units(const SubExtension& sub) const {
    RationalLattice l = intersect(fixed_units(sub.h), u_st);
    if (!genuine) return l;
    std::set<std::string> keep;
    for (const auto& v : sub.ext.s_finite()) keep.insert(v.label);
    const auto sfin = ext.s_finite();
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < finite_places.size(); ++c)
        if (!keep.count(sfin[finite_places[c].prime].label)) cols.push_back(c);
    if (cols.empty()) return l;
    IntMatrix ker = integer_left_kernel(valuations.select_cols(cols));
    return intersect(l, RationalLattice(unit_rank, convert<Rational>(ker)));
}

RationalLattice FieldInstance::subfield_units_inf(const Subgroup& h) const {
    if (!genuine) fail("U_{S_inf} is not modelled for synthetic instances");
    return intersect(fixed_units(h), u_inf);
}

std::string FieldInstance::subfield_key(const Subgroup& h) const {
    if (h.is_trivial()) return "K";
    if (h.order() == order()) return "Q";
    if (!genuine) fail("subfield keys need a genuine instance");
    std::vector<std::int64_t> res;
    for (const auto& e : h.elements())
        for (auto a : classes.residues_of(e)) res.push_back(a);
    std::sort(res.begin(), res.end());
    std::string s = std::to_string(conductor) + ":";
    for (std::size_t i = 0; i < res.size(); ++i) s += (i ? "," : "") + std::to_string(res[i]);
    return s;
}

std::optional<Integer> FieldInstance::class_number(const Subgroup& h) const {
    if (h.order() == order()) return Integer(1);  // Q
    auto it = class_numbers.find(subfield_key(h));
    if (it == class_numbers.end()) return std::nullopt;
    return it->second;
}

NumberField::Elt FieldInstance::unit_element(const std::vector<Integer>& x, bool negative) const {
    if (!genuine) fail("exact units need a genuine instance");
    NumberField::Elt acc = field.from_rational(negative ? -1 : 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) acc = field.mul(acc, field.pow(units[i], to_int64(x[i])));
    return acc;
}

std::optional<bool> FieldInstance::t_sign(const std::vector<Integer>& x) const {
    RationalLattice ker(unit_rank + 1, convert<Rational>(t_kernel));
    RatVector v(unit_rank + 1);
    for (std::size_t i = 0; i < unit_rank; ++i) v[i + 1] = Rational(x[i]);
    v[0] = 0;
    if (ker.contains(v)) return false;
    v[0] = 1;
    if (ker.contains(v)) return true;
    return std::nullopt;
}

Real FieldInstance::embed(const NumberField::Elt& a, std::size_t g_index) const {
    return field.embed(a, theta_values.at(g_index));
}

RationalLattice intersect(const RationalLattice& a, const RationalLattice& b) {
    if (a.ambient() != b.ambient()) throw std::invalid_argument("intersecting lattices of different ambients");
    const std::size_t n = a.ambient();
    if (a.rank() == 0 || b.rank() == 0) return RationalLattice(n, RatMatrix(0, n));
    RatMatrix stacked(0, n);
    for (std::size_t i = 0; i < a.rank(); ++i) stacked.append_row(a.basis().row(i));
    for (std::size_t i = 0; i < b.rank(); ++i) {
        RatVector v = b.basis().row(i);
        for (auto& x : v) x = -x;
        stacked.append_row(v);
    }
    auto [d, m] = clear_denominators(stacked);
    (void)d;
    IntMatrix ker = integer_left_kernel(m);
    RatMatrix rows(0, n);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        RatVector y(a.rank());
        for (std::size_t c = 0; c < a.rank(); ++c) y[c] = Rational(ker(i, c));
        rows.append_row(a.basis().left_apply(y));
    }
    return RationalLattice(n, rows);
}

// ---------------- loading ----------------

FieldInstance load_field_instance(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in) fail("cannot open field instance '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_field_instance(ss.str(), ctx);
}

FieldInstance parse_field_instance(const std::string& text, const PrecisionContext& ctx) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("parse error: ") + e.what());
    }
    ScopedPrecision guard(ctx);
    FieldInstance fi;
    fi.ctx = ctx;
    try {
        fi.name = j.value("name", std::string("unnamed"));
        fi.data_digits = j.value("precision_digits", 0u);
        const std::string kind = j.value("kind", std::string("genuine"));
        if (kind == "genuine") {
            fi.genuine = true;
            load_genuine(fi, j);
        } else if (kind == "synthetic") {
            fi.genuine = false;
            load_synthetic(fi, j);
        } else {
            fail("unknown instance kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        fail(std::string("malformed field instance: ") + e.what());
    }
    return fi;
}

namespace {

void load_genuine(FieldInstance& fi, const json& j) {
    const PrecisionContext& ctx = fi.ctx;
    const Real tau = ctx.tolerance();
    if (j.value("base_field", std::string("Q")) != "Q") fail("genuine instances need base field Q");
    fi.r = 1;
    fi.conductor = j.at("conductor").get<std::int64_t>();
    if (fi.conductor < 3) fail("conductor must be at least 3");
    fi.classes = ResidueClassGroup(fi.conductor, j.at("kernel_subgroup").get<std::vector<std::int64_t>>());
    const auto& cl = fi.classes;
    const FiniteAbelianGroup& g = cl.group();
    const std::size_t n = static_cast<std::size_t>(g.order());
    if (!std::binary_search(cl.kernel().begin(), cl.kernel().end(), fi.conductor - 1))
        fail("kernel does not contain -1: K is not totally real");

    // places
    ExtensionData& ext = fi.ext;
    ext.group = g;
    ext.r = 1;
    ext.torsion_order = j.value("torsion_order", 2);
    if (ext.torsion_order != 2) fail("a totally real field has torsion order 2");
    for (auto p : prime_divisors(fi.conductor)) {
        PlaceData pd = genuine_place(cl, p);
        if (pd.inertia.is_trivial()) fail("prime " + pd.label + " divides the conductor but is unramified: conductor not minimal");
        ext.ramified.push_back(pd);
    }
    std::map<std::int64_t, std::int64_t> frob_override;
    auto read_places = [&](const char* key, std::vector<PlaceData>& out) {
        for (const auto& e : j.at(key)) {
            std::int64_t p = e.at("prime").get<std::int64_t>();
            if (!is_prime(p)) fail(std::string(key) + " entry " + std::to_string(p) + " is not prime");
            if (fi.conductor % p == 0) fail(std::string(key) + " place " + std::to_string(p) + " is ramified");
            if (e.contains("norm") && Integer(text_of(e.at("norm"))) != p)
                fail(std::string(key) + " place " + std::to_string(p) + ": stated norm disagrees with the prime");
            PlaceData pd = genuine_place(cl, p);
            if (e.contains("frobenius")) {
                std::int64_t a = e.at("frobenius").get<std::int64_t>();
                frob_override[p] = a;
                pd.frobenius = cl.element_of(a);
                pd.decomposition = Subgroup(g, {pd.frobenius});
            }
            out.push_back(pd);
        }
    };
    read_places("s_prime", ext.s_prime);
    read_places("T", ext.t);
    try {
        ext.validate();
    } catch (const std::exception& e) {
        fail(std::string("extension data: ") + e.what());
    }

    // the field: theta is the Gaussian period of the kernel
    std::vector<Rational> mp_coeffs;
    for (const auto& c : j.at("minimal_polynomial")) mp_coeffs.push_back(rational_from_string(text_of(c)));
    fi.field = NumberField(mp_coeffs);
    const NumberField& K = fi.field;
    if (K.degree() != n) fail("minimal polynomial degree " + std::to_string(K.degree()) + " differs from [K:Q] = " + std::to_string(n));
    for (const auto& c : mp_coeffs)
        if (mp::denominator(c) != 1) fail("minimal polynomial must be integral");
    const Rational disc = K.discriminant();
    if (disc == 0) fail("minimal polynomial is not separable");

    fi.theta_values.assign(n, Real(0));
    const Real two_pi = 2 * pi();
    for (std::size_t t = 0; t < n; ++t) {
        std::int64_t c = cl.representative(g.element_at(t));
        Real s = 0;
        for (auto h : cl.kernel()) s += mp::cos(two_pi * Real(mod(c * h, fi.conductor)) / Real(fi.conductor));
        fi.theta_values[t] = s;
    }
    Real scale = 1;
    for (const auto& x : fi.theta_values) scale = std::max(scale, Real(mp::abs(x)));
    for (std::size_t t = 0; t < n; ++t) {
        Real v = evaluate_polynomial(mp_coeffs, fi.theta_values[t]);
        if (mp::abs(v) > tau * mp::pow(scale, static_cast<int>(n)) * Real(n + 1))
            fail("minimal polynomial does not vanish at the Gaussian period for residue " +
                 std::to_string(cl.representative(g.element_at(t))));
        for (std::size_t u = 0; u < t; ++u)
            if (mp::abs(fi.theta_values[t] - fi.theta_values[u]) < tau)
                fail("Gaussian period is not a primitive element");
    }
    const unsigned cmp_digits = std::min(fi.data_digits ? fi.data_digits : ctx.digits, ctx.digits);
    const Real data_tol = mp::pow(Real(10), -static_cast<int>(cmp_digits) + 5);
    if (j.contains("embeddings")) {
        for (const auto& [res, val] : j.at("embeddings").items()) {
            std::int64_t a = std::stoll(res);
            std::size_t t = g.index_of(cl.element_of(a));
            if (mp::abs(real_of(val) - fi.theta_values[t]) > data_tol * scale)
                fail("supplied embedding of theta at residue " + res + " disagrees with the computed Gaussian period");
        }
    }

    // Galois action on theta from the embedding permutation: sigma_g(theta) = P_g(theta)
    // with P_g(iota_a theta) = iota_{ag} theta for all a
    RealMatrix vt(n, n);  // row i: (iota_a theta)^i over a
    for (std::size_t a = 0; a < n; ++a) {
        Real pw = 1;
        for (std::size_t i = 0; i < n; ++i) {
            vt(i, a) = pw;
            pw *= fi.theta_values[a];
        }
    }
    const Integer max_den = mp::abs(mp::numerator(disc)) * mp::denominator(disc) + 1;
    const Real rat_tol = mp::pow(Real(10), -static_cast<int>(ctx.digits / 2));
    fi.sigma_theta.assign(n, K.zero());
    for (std::size_t t = 0; t < n; ++t) {
        const Element ge = g.element_at(t);
        std::vector<Real> target(n);
        for (std::size_t a = 0; a < n; ++a) target[a] = fi.theta_values[g.index_of(g.add(g.element_at(a), ge))];
        std::vector<Real> c = least_squares_left(vt, target);
        NumberField::Elt e(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto q = rationalize(c[i], rat_tol, max_den);
            if (!q) fail("Galois action on theta not recognised at this precision");
            e[i] = *q;
        }
        if (!K.is_zero(K.compose(mp_coeffs, e))) fail("computed sigma(theta) is not a root of the minimal polynomial");
        for (std::size_t a = 0; a < n; ++a)
            if (mp::abs(K.embed(e, fi.theta_values[a]) - target[a]) > tau * scale * Real(n))
                fail("embedding permutation inconsistent with the Galois action");
        fi.sigma_theta[t] = e;
    }
    fi.exact_checks.emplace_back("galois action on theta", "sigma_g(theta) exact roots of the minimal polynomial for all g");

    // Frobenius congruences sigma_p(theta) = theta^p mod p at unramified primes not dividing disc
    auto frobenius_check = [&](const PlaceData& pd) {
        std::int64_t p = std::stoll(pd.label);
        if (valuation(disc, p) != 0) return;
        const auto& st = fi.sigma_theta[g.index_of(pd.frobenius)];
        NumberField::Elt diff = K.sub(st, K.pow(K.theta(), p));
        for (const auto& c : diff)
            if (c != 0 && valuation(c, p) < 1)
                fail("Frobenius at " + pd.label + " disagrees with the embedding permutation");
        fi.exact_checks.emplace_back("frobenius at " + pd.label, "sigma_p(theta) = theta^p mod p");
    };
    for (const auto& pd : ext.s_prime) frobenius_check(pd);
    for (const auto& pd : ext.t) frobenius_check(pd);

    // S-units
    std::vector<std::int64_t> s_primes;
    for (const auto& pd : ext.s_finite()) s_primes.push_back(std::stoll(pd.label));
    for (const auto& e : j.at("sunits")) {
        fi.unit_names.push_back(e.at("name").get<std::string>());
        NumberField::Elt u;
        for (const auto& c : e.at("coords")) u.push_back(rational_from_string(text_of(c)));
        if (u.size() != n) fail("S-unit " + fi.unit_names.back() + " has the wrong number of coordinates");
        if (K.is_zero(u)) fail("S-unit " + fi.unit_names.back() + " is zero");
        fi.units.push_back(u);
    }
    const std::size_t k = fi.units.size();
    fi.unit_rank = k;
    std::size_t s_places = n;  // infinite places
    for (const auto& pd : ext.s_finite()) s_places += n / pd.decomposition.order();
    if (k != s_places - 1)
        fail("expected " + std::to_string(s_places - 1) + " S-unit generators (|S_K| - 1), got " + std::to_string(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto& u = fi.units[i];
        for (const auto& c : K.charpoly(u))
            if (!s_integral(c, s_primes)) fail("S-unit " + fi.unit_names[i] + " is not an S-unit: not S-integral");
        for (const auto& c : K.charpoly(K.inverse(u)))
            if (!s_integral(c, s_primes)) fail("S-unit " + fi.unit_names[i] + " is not an S-unit: inverse not S-integral");
    }
    fi.exact_checks.emplace_back("S-units", "characteristic polynomials of u and 1/u are S-integral");

    // finite places of K in S and valuations
    const auto sfin = ext.s_finite();
    std::vector<std::vector<Element>> reps(sfin.size());
    for (std::size_t pi_ = 0; pi_ < sfin.size(); ++pi_) {
        reps[pi_] = coset_representatives(g, sfin[pi_].decomposition);
        for (const auto& c : reps[pi_]) {
            FinitePlaceOfK w;
            w.prime = pi_;
            w.coset = c;
            w.log_norm = Real(sfin[pi_].residue_degree()) * mp::log(to_real(Rational(sfin[pi_].norm)));
            fi.finite_places.push_back(w);
        }
    }
    const std::size_t nf = fi.finite_places.size();
    fi.valuations = IntMatrix(k, nf);
    const auto sunits_json = j.at("sunits");
    for (std::size_t i = 0; i < k; ++i) {
        const Rational nu = K.norm(fi.units[i]);
        std::size_t col = 0;
        for (std::size_t pi_ = 0; pi_ < sfin.size(); ++pi_) {
            const std::int64_t p = std::stoll(sfin[pi_].label);
            const std::int64_t f_res = sfin[pi_].residue_degree();
            const int vn = valuation(nu, p);
            const std::size_t gcount = reps[pi_].size();
            const auto& uj = sunits_json[i];
            if (uj.contains("valuations") && uj.at("valuations").contains(sfin[pi_].label)) {
                auto vals = uj.at("valuations").at(sfin[pi_].label).get<std::vector<std::int64_t>>();
                if (vals.size() != gcount) fail("S-unit " + fi.unit_names[i] + ": wrong number of valuations at " + sfin[pi_].label);
                std::int64_t total = 0;
                for (auto v : vals) total += v * f_res;
                if (total != vn) fail("S-unit " + fi.unit_names[i] + ": valuations at " + sfin[pi_].label + " disagree with the norm");
                for (std::size_t c = 0; c < gcount; ++c) fi.valuations(i, col + c) = vals[c];
            } else {
                if (gcount != 1) fail("S-unit " + fi.unit_names[i] + ": valuations at the split prime " + sfin[pi_].label + " must be supplied");
                if (vn % f_res) fail("S-unit " + fi.unit_names[i] + ": norm valuation at " + sfin[pi_].label + " not divisible by the residue degree");
                fi.valuations(i, col) = vn / f_res;
            }
            col += gcount;
        }
    }

    // logarithmic embeddings; column t of log_inf is the coefficient of sigma_t in R_1
    fi.log_inf = RealMatrix(k, n);
    fi.log_fin = RealMatrix(k, nf);
    for (std::size_t i = 0; i < k; ++i) {
        Real row_sum = 0, row_scale = 1;
        for (std::size_t t = 0; t < n; ++t) {
            Real v = fi.embed(fi.units[i], g.index_of(g.negate(g.element_at(t))));
            if (mp::abs(v) < tau) fail("S-unit " + fi.unit_names[i] + " vanishes at an embedding");
            fi.log_inf(i, t) = -mp::log(mp::abs(v));
            row_sum += fi.log_inf(i, t);
            row_scale = std::max(row_scale, Real(mp::abs(fi.log_inf(i, t))));
        }
        for (std::size_t c = 0; c < nf; ++c) {
            fi.log_fin(i, c) = Real(fi.valuations(i, c)) * fi.finite_places[c].log_norm;
            row_sum += fi.log_fin(i, c);
        }
        if (mp::abs(row_sum) > tau * row_scale * Real(n + nf))
            fail("S-unit " + fi.unit_names[i] + " violates the product formula");
        const auto& uj = sunits_json[i];
        if (uj.contains("log_abs")) {
            for (const auto& [res, val] : uj.at("log_abs").items()) {
                std::size_t t = g.index_of(cl.element_of(std::stoll(res)));
                Real mine = -fi.log_inf(i, g.index_of(g.negate(g.element_at(t))));
                if (mp::abs(real_of(val) - mine) > data_tol * row_scale)
                    fail("S-unit " + fi.unit_names[i] + ": supplied log|u| at residue " + res + " disagrees with the exact element");
            }
        }
    }
    RealMatrix full(k, n + nf);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t t = 0; t < n; ++t) full(i, t) = fi.log_inf(i, t);
        for (std::size_t c = 0; c < nf; ++c) full(i, n + c) = fi.log_fin(i, c);
    }
    {
        auto sv = singular_values(full);
        if (!sv.empty() && sv.back() <= tau * std::max(Real(1), sv.front()))
            fail("S-units are multiplicatively dependent (log matrix is rank deficient)");
    }

    // Galois action on the S-units
    fi.signed_generator_actions.clear();
    fi.generator_actions.clear();
    for (std::size_t gj = 0; gj < g.rank(); ++gj) {
        const Element ge = g.generator(gj);
        const auto& st = fi.sigma_theta[g.index_of(ge)];
        IntMatrix a(k + 1, k + 1);
        a(0, 0) = 1;
        for (std::size_t i = 0; i < k; ++i) {
            NumberField::Elt su = K.compose(fi.units[i], st);
            std::vector<Real> target(n + nf);
            for (std::size_t t = 0; t < n; ++t)
                target[t] = -mp::log(mp::abs(fi.embed(su, g.index_of(g.negate(g.element_at(t))))));
            // v_{sigma_d w_0}(sigma_g u) = v_{sigma_{d-g} w_0}(u)
            for (std::size_t c = 0; c < nf; ++c) {
                const auto& w = fi.finite_places[c];
                const auto& rp = reps[w.prime];
                std::size_t first = 0;
                while (fi.finite_places[first].prime != w.prime) ++first;
                std::size_t src = first + coset_index(g, rp, sfin[w.prime].decomposition, g.add(w.coset, g.negate(ge)));
                target[n + c] = fi.log_fin(i, src);
            }
            std::vector<Real> x = least_squares_left(full, target);
            Real dist;
            std::vector<Integer> tvec = round_vector(x, dist);
            if (dist > Real("1e-6")) fail("Galois conjugate of " + fi.unit_names[i] + " is not in the span of the listed S-units");
            NumberField::Elt q = K.mul(su, fi.unit_element(
                                               [&] {
                                                   std::vector<Integer> neg = tvec;
                                                   for (auto& z : neg) z = -z;
                                                   return neg;
                                               }(),
                                               false));
            bool negative;
            if (q == K.one()) negative = false;
            else if (q == K.from_rational(-1)) negative = true;
            else fail("Galois conjugate of " + fi.unit_names[i] + " is not +- a product of the listed S-units: the list is not Galois stable");
            a(i + 1, 0) = negative ? 1 : 0;
            for (std::size_t c = 0; c < k; ++c) a(i + 1, c + 1) = tvec[c];
        }
        IntMatrix t = IntMatrix(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < k; ++c) t(i, c) = a(i + 1, c + 1);
        fi.signed_generator_actions.push_back(a);
        fi.generator_actions.push_back(convert<Rational>(t));
    }
    // valuations must be equivariant for the computed action
    for (std::size_t t = 0; t < n; ++t) {
        const Element ge = g.element_at(t);
        RatMatrix act = fi.action(ge);
        RatMatrix vals = act * convert<Rational>(fi.valuations);
        for (std::size_t c = 0; c < nf; ++c) {
            const auto& w = fi.finite_places[c];
            std::size_t first = 0;
            while (fi.finite_places[first].prime != w.prime) ++first;
            std::size_t src = first + coset_index(g, reps[w.prime], sfin[w.prime].decomposition, g.add(w.coset, g.negate(ge)));
            for (std::size_t i = 0; i < k; ++i)
                if (vals(i, c) != Rational(fi.valuations(i, src))) fail("valuations are not Galois equivariant");
        }
    }
    fi.exact_checks.emplace_back("galois action on S-units", "sigma(u_i) = +- prod u_j^t_ij verified exactly");

    // T-congruence lattice in (sign, exponents)
    ResidueRing rr;
    rr.n = n;
    for (const auto& pd : ext.t) {
        std::int64_t q = std::stoll(pd.label);
        if (valuation(disc, q) != 0) fail("T place " + pd.label + " divides the discriminant of the minimal polynomial");
        rr.primes.push_back(q);
        std::vector<std::int64_t> f;
        for (std::size_t i = 0; i < n; ++i) f.push_back(reduce_mod(mp_coeffs[i], q));
        rr.moduli.push_back(f);
    }
    fi.u_s = RationalLattice::standard(k);
    if (ext.t.empty()) {
        fi.t_kernel = IntMatrix::identity(k + 1);
        fi.t_torsion_free = false;
        fi.t_torsion_detail = "T is empty";
    } else {
        std::vector<ResidueRing::Value> gens;
        gens.push_back(rr.reduce(K.from_rational(-1)));
        for (std::size_t i = 0; i < k; ++i) {
            for (const auto& c : fi.units[i])
                for (auto q : rr.primes)
                    if (c != 0 && valuation(c, q) < 0) fail("S-unit " + fi.unit_names[i] + " is not integral at T");
            auto v = rr.reduce(fi.units[i]);
            if (rr.is_zero_somewhere(v)) fail("S-unit " + fi.unit_names[i] + " vanishes modulo a place of T");
            gens.push_back(v);
        }
        auto pres = present_by_enumeration<ResidueRing::Value>(
            gens, rr.one(), [&](const ResidueRing::Value& a, const ResidueRing::Value& b) { return rr.mul(a, b); },
            [](const ResidueRing::Value& a) { return a; });
        fi.t_kernel = pres.relation_lattice;
        RatVector e0(k + 1, Rational(0));
        e0[0] = 1;
        bool torsion = RationalLattice(k + 1, convert<Rational>(fi.t_kernel)).contains(e0);
        fi.t_torsion_free = !torsion;
        std::string tl;
        for (const auto& pd : ext.t) tl += (tl.empty() ? "" : ",") + pd.label;
        fi.t_torsion_detail = torsion ? "U_{S,T} has torsion: -1 is congruent to 1 modulo T = {" + tl + "}"
                                      : "-1 is not congruent to 1 modulo T = {" + tl + "}; U_{S,T} torsion-free";
        fi.exact_checks.emplace_back("T-congruence", "relation lattice of (Z[theta]/T)^x images, order " + std::to_string(pres.order));
    }
    std::vector<std::size_t> ucols;
    for (std::size_t c = 1; c <= k; ++c) ucols.push_back(c);
    fi.u_st = RationalLattice(k, convert<Rational>(fi.t_kernel.select_cols(ucols)));
    fi.u_inf = RationalLattice(k, convert<Rational>(integer_left_kernel(fi.valuations)));
    if (fi.u_inf.rank() != n - 1) fail("unit rank of K is " + std::to_string(fi.u_inf.rank()) + ", expected " + std::to_string(n - 1));

    // class numbers
    if (j.contains("class_numbers"))
        for (const auto& [key, val] : j.at("class_numbers").items()) {
            Integer h(text_of(val));
            if (h < 1) fail("class number of " + key + " must be positive");
            fi.class_numbers[key] = h;
        }
    if (!fi.class_numbers.count("K")) fail("class number h_K missing");

    fi.lvalues = std::make_unique<DirichletLValues>(fi.classes, ctx);
}

void load_synthetic(FieldInstance& fi, const json& j) {
    fi.r = j.at("r").get<std::size_t>();
    if (fi.r < 1) fail("synthetic r must be positive");
    auto inv = j.at("group").get<std::vector<std::int64_t>>();
    FiniteAbelianGroup g(inv);
    const std::size_t n = static_cast<std::size_t>(g.order());
    ExtensionData& ext = fi.ext;
    ext.group = g;
    ext.r = fi.r;
    ext.torsion_order = j.value("torsion_order", 2);
    auto read_places = [&](const char* key, std::vector<PlaceData>& out) {
        if (!j.contains(key)) return;
        for (const auto& e : j.at(key)) {
            PlaceData pd;
            pd.label = e.at("label").get<std::string>();
            pd.norm = Integer(text_of(e.at("norm")));
            pd.inertia = subgroup_from_json(g, e.value("inertia", json::array()));
            pd.frobenius = element_from_json(g, e.at("frobenius"));
            pd.decomposition = e.contains("decomposition") ? subgroup_from_json(g, e.at("decomposition"))
                                                           : pd.inertia.join(Subgroup(g, {pd.frobenius}));
            out.push_back(pd);
        }
    };
    read_places("ramified", ext.ramified);
    read_places("s_prime", ext.s_prime);
    read_places("T", ext.t);
    try {
        ext.validate();
    } catch (const std::exception& e) {
        fail(std::string("extension data: ") + e.what());
    }

    // free module Z[G]^m, basis (i, t) = sigma_t eps_i at index i*|G| + t
    const std::size_t m = j.at("unit_module").at("free_rank").get<std::size_t>();
    const std::size_t k = m * n;
    fi.unit_rank = k;
    for (std::size_t gj = 0; gj < g.rank(); ++gj) {
        RatMatrix a(k, k);
        const Element ge = g.generator(gj);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t t = 0; t < n; ++t) a(i * n + t, i * n + g.index_of(g.add(g.element_at(t), ge))) = 1;
        fi.generator_actions.push_back(a);
    }
    // logs[i][j] = coefficients of R_j(eps_i); R_j is Z[G]-linear
    const auto& logs = j.at("logs");
    if (logs.size() != m) fail("logs must list every free generator");
    fi.log_inf = RealMatrix(k, fi.r * n);
    for (std::size_t i = 0; i < m; ++i) {
        if (logs[i].size() != fi.r) fail("logs must list R_j for every j <= r");
        for (std::size_t jj = 0; jj < fi.r; ++jj) {
            if (logs[i][jj].size() != n) fail("each R_j must have |G| coefficients");
            std::vector<Real> base;
            for (const auto& x : logs[i][jj]) base.push_back(real_of(x));
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t s = 0; s < n; ++s) {
                    // (sigma_t R)[s] = R[s - t]
                    std::size_t src = g.index_of(g.add(g.element_at(s), g.negate(g.element_at(t))));
                    fi.log_inf(i * n + t, jj * n + s) = base[src];
                }
        }
    }
    fi.log_fin = RealMatrix(k, 0);
    fi.valuations = IntMatrix(k, 0);
    fi.u_s = RationalLattice::standard(k);
    fi.u_st = RationalLattice::standard(k);
    fi.t_kernel = IntMatrix(0, k + 1);
    HypothesisReport structural = check_hypotheses(ext, fi.r);
    fi.t_torsion_free = true;
    for (const auto& it : structural.items)
        if (it.id == "(4)") {
            fi.t_torsion_free = it.ok;
            fi.t_torsion_detail = it.detail;
        }

    std::map<std::size_t, Complex> table;
    const auto chars = enumerate_characters(g);
    for (const auto& [key, val] : j.at("leading_values").items()) {
        std::size_t idx = std::stoul(key);
        if (idx >= chars.size()) fail("leading value for a nonexistent character " + key);
        table[idx] = Complex(real_of(val));
    }
    std::optional<Complex> rth;
    if (j.contains("trivial_rth_coefficient")) rth = Complex(real_of(j.at("trivial_rth_coefficient")));
    for (const auto& [idx, v] : table) {
        std::size_t c = chars[idx].conj().index();
        if (table.count(c) && mp::abs(table.at(c).re - v.re) > fi.ctx.tolerance())
            fail("conjugate characters need equal leading values");
    }
    fi.lvalues = std::make_unique<TableLValues>(table, rth);
}

} // namespace

} // namespace rstark
