#include "rstark/arithmetic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rstark {

std::vector<PlaceData> ExtensionData::s_finite() const {
    std::vector<PlaceData> out = ramified;
    out.insert(out.end(), s_prime.begin(), s_prime.end());
    return out;
}

const PlaceData& ExtensionData::ramified_place(const std::string& label) const {
    for (const auto& p : ramified)
        if (p.label == label) return p;
    throw std::invalid_argument("'" + label + "' is not a ramified place");
}

void ExtensionData::validate() const {
    std::set<std::string> labels;
    auto check_place = [&](const PlaceData& p, const char* role) {
        if (!labels.insert(p.label).second)
            throw std::invalid_argument("place " + p.label + " listed twice (S' and T must be disjoint from each other and from the ramified set)");
        if (!(p.inertia.parent() == group) || !(p.decomposition.parent() == group))
            throw std::invalid_argument("place " + p.label + " refers to a different group");
        if (!p.decomposition.contains(p.inertia))
            throw std::invalid_argument("place " + p.label + ": inertia not inside decomposition");
        if (!p.decomposition.contains(p.frobenius))
            throw std::invalid_argument("place " + p.label + ": Frobenius outside decomposition group");
        std::vector<Element> gens = p.inertia.generators();
        gens.push_back(p.frobenius);
        if (!(Subgroup(group, gens) == p.decomposition))
            throw std::invalid_argument("place " + p.label + ": D/I is not generated by the Frobenius");
        if (p.norm < 2) throw std::invalid_argument(std::string(role) + " place " + p.label + " has norm < 2");
    };
    for (const auto& p : ramified) {
        check_place(p, "ramified");
        if (p.inertia.is_trivial()) throw std::invalid_argument("ramified place " + p.label + " has trivial inertia");
    }
    for (const auto& p : s_prime) {
        check_place(p, "S'");
        if (!p.inertia.is_trivial()) throw std::invalid_argument("S' place " + p.label + " is ramified");
    }
    for (const auto& p : t) {
        check_place(p, "T");
        if (!p.inertia.is_trivial()) throw std::invalid_argument("T place " + p.label + " is ramified");
    }
}

CycleDivisor CycleDivisor::of(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return CycleDivisor{std::move(labels)};
}

std::string CycleDivisor::str() const {
    if (primes.empty()) return "(1)";
    std::string s;
    for (const auto& p : primes) s += (s.empty() ? "" : "*") + p;
    return s;
}

std::vector<CycleDivisor> divisors_of_radical(const ExtensionData& ext) {
    const std::size_t n = ext.ramified.size();
    if (n > 20) throw std::length_error("too many ramified places");
    std::vector<CycleDivisor> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) labels.push_back(ext.ramified[i].label);
        out.push_back(CycleDivisor::of(labels));
    }
    return out;
}

std::size_t order_of_vanishing(const Character& chi, const ExtensionData& ext) {
    if (chi.is_trivial()) return ext.s_size() - 1;
    std::size_t count = ext.r;
    for (const auto& v : ext.s_finite())
        if (chi.trivial_on(v.decomposition)) ++count;
    return count;
}

bool HypothesisReport::passed() const {
    return std::all_of(items.begin(), items.end(), [](const HypothesisItem& i) { return i.ok; });
}

std::string HypothesisReport::first_failure() const {
    for (const auto& i : items)
        if (!i.ok) return i.id + ": " + i.detail;
    return {};
}

namespace {

Integer residue_characteristic(const Integer& norm) {
    for (Integer p = 2; p * p <= norm; ++p)
        if (norm % p == 0) return p;
    return norm;
}

std::vector<Integer> prime_factors(std::int64_t n) {
    std::vector<Integer> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace

HypothesisReport check_hypotheses(const ExtensionData& ext, std::size_t r) {
    HypothesisReport rep;
    {
        HypothesisItem it{"(1)", true, "S contains the infinite and ramified places"};
        try {
            ext.validate();
        } catch (const std::exception& e) {
            it.ok = false;
            it.detail = e.what();
        }
        rep.items.push_back(it);
    }
    {
        // infinite places of k split completely since K is totally real
        HypothesisItem it{"(2)", ext.r >= r, "split places in S: " + std::to_string(ext.r) + ", need " + std::to_string(r)};
        rep.items.push_back(it);
    }
    {
        HypothesisItem it{"(3)", ext.s_size() >= r + 1, "|S| = " + std::to_string(ext.s_size()) + ", need >= " + std::to_string(r + 1)};
        rep.items.push_back(it);
    }
    {
        HypothesisItem it{"(4)", true, "T nonempty, disjoint from S, U_{S,T} torsion-free"};
        if (ext.t.empty()) {
            it.ok = false;
            it.detail = "T is empty";
        }
        std::set<std::string> s_labels;
        for (const auto& v : ext.s_finite()) s_labels.insert(v.label);
        for (const auto& q : ext.t)
            if (s_labels.count(q.label)) {
                it.ok = false;
                it.detail = "T meets S at " + q.label;
            }
        // a root of unity of prime order l survives iff every place of T has residue characteristic l
        if (it.ok) {
            for (const auto& l : prime_factors(ext.torsion_order)) {
                bool killed = false;
                for (const auto& q : ext.t)
                    if (residue_characteristic(q.norm) != l) killed = true;
                if (!killed) {
                    it.ok = false;
                    it.detail = "U_{S,T} has torsion: roots of unity of order " + l.str() +
                                " are congruent to 1 at every place of T";
                }
            }
        }
        rep.items.push_back(it);
    }
    return rep;
}

Subgroup inertia_span(const CycleDivisor& a, const ExtensionData& ext) {
    Subgroup out = Subgroup::trivial(ext.group);
    for (const auto& label : a.primes) out = out.join(ext.ramified_place(label).inertia);
    return out;
}

namespace {

Subgroup push_subgroup(const Subgroup& s, const Quotient& q) {
    std::vector<Element> gens;
    for (const auto& g : s.generators()) gens.push_back(q.project(g));
    return Subgroup(q.target, gens);
}

// keep[i]: whether ramified place i stays in S for the subextension
SubExtension build_sub(const ExtensionData& ext, const Subgroup& h, const std::string& label, const std::vector<bool>& keep) {
    SubExtension out;
    out.label = label;
    out.h = h;
    out.quotient = quotient_and_projection(ext.group, h);
    ExtensionData& f = out.ext;
    f.group = out.quotient.target;
    f.r = ext.r;
    f.torsion_order = ext.torsion_order;
    for (std::size_t i = 0; i < ext.ramified.size(); ++i) {
        if (!keep[i]) continue;
        PlaceData p = push_place(ext.ramified[i], out.quotient);
        (p.inertia.is_trivial() ? f.s_prime : f.ramified).push_back(p);
    }
    for (const auto& v : ext.s_prime) f.s_prime.push_back(push_place(v, out.quotient));
    for (const auto& v : ext.t) f.t.push_back(push_place(v, out.quotient));
    return out;
}

} // namespace

PlaceData push_place(const PlaceData& p, const Quotient& q) {
    PlaceData out;
    out.label = p.label;
    out.norm = p.norm;
    out.inertia = push_subgroup(p.inertia, q);
    out.decomposition = push_subgroup(p.decomposition, q);
    out.frobenius = q.project(p.frobenius);
    return out;
}

SubExtension fixed_field(const ExtensionData& ext, const Subgroup& h, const std::string& label) {
    return build_sub(ext, h, label, std::vector<bool>(ext.ramified.size(), true));
}

SubExtension subfield_K_g(const CycleDivisor& g, const ExtensionData& ext) {
    std::vector<bool> keep(ext.ramified.size(), false);
    std::vector<std::string> complement;
    for (const auto& label : g.primes) ext.ramified_place(label);  // throws unless g | f
    for (std::size_t i = 0; i < ext.ramified.size(); ++i) {
        keep[i] = std::binary_search(g.primes.begin(), g.primes.end(), ext.ramified[i].label);
        if (!keep[i]) complement.push_back(ext.ramified[i].label);
    }
    Subgroup h = inertia_span(CycleDivisor::of(complement), ext);
    return build_sub(ext, h, "K_" + g.str(), keep);
}

SubExtension subfield_K_I(const std::vector<std::size_t>& indices, const ExtensionData& ext) {
    if (indices.empty()) throw std::invalid_argument("K_I needs a nonempty index set");
    Subgroup d = Subgroup::trivial(ext.group);
    std::string label = "K_{";
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= ext.ramified.size()) throw std::out_of_range("ramified index out of range");
        d = d.join(ext.ramified[indices[k]].decomposition);
        label += (k ? "," : "") + ext.ramified[indices[k]].label;
    }
    return fixed_field(ext, d, label + "}");
}

RationalGroupRing e_S_r(const ExtensionData& ext, std::size_t r) {
    RationalGroupRing e = group_ring_zero(ext.group);
    for (const auto& orbit : rational_orbits(ext.group))
        if (order_of_vanishing(orbit.representative, ext) == r) e += orbit_idempotent(orbit);
    return e;
}

RationalGroupRing delta_T(const ExtensionData& ext) {
    const auto& g = ext.group;
    RationalGroupRing d = group_ring_one(g);
    for (const auto& q : ext.t) {
        if (!q.inertia.is_trivial()) throw std::domain_error("T place " + q.label + " is ramified");
        RationalGroupRing f = group_ring_one(g);
        f.at(g.negate(q.frobenius)) -= Rational(q.norm);
        d = d * f;
    }
    for (const auto& chi : enumerate_characters(g))
        if (character_value(d, chi).is_zero()) throw std::domain_error("delta_T is a zero divisor");
    return d;
}

RationalGroupRing delta_S_prime(const ExtensionData& ext) {
    const auto& g = ext.group;
    RationalGroupRing d = group_ring_one(g);
    for (const auto& v : ext.s_prime) {
        RationalGroupRing f = group_ring_one(g);
        f.at(g.negate(v.frobenius)) -= 1;
        d = d * f;
    }
    return d;
}

namespace {

RationalGroupRing euler_factor(const FiniteAbelianGroup& g, const Element& frob, const Subgroup& inertia) {
    RationalGroupRing f = group_ring_one(g);
    f -= group_element(g, g.negate(frob)) * inertia_idempotent(inertia);
    return f;
}

} // namespace

RationalGroupRing sinnott_alpha(const ExtensionData& ext, std::size_t r, const CycleDivisor& rr, const CycleDivisor& s) {
    const auto& g = ext.group;
    for (const auto& p : rr.primes)
        if (!std::binary_search(s.primes.begin(), s.primes.end(), p))
            throw std::invalid_argument(rr.str() + " does not divide " + s.str());
    RationalGroupRing norm = norm_element(inertia_span(rr, ext));
    RationalGroupRing a = group_ring_one(g);
    for (std::size_t k = 0; k < r; ++k) a = a * norm;
    for (const auto& label : s.primes) {
        if (std::binary_search(rr.primes.begin(), rr.primes.end(), label)) continue;
        const PlaceData& p = ext.ramified_place(label);
        RationalGroupRing f = euler_factor(g, p.frobenius, p.inertia);
        // sigma_p is only defined modulo inertia; a second representative must agree
        for (const auto& i : p.inertia.generators())
            if (!(euler_factor(g, g.add(p.frobenius, i), p.inertia) == f))
                throw std::logic_error("Euler factor at " + label + " depends on the Frobenius representative");
        a = a * f;
    }
    return a;
}

GModuleLattice sinnott_module(const ExtensionData& ext, std::size_t r, const CycleDivisor& s) {
    const std::size_t n = static_cast<std::size_t>(ext.group.order());
    RatMatrix gens(0, n);
    const std::size_t w = s.primes.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << w); ++mask) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < w; ++i)
            if (mask >> i & 1) labels.push_back(s.primes[i]);
        gens.append_row(sinnott_alpha(ext, r, CycleDivisor::of(labels), s).coefficients());
    }
    return GModuleLattice::regular(ext.group).submodule(gens);
}

} // namespace rstark
