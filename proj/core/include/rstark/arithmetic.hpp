#pragma once

#include "rstark/lattice.hpp"

#include <string>
#include <vector>

namespace rstark {

struct PlaceData {
    std::string label;
    Integer norm;           // N p (for k = Q the residue field size)
    Subgroup inertia;
    Subgroup decomposition;
    Element frobenius;      // representative, well defined modulo inertia

    // residue degree f = |D/I|
    std::int64_t residue_degree() const {
        return static_cast<std::int64_t>(decomposition.order() / inertia.order());
    }
};

// Abstract ramification data of K/k with Galois group G. S = S_inf + ramified + s_prime.
struct ExtensionData {
    FiniteAbelianGroup group;
    std::size_t r = 1;  // infinite places of k, all split in K
    std::vector<PlaceData> ramified;
    std::vector<PlaceData> s_prime;
    std::vector<PlaceData> t;
    std::int64_t torsion_order = 2;  // |mu(K)|

    std::vector<PlaceData> s_finite() const;
    std::size_t s_size() const { return r + ramified.size() + s_prime.size(); }
    const PlaceData& ramified_place(const std::string& label) const;
    void validate() const;
};

// subset of ramified labels, kept sorted
struct CycleDivisor {
    std::vector<std::string> primes;
    static CycleDivisor of(std::vector<std::string> labels);
    std::string str() const;
    bool operator==(const CycleDivisor& o) const { return primes == o.primes; }
};
// all divisors of the radical of the conductor, (1) first
std::vector<CycleDivisor> divisors_of_radical(const ExtensionData& ext);

std::size_t order_of_vanishing(const Character& chi, const ExtensionData& ext);

struct HypothesisItem {
    std::string id;
    bool ok = false;
    std::string detail;
};
struct HypothesisReport {
    std::vector<HypothesisItem> items;
    bool passed() const;
    std::string first_failure() const;
};
// structural checks; torsion-freeness for abstract data is decided by the parity of the
// norms in T (mu = {+-1} for totally real K)
HypothesisReport check_hypotheses(const ExtensionData& ext, std::size_t r);

Subgroup inertia_span(const CycleDivisor& a, const ExtensionData& ext);

struct SubExtension {
    std::string label;
    ExtensionData ext;
    Quotient quotient;  // G -> Gal(F/k)
    Subgroup h;         // Gal(K/F)
};
PlaceData push_place(const PlaceData& p, const Quotient& q);
// fixed field of a subgroup; ramified places with trivial image inertia move to s_prime
SubExtension fixed_field(const ExtensionData& ext, const Subgroup& h, const std::string& label);
// K_g: fixed field of the inertia span of f/g, with S_g = S_inf + {q | g} + S'
SubExtension subfield_K_g(const CycleDivisor& g, const ExtensionData& ext);
// K_I: fixed field of the span of the decomposition groups D_i, i in I (indices into ramified)
SubExtension subfield_K_I(const std::vector<std::size_t>& indices, const ExtensionData& ext);

// group ring elements attached to the extension
RationalGroupRing e_S_r(const ExtensionData& ext, std::size_t r);
RationalGroupRing delta_T(const ExtensionData& ext);
// prod over S' of (1 - sigma_v^{-1})
RationalGroupRing delta_S_prime(const ExtensionData& ext);
// alpha(r, s) generators and the module they span inside Q[G]
RationalGroupRing sinnott_alpha(const ExtensionData& ext, std::size_t r, const CycleDivisor& rr, const CycleDivisor& s);
GModuleLattice sinnott_module(const ExtensionData& ext, std::size_t r, const CycleDivisor& s);

} // namespace rstark
