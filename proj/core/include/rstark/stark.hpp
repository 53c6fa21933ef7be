#pragma once

#include "rstark/regulator.hpp"

#include <string>
#include <vector>

namespace rstark {

struct StarkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// eta_{K_g, S_g, T}. For genuine r = 1 data the element is an explicit S-unit
// (-1)^sign prod u_i^{exponents_i}; synthetic elements exist only through their
// regulator image, which the table fixes.
struct StarkElement {
    CycleDivisor g;
    std::string subfield;
    Subgroup h;                        // Gal(K/K_g)
    bool exact = false;
    std::vector<Integer> exponents;
    bool negative = false;
    RealGroupRing theta_f;             // Theta^{(r)}_{S_g,T}(0) on Gal(K_g/k)
    RealGroupRing target;              // |H|^{r-1} N_H lift(theta_f): the required R_w(eta) in R[G]
    RealGroupRing regulator;           // R_w(eta) evaluated from the element itself
    Real residual;                     // max |R_w(eta) - target| / max(1, |target|)
    Real rounding_distance;            // max distance of the real exponent solution to the integers
    std::string certificate;
};

// Solve R_w(eta) = target inside e_{S_g,r} Q U_{S_g,T}(K_g), round and certify.
StarkElement solve_stark_element(const FieldInstance& fi, const CycleDivisor& g);

struct StarkModule {
    std::vector<StarkElement> elements;
    bool exact = false;
    RatMatrix psi_generators;   // one row per eta, Psi-coordinates over U_{S,T}(K) (exact only)
    GModuleLattice lattice;     // Z[G]-span of those rows (exact only)
};
StarkModule build_stark_module(const FieldInstance& fi, const RegulatorMap& reg);

// Z-span of real vectors that are rational combinations of the rows of ref. Coordinates are
// recognized by continued fractions, reduced exactly, and the span is rebuilt in R[G].
struct RecognizedSpan {
    bool ok = false;
    std::string detail;
    RationalLattice coordinates;    // HNF of the recognized coordinate rows
    RealMatrix basis;               // coordinates.basis() * ref
    Rational index_in_reference;    // (ref : span)
    Real fit_residual;              // worst relative least-squares residual
};
RecognizedSpan recognize_span(const RealMatrix& ref, const std::vector<std::vector<Real>>& gens,
                              const PrecisionContext& ctx);

// e * sigma * x for every sigma in G, as plain coefficient vectors
std::vector<std::vector<Real>> orbit_vectors(const RealGroupRing& x, const RationalGroupRing& e);

// the inflation of an idempotent-like element of Q[Gal(F/k)] to Q[G]: x[pi(t)] / |H| at t
RationalGroupRing lift_from_quotient(const RationalGroupRing& x, const Quotient& q);

} // namespace rstark
