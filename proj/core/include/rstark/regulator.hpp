#pragma once

#include "rstark/instance.hpp"

#include <optional>
#include <random>
#include <vector>

namespace rstark {

// L_S(x) for an exponent vector: infinite coordinates (place sigma_t w_j at column j|G| + t)
// followed by the finite places in FieldInstance order
std::vector<Real> log_embedding(const FieldInstance& fi, const RatVector& x);

// (R_1(x), ..., R_r(x)) in R[G]
std::vector<RealGroupRing> regulator_components(const FieldInstance& fi, const RatVector& x);
// determinant of a square matrix over R[G] (Laplace expansion)
RealGroupRing group_ring_determinant(const std::vector<std::vector<RealGroupRing>>& m);

// R_w on the r-th exterior power of a unit module M (ambient = exponent space of fi),
// available both on tuples of vectors and on Psi-coordinates.
class RegulatorMap {
public:
    RegulatorMap(const FieldInstance& fi, const GModuleLattice& m, std::size_t r);

    const WedgeCoordinates& coords() const { return coords_; }
    const WedgeSpace& wedges() const { return wedges_; }
    std::size_t degree() const { return r_; }

    RealGroupRing of_vectors(const std::vector<RatVector>& v) const;
    // linear extension through the wedges of the lattice basis
    RealGroupRing of_psi(const RatVector& psi) const;
    // R_w applied to rows given in Psi-coordinates, as a real lattice in R[G]
    RealLattice image(const RatMatrix& psi_rows) const;

private:
    const FieldInstance* fi_;
    std::size_t r_;
    WedgeCoordinates coords_;
    WedgeSpace wedges_;
    RatMatrix independent_;                 // maximal independent subset of Psi(b_I)
    std::vector<RealGroupRing> values_;     // R_w(b_I) on that subset
};

RealLattice real_lattice(const std::vector<RealGroupRing>& rows);

// pi_F(R_w(u)) = |H|^r R_{w'}(u) for u an r-tuple of units of F = K^H; returns the largest
// coefficient residual relative to the size of the values over `samples` random tuples
struct RestrictionCheck {
    std::string subfield;
    std::size_t samples = 0;
    Real residual;
};
RestrictionCheck restricted_regulator_check(const FieldInstance& fi, const Subgroup& h, std::size_t samples,
                                            std::mt19937_64& rng);

// degree-zero divisors X(F) of F = K^H in the coordinates Z[Gal(F/k)]
RationalLattice degree_zero_divisors(std::size_t places);

struct SubfieldRegulator {
    Real value;                  // Reg_F
    Real minor_determinant;      // same number as a classical (n-1)-minor
    std::size_t rank = 0;
};
SubfieldRegulator classical_regulator(const FieldInstance& fi, const Subgroup& h);

struct IndexPair {
    Rational exact;              // from exponent lattices
    RealIndex numeric;           // from logarithmic images
};

struct CConstant {
    IndexPair unit_index;        // (S(lambda U^{N_H}) : lambda U^{N_H})
    Rational divisor_index;      // (S(X^{N_H}) : X^{N_H})
    Integer h0;                  // |H^0(H, U_{S_inf}(K))| with torsion
    Rational value;
};
// Tate H^0 of U_{S_inf}(K) including the roots of unity +-1
Integer tate_h0_with_torsion(const FieldInstance& fi, const Subgroup& h);
CConstant c_constant(const FieldInstance& fi, const Subgroup& h);

struct CKrConstant {
    IndexPair unit_index;        // (S(e lambda U) : e lambda U)
    Rational divisor_index;      // (S(eX) : eX)
    Rational value;
};
CKrConstant c_K_r(const FieldInstance& fi, const RationalGroupRing& e);

} // namespace rstark
