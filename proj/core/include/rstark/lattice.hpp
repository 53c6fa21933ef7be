#pragma once

#include "rstark/group_ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rstark {

using RatVector = std::vector<Rational>;

// Z-span of rational generators in Q^n, stored by its (canonical) HNF basis.
class RationalLattice {
public:
    RationalLattice() = default;
    RationalLattice(std::size_t ambient, const RatMatrix& generators);
    static RationalLattice standard(std::size_t n);

    std::size_t ambient() const { return n_; }
    std::size_t rank() const { return basis_.rows(); }
    const RatMatrix& basis() const { return basis_; }

    // coordinates in the HNF basis, or nullopt outside the Q-span
    std::optional<RatVector> coordinates(const RatVector& v) const;
    bool contains(const RatVector& v) const;
    bool contains(const RationalLattice& o) const;
    bool same_span(const RationalLattice& o) const;
    RationalLattice operator+(const RationalLattice& o) const;
    // image under v -> v * a
    RationalLattice image(const RatMatrix& a) const;
    RationalLattice scaled(const Rational& c) const;
    // Q-span intersected with Z^n
    RationalLattice saturation() const;

    bool operator==(const RationalLattice& o) const { return n_ == o.n_ && basis_ == o.basis_; }

private:
    std::size_t n_ = 0;
    RatMatrix basis_;
};

// Real lattice given by an independent generator family at the active precision.
class RealLattice {
public:
    RealLattice() = default;
    explicit RealLattice(RealMatrix basis) : basis_(std::move(basis)) {}
    // exact lattice pushed through the linear map v -> v * map
    static RealLattice from_exact(const RationalLattice& l, const RealMatrix& map);
    static RealLattice from_exact(const RationalLattice& l);

    std::size_t ambient() const { return basis_.cols(); }
    std::size_t rank() const { return basis_.rows(); }
    const RealMatrix& basis() const { return basis_; }

private:
    RealMatrix basis_;
};

// Lattice with a G-action; actions[i] is the matrix of the i-th generator of G on
// row vectors (g.v = v * A_g).
class GModuleLattice {
public:
    GModuleLattice() = default;
    GModuleLattice(FiniteAbelianGroup g, std::vector<RatMatrix> actions, RationalLattice lattice);
    // Z[G] with the regular action, optionally s copies side by side
    static GModuleLattice regular(const FiniteAbelianGroup& g, std::size_t copies = 1);
    // Z[G]-span of the given vectors of the ambient space of m
    GModuleLattice submodule(const RatMatrix& generators) const;
    GModuleLattice with_lattice(const RationalLattice& l) const;

    const FiniteAbelianGroup& group() const { return g_; }
    const RationalLattice& lattice() const { return lattice_; }
    const std::vector<RatMatrix>& actions() const { return actions_; }
    std::size_t ambient() const { return lattice_.ambient(); }
    std::size_t rank() const { return lattice_.rank(); }

    RatMatrix action(const Element& a) const;
    // Q[G] element acting on the ambient space
    RatMatrix action(const RationalGroupRing& x) const;
    // action on the coordinates of the lattice basis (integral)
    IntMatrix basis_action(const Element& a) const;
    // e.M as a lattice of the same ambient space
    GModuleLattice apply(const RationalGroupRing& x) const;
    // multiplicity of chi in C (x) M
    std::int64_t multiplicity(const Character& chi) const;

private:
    FiniteAbelianGroup g_;
    std::vector<RatMatrix> actions_;
    RationalLattice lattice_;
};

struct IncomparableLattices : std::domain_error {
    using std::domain_error::domain_error;
};
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (M : N) = |det gamma| with gamma(M) = N; 1 on zero rank
Rational sinnott_index(const RationalLattice& m, const RationalLattice& n);
Rational sinnott_index_p(const RationalLattice& m, const RationalLattice& n, const Integer& p);

struct RealIndex {
    Real value;
    std::optional<Rational> rationalized;
    Real span_defect;  // Frobenius norm bound on the sines of the principal angles
};
RealIndex sinnott_index(const RealLattice& m, const RealLattice& n, const PrecisionContext& ctx);

// |M^H / N_H M|
Integer tate_h0(const Subgroup& h, const GModuleLattice& m);

struct Semisimplification {
    GModuleLattice module;
    Rational index;  // (S(M) : M)
};
Semisimplification semisimplify(const GModuleLattice& m);

// Coordinates of r-fold wedges of a reference lattice M: Psi(x) = (Phi_J(x))_J, where
// Phi_J runs over wedges of the Z-basis of Hom_G(M, Z[G]) built from the dual basis.
class WedgeCoordinates {
public:
    WedgeCoordinates(const GModuleLattice& reference, std::size_t degree);

    std::size_t degree() const { return r_; }
    std::size_t dimension() const { return subsets_.size() * order_; }
    const std::vector<std::vector<std::size_t>>& dual_subsets() const { return subsets_; }
    const GModuleLattice& reference() const { return ref_; }

    // Psi(v_1 ^ ... ^ v_r) for ambient vectors inside Q M
    RatVector psi(const std::vector<RatVector>& vectors) const;
    // action of x in Q[G] on Psi-coordinates
    RatMatrix action(const RationalGroupRing& x) const;
    std::vector<RatMatrix> generator_actions() const;

private:
    GModuleLattice ref_;
    std::size_t r_;
    std::size_t order_;
    std::vector<std::vector<std::size_t>> subsets_;
    std::vector<RatMatrix> inverse_actions_;  // T_{g^{-1}} on basis coordinates, rational
};

struct WedgeSpace {
    std::size_t degree = 0;
    std::vector<std::vector<std::size_t>> basis_subsets;  // I over the Z-basis of M
    RatMatrix generators;                                 // Psi(b_I), one row per I
    GModuleLattice wedge_lattice;                         // tilde-wedge^r M in Psi-coordinates
    std::size_t dimension = 0;                            // Q-dimension of Q wedge^r
    std::size_t predicted_dimension = 0;                  // sum binom(m_W, r) dim W
    std::vector<std::size_t> orbit_dimensions;            // per rational orbit, direct
    std::vector<std::size_t> orbit_predictions;           // per rational orbit, binomial formula
};
WedgeSpace wedge_image(const GModuleLattice& m, std::size_t r);
// wedges of n expressed in the coordinates of a reference lattice m (same ambient space)
WedgeSpace wedge_image(const WedgeCoordinates& coords, const GModuleLattice& n);

GModuleLattice rubin_lattice(const GModuleLattice& m, std::size_t r);
GModuleLattice rubin_lattice(const WedgeSpace& w);
Rational rubin_vs_wedge_index(const GModuleLattice& m, std::size_t r, const RationalGroupRing& e);

std::string to_string(const RatMatrix& m);

} // namespace rstark
