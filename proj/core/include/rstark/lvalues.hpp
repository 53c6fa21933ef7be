#pragma once

#include "rstark/arithmetic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace rstark {

// (Z/f)^x modulo a subgroup, presented as a FiniteAbelianGroup with a discrete log table.
class ResidueClassGroup {
public:
    ResidueClassGroup() = default;
    ResidueClassGroup(std::int64_t modulus, std::vector<std::int64_t> kernel);

    std::int64_t modulus() const { return f_; }
    const FiniteAbelianGroup& group() const { return group_; }
    const std::vector<std::int64_t>& kernel() const { return kernel_; }
    // class of a unit residue; throws if gcd(a, f) != 1
    Element element_of(std::int64_t a) const;
    // smallest positive residue in the class
    std::int64_t representative(const Element& e) const;
    std::vector<std::int64_t> residues_of(const Element& e) const;

private:
    std::int64_t f_ = 1;
    std::vector<std::int64_t> kernel_;
    FiniteAbelianGroup group_;
    std::map<std::int64_t, Element> log_;                 // residue -> class
    std::map<std::size_t, std::vector<std::int64_t>> fibres_;  // class index -> residues
};

// Dirichlet character mod f; values are exponents of zeta_m, residues not coprime to f map to 0.
class DirichletCharacter {
public:
    DirichletCharacter() = default;
    DirichletCharacter(std::int64_t modulus, std::int64_t m, std::map<std::int64_t, std::int64_t> exponents);
    // pull back a character of (Z/f)^x / H along the residue map
    static DirichletCharacter from_group(const Character& chi, const ResidueClassGroup& classes);

    std::int64_t modulus() const { return f_; }
    std::int64_t root_order() const { return m_; }
    bool coprime(std::int64_t a) const;
    std::int64_t exponent_at(std::int64_t a) const;  // requires gcd(a, f) = 1
    Complex value(std::int64_t a) const;             // 0 off the units
    bool is_trivial() const;
    bool is_even() const;
    std::int64_t order() const;
    const std::map<std::int64_t, std::int64_t>& exponents() const { return exp_; }

private:
    std::int64_t f_ = 1;
    std::int64_t m_ = 1;
    std::map<std::int64_t, std::int64_t> exp_;
};

struct PrimitivePart {
    DirichletCharacter character;
    std::int64_t conductor = 1;
};
PrimitivePart primitive_part(const DirichletCharacter& psi);

// all characters of (Z/f)^x
std::vector<DirichletCharacter> dirichlet_characters(std::int64_t f);
// the unique even primitive quadratic character of conductor f, if any
std::optional<DirichletCharacter> quadratic_character(std::int64_t f);

// L'(0, chi) = -1/2 sum_{a mod f} chi(a) log|1 - zeta_f^a| for even primitive nontrivial chi
Complex l_derivative_at_0(const DirichletCharacter& chi, const PrecisionContext& ctx);

Real zeta_at_0();        // -1/2
Real zeta_prime_at_0();  // -log(2 pi)/2 at the active precision

// Leading Taylor coefficient of the primitive L(s, chi-hat) at s = 0 for characters of
// the Galois group of K; order is r for chi != 1 and r - 1 for chi = 1.
class LValueSource {
public:
    virtual ~LValueSource() = default;
    virtual Complex primitive_leading(const Character& chi) const = 0;
    // coefficient of s^r of zeta_k(s), one order past its leading term
    virtual Complex trivial_rth_coefficient() const = 0;
    virtual std::string provenance(const Character& chi) const = 0;
};

// genuine k = Q: explicit finite sums over the conductor
class DirichletLValues : public LValueSource {
public:
    DirichletLValues(ResidueClassGroup classes, PrecisionContext ctx) : classes_(std::move(classes)), ctx_(ctx) {}
    Complex primitive_leading(const Character& chi) const override;
    Complex trivial_rth_coefficient() const override;
    std::string provenance(const Character& chi) const override;

private:
    ResidueClassGroup classes_;
    PrecisionContext ctx_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, Complex> cache_;
};

// synthetic data: caller-supplied values keyed by the character index on G
class TableLValues : public LValueSource {
public:
    TableLValues(std::map<std::size_t, Complex> table, std::optional<Complex> trivial_rth)
        : table_(std::move(table)), trivial_rth_(std::move(trivial_rth)) {}
    Complex primitive_leading(const Character& chi) const override;
    Complex trivial_rth_coefficient() const override;
    std::string provenance(const Character&) const override { return "supplied"; }

private:
    std::map<std::size_t, Complex> table_;
    std::optional<Complex> trivial_rth_;
};

// Characters of a quotient Gal(F/k) are looked up through inflation to G.
struct LContext {
    const LValueSource* source = nullptr;
    const Quotient* quotient = nullptr;  // null when F = K
    Complex primitive(const Character& psi) const;
    // coefficient of s^r of the primitive L-function; differs from primitive() only at psi = 1
    Complex primitive_rth(const Character& psi) const;
};

// Leading coefficient at s = 0 of L_{S,T}(s, psi) for a character psi of Gal(F/k), where
// (S, T) come from ext; the result is the coefficient of s^{r_S(psi)}.
Complex l_ST_leading(const Character& psi, const ExtensionData& ext, const LContext& lc, const PrecisionContext& ctx);

// sum over characters of a_chi e_chi, required to have real coefficients
RealGroupRing assemble_idempotents(const FiniteAbelianGroup& g, const std::map<std::size_t, Complex>& values,
                                   const PrecisionContext& ctx);

// Theta^{(r)}_{S,T}(0) = sum_{r_S(chi) = r} L^{(r)}_{S,T}(0, chi^{-1}) e_chi
RealGroupRing stickelberger_leading(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx);
// omega = sum_{r_S(chi) = r} L^{(r)}(0, chi-hat) e_{chi^{-1}}
RealGroupRing omega_K(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx);
// product of L^{(r)}(0, chi-hat) over r_S(chi) = r
Complex omega_determinant(const ExtensionData& ext, std::size_t r, const LContext& lc, const PrecisionContext& ctx);

// zeta*_F(0) as the product over characters of Gal(F/Q) of primitive leading terms
Complex zeta_star_from_characters(const FiniteAbelianGroup& gal_f, const LContext& lc, const PrecisionContext& ctx);
Real zeta_star_from_class_number(const Integer& h, const Real& reg, std::int64_t torsion);

} // namespace rstark
