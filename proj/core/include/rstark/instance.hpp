#pragma once

#include "rstark/arithmetic.hpp"
#include "rstark/lvalues.hpp"
#include "rstark/number_field.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rstark {

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite place of K in S: w = sigma_coset(w_0) for a fixed place w_0 above the prime.
struct FinitePlaceOfK {
    std::size_t prime = 0;  // index into ext.s_finite()
    Element coset;          // canonical coset representative of D_p
    Real log_norm;          // log N w
};

// Everything the engine needs about K: the extension data, the S-unit lattice with its
// G-action, and the logarithmic embeddings. For genuine instances the exact field and
// S-units are kept as well; synthetic instances carry only the module and its logs.
class FieldInstance {
public:
    std::string name;
    bool genuine = true;
    std::size_t r = 1;
    ExtensionData ext;
    PrecisionContext ctx;
    unsigned data_digits = 0;

    // genuine k = Q data
    std::int64_t conductor = 1;
    ResidueClassGroup classes;
    NumberField field;
    std::vector<Real> theta_values;               // iota_c(theta) by G enumeration index of c
    std::vector<NumberField::Elt> sigma_theta;    // sigma_g(theta) by G index
    std::vector<std::string> unit_names;
    std::vector<NumberField::Elt> units;
    std::map<std::string, Integer> class_numbers;
    std::vector<std::pair<std::string, std::string>> exact_checks;  // (what, outcome) log of load-time checks

    // unit module; for genuine data the ambient is Z^k (exponents on the listed S-units,
    // the sign handled separately); synthetic data is the free module Z[G]^rank
    std::size_t unit_rank = 0;
    std::vector<IntMatrix> signed_generator_actions;  // (1+k)x(1+k), column 0 mod 2; genuine only
    std::vector<RatMatrix> generator_actions;         // k x k
    std::vector<FinitePlaceOfK> finite_places;
    IntMatrix valuations;   // k x #finite places (genuine)
    RealMatrix log_inf;     // k x r|G|: block j holds the coefficients of R_j
    RealMatrix log_fin;     // k x #finite places: v_w log N w

    RationalLattice u_s;       // U_S(K) / torsion
    RationalLattice u_st;      // U_{S,T}(K)
    RationalLattice u_inf;     // U_{S_inf}(K) / torsion
    IntMatrix t_kernel;        // (sign, exponents) congruent to 1 modulo T, HNF basis
    bool t_torsion_free = true;
    std::string t_torsion_detail;

    std::unique_ptr<LValueSource> lvalues;

    FieldInstance() = default;
    FieldInstance(FieldInstance&&) = default;
    FieldInstance& operator=(FieldInstance&&) = default;

    const FiniteAbelianGroup& group() const { return ext.group; }
    std::size_t order() const { return static_cast<std::size_t>(ext.group.order()); }

    // k x k action of an arbitrary element / group ring element on exponent vectors
    RatMatrix action(const Element& g) const;
    // signed action on (sign, exponents), column 0 reduced mod 2
    IntMatrix signed_action(const Element& g) const;
    GModuleLattice module(const RationalLattice& l) const;

    // hypothesis report with the exact torsion test for genuine data
    HypothesisReport hypotheses() const;

    // exponent vectors of S-units of F = K^H: fixed by H up to a sign that is itself in F
    RationalLattice fixed_units(const Subgroup& h) const;
    // U_{S_g, T}(K_g) inside the exponent space of K
    RationalLattice subfield_st_units(const SubExtension& sub) const;
    // U_{S_inf}(F)/torsion inside the exponent space of K
    RationalLattice subfield_units_inf(const Subgroup& h) const;

    // ingested class number of K^H; keys "K", "Q", or "<f>:<residues of H>"
    std::string subfield_key(const Subgroup& h) const;
    std::optional<Integer> class_number(const Subgroup& h) const;

    // exact element (-1)^sign prod u_i^x_i of a genuine instance
    NumberField::Elt unit_element(const std::vector<Integer>& x, bool negative) const;
    // sign bit making (-1)^s u^x congruent to 1 modulo T, or nullopt if neither sign works
    std::optional<bool> t_sign(const std::vector<Integer>& x) const;
    // real embedding iota_c for c given by G index
    Real embed(const NumberField::Elt& a, std::size_t g_index) const;
};

FieldInstance load_field_instance(const std::string& path, const PrecisionContext& ctx);
FieldInstance parse_field_instance(const std::string& text, const PrecisionContext& ctx);

// Z-intersection of two lattices in the same ambient space
RationalLattice intersect(const RationalLattice& a, const RationalLattice& b);

} // namespace rstark
