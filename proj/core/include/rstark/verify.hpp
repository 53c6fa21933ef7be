#pragma once

#include "rstark/stark.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rstark {

struct ReportValue {
    std::string name;
    std::string value;
    std::string note;
    std::vector<std::vector<std::string>> matrix;  // row-major rationals, for lattice bases
};

// kind: "stated" compares the formula as printed, "amended" the corrected form,
// "consistency" any internal cross-check
struct ReportCheck {
    std::string id;
    std::string kind = "consistency";
    std::string statement;
    bool passed = false;
    std::optional<Real> residual;
    std::string detail;
};

struct ReportSection {
    std::string id;
    std::string title;
    bool applicable = true;
    std::string note;
    std::vector<ReportValue> values;
    std::vector<ReportCheck> checks;

    bool passed() const;
    void value(std::string name, std::string v, std::string note = "");
    // HNF basis of an exact lattice, so the report can be re-checked without recomputation
    void basis(std::string name, const RationalLattice& l, std::string note = "");
    ReportCheck& check(std::string id, std::string kind, std::string statement, bool ok, std::string detail = "");
    const ReportCheck* find_check(const std::string& id) const;
    const ReportValue* find_value(const std::string& name) const;
};

struct VerificationReport {
    std::string command;
    std::string instance;
    std::string input;  // the field-instance file the report was computed from, if any
    unsigned precision = 0;
    std::vector<ReportSection> sections;

    bool passed() const;
    std::vector<std::string> failures() const;  // "section/check" ids
    const ReportSection* section(const std::string& id) const;
    std::string to_json() const;
    std::string to_text() const;
};

// Section builders. Everything computed for one instance lives in a VerificationEngine so
// the CLI subcommands can ask for subsets without recomputation.
class VerificationEngine {
public:
    explicit VerificationEngine(const FieldInstance& fi);
    ~VerificationEngine();
    VerificationEngine(const VerificationEngine&) = delete;
    VerificationEngine& operator=(const VerificationEngine&) = delete;

    // instance data and hypotheses; later sections are skipped when this fails
    ReportSection instance_section();
    ReportSection lvalue_section();
    ReportSection regulator_section();
    ReportSection stark_section();
    ReportSection index_section();
    ReportSection index_quotient_section();
    ReportSection regulator_image_section();
    ReportSection index_formula_section();

    bool hypotheses_hold() const;

private:
    struct State;
    State* s_;
};

// full report: every section, stopping after a hypothesis failure
VerificationReport verify_instance(const FieldInstance& fi);
// "index", "regulator", "stark", "lvalue" subsets
VerificationReport partial_report(const FieldInstance& fi, const std::string& command);

// L^{(r)}(0, chi) for a Dirichlet character given by its position in dirichlet_characters(f)
// or the keyword "quadratic"
VerificationReport lvalue_report(std::int64_t conductor, const std::string& character, const PrecisionContext& ctx);

// identities with a trivial expected value; with an instance the instance-level ones run too
VerificationReport selftest_report(const PrecisionContext& ctx, const FieldInstance* fi = nullptr);

std::string format_real(const Real& x, unsigned digits = 30);
std::string format_residual(const Real& x);

} // namespace rstark
