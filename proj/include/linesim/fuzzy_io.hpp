#pragma once
#include <string>
#include <vector>

#include "linesim/fuzzy.hpp"

namespace linesim {

// Parsed rule-base file, before name resolution. Rules keep symbolic
// variable/term references so the validator can report unknown names as
// diagnostics instead of hard parse failures.
struct RuleBaseDoc {
    struct SymbolicClause {
        std::string var, term;
    };
    struct SymbolicRule {
        std::vector<SymbolicClause> antecedent;
        std::vector<SymbolicClause> consequent;
        int line = 0;
    };
    std::string path;
    std::vector<LinguisticVariable> inputs;
    std::vector<LinguisticVariable> outputs;
    std::vector<SymbolicRule> rules;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    int line = 0;
    std::string message;
};

RuleBaseDoc parse_rulebase_text(const std::string& text, const std::string& name);
RuleBaseDoc parse_rulebase(const std::string& path);

// Resolves symbolic references; throws ParseError on unknown names.
FuzzyController compile_rulebase(const RuleBaseDoc& doc);

// Errors: unknown variable/term references; outputs left uncovered (no rule
// fires) somewhere on a seeded sample grid; roster not 6 inputs / 3 outputs.
// Warnings: rules without a mirror counterpart, asymmetric variable layouts.
std::vector<Diagnostic> validate_rulebase(const RuleBaseDoc& doc);

// parse + compile + enforce the 6-input/3-output controller roster.
FuzzyController load_controller(const std::string& path);

}  // namespace linesim
