#pragma once
#include <span>
#include <string>
#include <vector>

namespace linesim {

// Piecewise-linear membership function; triangular(a,b,c) or
// trapezoidal(a,b,c,d), parameters in the variable's physical unit.
struct MembershipFunction {
    enum class Shape { Triangular, Trapezoidal };
    Shape shape = Shape::Triangular;
    double a = 0, b = 0, c = 0, d = 0;  // d unused for triangles

    double grade(double u) const;

    static MembershipFunction tri(double a, double b, double c);
    static MembershipFunction trap(double a, double b, double c, double d);
};

struct Term {
    std::string label;
    MembershipFunction mf;
};

struct LinguisticVariable {
    std::string name;
    double lo = 0.0, hi = 1.0;  // universe
    std::vector<Term> terms;

    int term_index(const std::string& label) const;  // -1 when absent
};

struct Rule {
    // (variable index, term index); antecedent conjuncts are AND-combined.
    std::vector<std::pair<int, int>> antecedent;
    std::vector<std::pair<int, int>> consequent;
    int src_line = 0;  // rule-base file line, 0 when built in code
};

struct InferResult {
    std::vector<double> outputs;
    std::vector<bool> no_rule_fired;  // per output
};

// Mamdani controller: min AND, min (clipping) implication, max aggregation,
// centroid defuzzification over a 1001-sample discretization of each output
// universe. Immutable after construction; infer() is pure.
class FuzzyController {
public:
    FuzzyController() = default;
    FuzzyController(std::vector<LinguisticVariable> inputs,
                    std::vector<LinguisticVariable> outputs,
                    std::vector<Rule> rules);

    InferResult infer(std::span<const double> crisp_inputs) const;

    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const std::vector<LinguisticVariable>& outputs() const { return outputs_; }
    const std::vector<Rule>& rules() const { return rules_; }

    static constexpr int kCentroidSamples = 1001;

private:
    std::vector<LinguisticVariable> inputs_;
    std::vector<LinguisticVariable> outputs_;
    std::vector<Rule> rules_;
};

}  // namespace linesim
