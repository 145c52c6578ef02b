#include "linesim/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linesim {

MembershipFunction MembershipFunction::tri(double a, double b, double c) {
    if (!(a <= b && b <= c))
        throw std::invalid_argument("triangular membership needs a <= b <= c");
    return {Shape::Triangular, a, b, c, c};
}

MembershipFunction MembershipFunction::trap(double a, double b, double c, double d) {
    if (!(a <= b && b <= c && c <= d))
        throw std::invalid_argument("trapezoidal membership needs a <= b <= c <= d");
    return {Shape::Trapezoidal, a, b, c, d};
}

double MembershipFunction::grade(double u) const {
    const double p = (shape == Shape::Triangular) ? b : c;  // end of the plateau
    if (u < a || u > (shape == Shape::Triangular ? c : d)) return 0.0;
    if (u < b) return (b > a) ? (u - a) / (b - a) : 1.0;
    if (u <= p) return 1.0;
    const double hi = (shape == Shape::Triangular) ? c : d;
    return (hi > p) ? (hi - u) / (hi - p) : 1.0;
}

int LinguisticVariable::term_index(const std::string& label) const {
    for (size_t i = 0; i < terms.size(); ++i)
        if (terms[i].label == label) return (int)i;
    return -1;
}

FuzzyController::FuzzyController(std::vector<LinguisticVariable> inputs,
                                 std::vector<LinguisticVariable> outputs,
                                 std::vector<Rule> rules)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), rules_(std::move(rules)) {
    if (rules_.empty()) throw std::invalid_argument("rule base is empty");
    for (const auto& r : rules_) {
        if (r.antecedent.empty() || r.consequent.empty())
            throw std::invalid_argument("rule needs at least one conjunct and one consequent");
        for (auto [vi, ti] : r.antecedent)
            if (vi < 0 || vi >= (int)inputs_.size() || ti < 0 ||
                ti >= (int)inputs_[vi].terms.size())
                throw std::invalid_argument("rule references an unknown input term");
        for (auto [vi, ti] : r.consequent)
            if (vi < 0 || vi >= (int)outputs_.size() || ti < 0 ||
                ti >= (int)outputs_[vi].terms.size())
                throw std::invalid_argument("rule references an unknown output term");
    }
}

InferResult FuzzyController::infer(std::span<const double> crisp_inputs) const {
    if (crisp_inputs.size() != inputs_.size())
        throw std::invalid_argument("expected " + std::to_string(inputs_.size()) +
                                    " inputs, got " + std::to_string(crisp_inputs.size()));

    // Fuzzification, with inputs clamped into their universes.
    std::vector<std::vector<double>> grade(inputs_.size());
    for (size_t i = 0; i < inputs_.size(); ++i) {
        const auto& var = inputs_[i];
        double u = std::clamp(crisp_inputs[i], var.lo, var.hi);
        grade[i].resize(var.terms.size());
        for (size_t t = 0; t < var.terms.size(); ++t)
            grade[i][t] = var.terms[t].mf.grade(u);
    }

    // Clip level per (output, term): max firing strength over rules.
    std::vector<std::vector<double>> level(outputs_.size());
    for (size_t o = 0; o < outputs_.size(); ++o)
        level[o].assign(outputs_[o].terms.size(), 0.0);
    for (const auto& r : rules_) {
        double strength = 1.0;
        for (auto [vi, ti] : r.antecedent)
            strength = std::min(strength, grade[vi][ti]);
        if (strength <= 0.0) continue;
        for (auto [vi, ti] : r.consequent)
            level[vi][ti] = std::max(level[vi][ti], strength);
    }

    InferResult res;
    res.outputs.resize(outputs_.size());
    res.no_rule_fired.resize(outputs_.size());
    for (size_t o = 0; o < outputs_.size(); ++o) {
        const auto& var = outputs_[o];
        bool fired = false;
        for (double lv : level[o])
            if (lv > 0.0) fired = true;
        if (!fired) {
            res.outputs[o] = 0.5 * (var.lo + var.hi);
            res.no_rule_fired[o] = true;
            continue;
        }
        res.no_rule_fired[o] = false;
        const double step = (var.hi - var.lo) / (kCentroidSamples - 1);
        double num = 0.0, den = 0.0;
        for (int k = 0; k < kCentroidSamples; ++k) {
            const double x = var.lo + k * step;
            double m = 0.0;
            for (size_t t = 0; t < var.terms.size(); ++t) {
                if (level[o][t] <= 0.0) continue;
                double g = std::min(level[o][t], var.terms[t].mf.grade(x));
                if (g > m) m = g;
            }
            const double w = (k == 0 || k == kCentroidSamples - 1) ? 0.5 : 1.0;
            num += w * m * x;
            den += w * m;
        }
        res.outputs[o] = (den > 0.0) ? num / den : 0.5 * (var.lo + var.hi);
    }
    return res;
}

}  // namespace linesim
