#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "linesim/fuzzy_io.hpp"
#include "linesim/util.hpp"

namespace linesim {

namespace {

LinguisticVariable* find_var(RuleBaseDoc& doc, const std::string& name) {
    for (auto& v : doc.inputs)
        if (v.name == name) return &v;
    for (auto& v : doc.outputs)
        if (v.name == name) return &v;
    return nullptr;
}

const LinguisticVariable* find_in(const std::vector<LinguisticVariable>& vars,
                                  const std::string& name, int* idx = nullptr) {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) {
            if (idx) *idx = (int)i;
            return &vars[i];
        }
    return nullptr;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(trim(s.substr(pos)));
            break;
        }
        out.push_back(trim(s.substr(pos, next - pos)));
        pos = next + sep.size();
    }
    return out;
}

RuleBaseDoc::SymbolicClause parse_clause(const std::string& text, const std::string& file,
                                         int line) {
    auto toks = split_ws(text);
    if (toks.size() != 3 || toks[1] != "IS")
        throw ParseError(file, line, "expected '<variable> IS <TERM>', got '" + text + "'");
    return {toks[0], toks[2]};
}

}  // namespace

RuleBaseDoc parse_rulebase_text(const std::string& text, const std::string& name) {
    RuleBaseDoc doc;
    doc.path = name;
    std::istringstream stream(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t hash = line.find(" #");
        if (hash != std::string::npos) line = trim(line.substr(0, hash));

        auto toks = split_ws(line);
        const std::string& kw = toks[0];

        if (kw == "input" || kw == "output") {
            if (toks.size() != 4)
                throw ParseError(name, lineno, kw + " needs: " + kw + " <name> <lo> <hi>");
            LinguisticVariable v;
            v.name = toks[1];
            v.lo = parse_num(toks[2], name, lineno);
            v.hi = parse_num(toks[3], name, lineno);
            if (!(v.lo < v.hi))
                throw ParseError(name, lineno, "universe must satisfy lo < hi");
            if (find_var(doc, v.name))
                throw ParseError(name, lineno, "duplicate variable '" + v.name + "'");
            (kw == "input" ? doc.inputs : doc.outputs).push_back(std::move(v));
        } else if (kw == "term") {
            if (toks.size() < 5)
                throw ParseError(name, lineno,
                                 "term needs: term <var> <LABEL> tri|trap <params...>");
            LinguisticVariable* var = find_var(doc, toks[1]);
            if (!var)
                throw ParseError(name, lineno, "term references unknown variable '" + toks[1] + "'");
            if (var->term_index(toks[2]) >= 0)
                throw ParseError(name, lineno,
                                 "duplicate term '" + toks[2] + "' for '" + var->name + "'");
            const std::string& shape = toks[3];
            size_t nparam = toks.size() - 4;
            MembershipFunction mf;
            try {
                if (shape == "tri" && nparam == 3) {
                    mf = MembershipFunction::tri(parse_num(toks[4], name, lineno),
                                                 parse_num(toks[5], name, lineno),
                                                 parse_num(toks[6], name, lineno));
                } else if (shape == "trap" && nparam == 4) {
                    mf = MembershipFunction::trap(parse_num(toks[4], name, lineno),
                                                  parse_num(toks[5], name, lineno),
                                                  parse_num(toks[6], name, lineno),
                                                  parse_num(toks[7], name, lineno));
                } else {
                    throw ParseError(name, lineno,
                                     "shape must be 'tri a b c' or 'trap a b c d'");
                }
            } catch (const std::invalid_argument& e) {
                throw ParseError(name, lineno, e.what());
            }
            double support_hi = (mf.shape == MembershipFunction::Shape::Triangular) ? mf.c : mf.d;
            if (mf.a < var->lo - 1e-9 || support_hi > var->hi + 1e-9)
                throw ParseError(name, lineno, "term support exceeds the universe of '" +
                                                   var->name + "'");
            var->terms.push_back({toks[2], mf});
        } else if (kw == "rule") {
            std::string body = trim(line.substr(4));
            if (body.rfind("IF ", 0) != 0)
                throw ParseError(name, lineno, "rule must start with IF");
            size_t then_pos = body.find(" THEN ");
            if (then_pos == std::string::npos)
                throw ParseError(name, lineno, "rule is missing THEN");
            std::string ante = body.substr(3, then_pos - 3);
            std::string cons = body.substr(then_pos + 6);
            RuleBaseDoc::SymbolicRule rule;
            rule.line = lineno;
            for (const auto& part : split_on(ante, " AND "))
                rule.antecedent.push_back(parse_clause(part, name, lineno));
            for (const auto& part : split_on(cons, ","))
                rule.consequent.push_back(parse_clause(part, name, lineno));
            if (rule.antecedent.empty() || rule.consequent.empty())
                throw ParseError(name, lineno, "rule needs a condition and a conclusion");
            doc.rules.push_back(std::move(rule));
        } else {
            throw ParseError(name, lineno, "unknown directive '" + kw + "'");
        }
    }
    return doc;
}

RuleBaseDoc parse_rulebase(const std::string& path) {
    return parse_rulebase_text(read_file(path), path);
}

FuzzyController compile_rulebase(const RuleBaseDoc& doc) {
    std::vector<Rule> rules;
    for (const auto& sr : doc.rules) {
        Rule r;
        r.src_line = sr.line;
        for (const auto& cl : sr.antecedent) {
            int vi = -1;
            const LinguisticVariable* var = find_in(doc.inputs, cl.var, &vi);
            if (!var)
                throw ParseError(doc.path, sr.line, "unknown input variable '" + cl.var + "'");
            int ti = var->term_index(cl.term);
            if (ti < 0)
                throw ParseError(doc.path, sr.line,
                                 "unknown term '" + cl.term + "' for '" + cl.var + "'");
            r.antecedent.push_back({vi, ti});
        }
        for (const auto& cl : sr.consequent) {
            int vi = -1;
            const LinguisticVariable* var = find_in(doc.outputs, cl.var, &vi);
            if (!var)
                throw ParseError(doc.path, sr.line, "unknown output variable '" + cl.var + "'");
            int ti = var->term_index(cl.term);
            if (ti < 0)
                throw ParseError(doc.path, sr.line,
                                 "unknown term '" + cl.term + "' for '" + cl.var + "'");
            r.consequent.push_back({vi, ti});
        }
        rules.push_back(std::move(r));
    }
    if (rules.empty()) throw ParseError(doc.path, 0, "rule base defines no rules");
    return FuzzyController(doc.inputs, doc.outputs, rules);
}

namespace {

bool mf_mirrors(const MembershipFunction& m, const MembershipFunction& n) {
    if (m.shape != n.shape) return false;
    if (m.shape == MembershipFunction::Shape::Triangular)
        return m.a == -n.c && m.b == -n.b && m.c == -n.a;
    return m.a == -n.d && m.b == -n.c && m.c == -n.b && m.d == -n.a;
}

bool var_is_mirror_symmetric(const LinguisticVariable& v) {
    if (v.lo != -v.hi) return false;
    size_t n = v.terms.size();
    for (size_t i = 0; i < n; ++i)
        if (!mf_mirrors(v.terms[i].mf, v.terms[n - 1 - i].mf)) return false;
    return true;
}

bool vars_identical(const LinguisticVariable& a, const LinguisticVariable& b) {
    if (a.lo != b.lo || a.hi != b.hi || a.terms.size() != b.terms.size()) return false;
    for (size_t i = 0; i < a.terms.size(); ++i) {
        const auto &m = a.terms[i].mf, &n = b.terms[i].mf;
        if (a.terms[i].label != b.terms[i].label || m.shape != n.shape || m.a != n.a ||
            m.b != n.b || m.c != n.c || m.d != n.d)
            return false;
    }
    return true;
}

using Clause = std::pair<int, int>;  // (variable index, term index)

struct ResolvedRule {
    std::vector<Clause> ante, cons;
    int line;
    bool ok;
};

std::vector<Clause> canon(std::vector<Clause> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<Diagnostic> validate_rulebase(const RuleBaseDoc& doc) {
    std::vector<Diagnostic> diags;
    auto error = [&](int line, const std::string& m) {
        diags.push_back({Diagnostic::Severity::Error, line, m});
    };
    auto warn = [&](int line, const std::string& m) {
        diags.push_back({Diagnostic::Severity::Warning, line, m});
    };

    if (doc.inputs.size() != 6 || doc.outputs.size() != 3)
        error(0, "controller roster is " + std::to_string(doc.inputs.size()) + "-input/" +
                     std::to_string(doc.outputs.size()) + "-output (expected 6/3)");

    // Resolve rules, reporting unknown references.
    std::vector<ResolvedRule> rules;
    for (const auto& sr : doc.rules) {
        ResolvedRule rr;
        rr.line = sr.line;
        rr.ok = true;
        for (const auto& cl : sr.antecedent) {
            int vi = -1;
            const LinguisticVariable* var = find_in(doc.inputs, cl.var, &vi);
            int ti = var ? var->term_index(cl.term) : -1;
            if (!var || ti < 0) {
                error(sr.line, "unknown " + std::string(var ? "term '" + cl.term + "'" :
                                                               "variable '" + cl.var + "'") +
                                   " in rule condition");
                rr.ok = false;
                continue;
            }
            rr.ante.push_back({vi, ti});
        }
        for (const auto& cl : sr.consequent) {
            int vi = -1;
            const LinguisticVariable* var = find_in(doc.outputs, cl.var, &vi);
            int ti = var ? var->term_index(cl.term) : -1;
            if (!var || ti < 0) {
                error(sr.line, "unknown " + std::string(var ? "term '" + cl.term + "'" :
                                                               "variable '" + cl.var + "'") +
                                   " in rule conclusion");
                rr.ok = false;
                continue;
            }
            rr.cons.push_back({vi, ti});
        }
        rules.push_back(std::move(rr));
    }

    // Coverage: every output must have a firing rule at every sampled input.
    std::mt19937_64 rng(0x5eedu);
    std::vector<std::vector<double>> samples;
    {
        std::vector<double> mid(doc.inputs.size());
        for (size_t i = 0; i < doc.inputs.size(); ++i)
            mid[i] = 0.5 * (doc.inputs[i].lo + doc.inputs[i].hi);
        samples.push_back(mid);
        for (int s = 0; s < 200; ++s) {
            std::vector<double> pt(doc.inputs.size());
            for (size_t i = 0; i < doc.inputs.size(); ++i)
                pt[i] = doc.inputs[i].lo +
                        uniform01(rng) * (doc.inputs[i].hi - doc.inputs[i].lo);
            samples.push_back(std::move(pt));
        }
    }
    std::vector<int> uncovered(doc.outputs.size(), 0);
    for (const auto& pt : samples) {
        std::vector<bool> fired(doc.outputs.size(), false);
        for (const auto& rr : rules) {
            if (!rr.ok || rr.ante.empty()) continue;
            double strength = 1.0;
            for (auto [vi, ti] : rr.ante)
                strength = std::min(strength, doc.inputs[vi].terms[ti].mf.grade(pt[vi]));
            if (strength <= 0.0) continue;
            for (auto [vi, ti] : rr.cons) fired[vi] = true;
        }
        for (size_t o = 0; o < doc.outputs.size(); ++o)
            if (!fired[o]) ++uncovered[o];
    }
    for (size_t o = 0; o < doc.outputs.size(); ++o)
        if (uncovered[o] > 0)
            error(0, "output '" + (o < doc.outputs.size() ? doc.outputs[o].name : "?") +
                         "' has no firing rule at " + std::to_string(uncovered[o]) + "/" +
                         std::to_string(samples.size()) + " sampled inputs");

    // Mirror symmetry (warnings), defined for the 6/3 roster only:
    // inputs 0,1 and output 0 negate (terms reverse), inputs 2<->4 swap,
    // outputs 1<->2 swap, inputs 3,5 unchanged.
    if (doc.inputs.size() == 6 && doc.outputs.size() == 3) {
        bool layout_ok = var_is_mirror_symmetric(doc.inputs[0]) &&
                         var_is_mirror_symmetric(doc.inputs[1]) &&
                         var_is_mirror_symmetric(doc.outputs[0]) &&
                         vars_identical(doc.inputs[2], doc.inputs[4]) &&
                         vars_identical(doc.outputs[1], doc.outputs[2]);
        if (!layout_ok) {
            warn(0, "variable layout is not mirror-symmetric; skipping rule symmetry check");
        } else {
            auto mirror_in = [&](Clause c) -> Clause {
                auto [vi, ti] = c;
                int n = (int)doc.inputs[vi].terms.size();
                if (vi == 0 || vi == 1) return {vi, n - 1 - ti};
                if (vi == 2) return {4, ti};
                if (vi == 4) return {2, ti};
                return c;
            };
            auto mirror_out = [&](Clause c) -> Clause {
                auto [vi, ti] = c;
                if (vi == 0) return {0, (int)doc.outputs[0].terms.size() - 1 - ti};
                if (vi == 1) return {2, ti};
                return {1, ti};
            };
            std::vector<std::pair<std::vector<Clause>, std::vector<Clause>>> canon_rules;
            for (const auto& rr : rules)
                canon_rules.push_back(rr.ok ? std::make_pair(canon(rr.ante), canon(rr.cons))
                                            : std::make_pair(std::vector<Clause>{},
                                                             std::vector<Clause>{}));
            for (size_t i = 0; i < rules.size(); ++i) {
                if (!rules[i].ok) continue;
                std::vector<Clause> ma, mc;
                for (auto c : rules[i].ante) ma.push_back(mirror_in(c));
                for (auto c : rules[i].cons) mc.push_back(mirror_out(c));
                auto key = std::make_pair(canon(ma), canon(mc));
                bool found = false;
                for (size_t j = 0; j < canon_rules.size(); ++j)
                    if (rules[j].ok && canon_rules[j] == key) {
                        found = true;
                        break;
                    }
                if (!found)
                    warn(rules[i].line, "rule has no mirror counterpart");
            }
        }
    }

    return diags;
}

FuzzyController load_controller(const std::string& path) {
    RuleBaseDoc doc = parse_rulebase(path);
    if (doc.inputs.size() != 6 || doc.outputs.size() != 3)
        throw ParseError(path, 0,
                         "controller must have 6 inputs and 3 outputs, found " +
                             std::to_string(doc.inputs.size()) + "/" +
                             std::to_string(doc.outputs.size()));
    return compile_rulebase(doc);
}

}  // namespace linesim
