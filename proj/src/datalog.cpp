#include "tlog/datalog.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace tlog {

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    bool eat(const std::string& tok) {
        skip_ws();
        if (s.compare(i, tok.size(), tok) == 0) {
            i += tok.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("rule syntax error at position " + std::to_string(i) + ": " +
                                 what);
    }
    std::string ident() {
        skip_ws();
        const std::size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (i == start) fail("expected identifier");
        return s.substr(start, i - start);
    }
};

Atom parse_atom(Cursor& c) {
    Atom a;
    a.pred = c.ident();
    if (!std::isupper(static_cast<unsigned char>(a.pred[0])))
        c.fail("predicate '" + a.pred + "' must start with an uppercase letter");
    if (!c.eat('(')) c.fail("expected '(' after predicate '" + a.pred + "'");
    while (true) {
        std::string v = c.ident();
        if (!std::islower(static_cast<unsigned char>(v[0])))
            c.fail("variable '" + v + "' must start with a lowercase letter");
        a.vars.push_back(v);
        if (c.eat(')')) break;
        if (!c.eat(',')) c.fail("expected ',' or ')' in argument list of '" + a.pred + "'");
    }
    return a;
}

}  // namespace

Rule parse_rule(const std::string& text) {
    Cursor c{text};
    Rule rule;
    rule.head = parse_atom(c);
    if (!c.eat(":-")) c.fail("expected ':-' after head atom");
    rule.body.push_back(parse_atom(c));
    while (c.eat(',')) rule.body.push_back(parse_atom(c));
    if (!c.eat('.')) c.fail("expected '.' at end of rule");
    c.skip_ws();
    if (c.i != text.size()) c.fail("unexpected trailing input");

    if (rule.head.vars.size() != 2)
        throw std::runtime_error("unsupported arity: head '" + rule.head.pred + "' has " +
                                 std::to_string(rule.head.vars.size()) +
                                 " arguments, only binary predicates are supported");
    for (const Atom& a : rule.body)
        if (a.vars.size() != 2)
            throw std::runtime_error("unsupported arity: body atom '" + a.pred + "' has " +
                                     std::to_string(a.vars.size()) +
                                     " arguments, only binary predicates are supported");
    std::set<std::string> bound;
    for (const Atom& a : rule.body) bound.insert(a.vars.begin(), a.vars.end());
    for (const std::string& v : rule.head.vars)
        if (!bound.count(v))
            throw std::runtime_error("head variable '" + v + "' does not occur in the body");
    return rule;
}

ContractionPlan compile(const Rule& rule) {
    if (rule.head.vars[0] == rule.head.vars[1])
        throw std::runtime_error("unsupported pattern: repeated variable in head '" +
                                 rule.head.pred + "'");
    for (const Atom& a : rule.body)
        if (a.vars[0] == a.vars[1])
            throw std::runtime_error("unsupported pattern: repeated variable in atom '" + a.pred +
                                     "'");

    ContractionPlan plan;
    plan.head_pred = rule.head.pred;
    plan.row_var = rule.head.vars[0];
    plan.col_var = rule.head.vars[1];
    for (const Atom& a : rule.body) plan.body_preds.push_back(a.pred);

    std::vector<bool> used(rule.body.size(), false);
    std::string current = plan.row_var;
    for (std::size_t n = 0; n < rule.body.size(); ++n) {
        std::size_t found = rule.body.size();
        int matches = 0;
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            if (used[i]) continue;
            const Atom& a = rule.body[i];
            if (a.vars[0] == current || a.vars[1] == current) {
                if (matches == 0) found = i;
                ++matches;
            }
        }
        if (matches == 0)
            throw std::runtime_error(
                "unsupported pattern: body atoms do not chain through variable '" + current + "'");
        if (matches > 1)
            throw std::runtime_error("unsupported pattern: variable '" + current +
                                     "' branches into multiple body atoms");
        const Atom& a = rule.body[found];
        const bool transpose = (a.vars[1] == current);
        plan.steps.push_back(PlanStep{found, transpose});
        used[found] = true;
        current = transpose ? a.vars[0] : a.vars[1];
    }
    if (current != plan.col_var)
        throw std::runtime_error("unsupported pattern: chain ends at variable '" + current +
                                 "' instead of head variable '" + plan.col_var + "'");
    return plan;
}

namespace {

const SparseBoolMatrix& resolve_matrix(
    const std::unordered_map<std::string, const SparseBoolMatrix*>& mats,
    const std::string& pred) {
    auto it = mats.find(pred);
    if (it == mats.end() || it->second == nullptr)
        throw std::runtime_error("no matrix bound to predicate '" + pred + "'");
    return *it->second;
}

SparseBoolMatrix run_steps(const ContractionPlan& plan,
                           const std::vector<const SparseBoolMatrix*>& per_atom) {
    SparseBoolMatrix cur;
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        const PlanStep& st = plan.steps[k];
        const SparseBoolMatrix& m = *per_atom[st.atom_index];
        SparseBoolMatrix oriented = st.transpose ? sparse_transpose(m) : m;
        cur = (k == 0) ? std::move(oriented) : bool_matmul(cur, oriented);
    }
    return cur;
}

}  // namespace

SparseBoolMatrix run_plan(const ContractionPlan& plan,
                          const std::unordered_map<std::string, const SparseBoolMatrix*>& mats) {
    std::vector<const SparseBoolMatrix*> per_atom(plan.body_preds.size());
    for (std::size_t i = 0; i < plan.body_preds.size(); ++i)
        per_atom[i] = &resolve_matrix(mats, plan.body_preds[i]);
    return run_steps(plan, per_atom);
}

namespace {

void check_fixpoint_inputs(const SparseBoolMatrix& base, const ContractionPlan& plan,
                           int max_iters) {
    if (base.rows() != base.cols())
        throw std::invalid_argument("fixpoint: base matrix must be square");
    if (max_iters < 1) throw std::invalid_argument("fixpoint: max_iters must be >= 1");
    std::set<std::string> edb;
    for (const std::string& p : plan.body_preds)
        if (p != plan.head_pred) edb.insert(p);
    if (edb.size() > 1)
        throw std::runtime_error(
            "fixpoint: the recursive program binds one base predicate, body mentions " +
            std::to_string(edb.size()));
}

[[noreturn]] void fail_nonconvergence(int max_iters, const ClosureTrace& trace) {
    throw std::runtime_error("fixpoint did not converge within " + std::to_string(max_iters) +
                             " iterations (" + std::to_string(trace.final_edges) + " edges so far)");
}

}  // namespace

std::pair<SparseBoolMatrix, ClosureTrace> fixpoint(const SparseBoolMatrix& base,
                                                   const ContractionPlan& plan, int max_iters) {
    check_fixpoint_inputs(base, plan, max_iters);
    SparseBoolMatrix a = base;
    ClosureTrace trace;
    trace.base_edges = base.nnz();
    trace.final_edges = base.nnz();

    std::vector<const SparseBoolMatrix*> per_atom(plan.body_preds.size());
    for (int iter = 1; iter <= max_iters; ++iter) {
        for (std::size_t i = 0; i < plan.body_preds.size(); ++i)
            per_atom[i] = (plan.body_preds[i] == plan.head_pred) ? &a : &base;
        const SparseBoolMatrix fresh = run_steps(plan, per_atom);
        auto added = entries_minus(fresh, a);
        trace.added_per_iteration.push_back(static_cast<std::int64_t>(added.size()));
        if (added.empty()) {
            trace.zero_progress_iteration = iter;
            trace.last_productive_iteration = iter - 1;
            return {std::move(a), std::move(trace)};
        }
        auto es = a.entries();
        es.insert(es.end(), added.begin(), added.end());
        a = SparseBoolMatrix::from_entries(a.rows(), a.cols(), std::move(es));
        trace.final_edges = a.nnz();
    }
    fail_nonconvergence(max_iters, trace);
}

std::pair<SparseBoolMatrix, ClosureTrace> semi_naive_fixpoint(const SparseBoolMatrix& base,
                                                              const ContractionPlan& plan,
                                                              int max_iters) {
    check_fixpoint_inputs(base, plan, max_iters);
    std::vector<std::size_t> recursive_atoms;
    for (std::size_t i = 0; i < plan.body_preds.size(); ++i)
        if (plan.body_preds[i] == plan.head_pred) recursive_atoms.push_back(i);

    SparseBoolMatrix a = base;
    SparseBoolMatrix delta = base;
    ClosureTrace trace;
    trace.base_edges = base.nnz();
    trace.final_edges = base.nnz();

    std::vector<const SparseBoolMatrix*> per_atom(plan.body_preds.size());
    for (int iter = 1; iter <= max_iters; ++iter) {
        std::vector<std::pair<int32_t, int32_t>> fresh_entries;
        if (recursive_atoms.empty()) {
            // Non-recursive program: evaluate once, nothing new afterwards.
            if (iter == 1) {
                for (std::size_t i = 0; i < plan.body_preds.size(); ++i) per_atom[i] = &base;
                fresh_entries = run_steps(plan, per_atom).entries();
            }
        } else {
            for (std::size_t j : recursive_atoms) {
                for (std::size_t i = 0; i < plan.body_preds.size(); ++i) {
                    if (i == j)
                        per_atom[i] = &delta;
                    else
                        per_atom[i] = (plan.body_preds[i] == plan.head_pred) ? &a : &base;
                }
                auto es = run_steps(plan, per_atom).entries();
                fresh_entries.insert(fresh_entries.end(), es.begin(), es.end());
            }
        }
        const SparseBoolMatrix fresh =
            SparseBoolMatrix::from_entries(a.rows(), a.cols(), std::move(fresh_entries));
        auto added = entries_minus(fresh, a);
        trace.added_per_iteration.push_back(static_cast<std::int64_t>(added.size()));
        if (added.empty()) {
            trace.zero_progress_iteration = iter;
            trace.last_productive_iteration = iter - 1;
            return {std::move(a), std::move(trace)};
        }
        delta = SparseBoolMatrix::from_entries(a.rows(), a.cols(), added);
        auto es = a.entries();
        es.insert(es.end(), added.begin(), added.end());
        a = SparseBoolMatrix::from_entries(a.rows(), a.cols(), std::move(es));
        trace.final_edges = a.nnz();
    }
    fail_nonconvergence(max_iters, trace);
}

namespace {

constexpr std::size_t kSampleCap = 20;

CheckResult from_violations(std::vector<std::pair<int32_t, int32_t>> v) {
    CheckResult r;
    r.violations = static_cast<std::int64_t>(v.size());
    r.pass = v.empty();
    if (v.size() > kSampleCap) v.resize(kSampleCap);
    r.sample = std::move(v);
    return r;
}

}  // namespace

VerificationReport verify(const SparseBoolMatrix& parent, const SparseBoolMatrix& ancestor) {
    if (parent.rows() != ancestor.rows() || parent.cols() != ancestor.cols())
        throw std::invalid_argument("verify: parent and ancestor shapes differ");
    VerificationReport rep;
    rep.containment = from_violations(entries_minus(parent, ancestor));
    rep.closure = from_violations(entries_minus(bool_matmul(ancestor, parent), ancestor));
    std::vector<std::pair<int32_t, int32_t>> diag;
    for (std::size_t i = 0; i < ancestor.rows(); ++i)
        if (ancestor.contains(static_cast<int32_t>(i), static_cast<int32_t>(i)))
            diag.emplace_back(static_cast<int32_t>(i), static_cast<int32_t>(i));
    rep.acyclicity = from_violations(std::move(diag));
    return rep;
}

Lineage lineage(const SparseBoolMatrix& ancestor, const Vocabulary& vocab,
                const std::string& person) {
    const int32_t id = vocab.try_id(person);
    if (id < 0) {
        std::string msg = "unknown person '" + person + "'; closest names:";
        for (const auto& n : vocab.nearest(person)) msg += " '" + n + "'";
        throw std::out_of_range(msg);
    }
    Lineage out;
    for (const int32_t* p = ancestor.row_begin(id); p != ancestor.row_end(id); ++p)
        out.descendants.push_back(vocab.name_of(*p));
    for (std::size_t r = 0; r < ancestor.rows(); ++r)
        if (ancestor.contains(static_cast<int32_t>(r), id))
            out.ancestors.push_back(vocab.name_of(static_cast<int32_t>(r)));
    return out;
}

}  // namespace tlog
