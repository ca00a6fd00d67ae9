#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlog/sparse.hpp"
#include "tlog/vocab.hpp"

namespace tlog {

struct Atom {
    std::string pred;
    std::vector<std::string> vars;
};

// Binary-predicate rule: head :- body1, body2, ... with every head variable
// bound in the body.
struct Rule {
    Atom head;
    std::vector<Atom> body;
};

// Grammar: Head(v1,v2) :- Atom1(a,b), Atom2(c,d).
// Predicates start uppercase, variables lowercase; whitespace-insensitive;
// trailing period required. Errors carry the byte position.
Rule parse_rule(const std::string& text);

struct PlanStep {
    std::size_t atom_index;  // index into the rule body
    bool transpose;          // atom matrix enters the chain transposed
};

// Pairwise contraction schedule for a body chain. Executing the steps
// left-to-right with Boolean products and a final step function implements
// the rule's join-project semantics.
struct ContractionPlan {
    std::string head_pred;
    std::string row_var, col_var;
    std::vector<std::string> body_preds;  // predicate name per body atom
    std::vector<PlanStep> steps;          // steps[0] seeds the chain
};

// Orders and orients the body atoms into a chain from the head's row variable
// to its column variable. Bodies that do not form a single chain (Cartesian
// products, branching variables, repeated variables within one atom) are
// rejected as unsupported patterns.
ContractionPlan compile(const Rule& rule);

// Evaluates the plan: H(M1 * M2 * ... * Mk) with per-atom matrices supplied
// by name. Throws if a predicate is missing or shapes do not chain.
SparseBoolMatrix run_plan(const ContractionPlan& plan,
                          const std::unordered_map<std::string, const SparseBoolMatrix*>& mats);

struct ClosureTrace {
    std::vector<std::int64_t> added_per_iteration;  // entry i = iteration i+1; last entry is 0
    std::int64_t base_edges = 0;
    std::int64_t final_edges = 0;
    // Two conventions for "convergence iteration": the last iteration that
    // added edges, and the iteration at which zero progress was observed
    // (= last_productive + 1 whenever any iteration ran).
    int last_productive_iteration = 0;
    int zero_progress_iteration = 0;
};

// A(0) = base; A(t+1) = A(t) union plan(A(t)); stops the first time an
// iteration adds nothing. Non-head predicates in the plan resolve to `base`.
std::pair<SparseBoolMatrix, ClosureTrace> fixpoint(const SparseBoolMatrix& base,
                                                   const ContractionPlan& plan,
                                                   int max_iters = 10000);

// Same result and same per-iteration counts as fixpoint, feeding only the
// previous iteration's new edges through the recursive positions.
std::pair<SparseBoolMatrix, ClosureTrace> semi_naive_fixpoint(const SparseBoolMatrix& base,
                                                              const ContractionPlan& plan,
                                                              int max_iters = 10000);

struct CheckResult {
    bool pass = false;
    std::int64_t violations = 0;
    std::vector<std::pair<int32_t, int32_t>> sample;  // capped at 20 coordinates
};

struct VerificationReport {
    CheckResult containment;  // P subset of A
    CheckResult closure;      // A*P adds nothing to A
    CheckResult acyclicity;   // diag(A) = 0
    bool all_pass() const { return containment.pass && closure.pass && acyclicity.pass; }
};

VerificationReport verify(const SparseBoolMatrix& parent, const SparseBoolMatrix& ancestor);

struct Lineage {
    std::vector<std::string> ancestors;    // row names of the person's column
    std::vector<std::string> descendants;  // column names of the person's row
};

// Throws for unknown persons, suggesting the nearest vocabulary names.
Lineage lineage(const SparseBoolMatrix& ancestor, const Vocabulary& vocab,
                const std::string& person);

}  // namespace tlog
