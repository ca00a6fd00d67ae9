#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "testutil.hpp"
#include "tlog/datalog.hpp"

using namespace tlog;

namespace {

const char* kAncestorRule = "Ancestor(x,z) :- Ancestor(x,y), Parent(y,z).";

std::set<std::pair<int32_t, int32_t>> entry_set(const SparseBoolMatrix& m) {
    const auto es = m.entries();
    return {es.begin(), es.end()};
}

}  // namespace

TEST_CASE("parse_rule: the transitive-closure rule") {
    const Rule r = parse_rule(kAncestorRule);
    CHECK(r.head.pred == "Ancestor");
    CHECK(r.head.vars == std::vector<std::string>{"x", "z"});
    REQUIRE(r.body.size() == 2);
    CHECK(r.body[0].pred == "Ancestor");
    CHECK(r.body[1].pred == "Parent");
    CHECK(r.body[1].vars == std::vector<std::string>{"y", "z"});
}

TEST_CASE("parse_rule: copy rule and whitespace insensitivity") {
    const Rule r = parse_rule("  A( x , y )   :-   P( x , y ) .  ");
    CHECK(r.head.pred == "A");
    REQUIRE(r.body.size() == 1);
    CHECK(r.body[0].pred == "P");
}

TEST_CASE("parse_rule: diagnostics") {
    // unbound head variable, named
    CHECK_THROWS_WITH_AS(parse_rule("A(x,q) :- P(x,y)."), doctest::Contains("'q'"),
                         std::runtime_error);
    // arity errors
    CHECK_THROWS_WITH_AS(parse_rule("A(x,y,z) :- P(x,y)."), doctest::Contains("arity"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_rule("A(x,y) :- P(x,y,z)."), doctest::Contains("arity"),
                         std::runtime_error);
    // syntax errors carry a position
    CHECK_THROWS_WITH_AS(parse_rule("A(x,y) : P(x,y)."), doctest::Contains("position"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_rule("A(x,y) :- P(x,y)"), doctest::Contains("position"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_rule("a(x,y) :- P(x,y)."), doctest::Contains("uppercase"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_rule("A(X,y) :- P(X,y)."), doctest::Contains("lowercase"),
                         std::runtime_error);
}

TEST_CASE("compile: the closure rule becomes one untransposed product") {
    const ContractionPlan p = compile(parse_rule(kAncestorRule));
    CHECK(p.head_pred == "Ancestor");
    CHECK(p.row_var == "x");
    CHECK(p.col_var == "z");
    REQUIRE(p.steps.size() == 2);
    CHECK(p.steps[0].atom_index == 0);
    CHECK_FALSE(p.steps[0].transpose);
    CHECK(p.steps[1].atom_index == 1);
    CHECK_FALSE(p.steps[1].transpose);
}

TEST_CASE("compile: reversed atom gets a transpose") {
    const ContractionPlan p = compile(parse_rule("A(x,z) :- P(z,x)."));
    REQUIRE(p.steps.size() == 1);
    CHECK(p.steps[0].transpose);

    const ContractionPlan chain = compile(parse_rule("A(x,z) :- R(x,y), S(z,y)."));
    REQUIRE(chain.steps.size() == 2);
    CHECK_FALSE(chain.steps[0].transpose);
    CHECK(chain.steps[1].transpose);
}

TEST_CASE("compile: rejects non-chain bodies") {
    CHECK_THROWS_WITH_AS(compile(parse_rule("A(x,z) :- R(x,z), S(w,v).")),
                         doctest::Contains("unsupported pattern"), std::runtime_error);
    CHECK_THROWS_WITH_AS(compile(parse_rule("A(x,z) :- R(x,y), S(x,z).")),
                         doctest::Contains("branches"), std::runtime_error);
    CHECK_THROWS_WITH_AS(compile(parse_rule("A(x,x) :- P(x,x).")),
                         doctest::Contains("unsupported pattern"), std::runtime_error);
}

TEST_CASE("run_plan: 3-atom chain equals the nested-loop join oracle") {
    Rng rng(17);
    const ContractionPlan plan = compile(parse_rule("A(x,w) :- R(x,y), S(y,z), T(z,w)."));
    for (int trial = 0; trial < 25; ++trial) {
        const auto r = testutil::random_graph(10, 0.25, rng);
        const auto s = testutil::random_graph(10, 0.25, rng);
        const auto t = testutil::random_graph(10, 0.25, rng);
        const auto got = run_plan(plan, {{"R", &r}, {"S", &s}, {"T", &t}});

        std::set<std::pair<int32_t, int32_t>> expect;
        for (const auto& [x, y] : r.entries())
            for (const auto& [y2, z] : s.entries())
                if (y == y2)
                    for (const auto& [z2, w] : t.entries())
                        if (z == z2) expect.insert({x, w});
        CHECK(entry_set(got) == expect);
    }
}

TEST_CASE("run_plan: transposed plan equals oracle on reversed atom") {
    Rng rng(23);
    const ContractionPlan plan = compile(parse_rule("A(x,z) :- R(x,y), S(z,y)."));
    const auto r = testutil::random_graph(8, 0.3, rng);
    const auto s = testutil::random_graph(8, 0.3, rng);
    const auto got = run_plan(plan, {{"R", &r}, {"S", &s}});
    std::set<std::pair<int32_t, int32_t>> expect;
    for (const auto& [x, y] : r.entries())
        for (const auto& [z, y2] : s.entries())
            if (y == y2) expect.insert({x, z});
    CHECK(entry_set(got) == expect);
}

TEST_CASE("fixpoint: chain graph 0->1->2->3") {
    const auto base = SparseBoolMatrix::from_entries(4, 4, {{0, 1}, {1, 2}, {2, 3}});
    const ContractionPlan plan = compile(parse_rule(kAncestorRule));
    const auto [closure, trace] = fixpoint(base, plan);
    CHECK(closure.nnz() == 6);
    CHECK(entry_set(closure) ==
          std::set<std::pair<int32_t, int32_t>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(trace.last_productive_iteration == 2);
    CHECK(trace.zero_progress_iteration == 3);
    CHECK(trace.added_per_iteration == std::vector<std::int64_t>{2, 1, 0});
    CHECK(trace.base_edges == 3);
    CHECK(trace.final_edges == 6);
}

TEST_CASE("fixpoint: edgeless base converges immediately") {
    const SparseBoolMatrix base(5, 5);
    const auto [closure, trace] = fixpoint(base, compile(parse_rule(kAncestorRule)));
    CHECK(closure.nnz() == 0);
    CHECK(trace.last_productive_iteration == 0);
    CHECK(trace.zero_progress_iteration == 1);
}

TEST_CASE("fixpoint: trace totals add up") {
    Rng rng(31);
    const ContractionPlan plan = compile(parse_rule(kAncestorRule));
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testutil::random_dag(20, 0.15, rng);
        const auto [closure, trace] = fixpoint(g, plan);
        std::int64_t sum = trace.base_edges;
        for (std::int64_t a : trace.added_per_iteration) sum += a;
        CHECK(sum == trace.final_edges);
        CHECK(trace.added_per_iteration.back() == 0);
        CHECK(closure.nnz() == trace.final_edges);
    }
}

TEST_CASE("fixpoint: non-convergence guard trips") {
    const auto base = SparseBoolMatrix::from_entries(4, 4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_THROWS_WITH_AS(fixpoint(base, compile(parse_rule(kAncestorRule)), 1),
                         doctest::Contains("did not converge"), std::runtime_error);
    CHECK_THROWS_AS(fixpoint(base, compile(parse_rule(kAncestorRule)), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fixpoint(SparseBoolMatrix(2, 3), compile(parse_rule(kAncestorRule))),
                    std::invalid_argument);
}

TEST_CASE("closure equals DFS reachability on 200 random graphs; engines bit-identical") {
    Rng rng(1234);
    const ContractionPlan plan = compile(parse_rule(kAncestorRule));
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next_below(49);
        const auto g = testutil::random_graph(n, 0.08, rng);
        const auto [naive, tn] = fixpoint(g, plan);
        const auto [semi, ts] = semi_naive_fixpoint(g, plan);
        CHECK(naive == semi);
        CHECK(tn.added_per_iteration == ts.added_per_iteration);
        CHECK(tn.last_productive_iteration == ts.last_productive_iteration);
        CHECK(entry_set(naive) == testutil::reachability_oracle(g));
    }
}

TEST_CASE("random DAGs: Floyd-Warshall-style oracle, convergence bound, monotone verify") {
    Rng rng(99);
    const ContractionPlan plan = compile(parse_rule(kAncestorRule));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.next_below(49);
        const auto g = testutil::random_dag(n, 0.12, rng);
        const auto [closure, trace] = semi_naive_fixpoint(g, plan);
        CHECK(entry_set(closure) == testutil::reachability_oracle(g));

        const int longest = testutil::longest_path_oracle(g);
        REQUIRE(longest >= 0);  // DAG by construction
        CHECK(trace.last_productive_iteration <= std::max(longest, 0));

        CHECK(verify(g, closure).all_pass());
    }
}

TEST_CASE("monotonicity: every iteration only grows the edge set") {
    // Re-run naive iteration by hand and compare successive prefixes.
    Rng rng(55);
    const ContractionPlan plan = compile(parse_rule(kAncestorRule));
    const auto g = testutil::random_dag(25, 0.15, rng);
    SparseBoolMatrix a = g;
    while (true) {
        const SparseBoolMatrix before = a;
        const auto step = bool_matmul(a, g);
        a = bool_union(a, step);
        for (const auto& e : before.entries()) CHECK(a.contains(e.first, e.second));
        if (a == before) break;
    }
    const auto [closure, trace] = fixpoint(g, plan);
    CHECK(closure == a);
}

TEST_CASE("semi-naive handles a non-recursive copy rule like naive") {
    const auto base = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {1, 2}});
    const ContractionPlan plan = compile(parse_rule("A(x,y) :- P(x,y)."));
    const auto [n, tn] = fixpoint(base, plan);
    const auto [s, ts] = semi_naive_fixpoint(base, plan);
    CHECK(n == s);
    CHECK(n == base);
    CHECK(tn.added_per_iteration == ts.added_per_iteration);
}

TEST_CASE("semi-naive: single-edge graph terminates after empty delta") {
    const auto base = SparseBoolMatrix::from_entries(2, 2, {{0, 1}});
    const auto [closure, trace] =
        semi_naive_fixpoint(base, compile(parse_rule(kAncestorRule)));
    CHECK(closure == base);
    CHECK(trace.added_per_iteration == std::vector<std::int64_t>{0});
}

TEST_CASE("doubling rule A(x,z) :- A(x,y), A(y,z): engines agree with reachability") {
    Rng rng(77);
    const ContractionPlan plan = compile(parse_rule("A(x,z) :- A(x,y), A(y,z)."));
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = testutil::random_graph(15, 0.12, rng);
        const auto [naive, tn] = fixpoint(g, plan);
        const auto [semi, ts] = semi_naive_fixpoint(g, plan);
        CHECK(naive == semi);
        CHECK(tn.added_per_iteration == ts.added_per_iteration);
        CHECK(entry_set(naive) == testutil::reachability_oracle(g));
    }
}

TEST_CASE("verify: planted violations are reported, not thrown") {
    const auto parent = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {1, 2}});
    const auto good = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(verify(parent, good).all_pass());

    // ancestor missing one parent edge -> containment fails with count 1
    const auto missing = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {0, 2}});
    const auto rep1 = verify(parent, missing);
    CHECK_FALSE(rep1.containment.pass);
    CHECK(rep1.containment.violations == 1);
    CHECK(rep1.containment.sample.front() == std::pair<int32_t, int32_t>{1, 2});

    // diagonal entry -> acyclicity fails
    const auto cyc = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {1, 2}, {0, 2}, {1, 1}});
    const auto rep2 = verify(parent, cyc);
    CHECK_FALSE(rep2.acyclicity.pass);
    CHECK(rep2.acyclicity.violations == 1);

    // closure property fails when a derivable edge is absent
    const auto incomplete = SparseBoolMatrix::from_entries(3, 3, {{0, 1}, {1, 2}});
    const auto rep3 = verify(parent, incomplete);
    CHECK_FALSE(rep3.closure.pass);

    CHECK_THROWS_AS(verify(parent, SparseBoolMatrix(2, 2)), std::invalid_argument);
}

TEST_CASE("lineage: toy chain and unknown-person suggestions") {
    Vocabulary vocab;
    vocab.intern("alice");
    vocab.intern("bob");
    const auto closure = SparseBoolMatrix::from_entries(2, 2, {{0, 1}});
    const Lineage l = lineage(closure, vocab, "bob");
    CHECK(l.ancestors == std::vector<std::string>{"alice"});
    CHECK(l.descendants.empty());

    const Lineage root = lineage(closure, vocab, "alice");
    CHECK(root.ancestors.empty());
    CHECK(root.descendants == std::vector<std::string>{"bob"});

    CHECK_THROWS_WITH_AS(lineage(closure, vocab, "alcie"), doctest::Contains("alice"),
                         std::out_of_range);
}
