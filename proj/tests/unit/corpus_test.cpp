#include <gtest/gtest.h>

#include <map>

#include "harness.hpp"
#include "oracles.hpp"

using namespace eagerlog;
using support::IntRows;

namespace {

IntRows singles(std::initializer_list<std::int64_t> xs) {
    IntRows out;
    for (auto x : xs) out.push_back({x});
    return out;
}

IntRows range(std::int64_t lo, std::int64_t hi) {
    IntRows out;
    for (auto x = lo; x <= hi; ++x) out.push_back({x});
    return out;
}

struct Expectation {
    std::map<std::string, IntRows> rows;
    std::map<std::string, std::size_t> sizes;
};

const std::map<std::string, Expectation>& expected() {
    static const std::map<std::string, Expectation> table = {
        {"tc_linear", {{{"reach", {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}, {2, 4}}}}, {}}},
        {"tc_left", {{}, {{"path", 13}}}},
        {"negation", {{}, {{"reach", 9}, {"unreach", 16}, {"node", 5}}}},
        {"five_node_tree", {{}, {{"reach", 5}}}},
        {"guarded_tree", {{{"node", singles({0, 1, 2, 3, 6, 7})}}, {}}},
        {"mutual", {{{"even", singles({0, 2, 4, 6})}, {"odd", singles({1, 3, 5})}}, {}}},
        {"counter", {{{"num", range(0, 12)}}, {{"square_ish", 13}}}},
        {"strata_chain",
         {{{"b", singles({2, 4, 5})}, {"c", singles({1})}, {"d", singles({2, 4, 5})}}, {}}},
        {"cycles",
         {{{"self_loop", singles({0})},
           {"on_cycle", singles({0, 1, 2})},
           {"from_zero", range(0, 4)},
           {"back_to", {{1, 2}, {2, 1}}}},
          {}}},
        {"nullary", {{{"connected", IntRows(1)}, {"disconnected", IntRows(1)}, {"flag", {}}}, {}}},
        {"functor_atoms", {{{"p", range(0, 6)}, {"chain", range(0, 6)}}, {{"pair", 6}}}},
        {"triple", {{}, {{"r", 19}}}},
        {"eq_binding",
         {{{"shifted", {{1, 11}, {3, 13}}}, {"fixed", singles({2})}, {"twin", {{1, 1}, {2, 2}, {3, 3}}}}, {}}},
        {"same_generation", {{}, {{"sg", 15}}}},
    };
    return table;
}

} // namespace

TEST(Corpus, EveryProgramHasAnExpectation) {
    for (const auto& name : support::corpus_names()) {
        if (name == "trans_guess") continue;  // checked against Floyd-Warshall below
        EXPECT_TRUE(expected().contains(name)) << name;
    }
}

TEST(Corpus, ExpectedRelationsOnEveryEngine) {
    for (const auto& [name, exp] : expected()) {
        for (const auto& o : support::engine_matrix(3)) {
            auto f = support::load_corpus(name);
            auto r = support::run(*f, o);
            for (const auto& [pred, rows] : exp.rows)
                EXPECT_EQ(support::int_rows(*f, *r.db, pred), rows) << name << " " << pred << " " << support::describe(o);
            for (const auto& [pred, n] : exp.sizes)
                EXPECT_EQ(r.db->find(pred)->size(), n) << name << " " << pred << " " << support::describe(o);
        }
    }
}

TEST(Corpus, TransGuessIsTheTransitiveClosure) {
    auto f = support::load_corpus("trans_guess");
    std::vector<support::Edge> edges;
    int n = 0;
    for (const auto& t : f->inputs.at("edge")) {
        support::Edge e{static_cast<int>(*f->interner.as_int(t[0])), static_cast<int>(*f->interner.as_int(t[1]))};
        n = std::max({n, e.first + 1, e.second + 1});
        edges.push_back(e);
    }
    IntRows want;
    for (auto [a, b] : support::floyd_warshall(n, edges)) want.push_back({a, b});
    for (const auto& o : support::engine_matrix()) {
        auto r = support::run(*f, o);
        EXPECT_EQ(support::int_rows(*f, *r.db, "reach"), want) << support::describe(o);
    }
}
