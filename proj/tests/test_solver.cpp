#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "qcdist/cnf.hpp"
#include "qcdist/solver.hpp"

using namespace qcdist;

namespace {

CnfFormula random_3sat(std::mt19937_64& rng, int nvars, int nclauses) {
    CnfFormula f;
    f.new_vars(nvars);
    for (int c = 0; c < nclauses; ++c) {
        std::vector<int> clause;
        while (clause.size() < 3) {
            int v = 1 + static_cast<int>(rng() % nvars);
            int lit = (rng() % 2) ? v : -v;
            bool dup = false;
            for (int l : clause)
                if (l == lit || l == -lit) dup = true;
            if (!dup) clause.push_back(lit);
        }
        f.add_clause(clause);
    }
    return f;
}

bool brute_force_sat(const CnfFormula& f) {
    int n = f.variable_count();
    std::vector<bool> model(n + 1, false);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        for (int v = 1; v <= n; ++v) model[v] = (bits >> (v - 1)) & 1;
        if (f.evaluate(model)) return true;
    }
    return false;
}

std::string write_dimacs_file(const CnfFormula& f, const std::string& name) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << emit_dimacs(f);
    return path;
}

}  // namespace

TEST_CASE("trivial formulas") {
    CnfFormula empty;
    CHECK(solve(empty).sat());

    CnfFormula unit;
    unit.new_vars(1);
    unit.add_clause({1});
    SatResult r = solve(unit);
    REQUIRE(r.sat());
    CHECK(r.model[1]);

    CnfFormula contra;
    contra.new_vars(1);
    contra.add_clause({1});
    contra.add_clause({-1});
    CHECK_FALSE(solve(contra).sat());
}

TEST_CASE("verdicts match brute force on 300 random instances") {
    std::mt19937_64 rng(42);
    int sat_seen = 0, unsat_seen = 0;
    for (int i = 0; i < 300; ++i) {
        int n = 4 + static_cast<int>(rng() % 9);  // 4..12
        int m = static_cast<int>(n * 4.3);
        CnfFormula f = random_3sat(rng, n, m);
        bool expect = brute_force_sat(f);
        SatResult r = solve(f);
        REQUIRE(r.sat() == expect);
        if (expect) {
            ++sat_seen;
            CHECK(f.evaluate(r.model));
        } else {
            ++unsat_seen;
            CHECK(r.model.empty());
        }
    }
    // the ratio keeps both verdicts exercised
    CHECK(sat_seen > 30);
    CHECK(unsat_seen > 30);
}

TEST_CASE("deterministic reruns") {
    std::mt19937_64 rng(7);
    CnfFormula f = random_3sat(rng, 30, 120);
    SatResult a = solve(f);
    SatResult b = solve(f);
    CHECK(a.status == b.status);
    CHECK(a.model == b.model);
    CHECK(a.stats.decisions == b.stats.decisions);
    CHECK(a.stats.conflicts == b.stats.conflicts);

    SatResult c = solve(f, SolveConfig{123, 0.0});
    SatResult d = solve(f, SolveConfig{123, 0.0});
    CHECK(c.status == d.status);
    CHECK(c.model == d.model);
    CHECK(c.stats.decisions == d.stats.decisions);
    CHECK(c.status == a.status);
}

TEST_CASE("timeout fires on a hard instance") {
    std::mt19937_64 rng(11);
    CnfFormula f = random_3sat(rng, 120, 516);
    CHECK_THROWS_AS(solve(f, SolveConfig{0, 1e-9}), SolveTimeout);
}

TEST_CASE("learned-clause reduction survives long runs") {
    // enough conflicts to trigger several reductions and restarts
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        CnfFormula f = random_3sat(rng, 60, 258);
        SatResult r = solve(f);
        if (r.sat()) CHECK(f.evaluate(r.model));
        CHECK(r.stats.conflicts > 0);
    }
}

TEST_CASE("external solver runs this project's own CLI") {
    std::string cli = QCDIST_CLI_PATH;
    std::string command = cli + " sat";

    CnfFormula sat_f;
    sat_f.new_vars(3);
    sat_f.add_clause({1, 2});
    sat_f.add_clause({-1, 3});
    sat_f.add_clause({-2, -3});
    std::string sat_path = write_dimacs_file(sat_f, "qcdist_ext_sat.cnf");
    SatResult r = solve_external(sat_path, command, &sat_f);
    REQUIRE(r.sat());
    CHECK(sat_f.evaluate(r.model));

    CnfFormula unsat_f;
    unsat_f.new_vars(2);
    unsat_f.add_clause({1});
    unsat_f.add_clause({-1});
    std::string unsat_path = write_dimacs_file(unsat_f, "qcdist_ext_unsat.cnf");
    CHECK_FALSE(solve_external(unsat_path, command, &unsat_f).sat());
}

TEST_CASE("external solver failure modes") {
    CnfFormula f;
    f.new_vars(1);
    f.add_clause({1});
    std::string path = write_dimacs_file(f, "qcdist_ext_modes.cnf");
    CHECK_THROWS_AS(solve_external(path, "/nonexistent/solver/binary"),
                    BackendFailure);
    CHECK_THROWS_AS(solve_external(path, "echo not-an-answer-line"),
                    OutputUnparsable);
}
