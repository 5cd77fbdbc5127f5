#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>

#include "qcdist/network.hpp"
#include "qcdist/report.hpp"
#include "test_support.hpp"

using namespace qcdist;

TEST_CASE("check_network catches self-inconsistent specs") {
    CHECK_NOTHROW(check_network({2, {3, 3}, std::nullopt}));
    CHECK_THROWS_AS(check_network({0, {}, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(check_network({2, {3}, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(check_network({2, {3, 0}, std::nullopt}),
                    std::invalid_argument);
    NetworkSpec bad_rows{2, {2, 2}, {{{0, 1}}}};
    CHECK_THROWS_AS(check_network(bad_rows), std::invalid_argument);
    NetworkSpec not_square{2, {2, 2}, {{{0, 1}, {1}}}};
    CHECK_THROWS_AS(check_network(not_square), std::invalid_argument);
    NetworkSpec bad_diag{2, {2, 2}, {{{1, 1}, {1, 0}}}};
    CHECK_THROWS_AS(check_network(bad_diag), std::invalid_argument);
    NetworkSpec negative{2, {2, 2}, {{{0, -1}, {1, 0}}}};
    CHECK_THROWS_AS(check_network(negative), std::invalid_argument);
    NetworkSpec asymmetric{2, {2, 2}, {{{0, 5}, {1, 0}}}};
    CHECK_NOTHROW(check_network(asymmetric));
}

TEST_CASE("validate reports capacity and gate-width problems") {
    CircuitGraph c1 = testsup::circuit1();
    CHECK(validate(testsup::circuit1_net(), c1).ok);

    ValidationResult small = validate({2, {1, 2}, std::nullopt}, c1);
    CHECK_FALSE(small.ok);
    REQUIRE(small.problems.size() == 1);
    CHECK(small.problems[0].find("total capacity 3") != std::string::npos);

    // wide gate: no machine big enough even though totals fit
    CircuitGraph wide;
    wide.qubit_count = 4;
    wide.layers = {{0, {make_gate({0, 1, 2})}}};
    ValidationResult narrow = validate({2, {2, 2}, std::nullopt}, wide);
    CHECK_FALSE(narrow.ok);
    CHECK(narrow.problems[0].find("widest gate touches 3") != std::string::npos);

    ValidationResult both = validate({2, {1, 1}, std::nullopt}, wide);
    CHECK(both.problems.size() == 2);
}

TEST_CASE("allocate_in_order fills machines sequentially") {
    Allocation a = allocate_in_order({3, {2, 1, 3}, std::nullopt}, 5);
    CHECK(a.placement == std::vector<int>{0, 0, 1, 2, 2});
    CHECK(allocate_in_order(testsup::circuit1_net(), 4).placement ==
          std::vector<int>{0, 0, 0, 1});
    CHECK_THROWS_AS(allocate_in_order({1, {2}, std::nullopt}, 3),
                    std::invalid_argument);
}

TEST_CASE("allocate_random is valid and reproducible across many seeds") {
    NetworkSpec net{3, {2, 3, 2}, std::nullopt};
    std::set<std::vector<int>> distinct;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Allocation a = allocate_random(net, 6, seed);
        CHECK(allocation_valid(a, net, 6));
        CHECK(allocate_random(net, 6, seed) == a);
        distinct.insert(a.placement);
    }
    // the stream actually varies with the seed
    CHECK(distinct.size() > 50);
    CHECK_THROWS_AS(allocate_random({1, {2}, std::nullopt}, 3, 0),
                    std::invalid_argument);
}

TEST_CASE("explicit_allocation accepts exactly-total in-capacity pairs") {
    NetworkSpec net{2, {2, 2}, std::nullopt};
    Allocation a = explicit_allocation({{0, 1}, {1, 0}, {2, 1}}, net, 3);
    CHECK(a.placement == std::vector<int>{1, 0, 1});

    auto code_of = [&](const std::vector<std::pair<int, int>>& pairs,
                       int qubits) {
        try {
            explicit_allocation(pairs, net, qubits);
        } catch (const AllocationError& e) {
            return e.code;
        }
        FAIL("expected AllocationError");
        return AllocationErrorCode::not_total;
    };
    CHECK(code_of({{0, 0}}, 2) == AllocationErrorCode::not_total);
    CHECK(code_of({{0, 0}, {5, 1}}, 2) == AllocationErrorCode::not_total);
    CHECK(code_of({{0, 0}, {1, 0}, {2, 0}}, 3) ==
          AllocationErrorCode::capacity_exceeded);
    CHECK(code_of({{0, 9}, {1, 0}}, 2) ==
          AllocationErrorCode::capacity_exceeded);
    CHECK(code_of({{0, 0}, {0, 1}}, 2) == AllocationErrorCode::duplicate_qubit);
}

TEST_CASE("allocation_valid checks totality, range, capacity") {
    NetworkSpec net{2, {2, 1}, std::nullopt};
    CHECK(allocation_valid({{0, 0, 1}}, net, 3));
    CHECK_FALSE(allocation_valid({{0, 0}}, net, 3));         // not total
    CHECK_FALSE(allocation_valid({{0, 0, 5}}, net, 3));      // out of range
    CHECK_FALSE(allocation_valid({{0, 1, 1}}, net, 3));      // over capacity
}

TEST_CASE("transition accounting") {
    Allocation before{{0, 0, 1, 1}};
    Allocation after{{0, 1, 1, 0}};
    CHECK(moved_qubits(before, after) == 2);
    CHECK(moved_qubits(before, before) == 0);

    CHECK(vacant_machines({{0, 0, 0}}, 3) == 2);
    CHECK(vacant_machines({{0, 1, 2}}, 3) == 0);

    auto unit = unit_cost_matrix(2);
    CHECK(transition_cost(before, after, unit) == moved_qubits(before, after));
    std::vector<std::vector<int>> skew{{0, 7}, {3, 0}};
    // q1 moves 0->1 (7), q3 moves 1->0 (3)
    CHECK(transition_cost(before, after, skew) == 10);
}

TEST_CASE("unit_cost_matrix shape") {
    auto m = unit_cost_matrix(3);
    CHECK(m == std::vector<std::vector<int>>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

TEST_CASE("parse_cost_matrix") {
    auto m = parse_cost_matrix(
        read_text_file(std::string(QCDIST_TEST_DATA) + "/cost3.txt"));
    CHECK(m == testsup::listing5_matrix());
    CHECK(parse_cost_matrix("1\n0\n") ==
          std::vector<std::vector<int>>{{0}});
    CHECK_THROWS_AS(parse_cost_matrix(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_cost_matrix("2\n0 1\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cost_matrix("2\n0 1\n1 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cost_matrix("2\n0 -1\n1 0\n"), std::invalid_argument);
}

TEST_CASE("parse_allocation_pairs") {
    auto pairs = parse_allocation_pairs(read_text_file(
        std::string(QCDIST_TEST_DATA) + "/alloc_circuit1.txt"));
    CHECK(pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 1}, {3, 1}});
    CHECK(parse_allocation_pairs("# only comments\n\n").empty());
    CHECK(parse_allocation_pairs("1 2 # trailing comment\n") ==
          std::vector<std::pair<int, int>>{{1, 2}});
    CHECK_THROWS_AS(parse_allocation_pairs("3\n"), std::invalid_argument);
}
