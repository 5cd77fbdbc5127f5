#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "qcdist/report.hpp"
#include "qcdist/tfc.hpp"

using namespace qcdist;

namespace {

std::string data(const std::string& name) {
    return std::string(QCDIST_TEST_DATA) + "/" + name;
}

RunConfig circuit1_config() {
    RunConfig cfg;
    cfg.input_path = data("circuit1.tfc");
    cfg.machines = 2;
    cfg.capacities = {3};
    return cfg;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(QCDIST_CLI_PATH) + " " + args +
                      " > /tmp/qcdist_cli_out.txt 2>/tmp/qcdist_cli_err.txt";
    int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("full pipeline on the first worked circuit file") {
    SolutionReport report = run(circuit1_config());
    CHECK(report.qubit_count == 4);
    CHECK(report.layer_count == 7);  // 11 gates pack into 7 layers
    CHECK(report.gate_count == 11);
    CHECK(report.qubit_names ==
          std::vector<std::string>{"q1", "q2", "q3", "q4"});
    // in-order filling puts q1,q2,q3 on machine 1: one move dearer than
    // the balanced 2+2 start (exhaustively verified)
    CHECK(report.solution.num_tele == 7);
    CHECK(report.solution.swap_count == 1);
    CHECK(report.solution.adjusted_tele == 6);
    REQUIRE(report.subproblems.size() == 1);
    CHECK(report.subproblems[0].layer_begin == 0);
    CHECK(report.subproblems[0].layer_end == 7);
    CHECK(report.subproblems[0].t_star == 7);
    CHECK(report.prng_note.empty());
    CHECK(report.timing.total_seconds >= 0.0);
}

TEST_CASE("explicit allocation file reproduces the worked initial state") {
    RunConfig cfg = circuit1_config();
    cfg.policy = AllocPolicy::explicit_file;
    cfg.allocation_file = data("alloc_circuit1.txt");
    SolutionReport report = run(cfg);
    CHECK(report.solution.assignments.states[0].placement ==
          std::vector<int>{0, 0, 1, 1});
    CHECK(report.solution.num_tele == 6);
    CHECK(report.solution.adjusted_tele == 5);
}

TEST_CASE("random allocation policy records its provenance") {
    RunConfig cfg = circuit1_config();
    cfg.policy = AllocPolicy::random_seeded;
    cfg.alloc_seed = 7;
    SolutionReport report = run(cfg);
    CHECK(report.prng_note == "mt19937_64 fisher-yates, seed 7");
    CHECK(allocation_valid(report.solution.assignments.states[0],
                           {2, {3, 3}, std::nullopt}, 4));
}

TEST_CASE("reports are deterministic apart from wall-clock timings") {
    SolutionReport a = run(circuit1_config());
    SolutionReport b = run(circuit1_config());
    a.timing = Timing{};
    b.timing = Timing{};
    CHECK(a == b);
}

TEST_CASE("json round-trip preserves the whole report") {
    RunConfig cfg = circuit1_config();
    cfg.balance = true;
    cfg.policy = AllocPolicy::random_seeded;
    cfg.alloc_seed = 3;
    SolutionReport report = run(cfg);
    REQUIRE(report.solution.vacancy_total.has_value());
    std::string text = to_json(report);
    SolutionReport back = report_from_json(text);
    CHECK(back == report);
    CHECK(to_json(back) == text);

    // null optionals survive too
    SolutionReport plain = run(circuit1_config());
    CHECK(report_from_json(to_json(plain)) == plain);
}

TEST_CASE("rendered table shape and totals") {
    SolutionReport report = run(circuit1_config());
    std::string table = render_table(report);
    CHECK(table.find("state") != std::string::npos);
    CHECK(table.find("teleported") != std::string::npos);
    CHECK(table.find("machine 1") != std::string::npos);
    CHECK(table.find("machine 2") != std::string::npos);
    CHECK(table.find("(swap)") != std::string::npos);
    CHECK(table.find("teleports: 7  swaps: 1  adjusted: 6") !=
          std::string::npos);
    // one header line, 8 state rows, totals line
    CHECK(std::count(table.begin(), table.end(), '\n') == 10);
    // qubit names from the file appear in the machine columns
    CHECK(table.find("q1") != std::string::npos);
}

TEST_CASE("a circuit with no binary gates yields the single initial state") {
    write_text_file("/tmp/qcdist_unary.tfc",
                    ".v a,b,c\nBEGIN\nt1 a\nt1 b\nEND\n");
    RunConfig cfg;
    cfg.input_path = "/tmp/qcdist_unary.tfc";
    cfg.machines = 2;
    cfg.capacities = {2, 2};
    SolutionReport report = run(cfg);
    CHECK(report.layer_count == 0);
    CHECK(report.gate_count == 0);
    CHECK(report.solution.num_tele == 0);
    CHECK(report.solution.assignments.states.size() == 1);
    CHECK(report.subproblems.empty());
    std::string table = render_table(report);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);
    CHECK(table.find("teleports: 0") != std::string::npos);
}

TEST_CASE("side outputs: final decision instances and relational model") {
    namespace fs = std::filesystem;
    fs::remove_all("/tmp/qcdist_emit_test");
    RunConfig cfg = circuit1_config();
    cfg.emit_cnf_dir = "/tmp/qcdist_emit_test";
    cfg.emit_alloy_path = "/tmp/qcdist_emit_test/model.als";
    run(cfg);
    CHECK(fs::exists("/tmp/qcdist_emit_test/window0_T7.cnf"));
    CHECK(fs::exists("/tmp/qcdist_emit_test/window0_T7.varmap"));
    std::string cnf = read_text_file("/tmp/qcdist_emit_test/window0_T7.cnf");
    CHECK(cnf.find("p cnf ") != std::string::npos);
    CHECK(cnf.find("c group placement 1 ") != std::string::npos);
    std::string als = read_text_file("/tmp/qcdist_emit_test/model.als");
    CHECK(als.find("run finalLayer for 7 circGraph") != std::string::npos);
    fs::remove_all("/tmp/qcdist_emit_test");
}

TEST_CASE("external backend reaches the same answer through run()") {
    RunConfig cfg = circuit1_config();
    cfg.external_solver = std::string(QCDIST_CLI_PATH) + " sat";
    SolutionReport ext = run(cfg);
    CHECK(ext.solution.num_tele == 7);
    CHECK(ext.solution.adjusted_tele == 6);
    CHECK(verify_solution(
              pack_layers(drop_unary_gates(
                              to_gate_list(parse_tfc(read_text_file(
                                               cfg.input_path)))
                                  .second),
                          4),
              {2, {3, 3}, std::nullopt},
              ext.solution.assignments.states.front(), ext.solution)
              .empty());
}

TEST_CASE("failures carry the originating exception type") {
    RunConfig cfg = circuit1_config();
    cfg.input_path = data("nope.tfc");
    CHECK_THROWS_AS(run(cfg), FileError);

    cfg = circuit1_config();
    cfg.machines = 1;
    cfg.capacities = {3};
    CHECK_THROWS_AS(run(cfg), ValidationFailure);

    cfg = circuit1_config();
    cfg.capacities = {3, 3, 3};  // three values for two machines
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);

    cfg = circuit1_config();
    cfg.policy = AllocPolicy::explicit_file;
    cfg.allocation_file = "/tmp/does-not-exist.txt";
    CHECK_THROWS_AS(run(cfg), FileError);

    cfg = circuit1_config();
    cfg.cost_matrix_path = data("cost3.txt");  // 3x3 against 2 machines
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);

    write_text_file("/tmp/qcdist_bad.tfc", ".v a\nBEGIN\nt2 a,zz\nEND\n");
    cfg = circuit1_config();
    cfg.input_path = "/tmp/qcdist_bad.tfc";
    CHECK_THROWS_AS(run(cfg), TfcError);
}

TEST_CASE("enum spellings round-trip") {
    for (AllocPolicy p : {AllocPolicy::in_order, AllocPolicy::random_seeded,
                          AllocPolicy::explicit_file})
        CHECK(alloc_policy_from_string(to_string(p)) == p);
    for (SearchKind k :
         {SearchKind::linear, SearchKind::binary, SearchKind::history})
        CHECK(search_kind_from_string(to_string(k)) == k);
    for (SwapRefine s : {SwapRefine::off, SwapRefine::on, SwapRefine::automatic})
        CHECK(swap_refine_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(search_kind_from_string("sideways"), std::invalid_argument);
}

TEST_CASE("command-line exit codes") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("solve --help") == 0);
    CHECK(run_cli("solve " + data("circuit1.tfc") + " -m 2 -c 3") == 0);
    CHECK(run_cli("solve /no/such/file.tfc -m 2 -c 3") == 2);
    // the widest adder gate spans 3 qubits; capacity 2 machines cannot host it
    CHECK(run_cli("solve " + data("adder.tfc") + " -m 2 -c 2") == 3);
    CHECK(run_cli("solve " + data("circuit1.tfc") + " --bogus-flag") == 4);
    CHECK(run_cli("solve " + data("circuit1.tfc") + " -m 2 -c 3 --strategy teleport") == 4);

    write_text_file("/tmp/qcdist_sat.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    write_text_file("/tmp/qcdist_unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    CHECK(run_cli("sat /tmp/qcdist_sat.cnf") == 10);
    CHECK(run_cli("sat /tmp/qcdist_unsat.cnf") == 20);
    CHECK(run_cli("sat /no/such/file.cnf") == 2);

    // json goes to a chosen path
    CHECK(run_cli("solve " + data("circuit1.tfc") +
                  " -m 2 -c 3 --json /tmp/qcdist_report.json --no-table") == 0);
    SolutionReport from_file =
        report_from_json(read_text_file("/tmp/qcdist_report.json"));
    CHECK(from_file.solution.num_tele == 7);
}
