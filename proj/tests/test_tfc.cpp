#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcdist/report.hpp"
#include "qcdist/tfc.hpp"

using namespace qcdist;

namespace {

TfcError capture_error(const std::string& text) {
    try {
        parse_tfc(text);
    } catch (const TfcError& e) {
        return e;
    }
    FAIL("expected TfcError");
    return TfcError(TfcErrorCode::unexpected_line, -1, "unreachable");
}

}  // namespace

TEST_CASE("adder fixture parses to expected document and gate list") {
    std::string text =
        read_text_file(std::string(QCDIST_TEST_DATA) + "/adder.tfc");
    TfcDocument doc = parse_tfc(text);
    CHECK(doc.variables == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(doc.inputs == std::vector<std::string>{"a", "b", "c"});
    CHECK(doc.outputs == std::vector<std::string>{"d", "c"});
    CHECK(doc.constants == std::vector<std::string>{"0"});
    REQUIRE(doc.gates.size() == 4);
    std::vector<int> arities;
    for (const auto& g : doc.gates) arities.push_back(g.declared_arity);
    CHECK(arities == std::vector<int>{3, 2, 3, 2});
    CHECK(doc.gates[0].operands == std::vector<std::string>{"a", "b", "d"});

    auto [n, gates] = to_gate_list(doc);
    CHECK(n == 4);
    REQUIRE(gates.size() == 4);
    CHECK(gates[0].operands == std::vector<int>{0, 1, 3});
    CHECK(gates[1].operands == std::vector<int>{0, 1});
    CHECK(gates[2].operands == std::vector<int>{1, 2, 3});
    CHECK(gates[3].operands == std::vector<int>{1, 2});
}

TEST_CASE("serialize then parse round-trips") {
    std::string text =
        read_text_file(std::string(QCDIST_TEST_DATA) + "/adder.tfc");
    TfcDocument doc = parse_tfc(text);
    CHECK(parse_tfc(serialize_tfc(doc)) == doc);

    TfcDocument rich;
    rich.variables = {"x", "y", "z"};
    rich.inputs = {"x"};
    rich.extra_metadata = {".version 2.0", ".ol some text"};
    rich.gates = {{GateKind::fredkin, 3, {"x", "y", "z"}},
                  {GateKind::toffoli, 1, {"y"}}};
    CHECK(parse_tfc(serialize_tfc(rich)) == rich);
}

TEST_CASE("lenient syntax: CRLF, comments, blanks, mixed case") {
    std::string text =
        "# header comment\r\n"
        ".v  q1, q2 ,q3\r\n"
        "\r\n"
        "begin\r\n"
        "T2 q1,q2\r\n"
        "  # indented comment\r\n"
        "F3 q1, q2, q3\r\n"
        "End\r\n";
    TfcDocument doc = parse_tfc(text);
    CHECK(doc.variables == std::vector<std::string>{"q1", "q2", "q3"});
    REQUIRE(doc.gates.size() == 2);
    CHECK(doc.gates[0].kind == GateKind::toffoli);
    CHECK(doc.gates[1].kind == GateKind::fredkin);
    CHECK(doc.gates[1].operands == std::vector<std::string>{"q1", "q2", "q3"});
}

TEST_CASE("unknown dot-headers are retained verbatim") {
    TfcDocument doc = parse_tfc(".v a\n.weird stuff here\nBEGIN\nEND\n");
    CHECK(doc.extra_metadata == std::vector<std::string>{".weird stuff here"});
}

TEST_CASE("missing .v before BEGIN") {
    TfcError e = capture_error("BEGIN\nt1 a\nEND\n");
    CHECK(e.code == TfcErrorCode::missing_variables);
    CHECK(e.line == 1);
}

TEST_CASE("unknown operands") {
    TfcError e = capture_error(".v a,b\nBEGIN\nt2 a,z\nEND\n");
    CHECK(e.code == TfcErrorCode::unknown_operand);
    CHECK(e.line == 3);

    // .i/.o names are checked after the body, without a source line
    e = capture_error(".v a\n.i ghost\nBEGIN\nEND\n");
    CHECK(e.code == TfcErrorCode::unknown_operand);
    CHECK(e.line == 0);
    e = capture_error(".v a\n.o ghost\nBEGIN\nEND\n");
    CHECK(e.code == TfcErrorCode::unknown_operand);
    CHECK(e.line == 0);
}

TEST_CASE("arity prefix must match operand count") {
    TfcError e = capture_error(".v a,b,c\nBEGIN\nt3 a,b\nEND\n");
    CHECK(e.code == TfcErrorCode::arity_mismatch);
    CHECK(e.line == 3);
}

TEST_CASE("repeated operand in one gate") {
    TfcError e = capture_error(".v a,b\nBEGIN\nt2 a,a\nEND\n");
    CHECK(e.code == TfcErrorCode::duplicate_operand);
}

TEST_CASE("unterminated body") {
    TfcError e = capture_error(".v a\nBEGIN\nt1 a\n");
    CHECK(e.code == TfcErrorCode::unterminated_body);
    // a file with no body at all is also incomplete
    e = capture_error(".v a\n");
    CHECK(e.code == TfcErrorCode::unterminated_body);
}

TEST_CASE("malformed gate prefixes") {
    CHECK(capture_error(".v a,b\nBEGIN\nx2 a,b\nEND\n").code ==
          TfcErrorCode::malformed_gate_prefix);
    CHECK(capture_error(".v a,b\nBEGIN\nt a,b\nEND\n").code ==
          TfcErrorCode::malformed_gate_prefix);
    CHECK(capture_error(".v a,b\nBEGIN\ntx a,b\nEND\n").code ==
          TfcErrorCode::malformed_gate_prefix);
    CHECK(capture_error(".v a,b\nBEGIN\nt2\nEND\n").code ==
          TfcErrorCode::malformed_gate_prefix);
}

TEST_CASE("malformed headers") {
    CHECK(capture_error(".v a,,b\nBEGIN\nEND\n").code ==
          TfcErrorCode::malformed_header);
    CHECK(capture_error(".v a b,c\nBEGIN\nEND\n").code ==
          TfcErrorCode::malformed_header);
    CHECK(capture_error(".v a,a\nBEGIN\nEND\n").code ==
          TfcErrorCode::malformed_header);
    CHECK(capture_error(".v a,b,\nBEGIN\nEND\n").code ==
          TfcErrorCode::malformed_header);
    CHECK(capture_error(".v\nBEGIN\nEND\n").code ==
          TfcErrorCode::malformed_header);
}

TEST_CASE("lines out of place") {
    TfcError e = capture_error(".v a\nBEGIN\nEND\nt1 a\n");
    CHECK(e.code == TfcErrorCode::unexpected_line);
    CHECK(e.line == 4);
    CHECK(capture_error(".v a\ngarbage\nBEGIN\nEND\n").code ==
          TfcErrorCode::unexpected_line);
    CHECK(capture_error(".v a\nBEGIN\nBEGIN\nEND\n").code ==
          TfcErrorCode::unexpected_line);
    CHECK(capture_error(".v a\nEND\n").code == TfcErrorCode::unexpected_line);
}
