#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcdist/circuit.hpp"

namespace qcdist {

enum class GateKind { toffoli, fredkin };

/// One gate line as written in the file: `t3 a,b,d` keeps its prefix kind,
/// declared arity, and operand names in textual order.
struct RawGate {
    GateKind kind = GateKind::toffoli;
    int declared_arity = 0;
    std::vector<std::string> operands;

    bool operator==(const RawGate&) const = default;
};

/// Parsed `.tfc` file: `.v/.i/.o/.c` header lists plus the gate body between
/// BEGIN and END. Unrecognized `.`-prefixed header lines are retained
/// verbatim but carry no meaning.
struct TfcDocument {
    std::vector<std::string> variables;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> constants;
    std::vector<std::string> extra_metadata;
    std::vector<RawGate> gates;

    bool operator==(const TfcDocument&) const = default;
};

enum class TfcErrorCode {
    missing_variables,
    unknown_operand,
    arity_mismatch,
    duplicate_operand,
    unterminated_body,
    malformed_gate_prefix,
    malformed_header,
    unexpected_line,
};

struct TfcError : std::runtime_error {
    TfcErrorCode code;
    int line;  // 1-based source line, 0 when not tied to one

    TfcError(TfcErrorCode code, int line, const std::string& what)
        : std::runtime_error(what), code(code), line(line) {}
};

/// Parses `.tfc` text. Lines whose first non-space character is `#` and
/// blank lines are ignored; LF and CRLF both accepted.
TfcDocument parse_tfc(const std::string& text);

/// Renders a document back to `.tfc` text. parse_tfc(serialize_tfc(d)) == d.
std::string serialize_tfc(const TfcDocument& doc);

/// Interns qubit names to indices in `.v` order and converts every gate to
/// its index set, preserving gate order.
std::pair<int, std::vector<Gate>> to_gate_list(const TfcDocument& doc);

}  // namespace qcdist
