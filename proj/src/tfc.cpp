#include "qcdist/tfc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace qcdist {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool iequals(const std::string& a, const char* b) {
    std::size_t n = 0;
    for (; b[n] && n < a.size(); ++n)
        if (std::tolower(static_cast<unsigned char>(a[n])) != std::tolower(b[n]))
            return false;
    return n == a.size() && b[n] == '\0';
}

std::vector<std::string> split_names(const std::string& list, int line_no,
                                     const char* context) {
    std::vector<std::string> names;
    std::string item;
    std::istringstream in(list);
    while (std::getline(in, item, ',')) {
        std::string name = trim(item);
        if (name.empty())
            throw TfcError(TfcErrorCode::malformed_header, line_no,
                           std::string(context) + ": empty name in list");
        if (name.find_first_of(" \t") != std::string::npos)
            throw TfcError(TfcErrorCode::malformed_header, line_no,
                           std::string(context) + ": name contains whitespace: '" +
                               name + "'");
        names.push_back(std::move(name));
    }
    if (!list.empty() && list.back() == ',')
        throw TfcError(TfcErrorCode::malformed_header, line_no,
                       std::string(context) + ": trailing comma");
    return names;
}

}  // namespace

TfcDocument parse_tfc(const std::string& text) {
    TfcDocument doc;
    std::set<std::string> declared;
    bool saw_variables = false;
    bool in_body = false;
    bool body_closed = false;

    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (iequals(line, "BEGIN")) {
            if (in_body || body_closed)
                throw TfcError(TfcErrorCode::unexpected_line, line_no,
                               "repeated BEGIN");
            if (!saw_variables)
                throw TfcError(TfcErrorCode::missing_variables, line_no,
                               "no .v line before BEGIN");
            in_body = true;
            continue;
        }
        if (iequals(line, "END")) {
            if (!in_body)
                throw TfcError(TfcErrorCode::unexpected_line, line_no,
                               "END without BEGIN");
            in_body = false;
            body_closed = true;
            continue;
        }
        if (body_closed)
            throw TfcError(TfcErrorCode::unexpected_line, line_no,
                           "content after END: '" + line + "'");

        if (!in_body) {
            if (line[0] != '.')
                throw TfcError(TfcErrorCode::unexpected_line, line_no,
                               "expected header line or BEGIN: '" + line + "'");
            std::size_t sp = line.find_first_of(" \t");
            std::string key = sp == std::string::npos ? line : line.substr(0, sp);
            std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
            if (key == ".v") {
                doc.variables = split_names(rest, line_no, ".v");
                for (const auto& name : doc.variables)
                    if (!declared.insert(name).second)
                        throw TfcError(TfcErrorCode::malformed_header, line_no,
                                       ".v: duplicate variable '" + name + "'");
                if (doc.variables.empty())
                    throw TfcError(TfcErrorCode::malformed_header, line_no,
                                   ".v: empty variable list");
                saw_variables = true;
            } else if (key == ".i") {
                doc.inputs = split_names(rest, line_no, ".i");
            } else if (key == ".o") {
                doc.outputs = split_names(rest, line_no, ".o");
            } else if (key == ".c") {
                doc.constants = split_names(rest, line_no, ".c");
            } else {
                doc.extra_metadata.push_back(line);
            }
            continue;
        }

        // Gate line: `<t|f><digits> name,name,...`
        std::size_t sp = line.find_first_of(" \t");
        if (sp == std::string::npos)
            throw TfcError(TfcErrorCode::malformed_gate_prefix, line_no,
                           "gate line without operand list: '" + line + "'");
        std::string prefix = line.substr(0, sp);
        std::string rest = trim(line.substr(sp));

        RawGate gate;
        char kind = std::tolower(static_cast<unsigned char>(prefix[0]));
        if (kind == 't')
            gate.kind = GateKind::toffoli;
        else if (kind == 'f')
            gate.kind = GateKind::fredkin;
        else
            throw TfcError(TfcErrorCode::malformed_gate_prefix, line_no,
                           "unknown gate kind '" + prefix + "'");
        if (prefix.size() < 2 ||
            !std::all_of(prefix.begin() + 1, prefix.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            throw TfcError(TfcErrorCode::malformed_gate_prefix, line_no,
                           "gate prefix must be t<digits> or f<digits>: '" +
                               prefix + "'");
        gate.declared_arity = std::stoi(prefix.substr(1));

        gate.operands = split_names(rest, line_no, "gate");
        if (static_cast<int>(gate.operands.size()) != gate.declared_arity)
            throw TfcError(TfcErrorCode::arity_mismatch, line_no,
                           "prefix " + prefix + " but " +
                               std::to_string(gate.operands.size()) + " operands");
        std::set<std::string> unique;
        for (const auto& name : gate.operands) {
            if (!unique.insert(name).second)
                throw TfcError(TfcErrorCode::duplicate_operand, line_no,
                               "repeated operand '" + name + "'");
            if (!declared.count(name))
                throw TfcError(TfcErrorCode::unknown_operand, line_no,
                               "operand '" + name + "' not declared in .v");
        }
        doc.gates.push_back(std::move(gate));
    }

    if (in_body)
        throw TfcError(TfcErrorCode::unterminated_body, line_no,
                       "BEGIN without matching END");
    if (!body_closed)
        throw TfcError(TfcErrorCode::unterminated_body, line_no,
                       "no BEGIN/END body found");

    for (const auto& name : doc.inputs)
        if (!declared.count(name))
            throw TfcError(TfcErrorCode::unknown_operand, 0,
                           ".i name '" + name + "' not declared in .v");
    for (const auto& name : doc.outputs)
        if (!declared.count(name))
            throw TfcError(TfcErrorCode::unknown_operand, 0,
                           ".o name '" + name + "' not declared in .v");
    return doc;
}

std::string serialize_tfc(const TfcDocument& doc) {
    std::ostringstream out;
    auto emit_list = [&out](const char* key, const std::vector<std::string>& names) {
        if (names.empty()) return;
        out << key << " ";
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out << ",";
            out << names[i];
        }
        out << "\n";
    };
    emit_list(".v", doc.variables);
    emit_list(".i", doc.inputs);
    emit_list(".o", doc.outputs);
    emit_list(".c", doc.constants);
    for (const auto& line : doc.extra_metadata) out << line << "\n";
    out << "BEGIN\n";
    for (const auto& gate : doc.gates) {
        out << (gate.kind == GateKind::toffoli ? 't' : 'f') << gate.declared_arity
            << " ";
        for (std::size_t i = 0; i < gate.operands.size(); ++i) {
            if (i) out << ",";
            out << gate.operands[i];
        }
        out << "\n";
    }
    out << "END\n";
    return out.str();
}

std::pair<int, std::vector<Gate>> to_gate_list(const TfcDocument& doc) {
    std::map<std::string, int> index;
    for (const auto& name : doc.variables)
        index.emplace(name, static_cast<int>(index.size()));
    std::vector<Gate> gates;
    gates.reserve(doc.gates.size());
    for (const auto& raw : doc.gates) {
        std::vector<int> operands;
        operands.reserve(raw.operands.size());
        for (const auto& name : raw.operands) operands.push_back(index.at(name));
        gates.push_back(make_gate(std::move(operands)));
    }
    return {static_cast<int>(doc.variables.size()), std::move(gates)};
}

}  // namespace qcdist
