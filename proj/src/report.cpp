#include "qcdist/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qcdist/alloy.hpp"
#include "qcdist/encoder.hpp"
#include "qcdist/tfc.hpp"

namespace qcdist {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write file: " + path);
    out << text;
}

namespace {

using ordered_json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

std::vector<int> expand_capacities(const RunConfig& config) {
    if (config.machines <= 0)
        throw std::invalid_argument("machine count must be positive");
    if (config.capacities.empty())
        throw std::invalid_argument("no machine capacity given");
    if (config.capacities.size() == 1)
        return std::vector<int>(config.machines, config.capacities[0]);
    if (static_cast<int>(config.capacities.size()) != config.machines)
        throw std::invalid_argument(
            "capacity list must have one entry or one entry per machine");
    return config.capacities;
}

Allocation initial_allocation(const RunConfig& config, const NetworkSpec& net,
                              int qubit_count) {
    switch (config.policy) {
        case AllocPolicy::in_order:
            return allocate_in_order(net, qubit_count);
        case AllocPolicy::random_seeded:
            return allocate_random(net, qubit_count, config.alloc_seed);
        case AllocPolicy::explicit_file:
            return explicit_allocation(
                parse_allocation_pairs(read_text_file(config.allocation_file)), net,
                qubit_count);
    }
    throw std::invalid_argument("unknown allocation policy");
}

/// Wraps the chosen backend so every probe shares one wall-clock budget and,
/// for external commands, lands its DIMACS file on disk.
SolveFn make_backend(const RunConfig& config,
                     std::chrono::steady_clock::time_point start) {
    const double limit = config.time_limit_seconds;
    if (config.external_solver.empty()) {
        const std::uint64_t seed = config.solver_seed;
        return [=](const CnfFormula& f) {
            SolveConfig sc{seed, 0.0};
            if (limit > 0.0) {
                double remaining = limit - seconds_since(start);
                if (remaining <= 0.0)
                    throw SolveTimeout("run time limit exhausted");
                sc.time_limit_seconds = remaining;
            }
            return solve(f, sc);
        };
    }
    namespace fs = std::filesystem;
    fs::path dir = config.emit_cnf_dir.empty()
                       ? fs::temp_directory_path() / "qcdist-probes"
                       : fs::path(config.emit_cnf_dir);
    fs::create_directories(dir);
    bool keep = !config.emit_cnf_dir.empty();
    auto counter = std::make_shared<int>(0);
    std::string command = config.external_solver;
    return [=](const CnfFormula& f) {
        if (limit > 0.0 && seconds_since(start) >= limit)
            throw SolveTimeout("run time limit exhausted");
        fs::path path = dir / ("probe_" + std::to_string((*counter)++) + ".cnf");
        write_text_file(path.string(), emit_dimacs(f));
        SatResult result = solve_external(path.string(), command, &f);
        if (!keep) {
            std::error_code ec;
            fs::remove(path, ec);
            fs::remove(path.string() + ".stderr", ec);
        }
        return result;
    };
}

/// Rebuilds each window's decision instance at its final bounds and writes
/// the DIMACS text plus the placement-variable map next to it.
void dump_final_instances(const RunConfig& config, const CircuitGraph& circuit,
                          const NetworkSpec& net, const Allocation& initial,
                          const OptimizeResult& opt) {
    namespace fs = std::filesystem;
    fs::path dir(config.emit_cnf_dir);
    fs::create_directories(dir);
    auto ranges = split_subproblems(circuit, config.window_size);
    Allocation current = initial;
    for (std::size_t w = 0; w < ranges.size(); ++w) {
        const SearchOutcome& frag = opt.fragments[w];
        DecisionInstance inst{
            slice_layers(circuit, ranges[w].first, ranges[w].second), net,
            current, frag.t_star, frag.e_star, frag.w_star};
        EncodeResult enc = encode(inst);
        std::ostringstream name;
        name << "window" << w << "_T" << frag.t_star;
        if (frag.e_star) name << "_E" << *frag.e_star;
        if (frag.w_star) name << "_W" << *frag.w_star;
        write_text_file((dir / (name.str() + ".cnf")).string(),
                   emit_dimacs(enc.formula));
        write_text_file((dir / (name.str() + ".varmap")).string(),
                   emit_varmap(enc.vars));
        current = frag.seq.states.back();
    }
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["input_path"] = c.input_path;
    j["machines"] = c.machines;
    j["capacities"] = c.capacities;
    j["allocation"] = {{"policy", to_string(c.policy)},
                       {"seed", c.alloc_seed},
                       {"file", c.allocation_file}};
    j["window_size"] = c.window_size;
    j["strategy"] = to_string(c.strategy);
    j["history_length"] = c.history_length;
    j["balance"] = c.balance;
    j["cost_matrix_path"] = c.cost_matrix_path;
    j["swap_refine"] = to_string(c.swap_refine);
    j["backend"] = {
        {"kind", c.external_solver.empty() ? "embedded" : "external"},
        {"command", c.external_solver},
        {"seed", c.solver_seed}};
    j["time_limit_seconds"] = c.time_limit_seconds;
    j["emit_cnf_dir"] = c.emit_cnf_dir;
    j["emit_alloy_path"] = c.emit_alloy_path;
    return j;
}

RunConfig config_from_json(const ordered_json& j) {
    RunConfig c;
    c.input_path = j.at("input_path").get<std::string>();
    c.machines = j.at("machines").get<int>();
    c.capacities = j.at("capacities").get<std::vector<int>>();
    const auto& alloc = j.at("allocation");
    c.policy = alloc_policy_from_string(alloc.at("policy").get<std::string>());
    c.alloc_seed = alloc.at("seed").get<std::uint64_t>();
    c.allocation_file = alloc.at("file").get<std::string>();
    c.window_size = j.at("window_size").get<int>();
    c.strategy = search_kind_from_string(j.at("strategy").get<std::string>());
    c.history_length = j.at("history_length").get<int>();
    c.balance = j.at("balance").get<bool>();
    c.cost_matrix_path = j.at("cost_matrix_path").get<std::string>();
    c.swap_refine =
        swap_refine_from_string(j.at("swap_refine").get<std::string>());
    c.external_solver = j.at("backend").at("command").get<std::string>();
    c.solver_seed = j.at("backend").at("seed").get<std::uint64_t>();
    c.time_limit_seconds = j.at("time_limit_seconds").get<double>();
    c.emit_cnf_dir = j.at("emit_cnf_dir").get<std::string>();
    c.emit_alloy_path = j.at("emit_alloy_path").get<std::string>();
    return c;
}

}  // namespace

std::string to_string(AllocPolicy policy) {
    switch (policy) {
        case AllocPolicy::in_order: return "in-order";
        case AllocPolicy::random_seeded: return "random";
        case AllocPolicy::explicit_file: return "explicit";
    }
    return "?";
}

std::string to_string(SearchKind kind) {
    switch (kind) {
        case SearchKind::linear: return "linear";
        case SearchKind::binary: return "binary";
        case SearchKind::history: return "history";
    }
    return "?";
}

std::string to_string(SwapRefine refine) {
    switch (refine) {
        case SwapRefine::off: return "off";
        case SwapRefine::on: return "on";
        case SwapRefine::automatic: return "auto";
    }
    return "?";
}

AllocPolicy alloc_policy_from_string(const std::string& s) {
    if (s == "in-order") return AllocPolicy::in_order;
    if (s == "random") return AllocPolicy::random_seeded;
    if (s == "explicit") return AllocPolicy::explicit_file;
    throw std::invalid_argument("unknown allocation policy: " + s);
}

SearchKind search_kind_from_string(const std::string& s) {
    if (s == "linear") return SearchKind::linear;
    if (s == "binary") return SearchKind::binary;
    if (s == "history") return SearchKind::history;
    throw std::invalid_argument("unknown search strategy: " + s);
}

SwapRefine swap_refine_from_string(const std::string& s) {
    if (s == "off") return SwapRefine::off;
    if (s == "on") return SwapRefine::on;
    if (s == "auto") return SwapRefine::automatic;
    throw std::invalid_argument("unknown swap-refine mode: " + s);
}

bool SolutionReport::operator==(const SolutionReport& o) const {
    return schema_version == o.schema_version && config == o.config &&
           qubit_count == o.qubit_count && layer_count == o.layer_count &&
           gate_count == o.gate_count && qubit_names == o.qubit_names &&
           prng_note == o.prng_note && solution == o.solution &&
           subproblems == o.subproblems && timing == o.timing;
}

SolutionReport run(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    SolutionReport report;
    report.config = config;

    TfcDocument doc = parse_tfc(read_text_file(config.input_path));
    auto [qubit_count, raw_gates] = to_gate_list(doc);
    std::vector<Gate> gates = drop_unary_gates(raw_gates);
    CircuitGraph circuit = pack_layers(gates, qubit_count);
    report.qubit_count = qubit_count;
    report.layer_count = circuit.layer_count();
    report.gate_count = static_cast<int>(gates.size());
    report.qubit_names = doc.variables;
    report.timing.parse_seconds = seconds_since(start);

    NetworkSpec net{config.machines, expand_capacities(config), std::nullopt};
    if (!config.cost_matrix_path.empty()) {
        auto matrix = parse_cost_matrix(read_text_file(config.cost_matrix_path));
        if (static_cast<int>(matrix.size()) != net.machine_count)
            throw std::invalid_argument(
                "cost matrix size does not match machine count");
        net.cost_matrix = std::move(matrix);
    }
    check_network(net);

    ValidationResult vr = validate(net, circuit);
    if (!vr.ok) {
        std::string what = "network cannot host circuit";
        for (const auto& p : vr.problems) what += "; " + p;
        throw ValidationFailure(what);
    }

    Allocation initial = initial_allocation(config, net, qubit_count);
    if (config.policy == AllocPolicy::random_seeded)
        report.prng_note = "mt19937_64 fisher-yates, seed " +
                           std::to_string(config.alloc_seed);

    StrategyConfig sc{config.strategy, config.window_size,
                      config.history_length, config.balance,
                      config.swap_refine};
    auto solve_started = std::chrono::steady_clock::now();
    OptimizeResult opt =
        optimize(circuit, net, initial, sc, make_backend(config, start));
    report.timing.solve_seconds = seconds_since(solve_started);
    report.solution = opt.solution;

    std::vector<std::string> audit =
        verify_solution(circuit, net, initial, report.solution);
    if (!audit.empty()) {
        std::string what = "solution audit failed";
        for (const auto& p : audit) what += "; " + p;
        throw std::logic_error(what);
    }

    auto ranges = split_subproblems(circuit, config.window_size);
    for (std::size_t w = 0; w < ranges.size(); ++w) {
        const SearchOutcome& frag = opt.fragments[w];
        report.subproblems.push_back({ranges[w].first, ranges[w].second,
                                      frag.t_star, frag.e_star, frag.w_star,
                                      frag.probes});
    }

    if (!config.emit_cnf_dir.empty() && config.external_solver.empty())
        dump_final_instances(config, circuit, net, initial, opt);
    if (!config.emit_alloy_path.empty()) {
        AlloyBounds bounds{report.solution.num_tele, std::nullopt,
                           std::nullopt};
        if (report.solution.vacancy_total)
            bounds.vacancy = static_cast<int>(*report.solution.vacancy_total);
        if (report.solution.weighted_cost)
            bounds.cost = static_cast<int>(*report.solution.weighted_cost);
        write_text_file(config.emit_alloy_path,
                   emit_model(circuit, net, initial, bounds).text);
    }

    report.timing.total_seconds = seconds_since(start);
    return report;
}

std::string render_table(const SolutionReport& report) {
    const auto& states = report.solution.assignments.states;
    int k = report.config.machines;
    int n = report.qubit_count;
    auto qubit_name = [&](int q) {
        if (q < static_cast<int>(report.qubit_names.size()))
            return report.qubit_names[q];
        return "q" + std::to_string(q + 1);
    };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"state", "teleported"};
    for (int m = 0; m < k; ++m) header.push_back("machine " + std::to_string(m + 1));
    rows.push_back(header);

    for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<std::string> row;
        row.push_back(std::to_string(i + 1));
        if (i == 0) {
            row.push_back("0");
        } else {
            AssignmentSequence step{{states[i - 1], states[i]}};
            auto [swaps, adjusted] = count_swaps(step);
            std::string cell = std::to_string(adjusted);
            if (swaps > 0) cell += " (swap)";
            row.push_back(cell);
        }
        for (int m = 0; m < k; ++m) {
            std::string cell;
            for (int q = 0; q < n; ++q) {
                if (states[i].placement[q] != m) continue;
                if (!cell.empty()) cell += ",";
                cell += qubit_name(q);
            }
            row.push_back(cell.empty() ? "-" : cell);
        }
        rows.push_back(row);
    }

    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << " | ";
            out << row[c] << std::string(width[c] - row[c].size(), ' ');
        }
        out << "\n";
    }
    out << "teleports: " << report.solution.num_tele
        << "  swaps: " << report.solution.swap_count
        << "  adjusted: " << report.solution.adjusted_tele;
    if (report.solution.vacancy_total)
        out << "  vacancy: " << *report.solution.vacancy_total;
    if (report.solution.weighted_cost)
        out << "  cost: " << *report.solution.weighted_cost;
    out << "\n";
    return out.str();
}

std::string to_json(const SolutionReport& report) {
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["config"] = config_to_json(report.config);
    j["circuit"] = {{"qubits", report.qubit_count},
                    {"layers", report.layer_count},
                    {"gates", report.gate_count},
                    {"qubit_names", report.qubit_names}};
    j["prng"] = report.prng_note;

    ordered_json result;
    ordered_json states = ordered_json::array();
    for (const auto& state : report.solution.assignments.states)
        states.push_back(state.placement);
    result["states"] = std::move(states);
    result["moves_per_transition"] = report.solution.moves_per_transition;
    result["num_tele"] = report.solution.num_tele;
    result["swap_count"] = report.solution.swap_count;
    result["adjusted_tele"] = report.solution.adjusted_tele;
    result["vacancy_total"] = report.solution.vacancy_total
                                  ? ordered_json(*report.solution.vacancy_total)
                                  : ordered_json(nullptr);
    result["weighted_cost"] = report.solution.weighted_cost
                                  ? ordered_json(*report.solution.weighted_cost)
                                  : ordered_json(nullptr);
    j["result"] = std::move(result);

    ordered_json subs = ordered_json::array();
    for (const auto& s : report.subproblems) {
        ordered_json js;
        js["layer_begin"] = s.layer_begin;
        js["layer_end"] = s.layer_end;
        js["t_star"] = s.t_star;
        js["e_star"] = s.e_star ? ordered_json(*s.e_star) : ordered_json(nullptr);
        js["w_star"] = s.w_star ? ordered_json(*s.w_star) : ordered_json(nullptr);
        js["probes"] = s.probes;
        subs.push_back(std::move(js));
    }
    j["subproblems"] = std::move(subs);

    j["timing"] = {{"parse_seconds", report.timing.parse_seconds},
                   {"solve_seconds", report.timing.solve_seconds},
                   {"total_seconds", report.timing.total_seconds}};
    return j.dump(2) + "\n";
}

SolutionReport report_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    SolutionReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.config = config_from_json(j.at("config"));
    const auto& circuit = j.at("circuit");
    r.qubit_count = circuit.at("qubits").get<int>();
    r.layer_count = circuit.at("layers").get<int>();
    r.gate_count = circuit.at("gates").get<int>();
    r.qubit_names = circuit.at("qubit_names").get<std::vector<std::string>>();
    r.prng_note = j.at("prng").get<std::string>();

    const auto& result = j.at("result");
    for (const auto& state : result.at("states"))
        r.solution.assignments.states.push_back(
            Allocation{state.get<std::vector<int>>()});
    r.solution.moves_per_transition =
        result.at("moves_per_transition").get<std::vector<int>>();
    r.solution.num_tele = result.at("num_tele").get<int>();
    r.solution.swap_count = result.at("swap_count").get<int>();
    r.solution.adjusted_tele = result.at("adjusted_tele").get<int>();
    if (!result.at("vacancy_total").is_null())
        r.solution.vacancy_total = result.at("vacancy_total").get<long long>();
    if (!result.at("weighted_cost").is_null())
        r.solution.weighted_cost = result.at("weighted_cost").get<long long>();

    for (const auto& js : j.at("subproblems")) {
        SubproblemSummary s;
        s.layer_begin = js.at("layer_begin").get<int>();
        s.layer_end = js.at("layer_end").get<int>();
        s.t_star = js.at("t_star").get<int>();
        if (!js.at("e_star").is_null()) s.e_star = js.at("e_star").get<int>();
        if (!js.at("w_star").is_null()) s.w_star = js.at("w_star").get<int>();
        s.probes = js.at("probes").get<int>();
        r.subproblems.push_back(s);
    }

    const auto& timing = j.at("timing");
    r.timing.parse_seconds = timing.at("parse_seconds").get<double>();
    r.timing.solve_seconds = timing.at("solve_seconds").get<double>();
    r.timing.total_seconds = timing.at("total_seconds").get<double>();
    return r;
}

}  // namespace qcdist
