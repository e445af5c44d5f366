#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "attention.hpp"
#include "compiler.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "program.hpp"
#include "serialize.hpp"

namespace sdattn::cli {

enum exit_code : int {
    exit_proved = 0,
    exit_ok = 0,
    exit_failed = 1,
    exit_diverged = 2,
    exit_input_error = 3,
    exit_disagreement = 4,
};

enum class command { compile, prove, model, gen };
enum class output_format { text, json };
enum class engine_choice { attention, symbolic, both };

struct run_config {
    command cmd = command::compile;
    std::string program_path;
    std::optional<std::string> query;
    std::size_t max_steps = 1000;
    output_format format = output_format::text;
    engine_choice engine = engine_choice::both;
    bool trace = false;
    bool full_trace = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_symbols;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string join(const std::vector<std::string>& xs, const char* sep = " ") {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

inline std::string bits_string(const std::vector<std::uint8_t>& bits) {
    std::string out = "(";
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (i) out += ", ";
        out += bits[i] ? '1' : '0';
    }
    return out + ")";
}

inline void print_matrix(std::ostream& out, const char* name, const dense_matrix<rational>& m,
                         const std::vector<std::string>& labels) {
    std::size_t width = 1;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& x : m.row(r))
            width = std::max(width, to_string(x).size());
    for (const auto& l : labels)
        width = std::max(width, l.size());
    std::size_t label_width = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        label_width = std::max(label_width, labels[r].size());

    out << name << " (" << m.rows() << "x" << m.cols() << ")\n";
    out << std::string(label_width + 1, ' ');
    for (std::size_t c = 0; c < m.cols(); ++c)
        out << ' ' << std::setw(static_cast<int>(width)) << labels[c];
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << std::setw(static_cast<int>(label_width)) << labels[r] << " ";
        for (const auto& x : m.row(r))
            out << ' ' << std::setw(static_cast<int>(width)) << to_string(x);
        out << '\n';
    }
}

inline std::vector<std::string> dimension_labels(const symbol_table& table, bool with_constants) {
    std::vector<std::string> out;
    for (const auto& s : table.symbols())
        out.push_back(s.name);
    if (with_constants) {
        out.push_back("true");
        out.push_back("false");
    }
    return out;
}

inline std::string describe_state(const query& q, const symbol_table& table) {
    auto names = ordered_names(q, table);
    return names.empty() ? "{}" : join(names, " & ");
}

inline void print_trace(std::ostream& out, const derivation_trace& t, const symbol_table& table) {
    out << "step 0: " << describe_state(t.initial, table) << '\n';
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
        const auto& s = t.steps[k];
        out << "step " << k + 1 << ": ";
        if (t.mode != trace_mode::symbolic)
            out << "attention " << to_string(s.pre) << " -> " << bits_string(s.post) << "  ";
        out << describe_state(s.decoded, table) << '\n';
    }
}

inline std::string status_line(const derivation_trace& t) {
    std::ostringstream ss;
    ss << to_string(t.status);
    if (t.status == derivation_status::fixpoint_reached)
        ss << " at step " << t.step_count;
    else
        ss << " after " << t.step_count << (t.step_count == 1 ? " step" : " steps");
    if (t.cycle_start)
        ss << " (state " << t.steps.size() << " repeats state " << *t.cycle_start << ")";
    return ss.str();
}

/// Empty when the traces agree, else a description of the first difference.
inline std::string compare_topdown(const derivation_trace& engine, const derivation_trace& symbolic,
                                   const symbol_table& table) {
    const std::size_t common = std::min(engine.steps.size(), symbolic.steps.size());
    for (std::size_t k = 0; k < common; ++k) {
        if (engine.steps[k].decoded != symbolic.steps[k].decoded)
            return "step " + std::to_string(k + 1) + ": attention gives {" +
                   describe_state(engine.steps[k].decoded, table) + "}, symbolic gives {" +
                   describe_state(symbolic.steps[k].decoded, table) + "}";
    }
    if (engine.steps.size() != symbolic.steps.size())
        return "attention ran " + std::to_string(engine.steps.size()) + " steps, symbolic ran " +
               std::to_string(symbolic.steps.size());
    if (engine.status != symbolic.status)
        return std::string("attention status ") + to_string(engine.status) + ", symbolic status " +
               to_string(symbolic.status);
    if (engine.cycle_start != symbolic.cycle_start || engine.step_count != symbolic.step_count)
        return "termination points differ";
    return {};
}

inline symbol_set as_symbols(const query& q) {
    symbol_set out;
    for (const auto& a : q)
        if (a.is_prop())
            out.insert(symbol{a.name});
    return out;
}

/// Engine state k equals T_P^(k+1)(∅) because the engine starts from the facts.
inline std::string compare_bottomup(const derivation_trace& engine, const oracle::least_model_result& lm) {
    const std::size_t last = lm.iterates.size() - 1;
    auto expected = [&](std::size_t k) -> const symbol_set& { return lm.iterates[std::min(k + 1, last)]; };
    if (as_symbols(engine.initial) != expected(0))
        return "initial interpretations differ";
    for (std::size_t k = 0; k < engine.steps.size(); ++k)
        if (as_symbols(engine.steps[k].decoded) != expected(k + 1))
            return "interpretation after step " + std::to_string(k + 1) + " differs";
    const bool engine_done = engine.status == derivation_status::fixpoint_reached;
    if (engine_done != lm.converged)
        return engine_done ? "symbolic iteration did not converge" : "attention iteration did not converge";
    if (engine_done && engine.step_count != (last == 0 ? 0 : last - 1))
        return "fixpoint reached at different steps";
    return {};
}

inline int cmd_compile(const run_config& cfg, std::ostream& out) {
    const auto prog = validate_and_complete(parse_program(read_file(cfg.program_path)));
    const auto cp = compile(prog);
    if (cfg.format == output_format::json) {
        out << to_json(cp).dump() << '\n';
        return exit_ok;
    }
    out << "symbols: " << join(dimension_labels(cp.table, false)) << '\n';
    if (!prog.completed().empty()) {
        std::vector<std::string> names;
        for (const auto& s : prog.completed())
            names.push_back(s.name);
        out << "completed with false bodies: " << join(names) << '\n';
    }
    const auto full = dimension_labels(cp.table, true);
    print_matrix(out, "H", cp.head, full);
    print_matrix(out, "B", cp.body, full);
    print_matrix(out, "M", cp.program, dimension_labels(cp.table, false));
    return exit_ok;
}

inline int prove_exit(derivation_status s) {
    switch (s) {
    case derivation_status::proved: return exit_proved;
    case derivation_status::failed: return exit_failed;
    default: return exit_diverged;
    }
}

inline int cmd_prove(const run_config& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.query)
        throw error("prove requires --query");
    const auto prog = validate_and_complete(parse_program(read_file(cfg.program_path)), query_symbols(*cfg.query));
    const auto& table = prog.symbols();
    const query q = parse_query(*cfg.query, table);

    std::optional<derivation_trace> engine_trace, symbolic_trace;
    if (cfg.engine != engine_choice::symbolic)
        engine_trace = topdown_derive(q, compile(prog), {cfg.max_steps, cfg.full_trace});
    if (cfg.engine != engine_choice::attention)
        symbolic_trace = as_trace(oracle::symbolic_topdown(q, prog, cfg.max_steps, cfg.full_trace));

    if (engine_trace && symbolic_trace) {
        auto diff = compare_topdown(*engine_trace, *symbolic_trace, table);
        if (!diff.empty()) {
            err << "engine disagreement: " << diff << '\n';
            return exit_disagreement;
        }
    }
    const derivation_trace& t = engine_trace ? *engine_trace : *symbolic_trace;
    if (cfg.format == output_format::json) {
        out << to_json(t, &table).dump() << '\n';
    } else {
        if (cfg.trace)
            print_trace(out, t, table);
        out << status_line(t) << '\n';
    }
    return prove_exit(t.status);
}

inline int cmd_model(const run_config& cfg, std::ostream& out, std::ostream& err) {
    const auto prog = validate_and_complete(parse_program(read_file(cfg.program_path)));
    const auto& table = prog.symbols();

    std::optional<derivation_trace> engine_trace;
    std::optional<oracle::least_model_result> lm;
    if (cfg.engine != engine_choice::symbolic)
        engine_trace = bottomup_fixpoint(compile(prog), cfg.max_steps);
    if (cfg.engine != engine_choice::attention)
        // The engine starts one T_P application ahead, so the oracle gets one extra step.
        lm = oracle::least_model(prog, cfg.engine == engine_choice::both ? cfg.max_steps + 1 : cfg.max_steps);

    if (engine_trace && lm) {
        auto diff = compare_bottomup(*engine_trace, *lm);
        if (!diff.empty()) {
            err << "engine disagreement: " << diff << '\n';
            return exit_disagreement;
        }
    }

    const symbol_set model = engine_trace ? model_of(*engine_trace) : lm->model;
    const bool converged = engine_trace ? engine_trace->status == derivation_status::fixpoint_reached : lm->converged;
    std::vector<std::string> names;
    for (const auto& s : model)
        names.push_back(s.name);

    if (cfg.format == output_format::json) {
        json j{{"model", names}, {"status", converged ? "fixpoint" : "diverged"}};
        if (engine_trace) {
            j["step_count"] = engine_trace->step_count;
            j["trace"] = to_json(*engine_trace, &table);
        } else {
            j["step_count"] = lm->iterates.size() - 1;
        }
        out << j.dump() << '\n';
    } else {
        if (cfg.trace && engine_trace) {
            print_trace(out, *engine_trace, table);
            out << status_line(*engine_trace) << '\n';
        }
        out << join(names) << '\n';
    }
    return converged ? exit_ok : exit_diverged;
}

inline int cmd_gen(const run_config& cfg, std::ostream& out) {
    if (!cfg.n_symbols || *cfg.n_symbols == 0)
        throw error("gen requires --symbols N with N >= 1");
    const std::string text = generate_program(*cfg.n_symbols, cfg.seed.value_or(0));
    if (cfg.format == output_format::json)
        out << json{{"program", text}}.dump() << '\n';
    else
        out << text;
    return exit_ok;
}

} // namespace detail

/// Runs one command. Exit codes: 0 proved / success, 1 failed, 2 diverged or
/// step limit reached, 3 input error, 4 engine disagreement.
inline int run(const run_config& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.max_steps == 0)
            throw error("--max-steps must be at least 1");
        switch (cfg.cmd) {
        case command::compile: return detail::cmd_compile(cfg, out);
        case command::prove: return detail::cmd_prove(cfg, out, err);
        case command::model: return detail::cmd_model(cfg, out, err);
        case command::gen: return detail::cmd_gen(cfg, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}

} // namespace sdattn::cli
