#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attention.hpp"
#include "compiler.hpp"
#include "oracle.hpp"
#include "rational.hpp"

// JSON layouts
//
// compiled program:
//   {"symbols": ["p", ...],            N names in dimension order
//    "H": [[1,0,...], ...],            (N+2)x(N+2) integers
//    "B": [[0,1,...], ...],            (N+2)x(N+2) integers
//    "M": [["0","1/2",...], ...],      NxN rationals as "num/den" strings
//    "fact_heads": ["t", ...]}
//
// derivation trace:
//   {"mode": "topdown"|"bottomup"|"symbolic",
//    "status": "proved"|"failed"|"diverged"|"fixpoint",
//    "step_count": k,
//    "initial": ["p", ...],
//    "steps": [{"pre": ["0","1/2",...], "post": [0,1,...], "decoded": ["q","r"]}, ...],
//    "cycle_start": j}                 only when a repeated state ended the run
//
// Symbolic steps carry only "decoded". ⊤ and ⊥ are written "true" and "false".
namespace sdattn {

using json = nlohmann::json;

namespace detail {

inline json integer_matrix(const dense_matrix<rational>& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (const auto& x : m.row(r)) {
            if (x.denominator() != 1)
                throw error("non-integer entry in 0/1 matrix");
            row.push_back(x.numerator());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json rational_row(std::span<const rational> v) {
    json row = json::array();
    for (const auto& x : v)
        row.push_back(to_string(x));
    return row;
}

inline rational json_rational(const json& j) {
    if (j.is_number_integer())
        return rational(j.get<std::int64_t>());
    return parse_rational(j.get<std::string>());
}

inline dense_matrix<rational> matrix_from_json(const json& rows, std::size_t n) {
    if (!rows.is_array() || rows.size() != n)
        throw error("matrix must have " + std::to_string(n) + " rows");
    dense_matrix<rational> m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!rows[r].is_array() || rows[r].size() != n)
            throw error("matrix row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c)
            m(r, c) = json_rational(rows[r][c]);
    }
    return m;
}

inline atom atom_from_name(const std::string& name) {
    if (name == "true") return atom::top();
    if (name == "false") return atom::bottom();
    return atom::prop(name);
}

inline json names_json(const query& q, const symbol_table* table) {
    json out = json::array();
    if (table) {
        for (auto& n : ordered_names(q, *table))
            out.push_back(n);
    } else {
        for (const auto& a : q)
            out.push_back(to_string(a));
    }
    return out;
}

inline query query_from_json(const json& names) {
    query q;
    for (const auto& n : names)
        q.insert(atom_from_name(n.get<std::string>()));
    return q;
}

} // namespace detail

inline json to_json(const compiled_program& cp) {
    json symbols = json::array();
    for (const auto& s : cp.table.symbols())
        symbols.push_back(s.name);
    json m = json::array();
    for (std::size_t r = 0; r < cp.program.rows(); ++r)
        m.push_back(detail::rational_row(cp.program.row(r)));
    json facts = json::array();
    for (auto i : cp.fact_heads)
        facts.push_back(cp.table.at(i).name);
    return json{{"symbols", std::move(symbols)},
                {"H", detail::integer_matrix(cp.head)},
                {"B", detail::integer_matrix(cp.body)},
                {"M", std::move(m)},
                {"fact_heads", std::move(facts)}};
}

inline compiled_program compiled_from_json(const json& j) {
    compiled_program cp;
    std::vector<symbol> symbols;
    for (const auto& s : j.at("symbols"))
        symbols.push_back(make_symbol(s.get<std::string>()));
    cp.table = symbol_table(std::move(symbols));
    const std::size_t n = cp.table.size();
    cp.head = detail::matrix_from_json(j.at("H"), n + 2);
    cp.body = detail::matrix_from_json(j.at("B"), n + 2);
    cp.program = detail::matrix_from_json(j.at("M"), n);
    cp.bottomup_values = dense_matrix<rational>::identity(n);
    for (const auto& f : j.at("fact_heads")) {
        auto i = cp.table.find(f.get<std::string>());
        if (!i)
            throw unknown_symbol_error(f.get<std::string>());
        cp.fact_heads.push_back(*i);
    }
    return cp;
}

inline const char* status_name(derivation_status s) { return to_string(s); }

inline derivation_status status_from_name(const std::string& name) {
    if (name == "proved") return derivation_status::proved;
    if (name == "failed") return derivation_status::failed;
    if (name == "diverged") return derivation_status::diverged;
    if (name == "fixpoint") return derivation_status::fixpoint_reached;
    throw error("unknown status '" + name + "'");
}

inline trace_mode mode_from_name(const std::string& name) {
    if (name == "topdown") return trace_mode::topdown;
    if (name == "bottomup") return trace_mode::bottomup;
    if (name == "symbolic") return trace_mode::symbolic;
    throw error("unknown trace mode '" + name + "'");
}

/// With a table, decoded sets are listed in dimension order; without one, in
/// atom order.
inline json to_json(const derivation_trace& t, const symbol_table* table = nullptr) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        json step = json::object();
        if (t.mode != trace_mode::symbolic) {
            step["pre"] = detail::rational_row(s.pre);
            step["post"] = s.post;
        }
        step["decoded"] = detail::names_json(s.decoded, table);
        steps.push_back(std::move(step));
    }
    json out{{"mode", to_string(t.mode)},
             {"status", status_name(t.status)},
             {"step_count", t.step_count},
             {"initial", detail::names_json(t.initial, table)},
             {"steps", std::move(steps)}};
    if (t.cycle_start)
        out["cycle_start"] = *t.cycle_start;
    return out;
}

inline derivation_trace trace_from_json(const json& j) {
    derivation_trace t;
    t.mode = mode_from_name(j.at("mode").get<std::string>());
    t.status = status_from_name(j.at("status").get<std::string>());
    t.step_count = j.at("step_count").get<std::size_t>();
    t.initial = detail::query_from_json(j.at("initial"));
    if (j.contains("cycle_start"))
        t.cycle_start = j.at("cycle_start").get<std::size_t>();
    for (const auto& s : j.at("steps")) {
        trace_step step;
        if (s.contains("pre"))
            for (const auto& x : s.at("pre"))
                step.pre.push_back(detail::json_rational(x));
        if (s.contains("post"))
            step.post = s.at("post").get<std::vector<std::uint8_t>>();
        step.decoded = detail::query_from_json(s.at("decoded"));
        t.steps.push_back(std::move(step));
    }
    return t;
}

/// Symbolic derivation in trace form, for the shared JSON layout.
inline derivation_trace as_trace(const oracle::symbolic_derivation& d) {
    derivation_trace t;
    t.mode = trace_mode::symbolic;
    switch (d.status) {
    case oracle::symbolic_status::proved: t.status = derivation_status::proved; break;
    case oracle::symbolic_status::failed: t.status = derivation_status::failed; break;
    default: t.status = derivation_status::diverged; break;
    }
    t.initial = d.queries.front();
    for (std::size_t k = 1; k < d.queries.size(); ++k)
        t.steps.push_back({{}, {}, d.queries[k]});
    t.cycle_start = d.cycle_start;
    t.step_count = d.step_count;
    return t;
}

} // namespace sdattn
