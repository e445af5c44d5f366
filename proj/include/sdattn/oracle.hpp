#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "compiler.hpp"
#include "errors.hpp"
#include "program.hpp"

// Reference semantics written directly over clauses and sets. Nothing here
// touches vectors or matrices, so agreement with the attention engine is a
// genuine cross-check.
namespace sdattn::oracle {

enum class symbolic_status { proved, failed, diverged };

inline const char* to_string(symbolic_status s) {
    switch (s) {
    case symbolic_status::proved: return "proved";
    case symbolic_status::failed: return "failed";
    default: return "diverged";
    }
}

/// Replace every atom by the body of its unique clause; ⊤ and ⊥ rewrite to
/// themselves. Set union collapses duplicates.
inline query symbolic_topdown_step(const query& q, const sd_program& prog) {
    query out;
    for (const auto& a : q) {
        if (!a.is_prop()) {
            out.insert(a);
            continue;
        }
        const auto& clause = prog.clause_for(a.name);
        if (clause.is_fact())
            out.insert(atom::top());
        else if (clause.is_failure())
            out.insert(atom::bottom());
        else
            for (const auto& s : *clause.conjunction())
                out.insert(atom::prop(s));
    }
    return out;
}

/// queries[0] is the start query, queries[k] the result of k steps.
struct symbolic_derivation {
    symbolic_status status = symbolic_status::diverged;
    std::vector<query> queries;
    std::optional<std::size_t> cycle_start;
    std::size_t step_count = 0;
};

inline symbolic_derivation symbolic_topdown(const query& start, const sd_program& prog, std::size_t max_steps = 1000,
                                            bool full_trace = false) {
    if (max_steps == 0)
        throw error("max_steps must be at least 1");
    auto has_bottom = [](const query& q) { return q.count(atom::bottom()) > 0; };
    auto proved = [](const query& q) { return q == query{atom::top()}; };

    symbolic_derivation d;
    d.queries.push_back(start);
    std::optional<std::size_t> failed_at;
    if (has_bottom(start)) {
        failed_at = 0;
        if (!full_trace) {
            d.status = symbolic_status::failed;
            return d;
        }
    } else if (proved(start)) {
        d.status = symbolic_status::proved;
        return d;
    }

    for (std::size_t k = 1; k <= max_steps; ++k) {
        query next = symbolic_topdown_step(d.queries.back(), prog);
        const auto prior = static_cast<std::size_t>(std::find(d.queries.begin(), d.queries.end(), next) -
                                                     d.queries.begin());
        const bool repeated = prior < d.queries.size();
        d.queries.push_back(std::move(next));
        const query& current = d.queries.back();
        if (!failed_at && has_bottom(current)) {
            failed_at = k;
            if (!full_trace) {
                d.status = symbolic_status::failed;
                d.step_count = k;
                return d;
            }
        }
        if (!failed_at && proved(current)) {
            d.status = symbolic_status::proved;
            d.step_count = k;
            return d;
        }
        if (repeated) {
            d.cycle_start = prior;
            break;
        }
    }
    if (failed_at) {
        d.status = symbolic_status::failed;
        d.step_count = *failed_at;
    } else {
        d.status = symbolic_status::diverged;
        d.step_count = d.queries.size() - 1;
    }
    return d;
}

/// The immediate consequence operator: heads of facts and of clauses whose
/// bodies lie inside `interp`. Failure clauses never fire.
inline symbol_set symbolic_tp(const symbol_set& interp, const sd_program& prog) {
    symbol_set out;
    for (const auto& c : prog.clauses()) {
        if (c.is_fact()) {
            out.insert(c.head);
        } else if (const auto* conj = c.conjunction()) {
            if (std::all_of(conj->begin(), conj->end(), [&](const symbol& s) { return interp.count(s) > 0; }))
                out.insert(c.head);
        }
    }
    return out;
}

struct least_model_result {
    symbol_set model;
    std::vector<symbol_set> iterates; // iterates[k] = T_P^k(∅)
    bool converged = false;
};

/// Iterates T_P from the empty interpretation until it stabilizes.
inline least_model_result least_model(const sd_program& prog, std::size_t max_steps = 1000) {
    least_model_result r;
    r.iterates.push_back({});
    for (std::size_t k = 0; k < max_steps; ++k) {
        symbol_set next = symbolic_tp(r.iterates.back(), prog);
        if (next == r.iterates.back()) {
            r.converged = true;
            break;
        }
        r.iterates.push_back(std::move(next));
    }
    r.model = r.iterates.back();
    return r;
}

} // namespace sdattn::oracle
