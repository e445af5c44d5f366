#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compiler.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "rational.hpp"

namespace sdattn {

/// Weight 1/M on each of the M maximal entries, 0 elsewhere.
inline rational_vector hardmax(std::span<const rational> scores) {
    if (scores.empty())
        throw error("hardmax of an empty vector");
    const rational top = *std::max_element(scores.begin(), scores.end());
    const auto maxima = std::count(scores.begin(), scores.end(), top);
    const rational weight(1, static_cast<std::int64_t>(maxima));
    rational_vector out(scores.size(), rational(0));
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] == top)
            out[i] = weight;
    return out;
}

enum class activation { hardmax, identity };

/// activation(q K^T) V, computed as the weighted sum of value rows.
/// No 1/sqrt(d) scaling.
template <class T>
rational_vector attention(std::span<const rational> q, const dense_matrix<T>& keys, const dense_matrix<T>& values,
                          activation act) {
    if (q.size() != keys.cols())
        throw dimension_mismatch_error("query has " + std::to_string(q.size()) + " entries, keys have " +
                                       std::to_string(keys.cols()) + " columns");
    if (keys.rows() != values.rows())
        throw dimension_mismatch_error("keys have " + std::to_string(keys.rows()) + " rows, values have " +
                                       std::to_string(values.rows()));

    rational_vector scores(keys.rows(), rational(0));
    for (std::size_t j = 0; j < keys.rows(); ++j) {
        auto k = keys.row(j);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0 && k[i] != 0)
                scores[j] += q[i] * rational(k[i]);
    }

    const rational_vector weights = act == activation::hardmax ? hardmax(scores) : std::move(scores);

    rational_vector out(values.cols(), rational(0));
    for (std::size_t j = 0; j < values.rows(); ++j) {
        if (weights[j] == 0)
            continue;
        auto v = values.row(j);
        for (std::size_t c = 0; c < out.size(); ++c)
            if (v[c] != 0)
                out[c] += weights[j] * rational(v[c]);
    }
    return out;
}

/// 1 where strictly positive, else 0.
inline rational_vector heaviside(std::span<const rational> v) {
    rational_vector out(v.size(), rational(0));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > 0)
            out[i] = 1;
    return out;
}

/// 1 where the entry is at least 1, else 0.
inline rational_vector threshold_at_one(std::span<const rational> v) {
    rational_vector out(v.size(), rational(0));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] >= 1)
            out[i] = 1;
    return out;
}

template <class Vector>
struct layer_output {
    rational_vector pre; // attention output
    Vector post;         // after the feed-forward activation
};

inline layer_output<query_vector> topdown_layer(const query_vector& q, const compiled_program& cp) {
    if (q.size() != cp.table.dimension())
        throw dimension_mismatch_error("query vector has " + std::to_string(q.size()) + " entries, program needs " +
                                       std::to_string(cp.table.dimension()));
    const auto in = q.values();
    auto pre = attention(std::span<const rational>(in), cp.head, cp.body, activation::hardmax);
    auto post = query_vector::from_values(heaviside(pre));
    return {std::move(pre), std::move(post)};
}

/// One-step top-down derivation: H(hardmax(q H_P^T) B_P).
inline query_vector topdown_step(const query_vector& q, const compiled_program& cp) {
    return topdown_layer(q, cp).post;
}

inline layer_output<interpretation> bottomup_layer(const interpretation& interp, const compiled_program& cp) {
    if (interp.size() != cp.table.size())
        throw dimension_mismatch_error("interpretation has " + std::to_string(interp.size()) +
                                       " entries, program has " + std::to_string(cp.table.size()) + " symbols");
    const auto in = interp.values();
    auto pre = attention(std::span<const rational>(in), cp.program, cp.bottomup_values, activation::identity);
    auto post = interpretation::from_values(threshold_at_one(pre));
    return {std::move(pre), std::move(post)};
}

/// One bottom-up step: heads whose bodies are fully satisfied by the
/// interpretation, plus facts already true in it.
inline interpretation bottomup_step(const interpretation& interp, const compiled_program& cp) {
    return bottomup_layer(interp, cp).post;
}

enum class derivation_status { proved, failed, diverged, fixpoint_reached };

inline const char* to_string(derivation_status s) {
    switch (s) {
    case derivation_status::proved: return "proved";
    case derivation_status::failed: return "failed";
    case derivation_status::diverged: return "diverged";
    default: return "fixpoint";
    }
}

enum class trace_mode { topdown, bottomup, symbolic };

inline const char* to_string(trace_mode m) {
    switch (m) {
    case trace_mode::topdown: return "topdown";
    case trace_mode::bottomup: return "bottomup";
    default: return "symbolic";
    }
}

struct trace_step {
    rational_vector pre;            // empty for symbolic traces
    std::vector<std::uint8_t> post; // empty for symbolic traces
    query decoded;

    bool operator==(const trace_step&) const = default;
};

/// Step k of `steps` is layer k+1; the initial state is state 0.
/// `step_count` is the layer at which the status was decided (for a
/// fixpoint: the index of the first stable interpretation).
struct derivation_trace {
    trace_mode mode = trace_mode::topdown;
    derivation_status status = derivation_status::diverged;
    query initial;
    std::vector<trace_step> steps;
    std::optional<std::size_t> cycle_start;
    std::size_t step_count = 0;

    const query& final_state() const { return steps.empty() ? initial : steps.back().decoded; }

    bool operator==(const derivation_trace&) const = default;
};

struct derive_options {
    std::size_t max_steps = 1000;
    bool full_trace = false; // keep going after ⊥ appears
};

namespace detail {

inline bool contains_bottom(const query& q) {
    return std::any_of(q.begin(), q.end(), [](const atom& a) { return a.is_bottom(); });
}

inline bool is_proved(const query& q) { return q.size() == 1 && q.begin()->is_top(); }

} // namespace detail

/// Iterates top-down layers from `start`. Stops at {⊤} (proved), at the first
/// query containing ⊥ (failed), at a repeated vector (diverged, with
/// cycle_start) or after max_steps layers (diverged, no cycle_start).
inline derivation_trace topdown_derive(const query& start, const compiled_program& cp, derive_options opts = {}) {
    if (opts.max_steps == 0)
        throw error("max_steps must be at least 1");

    derivation_trace trace;
    trace.mode = trace_mode::topdown;
    trace.initial = start;

    query_vector state = vectorize_query(start, cp.table);
    if (detail::contains_bottom(start)) {
        trace.status = derivation_status::failed;
        if (!opts.full_trace)
            return trace;
    } else if (detail::is_proved(start)) {
        trace.status = derivation_status::proved;
        return trace;
    }
    std::optional<std::size_t> failed_at;
    if (trace.status == derivation_status::failed)
        failed_at = 0;

    std::map<query_vector, std::size_t> seen{{state, 0}};
    for (std::size_t k = 1; k <= opts.max_steps; ++k) {
        auto layer = topdown_layer(state, cp);
        state = layer.post;
        trace.steps.push_back({std::move(layer.pre), state.bits(), devectorize(state, cp.table)});
        const query& decoded = trace.steps.back().decoded;

        if (!failed_at && detail::contains_bottom(decoded)) {
            failed_at = k;
            if (!opts.full_trace) {
                trace.status = derivation_status::failed;
                trace.step_count = k;
                return trace;
            }
        }
        if (!failed_at && detail::is_proved(decoded)) {
            trace.status = derivation_status::proved;
            trace.step_count = k;
            return trace;
        }
        auto [it, inserted] = seen.emplace(state, k);
        if (!inserted) {
            trace.cycle_start = it->second;
            break;
        }
    }
    if (failed_at) {
        trace.status = derivation_status::failed;
        trace.step_count = *failed_at;
    } else {
        trace.status = derivation_status::diverged;
        trace.step_count = trace.steps.size();
    }
    return trace;
}

inline interpretation fact_interpretation(const compiled_program& cp) {
    interpretation facts(cp.table.size());
    for (auto i : cp.fact_heads)
        facts.set(i);
    return facts;
}

/// Iterates I <- step(I) ∪ facts from I = facts until I is stable
/// (fixpoint_reached) or max_steps layers have run (diverged).
inline derivation_trace bottomup_fixpoint(const compiled_program& cp, std::size_t max_steps = 1000) {
    if (max_steps == 0)
        throw error("max_steps must be at least 1");

    derivation_trace trace;
    trace.mode = trace_mode::bottomup;
    const interpretation facts = fact_interpretation(cp);
    for (const auto& s : devectorize(facts, cp.table))
        trace.initial.insert(atom::prop(s));

    interpretation state = facts;
    for (std::size_t k = 1; k <= max_steps; ++k) {
        auto layer = bottomup_layer(state, cp);
        interpretation next = layer.post | facts;
        query decoded;
        for (const auto& s : devectorize(next, cp.table))
            decoded.insert(atom::prop(s));
        trace.steps.push_back({std::move(layer.pre), next.bits(), std::move(decoded)});
        if (next == state) {
            trace.status = derivation_status::fixpoint_reached;
            trace.step_count = k - 1;
            return trace;
        }
        state = std::move(next);
    }
    trace.status = derivation_status::diverged;
    trace.step_count = trace.steps.size();
    return trace;
}

/// Symbols of the final interpretation of a bottom-up trace.
inline symbol_set model_of(const derivation_trace& trace) {
    symbol_set out;
    for (const auto& a : trace.final_state())
        if (a.is_prop())
            out.insert(symbol{a.name});
    return out;
}

} // namespace sdattn
