#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "program.hpp"
#include "rational.hpp"

namespace sdattn {

/// 0/1 vector over a fixed set of dimensions. The tag separates query
/// vectors (N+2 dimensions, ⊤/⊥ included) from interpretations (N dimensions).
template <class Tag>
class indicator_vector {
public:
    indicator_vector() = default;
    explicit indicator_vector(std::size_t n) : bits_(n, 0) {}
    explicit indicator_vector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] > 1)
                throw non_boolean_vector_error(i);
    }

    /// Throws non_boolean_vector_error unless every entry is exactly 0 or 1.
    static indicator_vector from_values(std::span<const rational> values) {
        indicator_vector v(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] == 1)
                v.bits_[i] = 1;
            else if (values[i] != 0)
                throw non_boolean_vector_error(i);
        }
        return v;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool test(std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool on = true) { bits_.at(i) = on ? 1 : 0; }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    rational_vector values() const {
        rational_vector out(bits_.size());
        for (std::size_t i = 0; i < bits_.size(); ++i)
            out[i] = bits_[i];
        return out;
    }

    indicator_vector operator|(const indicator_vector& other) const {
        if (other.size() != size())
            throw dimension_mismatch_error("union of vectors with different lengths");
        indicator_vector out = *this;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            out.bits_[i] |= other.bits_[i];
        return out;
    }

    /// Every entry set here is also set in `other`.
    bool subset_of(const indicator_vector& other) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] && !other.bits_.at(i))
                return false;
        return true;
    }

    auto operator<=>(const indicator_vector&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct query_tag {};
struct interpretation_tag {};

using query_vector = indicator_vector<query_tag>;
using interpretation = indicator_vector<interpretation_tag>;
using symbol_set = std::set<symbol>;

/// Attention parameters for one program.
///   head    (N+2)x(N+2) keys for top-down steps; always the identity.
///   body    (N+2)x(N+2) values for top-down steps; row i indicates body(C_i),
///           rows N and N+1 are the fixed ⊤ / ⊥ rows.
///   program NxN keys for bottom-up steps; a body of M symbols puts 1/M on
///           each, a fact puts 1 on its own diagonal, a failure row is zero.
///   bottomup_values NxN identity, the head matrix without the ⊤/⊥ dimensions.
struct compiled_program {
    symbol_table table;
    dense_matrix<rational> head;
    dense_matrix<rational> body;
    dense_matrix<rational> program;
    dense_matrix<rational> bottomup_values;
    std::vector<std::size_t> fact_heads;

    bool operator==(const compiled_program&) const = default;
};

inline compiled_program compile(const sd_program& prog) {
    const auto& table = prog.symbols();
    const std::size_t n = table.size();
    const std::size_t d = table.dimension();

    compiled_program cp;
    cp.table = table;
    cp.head = dense_matrix<rational>::identity(d);
    cp.body = dense_matrix<rational>(d, d, rational(0));
    cp.program = dense_matrix<rational>(n, n, rational(0));
    cp.bottomup_values = dense_matrix<rational>::identity(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& clause = prog.clause_for(i);
        if (clause.is_fact()) {
            cp.body(i, table.top_index()) = 1;
            cp.program(i, i) = 1;
            cp.fact_heads.push_back(i);
        } else if (clause.is_failure()) {
            cp.body(i, table.bottom_index()) = 1;
        } else {
            const auto& conj = *clause.conjunction();
            const rational weight(1, static_cast<std::int64_t>(conj.size()));
            for (const auto& s : conj) {
                auto j = table.index_of(atom::prop(s));
                cp.body(i, j) = 1;
                cp.program(i, j) = weight;
            }
        }
    }
    cp.body(table.top_index(), table.top_index()) = 1;
    cp.body(table.bottom_index(), table.bottom_index()) = 1;
    return cp;
}

inline query_vector vectorize_query(const query& q, const symbol_table& table) {
    query_vector v(table.dimension());
    for (const auto& a : q)
        v.set(table.index_of(a));
    return v;
}

inline interpretation vectorize_interpretation(const symbol_set& symbols, const symbol_table& table) {
    interpretation v(table.size());
    for (const auto& s : symbols)
        v.set(table.index_of(atom::prop(s)));
    return v;
}

inline query devectorize(const query_vector& v, const symbol_table& table) {
    if (v.size() != table.dimension())
        throw dimension_mismatch_error("query vector has " + std::to_string(v.size()) + " entries, table needs " +
                                       std::to_string(table.dimension()));
    query q;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.test(i))
            q.insert(table.atom_at(i));
    return q;
}

inline symbol_set devectorize(const interpretation& v, const symbol_table& table) {
    if (v.size() != table.size())
        throw dimension_mismatch_error("interpretation has " + std::to_string(v.size()) + " entries, table has " +
                                       std::to_string(table.size()) + " symbols");
    symbol_set out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.test(i))
            out.insert(table.at(i));
    return out;
}

/// Atoms of `q` in table order, for display.
inline std::vector<std::string> ordered_names(const query& q, const symbol_table& table) {
    std::vector<std::pair<std::size_t, std::string>> items;
    for (const auto& a : q)
        items.emplace_back(table.index_of(a), to_string(a));
    std::sort(items.begin(), items.end());
    std::vector<std::string> out;
    for (auto& [_, name] : items)
        out.push_back(std::move(name));
    return out;
}

} // namespace sdattn
