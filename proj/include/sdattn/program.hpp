#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace sdattn {

inline bool is_reserved(std::string_view name) { return name == "true" || name == "false"; }

namespace detail {
inline bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
} // namespace detail

inline bool is_identifier(std::string_view name) {
    if (name.empty() || !detail::ident_start(name.front()))
        return false;
    return std::all_of(name.begin() + 1, name.end(), detail::ident_char);
}

/// A propositional symbol. Never `true` or `false`.
struct symbol {
    std::string name;

    auto operator<=>(const symbol&) const = default;
};

inline symbol make_symbol(std::string name) {
    if (!is_identifier(name) || is_reserved(name))
        throw error("invalid symbol name '" + name + "'");
    return symbol{std::move(name)};
}

/// A query atom: a symbol, or one of the distinguished atoms ⊤ / ⊥.
struct atom {
    enum class kind : std::uint8_t { prop, top, bottom };

    kind tag = kind::prop;
    std::string name; // empty unless tag == prop

    static atom prop(std::string n) { return {kind::prop, std::move(n)}; }
    static atom prop(const symbol& s) { return {kind::prop, s.name}; }
    static atom top() { return {kind::top, {}}; }
    static atom bottom() { return {kind::bottom, {}}; }

    bool is_prop() const noexcept { return tag == kind::prop; }
    bool is_top() const noexcept { return tag == kind::top; }
    bool is_bottom() const noexcept { return tag == kind::bottom; }

    auto operator<=>(const atom&) const = default;
};

inline std::string to_string(const atom& a) {
    switch (a.tag) {
    case atom::kind::top: return "true";
    case atom::kind::bottom: return "false";
    default: return a.name;
    }
}

/// A conjunction of distinct atoms. Set semantics make ∧ idempotent.
using query = std::set<atom>;

inline std::string to_string(const query& q) {
    std::string out;
    for (const auto& a : q) {
        if (!out.empty()) out += " & ";
        out += to_string(a);
    }
    return out;
}

struct top_body {
    bool operator==(const top_body&) const = default;
};
struct bottom_body {
    bool operator==(const bottom_body&) const = default;
};
/// Distinct symbols in source order.
using conj_body = std::vector<symbol>;
using clause_body = std::variant<conj_body, top_body, bottom_body>;

struct definite_clause {
    symbol head;
    clause_body body;
    source_location loc; // {0,0} for synthesized clauses

    bool is_fact() const noexcept { return std::holds_alternative<top_body>(body); }
    bool is_failure() const noexcept { return std::holds_alternative<bottom_body>(body); }
    const conj_body* conjunction() const noexcept { return std::get_if<conj_body>(&body); }

    /// Structural equality; source locations are ignored.
    bool operator==(const definite_clause& other) const {
        return head == other.head && body == other.body;
    }
};

/// Parsed but unvalidated clause list, in source order.
struct program_draft {
    std::vector<definite_clause> clauses;

    bool operator==(const program_draft&) const = default;
};

/// The N program symbols; ⊤ and ⊥ occupy the implicit slots N and N+1
/// (zero-based) of every (N+2)-dimensional vector.
class symbol_table {
public:
    symbol_table() = default;
    explicit symbol_table(std::vector<symbol> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (!index_.emplace(symbols_[i].name, i).second)
                throw error("duplicate symbol '" + symbols_[i].name + "' in symbol table");
        }
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    std::size_t dimension() const noexcept { return symbols_.size() + 2; }
    std::size_t top_index() const noexcept { return symbols_.size(); }
    std::size_t bottom_index() const noexcept { return symbols_.size() + 1; }

    const symbol& at(std::size_t i) const { return symbols_.at(i); }
    const std::vector<symbol>& symbols() const noexcept { return symbols_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    bool contains(std::string_view name) const { return find(name).has_value(); }

    /// Dimension of an atom in the (N+2)-dimensional space.
    std::size_t index_of(const atom& a) const {
        if (a.is_top()) return top_index();
        if (a.is_bottom()) return bottom_index();
        auto i = find(a.name);
        if (!i)
            throw unknown_symbol_error(a.name);
        return *i;
    }

    atom atom_at(std::size_t i) const {
        if (i == top_index()) return atom::top();
        if (i == bottom_index()) return atom::bottom();
        return atom::prop(symbols_.at(i));
    }

    bool operator==(const symbol_table& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<symbol> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

class sd_program;
sd_program validate_and_complete(const program_draft& draft, std::span<const symbol> extra_symbols);

/// A validated, completed SD-program: clause i heads symbol i.
class sd_program {
public:
    const symbol_table& symbols() const noexcept { return table_; }
    const std::vector<definite_clause>& clauses() const noexcept { return clauses_; }
    std::size_t size() const noexcept { return clauses_.size(); }

    const definite_clause& clause_for(std::size_t symbol_index) const { return clauses_.at(symbol_index); }

    const definite_clause& clause_for(std::string_view name) const {
        auto i = table_.find(name);
        if (!i)
            throw unknown_symbol_error(std::string(name));
        return clauses_[*i];
    }

    /// Symbols that had no clause and received a synthesized `s <- false.`
    const std::vector<symbol>& completed() const noexcept { return completed_; }

    bool operator==(const sd_program& other) const {
        return table_ == other.table_ && clauses_ == other.clauses_;
    }

private:
    friend sd_program validate_and_complete(const program_draft&, std::span<const symbol>);

    symbol_table table_;
    std::vector<definite_clause> clauses_;
    std::vector<symbol> completed_;
};

namespace detail {

enum class token_kind { ident, arrow, amp, dot, end };

struct token {
    token_kind kind;
    std::string_view text;
    source_location loc;
};

inline const char* describe(token_kind k) {
    switch (k) {
    case token_kind::ident: return "identifier";
    case token_kind::arrow: return "'<-'";
    case token_kind::amp: return "'&'";
    case token_kind::dot: return "'.'";
    default: return "end of input";
    }
}

class lexer {
public:
    explicit lexer(std::string_view text) : text_(text) {}

    token next() {
        skip_blank();
        source_location loc{line_, col_};
        if (pos_ >= text_.size())
            return {token_kind::end, {}, loc};
        char c = text_[pos_];
        if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            advance(2);
            return {token_kind::arrow, text_.substr(pos_ - 2, 2), loc};
        }
        if (c == '&') {
            advance(1);
            return {token_kind::amp, text_.substr(pos_ - 1, 1), loc};
        }
        if (c == '.') {
            advance(1);
            return {token_kind::dot, text_.substr(pos_ - 1, 1), loc};
        }
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_]))
                advance(1);
            return {token_kind::ident, text_.substr(start, pos_ - start), loc};
        }
        throw parse_error(loc, std::string("unexpected character '") + c + "'");
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance(1);
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class token_stream {
public:
    explicit token_stream(std::string_view text) : lex_(text), cur_(lex_.next()) {}

    const token& peek() const noexcept { return cur_; }

    token take() {
        token t = cur_;
        cur_ = lex_.next();
        return t;
    }

    token expect(token_kind k) {
        if (cur_.kind != k)
            throw parse_error(cur_.loc, std::string("expected ") + describe(k) + ", found " +
                                            (cur_.kind == token_kind::end ? describe(cur_.kind)
                                                                          : "'" + std::string(cur_.text) + "'"));
        return take();
    }

private:
    lexer lex_;
    token cur_;
};

template <class T>
void push_unique(std::vector<T>& v, T x) {
    if (std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(std::move(x));
}

} // namespace detail

/// Parses the `.lp` clause syntax: `head <- a & b.`, `head <- true.`, `head <- false.`
/// with `%` line comments. Duplicate body symbols collapse.
inline program_draft parse_program(std::string_view text) {
    using detail::token_kind;
    detail::token_stream ts(text);
    program_draft draft;

    while (ts.peek().kind != token_kind::end) {
        auto head = ts.expect(token_kind::ident);
        if (is_reserved(head.text))
            throw parse_error(head.loc, "reserved word '" + std::string(head.text) + "' used as clause head");
        ts.expect(token_kind::arrow);

        definite_clause clause{symbol{std::string(head.text)}, conj_body{}, head.loc};
        if (ts.peek().kind == token_kind::dot)
            throw parse_error(ts.peek().loc, "empty clause body");

        auto first = ts.expect(token_kind::ident);
        if (is_reserved(first.text)) {
            if (ts.peek().kind == token_kind::amp)
                throw parse_error(ts.peek().loc,
                                  "'" + std::string(first.text) + "' must be the whole clause body");
            clause.body = first.text == "true" ? clause_body{top_body{}} : clause_body{bottom_body{}};
        } else {
            conj_body body{symbol{std::string(first.text)}};
            while (ts.peek().kind == token_kind::amp) {
                ts.take();
                auto next = ts.expect(token_kind::ident);
                if (is_reserved(next.text))
                    throw parse_error(next.loc,
                                      "'" + std::string(next.text) + "' cannot appear inside a conjunction");
                detail::push_unique(body, symbol{std::string(next.text)});
            }
            clause.body = std::move(body);
        }
        ts.expect(token_kind::dot);
        draft.clauses.push_back(std::move(clause));
    }
    return draft;
}

/// Rejects duplicate heads, builds the symbol table (first textual appearance,
/// then query-only symbols), completes undefined symbols with `s <- false.` and
/// orders clauses so that clause i heads symbol i.
inline sd_program validate_and_complete(const program_draft& draft, std::span<const symbol> extra_symbols = {}) {
    if (draft.clauses.empty())
        throw empty_program_error();

    std::map<std::string, const definite_clause*> by_head;
    std::vector<symbol> order;
    for (const auto& c : draft.clauses) {
        auto [it, inserted] = by_head.emplace(c.head.name, &c);
        if (!inserted)
            throw duplicate_head_error(c.head.name, it->second->loc, c.loc);
        detail::push_unique(order, c.head);
        if (auto* conj = c.conjunction())
            for (const auto& s : *conj)
                detail::push_unique(order, s);
    }
    for (const auto& s : extra_symbols) {
        if (!is_identifier(s.name) || is_reserved(s.name))
            throw error("invalid symbol name '" + s.name + "'");
        detail::push_unique(order, s);
    }

    sd_program prog;
    prog.table_ = symbol_table(order);
    prog.clauses_.reserve(order.size());
    for (const auto& s : order) {
        auto it = by_head.find(s.name);
        if (it != by_head.end()) {
            prog.clauses_.push_back(*it->second);
        } else {
            prog.clauses_.push_back(definite_clause{s, bottom_body{}, {}});
            prog.completed_.push_back(s);
        }
    }
    return prog;
}

/// Identifiers mentioned by a query string, in order, without table lookup.
/// Callers pass these to validate_and_complete so the query's dimensions exist.
inline std::vector<symbol> query_symbols(std::string_view text) {
    using detail::token_kind;
    detail::token_stream ts(text);
    std::vector<symbol> out;
    for (bool first = true; first || ts.peek().kind != token_kind::end; first = false) {
        if (!first)
            ts.expect(token_kind::amp);
        auto t = ts.expect(token_kind::ident);
        if (!is_reserved(t.text))
            detail::push_unique(out, symbol{std::string(t.text)});
    }
    return out;
}

/// Parses `atom ("&" atom)*` against a table; `true`/`false` denote ⊤/⊥.
inline query parse_query(std::string_view text, const symbol_table& table) {
    using detail::token_kind;
    detail::token_stream ts(text);
    query q;
    for (bool first = true; first || ts.peek().kind != token_kind::end; first = false) {
        if (!first)
            ts.expect(token_kind::amp);
        auto t = ts.expect(token_kind::ident);
        if (t.text == "true") {
            q.insert(atom::top());
        } else if (t.text == "false") {
            q.insert(atom::bottom());
        } else {
            if (!table.contains(t.text))
                throw unknown_symbol_error(std::string(t.text));
            q.insert(atom::prop(std::string(t.text)));
        }
    }
    return q;
}

inline std::string render(const definite_clause& c) {
    std::string out = c.head.name + " <- ";
    if (c.is_fact()) {
        out += "true";
    } else if (c.is_failure()) {
        out += "false";
    } else {
        const auto& conj = *c.conjunction();
        for (std::size_t i = 0; i < conj.size(); ++i) {
            if (i) out += " & ";
            out += conj[i].name;
        }
    }
    return out + ".";
}

inline std::string render(const program_draft& draft) {
    std::string out;
    for (const auto& c : draft.clauses)
        out += render(c) + "\n";
    return out;
}

inline std::string render(const sd_program& prog) {
    std::string out;
    for (const auto& c : prog.clauses())
        out += render(c) + "\n";
    return out;
}

} // namespace sdattn
