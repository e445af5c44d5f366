#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdattn {

struct source_location {
    std::size_t line = 0;
    std::size_t column = 0;

    bool operator==(const source_location&) const = default;
};

inline std::string to_string(const source_location& loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public error {
public:
    parse_error(source_location loc, const std::string& what)
        : error(to_string(loc) + ": " + what), loc_(loc) {}

    source_location where() const noexcept { return loc_; }

private:
    source_location loc_;
};

class duplicate_head_error : public error {
public:
    duplicate_head_error(std::string symbol, source_location first, source_location second)
        : error("duplicate head '" + symbol + "' (clauses at " + to_string(first) + " and " +
                to_string(second) + ")"),
          symbol_(std::move(symbol)), first_(first), second_(second) {}

    const std::string& symbol() const noexcept { return symbol_; }
    source_location first() const noexcept { return first_; }
    source_location second() const noexcept { return second_; }

private:
    std::string symbol_;
    source_location first_;
    source_location second_;
};

class unknown_symbol_error : public error {
public:
    explicit unknown_symbol_error(std::string name)
        : error("unknown symbol '" + name + "'"), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class empty_program_error : public error {
public:
    empty_program_error() : error("empty program") {}
};

class non_boolean_vector_error : public error {
public:
    explicit non_boolean_vector_error(std::size_t index)
        : error("entry " + std::to_string(index) + " is not 0 or 1"), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class dimension_mismatch_error : public error {
public:
    using error::error;
};

} // namespace sdattn
