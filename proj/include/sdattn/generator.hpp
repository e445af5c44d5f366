#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "program.hpp"

namespace sdattn {

/// Seeded source of random SD-programs and queries. Draws come straight from
/// the raw mt19937_64 stream (whose output the standard fixes), so a seed
/// reproduces the same text on every platform.
class program_generator {
public:
    static constexpr double top_probability = 0.2;
    static constexpr double bottom_probability = 0.1;

    explicit program_generator(std::uint64_t seed) : rng_(seed) {}

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = rng_();
        } while (x >= limit);
        return x % n;
    }

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    /// Symbols p1..pn.
    static std::vector<symbol> symbol_names(std::size_t n) {
        std::vector<symbol> out;
        for (std::size_t i = 1; i <= n; ++i)
            out.push_back(symbol{"p" + std::to_string(i)});
        return out;
    }

    /// One clause per symbol: ⊤ body with probability 0.2, ⊥ with 0.1,
    /// otherwise a uniformly chosen nonempty subset of the symbols.
    program_draft draft(std::size_t n) {
        auto names = symbol_names(n);
        program_draft d;
        for (std::size_t i = 0; i < n; ++i) {
            definite_clause c{names[i], conj_body{}, {}};
            double u = unit();
            if (u < top_probability) {
                c.body = top_body{};
            } else if (u < top_probability + bottom_probability) {
                c.body = bottom_body{};
            } else {
                conj_body body;
                while (body.empty())
                    for (std::size_t j = 0; j < n; ++j)
                        if (rng_() >> 63)
                            body.push_back(names[j]);
                c.body = std::move(body);
            }
            d.clauses.push_back(std::move(c));
        }
        return d;
    }

    std::string program_text(std::size_t n) { return render(draft(n)); }

    /// A nonempty query: each symbol with probability 1/2, ⊤ with 1/8, ⊥ with 1/16.
    query random_query(const symbol_table& table) {
        query q;
        while (q.empty()) {
            for (std::size_t i = 0; i < table.size(); ++i)
                if (rng_() >> 63)
                    q.insert(table.atom_at(i));
            if (below(8) == 0)
                q.insert(atom::top());
            if (below(16) == 0)
                q.insert(atom::bottom());
        }
        return q;
    }

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline std::string generate_program(std::size_t n_symbols, std::uint64_t seed) {
    program_generator gen(seed);
    return gen.program_text(n_symbols);
}

} // namespace sdattn
