#include <random>

#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace sdattn;
using namespace sdattn::test;

namespace {

rational_vector unit(std::size_t n, std::size_t i) {
    rational_vector v(n, rational(0));
    v[i] = 1;
    return v;
}

rational_vector values_of(const query& q, const symbol_table& table) { return vectorize_query(q, table).values(); }

// Brute force immediate consequences, straight from the clause list: a head
// fires when every body symbol is in `interp`, or when it is a fact.
symbol_set brute_force_consequences(const symbol_set& interp, const sd_program& prog) {
    symbol_set out;
    for (const auto& c : prog.clauses()) {
        bool fires = false;
        if (c.is_fact()) {
            fires = true;
        } else if (auto* conj = c.conjunction()) {
            fires = true;
            for (const auto& s : *conj)
                fires = fires && interp.count(s) > 0;
        }
        if (fires)
            out.insert(c.head);
    }
    return out;
}

} // namespace

TEST_CASE("hardmax spreads weight over the maxima", "[attention][hardmax]") {
    CHECK(hardmax(rv({1, 0, 0, 0, 0, 0, 0, 0, 0})) == rv({1, 0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK(hardmax(rv({0, 1, 1, 0, 0, 0, 0, 0, 0})) == rv({0, half, half, 0, 0, 0, 0, 0, 0}));
    const rational third(1, 3);
    CHECK(hardmax(rv({0, 0, 0})) == rv({third, third, third}));
    CHECK(hardmax(rv({rational(-1, 2), rational(-1, 3)})) == rv({0, 1}));
    CHECK_THROWS_AS(hardmax(rational_vector{}), error);
}

TEST_CASE("attention reproduces the worked-example layers", "[attention]") {
    const auto prog = family();
    const auto cp = compile(prog);
    const auto& table = cp.table;

    auto a1 = attention(std::span<const rational>(values_of(q_of({"p"}), table)), cp.head, cp.body,
                        activation::hardmax);
    CHECK(a1 == rv({0, 1, 1, 0, 0, 0, 0, 0, 0}));

    auto a2 = attention(std::span<const rational>(values_of(q_of({"q", "r"}), table)), cp.head, cp.body,
                        activation::hardmax);
    CHECK(a2 == rv({0, 0, 0, 1, half, 0, 0, 0, 0}));

    auto top = unit(9, table.top_index());
    CHECK(attention(std::span<const rational>(top), cp.head, cp.body, activation::hardmax) == top);

    SECTION("identity activation skips normalization") {
        auto out = attention(std::span<const rational>(rv({1, 1})), dense_matrix<rational>::identity(2),
                             dense_matrix<rational>::identity(2), activation::identity);
        CHECK(out == rv({1, 1}));
    }
    SECTION("dimension mismatches throw") {
        auto short_q = rv({1, 0});
        CHECK_THROWS_AS(attention(std::span<const rational>(short_q), cp.head, cp.body, activation::hardmax),
                        dimension_mismatch_error);
        dense_matrix<rational> values(3, 9);
        auto q = unit(9, 0);
        CHECK_THROWS_AS(attention(std::span<const rational>(q), cp.head, values, activation::hardmax),
                        dimension_mismatch_error);
        CHECK_THROWS_AS(topdown_step(query_vector(7), cp), dimension_mismatch_error);
        CHECK_THROWS_AS(bottomup_step(interpretation(9), cp), dimension_mismatch_error);
    }
}

TEST_CASE("heaviside keeps strictly positive entries", "[attention]") {
    CHECK(heaviside(rv({0, 0, 0, 1, half, 0, 0, 0, 0})) == rv({0, 0, 0, 1, 1, 0, 0, 0, 0}));
    CHECK(heaviside(rv({0, 0, 0})) == rv({0, 0, 0}));
    CHECK(heaviside(rv({0, 0, 0, 0, 0, half, 0, half, 0})) == rv({0, 0, 0, 0, 0, 1, 0, 1, 0}));
    CHECK(heaviside(rv({rational(-1, 2), rational(1, 1000)})) == rv({0, 1}));
    CHECK(threshold_at_one(rv({half, 1, rational(3, 2), 0})) == rv({0, 1, 1, 0}));
}

TEST_CASE("topdown_step performs one derivation step", "[attention][topdown]") {
    const auto cp = compile(family());
    const auto& table = cp.table;
    auto step = [&](std::initializer_list<const char*> q) {
        return devectorize(topdown_step(vectorize_query(q_of(q), table), cp), table);
    };
    CHECK(step({"p"}) == q_of({"q", "r"}));
    CHECK(step({"s", "t"}) == q_of({"u", "true"}));
    CHECK(step({"true"}) == q_of({"true"}));
    CHECK(step({"false"}) == q_of({"false"}));
}

TEST_CASE("topdown_derive on the worked example", "[attention][topdown][golden]") {
    const auto cp = compile(family());

    const auto t = topdown_derive(q_of({"p"}), cp);
    CHECK(t.status == derivation_status::proved);
    CHECK(t.step_count == 4);
    REQUIRE(t.steps.size() == 4);
    CHECK(t.steps[0].pre == rv({0, 1, 1, 0, 0, 0, 0, 0, 0}));
    CHECK(t.steps[1].pre == rv({0, 0, 0, 1, half, 0, 0, 0, 0}));
    CHECK(t.steps[2].pre == rv({0, 0, 0, 0, 0, half, 0, half, 0}));
    CHECK(t.steps[3].pre == rv({0, 0, 0, 0, 0, 0, 0, 1, 0}));
    CHECK(t.steps[0].post == std::vector<std::uint8_t>{0, 1, 1, 0, 0, 0, 0, 0, 0});
    CHECK(t.steps[1].post == std::vector<std::uint8_t>{0, 0, 0, 1, 1, 0, 0, 0, 0});
    CHECK(t.steps[2].post == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 1, 0, 1, 0});
    CHECK(t.steps[3].post == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0, 1, 0});
    CHECK(t.steps[0].decoded == q_of({"q", "r"}));
    CHECK(t.steps[1].decoded == q_of({"s", "t"}));
    CHECK(t.steps[2].decoded == q_of({"u", "true"}));
    CHECK(t.steps[3].decoded == q_of({"true"}));
    CHECK_FALSE(t.cycle_start);

    SECTION("failure clause") {
        const auto w = topdown_derive(q_of({"w"}), cp);
        CHECK(w.status == derivation_status::failed);
        CHECK(w.step_count == 1);
        REQUIRE(w.steps.size() == 1);
        CHECK(w.steps[0].decoded == q_of({"false"}));
    }
    SECTION("full trace keeps going after false appears") {
        const auto w = topdown_derive(q_of({"w", "p"}), cp, {100, true});
        CHECK(w.status == derivation_status::failed);
        CHECK(w.step_count == 1);
        CHECK(w.steps.size() > 1);
        CHECK(w.cycle_start.has_value());
    }
    SECTION("start states are classified before any layer runs") {
        const auto top = topdown_derive(q_of({"true"}), cp);
        CHECK(top.status == derivation_status::proved);
        CHECK(top.steps.empty());
        const auto bottom = topdown_derive(q_of({"p", "false"}), cp);
        CHECK(bottom.status == derivation_status::failed);
        CHECK(bottom.step_count == 0);
    }
    SECTION("step limit without a cycle") {
        const auto limited = topdown_derive(q_of({"p"}), cp, {2, false});
        CHECK(limited.status == derivation_status::diverged);
        CHECK(limited.steps.size() == 2);
        CHECK_FALSE(limited.cycle_start);
        CHECK_THROWS_AS(topdown_derive(q_of({"p"}), cp, {0, false}), error);
    }
}

TEST_CASE("topdown_derive detects cycles", "[attention][topdown]") {
    const auto self = topdown_derive(q_of({"p"}), compile(program_from("p <- p.")));
    CHECK(self.status == derivation_status::diverged);
    CHECK(self.cycle_start == 0u);
    CHECK(self.steps.size() == 1);

    // a -> b -> c -> b: the first repeat is b at step 1.
    const auto loop = topdown_derive(q_of({"a"}), compile(program_from("a <- b.\nb <- c.\nc <- b.")));
    CHECK(loop.status == derivation_status::diverged);
    CHECK(loop.cycle_start == 1u);
    CHECK(loop.steps.size() == 3);
}

TEST_CASE("bottomup_step", "[attention][bottomup]") {
    const auto prog = family();
    const auto cp = compile(prog);
    const auto& table = cp.table;
    auto step = [&](const symbol_set& in) {
        return devectorize(bottomup_step(vectorize_interpretation(in, table), cp), table);
    };

    // Expected values come from the brute-force oracle, restricted to
    // facts already in the interpretation (diagonal encoding of facts).
    auto expected = [&](const symbol_set& in) {
        symbol_set out;
        for (const auto& s : brute_force_consequences(in, prog))
            if (!prog.clause_for(s.name).is_fact() || in.count(s))
                out.insert(s);
        return out;
    };
    CHECK(expected(s_of({"s", "t"})) == s_of({"q", "r", "t"}));
    CHECK(step(s_of({"s", "t"})) == s_of({"q", "r", "t"}));
    CHECK(step({}) == symbol_set{});
    CHECK(expected(s_of({"s"})) == s_of({"q"}));
    CHECK(step(s_of({"s"})) == s_of({"q"}));

    const auto layer = bottomup_layer(vectorize_interpretation(s_of({"s"}), table), cp);
    CHECK(layer.pre == rv({0, 1, half, 0, 0, 0, 0}));
}

TEST_CASE("bottomup_fixpoint", "[attention][bottomup]") {
    const auto t = bottomup_fixpoint(compile(family()));
    CHECK(t.status == derivation_status::fixpoint_reached);
    CHECK(t.initial == q_of({"t", "u"}));
    REQUIRE(t.steps.size() == 4);
    CHECK(t.steps[0].decoded == q_of({"s", "t", "u"}));
    CHECK(t.steps[1].decoded == q_of({"q", "r", "s", "t", "u"}));
    CHECK(t.steps[2].decoded == q_of({"p", "q", "r", "s", "t", "u"}));
    CHECK(t.step_count == 3);
    CHECK(model_of(t) == s_of({"p", "q", "r", "s", "t", "u"}));

    const auto none = bottomup_fixpoint(compile(program_from("a <- false.\nb <- a & c.")));
    CHECK(none.status == derivation_status::fixpoint_reached);
    CHECK(none.step_count == 0);
    CHECK(model_of(none).empty());

    const auto fact = bottomup_fixpoint(compile(program_from("p <- true.")));
    CHECK(fact.step_count == 0);
    CHECK(model_of(fact) == s_of({"p"}));

    const auto limited = bottomup_fixpoint(compile(family()), 3);
    CHECK(limited.status == derivation_status::diverged);
}

TEST_CASE("hardmax properties on random rational vectors", "[attention][property]") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::size_t len = 1 + rng() % 16;
        rational_vector x(len);
        for (auto& v : x)
            v = rational(static_cast<std::int64_t>(rng() % 7) - 3, 1 + static_cast<std::int64_t>(rng() % 3));
        const auto y = hardmax(x);
        const rational best = *std::max_element(x.begin(), x.end());
        const auto m = std::count(x.begin(), x.end(), best);
        rational sum = 0;
        for (std::size_t i = 0; i < len; ++i) {
            CHECK((y[i] != 0) == (x[i] == best));
            CHECK((y[i] == 0 || y[i] == rational(1, m)));
            sum += y[i];
        }
        CHECK(sum == 1);

        // Positive scaling leaves the argmax, and so the weights, unchanged.
        const rational scale(1 + static_cast<std::int64_t>(rng() % 9), 1 + static_cast<std::int64_t>(rng() % 5));
        rational_vector scaled = x;
        for (auto& v : scaled)
            v *= scale;
        CHECK(hardmax(scaled) == y);
    }
}

TEST_CASE("scaled query vectors give the same top-down step", "[attention][property]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        program_generator gen(seed);
        const auto cp = compile(validate_and_complete(gen.draft(1 + gen.below(8))));
        const auto q = vectorize_query(gen.random_query(cp.table), cp.table);
        const rational scale(1 + static_cast<std::int64_t>(gen.below(20)), 1 + static_cast<std::int64_t>(gen.below(7)));
        auto scaled = q.values();
        for (auto& v : scaled)
            v *= scale;
        auto pre = attention(std::span<const rational>(scaled), cp.head, cp.body, activation::hardmax);
        CHECK(query_vector::from_values(heaviside(pre)) == topdown_step(q, cp));
    }
}

TEST_CASE("bottom-up iteration is monotone and matches brute force", "[attention][property]") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        program_generator gen(seed);
        const std::size_t n = 1 + gen.below(10);
        const auto prog = validate_and_complete(gen.draft(n));
        const auto cp = compile(prog);
        const auto t = bottomup_fixpoint(cp);
        REQUIRE(t.status == derivation_status::fixpoint_reached);
        CHECK(t.step_count <= n);

        // Brute-force least model from the empty set.
        symbol_set lm;
        for (;;) {
            auto next = brute_force_consequences(lm, prog);
            if (next == lm)
                break;
            lm = std::move(next);
        }
        CHECK(model_of(t) == lm);

        const query* prev = &t.initial;
        for (const auto& s : t.steps) {
            CHECK(std::includes(s.decoded.begin(), s.decoded.end(), prev->begin(), prev->end()));
            prev = &s.decoded;
        }
    }
}
