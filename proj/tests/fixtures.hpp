#pragma once

#include <string>
#include <vector>

#include <sdattn/sdattn.hpp>

namespace sdattn::test {

// Seven-symbol running example: p,q,r,s,t,u,w then true,false.
inline const char* const family_text = "p <- q & r.\n"
                                       "q <- s.\n"
                                       "r <- s & t.\n"
                                       "s <- u.\n"
                                       "t <- true.\n"
                                       "u <- true.\n"
                                       "w <- false.\n";

inline sd_program program_from(const std::string& text, const std::vector<symbol>& extra = {}) {
    return validate_and_complete(parse_program(text), extra);
}

inline sd_program family() { return program_from(family_text); }

inline query q_of(std::initializer_list<const char*> names) {
    query q;
    for (const char* n : names) {
        std::string s(n);
        q.insert(s == "true" ? atom::top() : s == "false" ? atom::bottom() : atom::prop(s));
    }
    return q;
}

inline symbol_set s_of(std::initializer_list<const char*> names) {
    symbol_set out;
    for (const char* n : names)
        out.insert(symbol{n});
    return out;
}

inline rational_vector rv(std::initializer_list<rational> xs) { return rational_vector(xs); }

inline const rational half(1, 2);

} // namespace sdattn::test
