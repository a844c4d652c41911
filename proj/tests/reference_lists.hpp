#pragma once

// Decompositions of pure labels into ≈-classes as printed in the reference
// tables, in the printed (left-to-right) naming.

#include <string>
#include <utility>
#include <vector>

#include "luinv/perm.hpp"

namespace reference {

using List = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Names printed in the reference lists compose left to right, so their ts
/// and ts² are our ts² and ts.
inline luinv::PermTuple from_reference(const std::string& text, int m = 3) {
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 4, "ts^2") == 0) {
            out += "ts";
            i += 4;
        } else if (text.compare(i, 2, "ts") == 0) {
            out += "ts2";
            i += 2;
        } else if (text.compare(i, 3, "s^2") == 0) {
            out += "s2";
            i += 3;
        } else {
            out += text[i++];
        }
    }
    return luinv::parse_tuple(out, m);
}

inline const List& two_letter() {
    static const List lists = {
        {"", {"e", "t"}},
        {"e", {"e,e", "t,t"}},
        {"t", {"t,e", "e,t"}},
        {"e,e", {"e,e,e", "t,t,t"}},
        {"e,t", {"e,t,e", "t,e,t"}},
        {"t,e", {"t,e,e", "e,t,t"}},
        {"t,t", {"t,t,e", "e,e,t"}},
    };
    return lists;
}

inline const List& three_letter() {
    static const List lists = {
        {"", {"e", "t", "s"}},
        {"e", {"e,e", "t,t", "s,s"}},
        {"t", {"t,e", "e,t", "s,t", "t,s"}},
        {"s", {"s,e", "e,s", "s,s^2", "t,ts"}},
        {"e,e", {"e,e,e", "t,t,t", "s,s,s"}},
        {"e,t", {"e,t,e", "t,e,t", "s,t,s", "t,s,t"}},
        {"t,e", {"t,e,e", "e,t,t", "t,s,s", "s,t,t"}},
        {"t,t", {"t,t,e", "e,e,t", "s,s,t", "t,t,s"}},
        {"e,s", {"e,s,e", "s,e,s", "s,s^2,s", "t,ts,t"}},
        {"s,e", {"s,e,e", "e,s,s", "s^2,s,s", "ts,t,t"}},
        {"s,s", {"s,s,e", "e,e,s", "s,s,s^2", "t,t,ts"}},
        {"s,s^2", {"s,s^2,e", "s,e,s^2", "e,s,s^2", "t,ts,ts^2"}},
        {"t,s", {"t,s,e", "t,e,s", "e,t,ts", "t,s,s^2", "s,t,ts", "s,t,ts^2"}},
        {"s,t", {"s,t,e", "e,t,s", "t,e,ts", "s,t,s^2", "t,s,ts", "t,s,ts^2"}},
        {"t,ts", {"t,ts,e", "e,s,t", "s,e,t", "s,s^2,t", "t,ts,s", "t,ts^2,s"}},
    };
    return lists;
}

}  // namespace reference
