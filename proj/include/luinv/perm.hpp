#pragma once

// Symmetric-group machinery for invariant labels: permutations of {1..m},
// tuples of them, orbits of tuples under simultaneous conjugation (the
// "≈" classes) and two-sided diagonal cosets (the "∼" classes).

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "luinv/errors.hpp"

namespace luinv {

/// Largest grade accepted by the brute-force orbit routines.
inline constexpr int max_grade = 8;

/// Upper bound on the number of tuple/conjugator combinations an
/// enumeration may visit.
inline constexpr double enumeration_limit = 5.0e7;

/// A permutation of {1..m} stored as its 1-based image list.
class Perm {
public:
    Perm() = default;

    explicit Perm(std::vector<int> images) : images_(std::move(images)) {
        const int m = grade();
        if (m < 1) throw std::invalid_argument("permutation of zero letters");
        std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
        for (int v : images_) {
            if (v < 1 || v > m || seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("image list is not a permutation of 1.." +
                                            std::to_string(m));
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    static Perm identity(int m) {
        std::vector<int> im(static_cast<std::size_t>(m));
        std::iota(im.begin(), im.end(), 1);
        return Perm(std::move(im));
    }

    int grade() const { return static_cast<int>(images_.size()); }
    const std::vector<int>& images() const { return images_; }

    /// Image of the 1-based point l.
    int operator()(int l) const { return images_[static_cast<std::size_t>(l - 1)]; }

    bool is_identity() const {
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (images_[i] != static_cast<int>(i) + 1) return false;
        return true;
    }

    Perm inverse() const {
        std::vector<int> inv(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i)
            inv[static_cast<std::size_t>(images_[i] - 1)] = static_cast<int>(i) + 1;
        return Perm(std::move(inv));
    }

    auto operator<=>(const Perm&) const = default;
    bool operator==(const Perm&) const = default;

private:
    std::vector<int> images_;
};

/// a∘b, i.e. l ↦ a(b(l)).
inline Perm compose(const Perm& a, const Perm& b) {
    if (a.grade() != b.grade()) throw std::invalid_argument("grade mismatch");
    std::vector<int> im(a.images().size());
    for (int l = 1; l <= a.grade(); ++l) im[static_cast<std::size_t>(l - 1)] = a(b(l));
    return Perm(std::move(im));
}

/// β·g·β⁻¹.
inline Perm conjugate(const Perm& beta, const Perm& g) {
    if (beta.grade() != g.grade()) throw std::invalid_argument("grade mismatch");
    // (β g β⁻¹)(β(l)) = β(g(l))
    std::vector<int> im(g.images().size());
    for (int l = 1; l <= g.grade(); ++l) im[static_cast<std::size_t>(beta(l) - 1)] = beta(g(l));
    return Perm(std::move(im));
}

/// All of S_m in lexicographic order of image lists.
inline std::vector<Perm> all_perms(int m) {
    if (m < 1 || m > max_grade) throw resource_error("grade out of range for enumeration");
    std::vector<int> im(static_cast<std::size_t>(m));
    std::iota(im.begin(), im.end(), 1);
    std::vector<Perm> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

/// Named elements of S_3 with s = (123) ↦ [2,3,1] and t = (12)(3) ↦ [2,1,3];
/// products are read right to left, ts = t∘s.
namespace s3 {
inline Perm e() { return Perm::identity(3); }
inline Perm s() { return Perm({2, 3, 1}); }
inline Perm s2() { return compose(s(), s()); }
inline Perm t() { return Perm({2, 1, 3}); }
inline Perm ts() { return compose(t(), s()); }
inline Perm ts2() { return compose(ts(), s()); }
}  // namespace s3

/// An r-tuple of permutations of a common grade m. r may be zero.
class PermTuple {
public:
    PermTuple() = default;

    PermTuple(int m, std::vector<Perm> perms) : m_(m), perms_(std::move(perms)) {
        if (m < 1) throw std::invalid_argument("grade must be positive");
        for (const auto& p : perms_)
            if (p.grade() != m) throw std::invalid_argument("grade mismatch");
    }

    /// The all-identity tuple.
    static PermTuple identity(int m, int r) {
        return PermTuple(m, std::vector<Perm>(static_cast<std::size_t>(r), Perm::identity(m)));
    }

    int grade() const { return m_; }
    int arity() const { return static_cast<int>(perms_.size()); }
    const std::vector<Perm>& perms() const { return perms_; }
    const Perm& operator[](std::size_t j) const { return perms_[j]; }

    /// (βσ₁β⁻¹, …, βσ_rβ⁻¹)
    PermTuple conjugated(const Perm& beta) const {
        std::vector<Perm> out;
        out.reserve(perms_.size());
        for (const auto& p : perms_) out.push_back(conjugate(beta, p));
        return PermTuple(m_, std::move(out));
    }

    /// The injection (σ₁,…,σ_r) ↦ (σ₁,…,σ_r,e).
    PermTuple with_identity_appended() const {
        auto out = perms_;
        out.push_back(Perm::identity(m_));
        return PermTuple(m_, std::move(out));
    }

    auto operator<=>(const PermTuple&) const = default;
    bool operator==(const PermTuple&) const = default;

private:
    int m_ = 1;
    std::vector<Perm> perms_;
};

class OrbitLabel;
OrbitLabel canonical_form(const PermTuple& sigma);

/// A ≈-class, identified by its lexicographically minimal member.
class OrbitLabel {
public:
    const PermTuple& rep() const { return rep_; }
    int grade() const { return rep_.grade(); }
    int arity() const { return rep_.arity(); }

    auto operator<=>(const OrbitLabel&) const = default;
    bool operator==(const OrbitLabel&) const = default;

private:
    explicit OrbitLabel(PermTuple rep) : rep_(std::move(rep)) {}
    friend OrbitLabel canonical_form(const PermTuple& sigma);

    PermTuple rep_;
};

namespace detail {

inline double factorial(int m) {
    double f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

inline void check_grade(int m) {
    if (m > max_grade) throw resource_error("grade too large for brute-force canonicalization");
}

/// True iff βσβ⁻¹ < σ lexicographically, computed lazily without
/// materializing the conjugate.
inline bool conjugate_is_smaller(const PermTuple& sigma, const Perm& beta, const Perm& beta_inv) {
    const int m = sigma.grade();
    for (const auto& p : sigma.perms()) {
        for (int l = 1; l <= m; ++l) {
            const int c = beta(p(beta_inv(l)));
            if (c != p(l)) return c < p(l);
        }
    }
    return false;
}

}  // namespace detail

/// Lexicographically minimal simultaneous conjugate.
inline OrbitLabel canonical_form(const PermTuple& sigma) {
    detail::check_grade(sigma.grade());
    PermTuple best = sigma;
    for (const auto& beta : all_perms(sigma.grade())) {
        auto c = sigma.conjugated(beta);
        if (c < best) best = std::move(c);
    }
    return OrbitLabel(std::move(best));
}

/// The ≈-orbit of σ as a sorted set of tuples.
inline std::vector<PermTuple> conjugation_orbit(const PermTuple& sigma) {
    detail::check_grade(sigma.grade());
    std::set<PermTuple> orbit;
    for (const auto& beta : all_perms(sigma.grade())) orbit.insert(sigma.conjugated(beta));
    return {orbit.begin(), orbit.end()};
}

/// S_m^r / S_m, sorted. For m = 1 this is the single all-e label.
inline std::vector<OrbitLabel> enumerate_orbits(int m, int r) {
    if (m < 1 || r < 0) throw std::invalid_argument("grade must be positive and arity non-negative");
    detail::check_grade(m);
    const double fm = detail::factorial(m);
    if (std::pow(fm, r + 1) > enumeration_limit)
        throw resource_error("orbit enumeration of S_" + std::to_string(m) + "^" + std::to_string(r) +
                             " exceeds the enumeration limit");
    const auto perms = all_perms(m);
    std::vector<Perm> inverses;
    for (const auto& p : perms) inverses.push_back(p.inverse());

    std::vector<OrbitLabel> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
    while (true) {
        std::vector<Perm> tuple;
        tuple.reserve(idx.size());
        for (auto i : idx) tuple.push_back(perms[i]);
        PermTuple sigma(m, std::move(tuple));
        bool minimal = true;
        for (std::size_t b = 1; b < perms.size() && minimal; ++b)
            if (detail::conjugate_is_smaller(sigma, perms[b], inverses[b])) minimal = false;
        // Tuples are visited in lexicographic order, so the output is sorted.
        if (minimal) out.push_back(canonical_form(sigma));

        std::size_t pos = idx.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < perms.size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (idx.empty()) return out;
    }
}

/// Orbits of the group generated by σ₁..σ_r acting on {1..m}; each orbit
/// sorted, orbits ordered by smallest element.
inline std::vector<std::vector<int>> point_orbits(const PermTuple& sigma) {
    const int m = sigma.grade();
    std::vector<int> parent(static_cast<std::size_t>(m) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& p : sigma.perms())
        for (int l = 1; l <= m; ++l) {
            const int a = find(l), b = find(p(l));
            if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    std::vector<std::vector<int>> orbits;
    std::vector<int> slot(static_cast<std::size_t>(m) + 1, -1);
    for (int l = 1; l <= m; ++l) {
        const int root = find(l);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<int>(orbits.size());
            orbits.emplace_back();
        }
        orbits[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(l);
    }
    return orbits;
}

inline bool is_transitive(const PermTuple& sigma) { return point_orbits(sigma).size() == 1; }

/// The transitive labels of S_m^r/S_m: the algebraically independent generators.
inline std::vector<OrbitLabel> generator_labels(int m, int r) {
    auto all = enumerate_orbits(m, r);
    std::vector<OrbitLabel> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out),
                 [](const OrbitLabel& l) { return is_transitive(l.rep()); });
    return out;
}

/// Restriction of σ to a union of its point orbits, relabelled increasingly.
inline PermTuple restrict_to(const PermTuple& sigma, const std::vector<int>& points) {
    std::vector<int> local(static_cast<std::size_t>(sigma.grade()) + 1, 0);
    for (std::size_t i = 0; i < points.size(); ++i) local[static_cast<std::size_t>(points[i])] = static_cast<int>(i) + 1;
    std::vector<Perm> out;
    for (const auto& p : sigma.perms()) {
        std::vector<int> im;
        for (int l : points) {
            const int v = local[static_cast<std::size_t>(p(l))];
            if (v == 0) throw std::invalid_argument("point set is not invariant under the tuple");
            im.push_back(v);
        }
        out.emplace_back(std::move(im));
    }
    return PermTuple(static_cast<int>(points.size()), std::move(out));
}

/// A ∼-class written as the disjoint union of its ≈-classes.
struct SimClass {
    OrbitLabel anchor;                 ///< the class of ı(σ); its last entry is e
    std::vector<OrbitLabel> members;   ///< sorted, includes the anchor
};

/// Decomposes the double coset of ı(σ) = (σ₁..σ_{k−1}, e) into ≈-classes.
inline SimClass sim_decompose(const PermTuple& sigma) {
    const int m = sigma.grade();
    detail::check_grade(m);
    const double fm = detail::factorial(m);
    if (fm * fm > enumeration_limit) throw resource_error("double coset enumeration exceeds the enumeration limit");
    const PermTuple lifted = sigma.with_identity_appended();
    const auto perms = all_perms(m);
    std::set<OrbitLabel> classes;
    std::set<PermTuple> seen;
    for (const auto& alpha : perms) {
        for (const auto& beta : perms) {
            const Perm beta_inv = beta.inverse();
            std::vector<Perm> ps;
            for (const auto& p : lifted.perms()) ps.push_back(compose(compose(alpha, p), beta_inv));
            PermTuple img(m, std::move(ps));
            if (!seen.insert(img).second) continue;
            classes.insert(canonical_form(img));
        }
    }
    return SimClass{canonical_form(lifted), {classes.begin(), classes.end()}};
}

/// Representatives of S_3^r/S_3 built position by position from an
/// assignment of conjugacy classes: [e]-positions get e; the first
/// [s]-position gets s, later ones s or s²; the first [t]-position gets t.
/// Without any [s]-position, later [t]-positions take t or ts until the
/// first ts, then t, ts or ts²; with an [s]-position they range freely.
inline std::vector<PermTuple> s3_orbit_representatives(int r) {
    if (r < 0) throw std::invalid_argument("arity must be non-negative");
    if (std::pow(3.0, r) * std::pow(6.0, r) > enumeration_limit * 10)
        throw resource_error("S_3 representative generation exceeds the enumeration limit");
    enum class Cls : std::uint8_t { E, S, T };
    const Perm e = s3::e(), s = s3::s(), s2 = s3::s2(), t = s3::t(), ts = s3::ts(), ts2 = s3::ts2();

    std::vector<PermTuple> out;
    std::vector<Cls> cls(static_cast<std::size_t>(r), Cls::E);
    std::vector<Perm> cur(static_cast<std::size_t>(r), e);

    // Fills positions >= pos given the class assignment.
    auto fill = [&](auto&& self, std::size_t pos, bool seen_s, bool seen_t, bool seen_ts, bool any_s) -> void {
        if (pos == cls.size()) {
            out.emplace_back(3, cur);
            return;
        }
        switch (cls[pos]) {
            case Cls::E:
                cur[pos] = e;
                self(self, pos + 1, seen_s, seen_t, seen_ts, any_s);
                break;
            case Cls::S:
                if (!seen_s) {
                    cur[pos] = s;
                    self(self, pos + 1, true, seen_t, seen_ts, any_s);
                } else {
                    for (const auto& p : {s, s2}) {
                        cur[pos] = p;
                        self(self, pos + 1, true, seen_t, seen_ts, any_s);
                    }
                }
                break;
            case Cls::T:
                if (!seen_t) {
                    cur[pos] = t;
                    self(self, pos + 1, seen_s, true, seen_ts, any_s);
                } else if (any_s || seen_ts) {
                    for (const auto& p : {t, ts, ts2}) {
                        cur[pos] = p;
                        self(self, pos + 1, seen_s, true, seen_ts || p == ts, any_s);
                    }
                } else {
                    for (const auto& p : {t, ts}) {
                        cur[pos] = p;
                        self(self, pos + 1, seen_s, true, p == ts, any_s);
                    }
                }
                break;
        }
    };

    std::vector<int> code(static_cast<std::size_t>(r), 0);
    while (true) {
        bool any_s = false;
        for (std::size_t i = 0; i < code.size(); ++i) {
            cls[i] = static_cast<Cls>(code[i]);
            any_s = any_s || cls[i] == Cls::S;
        }
        fill(fill, 0, false, false, false, any_s);
        std::size_t pos = code.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++code[pos] < 3) {
                done = false;
                break;
            }
            code[pos] = 0;
        }
        if (done) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text form of labels

/// Named form for m <= 3 (e, s, s2, t, ts, ts2), image list "[2,1,3]" otherwise.
inline std::string perm_name(const Perm& p) {
    const int m = p.grade();
    if (p.is_identity()) return "e";
    if (m == 2) return "t";
    if (m == 3) {
        if (p == s3::s()) return "s";
        if (p == s3::s2()) return "s2";
        if (p == s3::t()) return "t";
        if (p == s3::ts()) return "ts";
        if (p == s3::ts2()) return "ts2";
    }
    std::string out = "[";
    for (std::size_t i = 0; i < p.images().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(p.images()[i]);
    }
    return out + "]";
}

inline std::string image_list(const Perm& p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.images().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(p.images()[i]);
    }
    return out + "]";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline Perm parse_perm(std::string_view text, int m) {
    auto s = detail::trim(text);
    if (s.empty()) throw parse_error("empty permutation");
    if (s.front() == '[') {
        if (s.back() != ']') throw parse_error("unterminated image list: " + std::string(text));
        s = s.substr(1, s.size() - 2);
        std::vector<int> im;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto end = s.find(',', start);
            if (end == std::string_view::npos) end = s.size();
            auto tok = detail::trim(s.substr(start, end - start));
            if (tok.empty()) throw parse_error("empty entry in image list: " + std::string(text));
            int v = 0;
            for (char c : tok) {
                if (c < '0' || c > '9') throw parse_error("bad image list: " + std::string(text));
                v = v * 10 + (c - '0');
            }
            im.push_back(v);
            start = end + 1;
        }
        if (static_cast<int>(im.size()) != m)
            throw parse_error("image list " + std::string(text) + " does not have length " + std::to_string(m));
        try {
            return Perm(std::move(im));
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what());
        }
    }
    std::string name(s);
    for (const std::string from : {"^2", "\xc2\xb2"}) {
        auto at = name.find(from);
        if (at != std::string::npos) name.replace(at, from.size(), "2");
    }
    if (name == "e") return Perm::identity(m);
    if (m == 2 && name == "t") return Perm({2, 1});
    if (m == 3) {
        if (name == "s") return s3::s();
        if (name == "s2") return s3::s2();
        if (name == "t") return s3::t();
        if (name == "ts") return s3::ts();
        if (name == "ts2") return s3::ts2();
    }
    throw parse_error("unknown permutation '" + std::string(text) + "' for grade " + std::to_string(m));
}

/// Comma-separated names; "()" for the empty tuple.
inline std::string to_string(const PermTuple& sigma) {
    if (sigma.arity() == 0) return "()";
    std::string out;
    for (int j = 0; j < sigma.arity(); ++j) {
        if (j) out += ',';
        out += perm_name(sigma[static_cast<std::size_t>(j)]);
    }
    return out;
}

inline std::string to_string(const OrbitLabel& label) { return to_string(label.rep()); }

/// Accepts "t,ts", "(t, ts)", "[2,1,3],[1,3,2]", "" or "()".
inline PermTuple parse_tuple(std::string_view text, int m) {
    auto s = detail::trim(text);
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') throw parse_error("unbalanced parenthesis in label: " + std::string(text));
        s = detail::trim(s.substr(1, s.size() - 2));
    }
    std::vector<Perm> perms;
    if (s.empty()) return PermTuple(m, {});
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == '[') ++depth;
        if (i < s.size() && s[i] == ']') --depth;
        if (depth < 0) throw parse_error("unbalanced bracket in label: " + std::string(text));
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            perms.push_back(parse_perm(s.substr(start, i - start), m));
            start = i + 1;
        }
    }
    if (depth != 0) throw parse_error("unbalanced bracket in label: " + std::string(text));
    return PermTuple(m, std::move(perms));
}

}  // namespace luinv
