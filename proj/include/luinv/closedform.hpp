#pragma once

// Index-free evaluators for grades 1–3, built only from partial trace,
// partial transpose, identity padding, matrix product and trace.
//
// Grade 3 uses, for a k-tuple σ on an operator X,
//
//   Tr ∏_τ ( 𝕀_{j: σ_j=τ} ⊗ Tr_{j: σ_j∈{τ,e}} X^{T_{j: σ_j=s²}} )
//
// over the three transpositions τ, multiplied in the order of their fixed
// points: ts (fixes 1), ts² (fixes 2), t (fixes 3). For pure states the
// operator is π = |ψ⟩⟨ψ| and the label is ı(σ) = (σ, e).
//
// Descriptor grammar (whitespace insignificant, subsystems 1-based):
//
//   expr   := tensor ('*' tensor)*
//   tensor := power ('(x)' power)*
//   power  := atom ('^' INT)?
//   atom   := 'rho' | 'pi' | 'I[' set ']' | 'Tr(' expr ')'
//           | 'tr[' set '](' expr ')' | 'pt[' set '](' expr ')' | '(' expr ')'
//   set    := INT (',' INT)*
//
// 'rho' and 'pi' both denote the operand. tr[..] is a partial trace, pt[..]
// a partial transpose, Tr(..) the full trace, I[..] an identity on the
// listed parties and (x) the tensor product of operators on disjoint
// parties. Values carry the parties they act on; scalars act on none and
// multiply anything.

#include <algorithm>
#include <array>
#include <cctype>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "luinv/contract.hpp"
#include "luinv/errors.hpp"
#include "luinv/perm.hpp"
#include "luinv/states.hpp"

namespace luinv {

namespace detail {

inline SubsystemSet positions_where(const PermTuple& sigma, const std::vector<Perm>& any_of) {
    std::vector<int> out;
    for (int j = 0; j < sigma.arity(); ++j)
        for (const auto& p : any_of)
            if (sigma[static_cast<std::size_t>(j)] == p) {
                out.push_back(j + 1);
                break;
            }
    return SubsystemSet(std::move(out));
}

inline void require_m2(const PermTuple& sigma) {
    if (sigma.grade() != 2) throw std::invalid_argument("not an m=2 label");
}

inline void require_m3(const PermTuple& sigma) {
    if (sigma.grade() != 3) throw std::invalid_argument("not an m=3 label");
}

inline cplx trace_of_square(const DensityMatrix& x) { return (x.entries * x.entries).trace(); }

}  // namespace detail

/// Order of the grade-3 product factors, leftmost first.
inline std::array<Perm, 3> m3_factor_order() { return {s3::ts(), s3::ts2(), s3::t()}; }

/// Grade-3 product formula for a full k-tuple acting on an operator with k
/// parties, with an explicit factor order.
inline cplx m3_product(const PermTuple& sigma, const DensityMatrix& x, const std::array<Perm, 3>& order) {
    detail::require_m3(sigma);
    const int k = x.dims.parties();
    if (sigma.arity() != k) throw std::invalid_argument("arity mismatch");
    const Perm e = s3::e();
    const auto base = partial_transpose(x, detail::positions_where(sigma, {s3::s2()}));
    const auto support = detail::positions_where(sigma, {e}).complement(k);
    const std::vector<int> support_list = support.list();
    const Dims support_dims = x.dims.select(support_list);

    Matrix product;
    for (const auto& tau : order) {
        const auto traced = detail::positions_where(sigma, {tau, e});
        const auto reduced = partial_trace(base, traced);
        // identity parties, renumbered within the support
        std::vector<int> local;
        const auto tau_set = detail::positions_where(sigma, {tau});
        for (int j : tau_set.list())
            local.push_back(static_cast<int>(std::lower_bound(support_list.begin(), support_list.end(), j) -
                                             support_list.begin()) + 1);
        const auto factor = tensor_with_identity(reduced, SubsystemSet(std::move(local)), support_dims);
        product = product.size() ? Matrix(product * factor.entries) : factor.entries;
    }
    return product.trace();
}

// ---------------------------------------------------------------------------
// Pure states

/// Tr π = ‖ψ‖²
inline cplx pure_m1(const PureState& psi) { return projector(psi).trace(); }

/// Tr(Tr_{{k}∪{j: σ_j=e}} π)², cross-checked against Tr(Tr_{j: σ_j=t} π)².
inline cplx pure_m2(const PermTuple& sigma, const PureState& psi) {
    detail::require_m2(sigma);
    const int k = psi.dims.parties();
    if (sigma.arity() != k - 1) throw std::invalid_argument("arity mismatch");
    const auto pi = projector(psi);
    const auto lifted = sigma.with_identity_appended();
    const auto e_side = detail::positions_where(lifted, {Perm::identity(2)});
    const auto t_side = detail::positions_where(lifted, {Perm({2, 1})});
    const cplx a = detail::trace_of_square(partial_trace(pi, e_side));
    const cplx b = detail::trace_of_square(partial_trace(pi, t_side));
    if (std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1e-300}))
        throw std::logic_error("pure_m2: the two partial-trace writings disagree");
    return a;
}

/// Grade-3 product formula on π with label ı(σ).
inline cplx pure_m3(const PermTuple& sigma, const PureState& psi) {
    detail::require_m3(sigma);
    if (sigma.arity() != psi.dims.parties() - 1) throw std::invalid_argument("arity mismatch");
    return m3_product(sigma.with_identity_appended(), projector(psi), m3_factor_order());
}

// ---------------------------------------------------------------------------
// Mixed states

inline cplx mixed_m1(const DensityMatrix& rho) { return rho.trace(); }

/// Tr(Tr_{j: σ_j=e} ρ)²
inline cplx mixed_m2(const PermTuple& sigma, const DensityMatrix& rho) {
    detail::require_m2(sigma);
    if (sigma.arity() != rho.dims.parties()) throw std::invalid_argument("arity mismatch");
    return detail::trace_of_square(partial_trace(rho, detail::positions_where(sigma, {Perm::identity(2)})));
}

inline cplx mixed_m3(const PermTuple& sigma, const DensityMatrix& rho) {
    detail::require_m3(sigma);
    if (sigma.arity() != rho.dims.parties()) throw std::invalid_argument("arity mismatch");
    return m3_product(sigma, rho, m3_factor_order());
}

/// Grade-dispatching closed form; m must be 1, 2 or 3.
inline cplx closed_form(const PermTuple& sigma, const PureState& psi) {
    switch (sigma.grade()) {
        case 1:
            if (sigma.arity() != psi.dims.parties() - 1) throw std::invalid_argument("arity mismatch");
            return pure_m1(psi);
        case 2: return pure_m2(sigma, psi);
        case 3: return pure_m3(sigma, psi);
        default: throw std::invalid_argument("no closed form for grade " + std::to_string(sigma.grade()));
    }
}

inline cplx closed_form(const PermTuple& sigma, const DensityMatrix& rho) {
    switch (sigma.grade()) {
        case 1:
            if (sigma.arity() != rho.dims.parties()) throw std::invalid_argument("arity mismatch");
            return mixed_m1(rho);
        case 2: return mixed_m2(sigma, rho);
        case 3: return mixed_m3(sigma, rho);
        default: throw std::invalid_argument("no closed form for grade " + std::to_string(sigma.grade()));
    }
}

// ---------------------------------------------------------------------------
// Descriptors

/// One index-free writing of an invariant: the ≈-class of the full tuple
/// it reads off, and the formula text in the descriptor grammar.
struct Descriptor {
    OrbitLabel graph;
    std::string formula;
};

namespace detail {

inline std::string set_text(const SubsystemSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.list().size(); ++i) out += (i ? "," : "") + std::to_string(s.list()[i]);
    return out;
}

}  // namespace detail

/// The closed-form text for a full tuple σ ∈ S_m^k, m ≤ 3, acting on `symbol`.
inline std::string formula_text(const PermTuple& sigma, const std::string& symbol) {
    const int m = sigma.grade();
    if (m == 1) return "Tr(" + symbol + ")";
    if (m == 2) {
        const auto e_side = detail::positions_where(sigma, {Perm::identity(2)});
        if (e_side.empty()) return "Tr(" + symbol + "^2)";
        return "Tr(tr[" + detail::set_text(e_side) + "](" + symbol + ")^2)";
    }
    if (m != 3) throw std::invalid_argument("no closed form for grade " + std::to_string(m));
    const auto s2_side = detail::positions_where(sigma, {s3::s2()});
    const std::string operand = s2_side.empty() ? symbol : "pt[" + detail::set_text(s2_side) + "](" + symbol + ")";
    std::string out = "Tr(";
    bool first = true;
    for (const auto& tau : m3_factor_order()) {
        const auto traced = detail::positions_where(sigma, {tau, s3::e()});
        const auto ids = detail::positions_where(sigma, {tau});
        std::string factor = traced.empty() ? operand : "tr[" + detail::set_text(traced) + "](" + operand + ")";
        if (!ids.empty()) factor = "(I[" + detail::set_text(ids) + "] (x) " + factor + ")";
        out += (first ? "" : " * ") + factor;
        first = false;
    }
    return out + ")";
}

/// Operator-valued intermediate of a descriptor: acts on `parties`.
struct DescriptorValue {
    std::vector<int> parties;
    Matrix value;
};

namespace detail {

class DescriptorParser {
public:
    DescriptorParser(std::string_view text, const DensityMatrix& operand) : text_(text), x_(operand) {}

    DescriptorValue run() {
        auto v = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    std::string_view text_;
    const DensityMatrix& x_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw parse_error("descriptor: " + why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    int integer() {
        skip();
        const auto start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    std::vector<int> set() {
        std::vector<int> out{integer()};
        while (accept(",")) out.push_back(integer());
        for (int j : out)
            if (j < 1 || j > x_.dims.parties()) fail("subsystem " + std::to_string(j) + " out of range");
        return SubsystemSet::of(out).list();
    }

    /// Wraps a value as a DensityMatrix over its own parties.
    DensityMatrix as_operator(const DescriptorValue& v) const {
        return DensityMatrix(x_.dims.select(v.parties), v.value);
    }

    static std::vector<int> local_positions(const std::vector<int>& parties, const std::vector<int>& subset) {
        std::vector<int> out;
        for (int j : subset) {
            auto it = std::find(parties.begin(), parties.end(), j);
            out.push_back(static_cast<int>(it - parties.begin()) + 1);
        }
        return out;
    }

    static bool is_subset(const std::vector<int>& sub, const std::vector<int>& of) {
        return std::all_of(sub.begin(), sub.end(), [&](int j) { return std::find(of.begin(), of.end(), j) != of.end(); });
    }

    DescriptorValue multiply(const DescriptorValue& a, const DescriptorValue& b) {
        if (a.parties.empty()) return {b.parties, a.value(0, 0) * b.value};
        if (b.parties.empty()) return {a.parties, b.value(0, 0) * a.value};
        if (a.parties != b.parties) fail("product of operators on different parties");
        return {a.parties, a.value * b.value};
    }

    DescriptorValue tensor(const DescriptorValue& a, const DescriptorValue& b) {
        if (a.parties.empty()) return {b.parties, a.value(0, 0) * b.value};
        if (b.parties.empty()) return {a.parties, b.value(0, 0) * a.value};
        std::vector<int> all = a.parties;
        all.insert(all.end(), b.parties.begin(), b.parties.end());
        auto sorted = SubsystemSet::of(all).list();
        if (sorted.size() != all.size()) fail("tensor product of overlapping parties");
        auto pa = local_positions(sorted, a.parties), pb = local_positions(sorted, b.parties);
        auto t = tensor_product(as_operator(a), pa, as_operator(b), pb);
        return {sorted, std::move(t.entries)};
    }

    DescriptorValue expr() {
        auto v = tensor_term();
        while (accept("*")) v = multiply(v, tensor_term());
        return v;
    }

    DescriptorValue tensor_term() {
        auto v = power();
        while (accept("(x)")) v = tensor(v, power());
        return v;
    }

    DescriptorValue power() {
        auto v = atom();
        if (accept("^")) {
            const int p = integer();
            if (p < 1) fail("exponent must be positive");
            auto base = v;
            for (int i = 1; i < p; ++i) v = multiply(v, base);
        }
        return v;
    }

    DescriptorValue atom() {
        if (accept("rho") || accept("pi")) return {SubsystemSet::all(x_.dims.parties()).list(), x_.entries};
        if (accept("I[")) {
            auto s = set();
            expect("]");
            const auto n = static_cast<Eigen::Index>(x_.dims.select(s).total());
            return {s, Matrix::Identity(n, n)};
        }
        if (accept("Tr(")) {
            auto v = expr();
            expect(")");
            return {{}, Matrix::Constant(1, 1, v.value.trace())};
        }
        if (accept("tr[")) {
            auto s = set();
            expect("](");
            auto v = expr();
            expect(")");
            if (!is_subset(s, v.parties)) fail("partial trace over parties the operand does not act on");
            auto local = local_positions(v.parties, s);
            auto r = partial_trace(as_operator(v), SubsystemSet::of(local));
            std::vector<int> kept;
            for (int j : v.parties)
                if (std::find(s.begin(), s.end(), j) == s.end()) kept.push_back(j);
            return {kept, std::move(r.entries)};
        }
        if (accept("pt[")) {
            auto s = set();
            expect("](");
            auto v = expr();
            expect(")");
            if (!is_subset(s, v.parties)) fail("partial transpose on parties the operand does not act on");
            auto r = partial_transpose(as_operator(v), SubsystemSet::of(local_positions(v.parties, s)));
            return {v.parties, std::move(r.entries)};
        }
        if (accept("(")) {
            auto v = expr();
            expect(")");
            return v;
        }
        fail("expected an operand");
    }
};

}  // namespace detail

/// Evaluates a descriptor whose result must be a scalar.
inline cplx evaluate_descriptor(std::string_view formula, const DensityMatrix& operand) {
    auto v = detail::DescriptorParser(formula, operand).run();
    if (!v.parties.empty()) throw parse_error("descriptor does not evaluate to a scalar: '" + std::string(formula) + "'");
    return v.value(0, 0);
}

/// All index-free writings of an invariant of grade ≤ 3. For pure labels
/// (σ ∈ S_m^{k−1}) one writing per ≈-class of the ∼-class of ı(σ), each
/// acting on π; for mixed labels the single writing of σ on ρ.
inline std::vector<Descriptor> alternate_writings(const PermTuple& sigma, Kind kind) {
    if (sigma.grade() > 3) throw std::invalid_argument("closed forms exist only up to grade 3");
    std::vector<Descriptor> out;
    if (kind == Kind::mixed) {
        auto label = canonical_form(sigma);
        out.push_back({label, formula_text(label.rep(), "rho")});
        return out;
    }
    const auto cls = sim_decompose(sigma);
    // anchor first, then the other classes in label order
    out.push_back({cls.anchor, formula_text(cls.anchor.rep(), "pi")});
    for (const auto& member : cls.members)
        if (!(member == cls.anchor)) out.push_back({member, formula_text(member.rep(), "pi")});
    return out;
}

}  // namespace luinv
