#pragma once

// Direct evaluation of the invariants from their index-contraction scheme.
//
//   pure,  σ ∈ S_m^{k−1}:  Σ ∏_l ψ_{i^l} · conj ψ_{i₁^{σ₁(l)} … i_{k−1}^{σ_{k−1}(l)}, i_k^l}
//   mixed, σ ∈ S_m^k:      Σ ∏_l ρ_{i^l ; i₁^{σ₁(l)} … i_k^{σ_k(l)}}
//
// Two routes are provided: a nested loop over all index values (the
// reference, O((∏n)^m)), and a sequential contraction that absorbs one
// factor at a time and keeps only the indices still shared with later
// factors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "luinv/errors.hpp"
#include "luinv/perm.hpp"
#include "luinv/states.hpp"

namespace luinv {

/// Largest number of terms the nested-loop evaluator will visit.
inline std::atomic<double> max_contraction_terms{2.0e9};

enum class Kind { pure, mixed };

inline const char* kind_name(Kind k) { return k == Kind::pure ? "pure" : "mixed"; }

/// Which polynomial: a ≈-class label plus whether it acts on ψ (arity k−1)
/// or on ρ (arity k).
struct InvariantSpec {
    OrbitLabel label;
    Kind kind;

    int grade() const { return label.grade(); }
    int arity() const { return label.arity(); }
    /// Number of parties of the argument.
    int parties() const { return kind == Kind::pure ? arity() + 1 : arity(); }
};

namespace detail {

inline void guard_terms(std::size_t n, int m) {
    if (std::pow(static_cast<double>(n), m) > max_contraction_terms.load())
        throw resource_error("contraction of " + std::to_string(n) + "^" + std::to_string(m) +
                             " terms exceeds the resource limit");
}

/// digits[x][j] = i_j(x)·stride_j for every flat index x and 0-based party j.
inline std::vector<std::vector<std::size_t>> scaled_digits(const Dims& dims) {
    const auto strides = dims.strides();
    std::vector<std::vector<std::size_t>> out(dims.total(), std::vector<std::size_t>(strides.size()));
    for (std::size_t x = 0; x < dims.total(); ++x)
        for (std::size_t j = 0; j < strides.size(); ++j)
            out[x][j] = (x / strides[j]) % static_cast<std::size_t>(dims.list()[j]) * strides[j];
    return out;
}

/// Zero-based image table: img[j][l] = σ_j(l+1) − 1.
inline std::vector<std::vector<std::size_t>> image_table(const PermTuple& sigma) {
    std::vector<std::vector<std::size_t>> img;
    for (const auto& p : sigma.perms()) {
        std::vector<std::size_t> row;
        for (int l = 1; l <= sigma.grade(); ++l) row.push_back(static_cast<std::size_t>(p(l) - 1));
        img.push_back(std::move(row));
    }
    return img;
}

/// Odometer over m flat indices in [0, n).
class MultiIndex {
public:
    MultiIndex(std::size_t n, int m) : n_(n), idx_(static_cast<std::size_t>(m), 0) {}
    const std::vector<std::size_t>& operator*() const { return idx_; }
    bool next() {
        for (std::size_t p = idx_.size(); p-- > 0;) {
            if (++idx_[p] < n_) return true;
            idx_[p] = 0;
        }
        return false;
    }

private:
    std::size_t n_;
    std::vector<std::size_t> idx_;
};

}  // namespace detail

/// Nested-loop evaluation of the pure invariant labelled by σ ∈ S_m^{k−1}.
inline cplx eval_pure(const PermTuple& sigma, const PureState& psi) {
    const int k = psi.dims.parties();
    if (sigma.arity() != k - 1)
        throw std::invalid_argument("arity mismatch: pure label needs " + std::to_string(k - 1) + " permutations");
    const int m = sigma.grade();
    const std::size_t n = psi.dims.total();
    detail::guard_terms(n, m);
    const auto digits = detail::scaled_digits(psi.dims);
    const auto img = detail::image_table(sigma);
    const auto last = static_cast<std::size_t>(k - 1);
    const cplx* a = psi.amplitudes.data();

    cplx total = 0;
    detail::MultiIndex it(n, m);
    do {
        const auto& row = *it;
        cplx term = 1;
        for (std::size_t l = 0; l < row.size(); ++l) {
            std::size_t col = digits[row[l]][last];
            for (std::size_t j = 0; j < last; ++j) col += digits[row[img[j][l]]][j];
            term *= a[row[l]] * std::conj(a[col]);
        }
        total += term;
    } while (it.next());
    return total;
}

/// Nested-loop evaluation of the mixed invariant labelled by σ ∈ S_m^k.
inline cplx eval_mixed(const PermTuple& sigma, const DensityMatrix& rho) {
    const int k = rho.dims.parties();
    if (sigma.arity() != k)
        throw std::invalid_argument("arity mismatch: mixed label needs " + std::to_string(k) + " permutations");
    const int m = sigma.grade();
    const std::size_t n = rho.dims.total();
    detail::guard_terms(n, m);
    const auto digits = detail::scaled_digits(rho.dims);
    const auto img = detail::image_table(sigma);

    cplx total = 0;
    detail::MultiIndex it(n, m);
    do {
        const auto& row = *it;
        cplx term = 1;
        for (std::size_t l = 0; l < row.size(); ++l) {
            std::size_t col = 0;
            for (std::size_t j = 0; j < img.size(); ++j) col += digits[row[img[j][l]]][j];
            term *= rho.entries(static_cast<Eigen::Index>(row[l]), static_cast<Eigen::Index>(col));
        }
        total += term;
    } while (it.next());
    return total;
}

// ---------------------------------------------------------------------------
// Sequential contraction

namespace detail {

/// One tensor factor: flat row-major data, one variable id per axis.
struct Factor {
    const std::vector<cplx>* data;
    bool conjugate;
    std::vector<int> vars;
    std::vector<std::size_t> strides;
};

/// Contracts all factors in order. Every variable must occur in at least
/// one factor; a variable is summed once its last occurrence is absorbed.
inline cplx contract_sequence(const std::vector<Factor>& factors, const std::vector<std::size_t>& var_dims) {
    const std::size_t nvars = var_dims.size();
    std::vector<int> last_use(nvars, -1);
    for (std::size_t f = 0; f < factors.size(); ++f)
        for (int v : factors[f].vars) last_use[static_cast<std::size_t>(v)] = static_cast<int>(f);

    std::vector<int> open;            // variables indexing `cur`, slowest first
    std::vector<cplx> cur{cplx(1)};

    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& fac = factors[f];
        std::vector<int> all = open;
        for (int v : fac.vars)
            if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
        std::vector<int> next_open;
        for (int v : all)
            if (last_use[static_cast<std::size_t>(v)] > static_cast<int>(f)) next_open.push_back(v);

        auto strides_for = [&](const std::vector<int>& layout) {
            std::vector<std::size_t> st(nvars, 0);
            std::size_t s = 1;
            for (std::size_t i = layout.size(); i-- > 0;) {
                st[static_cast<std::size_t>(layout[i])] = s;
                s *= var_dims[static_cast<std::size_t>(layout[i])];
            }
            return std::make_pair(st, s);
        };
        const auto [cur_stride, cur_size] = strides_for(open);
        const auto [next_stride, next_size] = strides_for(next_open);
        (void)cur_size;
        std::vector<std::size_t> fac_stride(nvars, 0);
        for (std::size_t a = 0; a < fac.vars.size(); ++a) fac_stride[static_cast<std::size_t>(fac.vars[a])] += fac.strides[a];

        std::vector<cplx> next(next_size, cplx(0));
        std::vector<std::size_t> val(all.size(), 0);
        std::size_t ic = 0, in = 0, iff = 0;
        const auto& data = *fac.data;
        while (true) {
            const cplx x = fac.conjugate ? std::conj(data[iff]) : data[iff];
            next[in] += cur[ic] * x;
            std::size_t p = all.size();
            bool more = false;
            while (p-- > 0) {
                const auto v = static_cast<std::size_t>(all[p]);
                if (++val[p] < var_dims[v]) {
                    ic += cur_stride[v];
                    in += next_stride[v];
                    iff += fac_stride[v];
                    more = true;
                    break;
                }
                const std::size_t back = val[p] - 1;
                ic -= back * cur_stride[v];
                in -= back * next_stride[v];
                iff -= back * fac_stride[v];
                val[p] = 0;
            }
            if (!more) break;
        }
        open = std::move(next_open);
        cur = std::move(next);
    }
    return cur.empty() ? cplx(0) : cur[0];
}

}  // namespace detail

/// Pure invariant by sequential contraction of ψ, conj ψ, ψ, conj ψ, …
inline cplx eval_pure_sequential(const PermTuple& sigma, const PureState& psi) {
    const int k = psi.dims.parties();
    if (sigma.arity() != k - 1)
        throw std::invalid_argument("arity mismatch: pure label needs " + std::to_string(k - 1) + " permutations");
    const int m = sigma.grade();
    const auto strides = psi.dims.strides();
    const std::vector<cplx> data(psi.amplitudes.data(), psi.amplitudes.data() + psi.amplitudes.size());
    // variable (j, l) carries index i_j^l
    auto var = [m](int j, int l) { return j * m + l; };
    std::vector<std::size_t> var_dims;
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < m; ++l) var_dims.push_back(static_cast<std::size_t>(psi.dims.list()[static_cast<std::size_t>(j)]));
    std::vector<detail::Factor> factors;
    for (int l = 0; l < m; ++l) {
        detail::Factor ket{&data, false, {}, strides};
        detail::Factor bra{&data, true, {}, strides};
        for (int j = 0; j < k; ++j) {
            ket.vars.push_back(var(j, l));
            bra.vars.push_back(j == k - 1 ? var(j, l) : var(j, sigma[static_cast<std::size_t>(j)](l + 1) - 1));
        }
        factors.push_back(std::move(ket));
        factors.push_back(std::move(bra));
    }
    return detail::contract_sequence(factors, var_dims);
}

/// Mixed invariant by sequential contraction of the m copies of ρ.
inline cplx eval_mixed_sequential(const PermTuple& sigma, const DensityMatrix& rho) {
    const int k = rho.dims.parties();
    if (k < 1) throw std::invalid_argument("density matrix has no parties");
    if (sigma.arity() != k)
        throw std::invalid_argument("arity mismatch: mixed label needs " + std::to_string(k) + " permutations");
    const int m = sigma.grade();
    const std::size_t n = rho.dims.total();
    const auto strides = rho.dims.strides();
    std::vector<cplx> data(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) data[r * n + c] = rho.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    auto var = [m](int j, int l) { return j * m + l; };
    std::vector<std::size_t> var_dims;
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < m; ++l) var_dims.push_back(static_cast<std::size_t>(rho.dims.list()[static_cast<std::size_t>(j)]));
    std::vector<std::size_t> axis_strides;
    for (auto s : strides) axis_strides.push_back(s * n);
    for (auto s : strides) axis_strides.push_back(s);

    // Walk the factors along the cycles of the first permutation so that
    // neighbouring factors share indices.
    std::vector<int> order;
    std::vector<bool> done(static_cast<std::size_t>(m), false);
    for (int start = 0; start < m; ++start)
        for (int l = start; !done[static_cast<std::size_t>(l)]; l = sigma[0](l + 1) - 1) {
            done[static_cast<std::size_t>(l)] = true;
            order.push_back(l);
        }
    std::vector<detail::Factor> factors;
    for (int l : order) {
        detail::Factor f{&data, false, {}, axis_strides};
        for (int j = 0; j < k; ++j) f.vars.push_back(var(j, l));
        for (int j = 0; j < k; ++j) f.vars.push_back(var(j, sigma[static_cast<std::size_t>(j)](l + 1) - 1));
        factors.push_back(std::move(f));
    }
    return detail::contract_sequence(factors, var_dims);
}

/// The three routes that must agree for a pure label: the pure formula,
/// the mixed formula of ı(σ) on |ψ⟩⟨ψ|, and the mixed formula of σ on the
/// reduced state Tr_k |ψ⟩⟨ψ|.
struct PurificationRoutes {
    cplx pure;
    cplx on_projector;
    cplx on_reduced;

    double max_relative_spread() const {
        const double scale = std::max({std::abs(pure), std::abs(on_projector), std::abs(on_reduced), 1e-300});
        return std::max({std::abs(pure - on_projector), std::abs(pure - on_reduced), std::abs(on_projector - on_reduced)}) /
               scale;
    }
};

inline PurificationRoutes eval_pure_via_mixed(const PermTuple& sigma, const PureState& psi) {
    const auto pi = projector(psi);
    const int k = psi.dims.parties();
    PurificationRoutes out{eval_pure(sigma, psi), eval_mixed(sigma.with_identity_appended(), pi), {}};
    if (k == 1) {
        // Tr_1 leaves a scalar; the remaining label is the empty tuple on no
        // parties, whose value is (Tr ρ)^m.
        out.on_reduced = std::pow(pi.trace(), sigma.grade());
    } else {
        out.on_reduced = eval_mixed(sigma, partial_trace(pi, SubsystemSet{k}));
    }
    return out;
}

/// Evaluates a spec on a pure argument (pure kind) or on a density matrix.
inline cplx evaluate(const InvariantSpec& spec, const PureState& psi) {
    if (spec.kind == Kind::pure) return eval_pure(spec.label.rep(), psi);
    return eval_mixed(spec.label.rep(), projector(psi));
}

inline cplx evaluate(const InvariantSpec& spec, const DensityMatrix& rho) {
    if (spec.kind == Kind::mixed) return eval_mixed(spec.label.rep(), rho);
    throw std::invalid_argument("pure invariants need a state vector");
}

/// |Im z| / |z|; 0 for z = 0.
inline double imaginary_ratio(cplx z) {
    const double a = std::abs(z);
    return a > 0 ? std::abs(z.imag()) / a : 0.0;
}

/// All labels of grades 1..max_m for the given kind on k parties.
inline std::vector<InvariantSpec> all_specs(Kind kind, int k, int max_m = 3) {
    std::vector<InvariantSpec> out;
    const int r = kind == Kind::pure ? k - 1 : k;
    for (int m = 1; m <= max_m; ++m)
        for (auto& label : enumerate_orbits(m, r)) out.push_back({std::move(label), kind});
    return out;
}

}  // namespace luinv
