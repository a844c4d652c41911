#pragma once

// Reference implementations used only by the tests. They work on plain
// vectors and share no code with the library beyond the Eigen types.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using images = std::vector<int>;  // 1-based
using tuple = std::vector<images>;

inline images identity(int m) {
    images p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 1);
    return p;
}

inline std::vector<images> all_perms(int m) {
    std::vector<images> out;
    images p = identity(m);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// β σ β⁻¹ as image lists: (βσβ⁻¹)(β(l)) = β(σ(l)).
inline images conj(const images& beta, const images& sigma) {
    images out(sigma.size());
    for (std::size_t l = 0; l < sigma.size(); ++l)
        out[static_cast<std::size_t>(beta[l] - 1)] = beta[static_cast<std::size_t>(sigma[l] - 1)];
    return out;
}

/// Number of simultaneous-conjugation orbits on S_m^r by flood fill over
/// an explicit list of all tuples.
inline std::size_t orbit_count(int m, int r, std::size_t* transitive = nullptr) {
    const auto perms = all_perms(m);
    std::set<tuple> seen;
    std::size_t orbits = 0, trans = 0;
    std::vector<std::size_t> digit(static_cast<std::size_t>(r), 0);
    while (true) {
        tuple t;
        for (auto d : digit) t.push_back(perms[d]);
        if (!seen.count(t)) {
            ++orbits;
            for (const auto& b : perms) {
                tuple c;
                for (const auto& p : t) c.push_back(conj(b, p));
                seen.insert(c);
            }
            // transitivity by reachability from point 1
            std::vector<bool> hit(static_cast<std::size_t>(m), false);
            hit[0] = true;
            for (bool grew = true; grew;) {
                grew = false;
                for (const auto& p : t)
                    for (int l = 0; l < m; ++l) {
                        const auto a = static_cast<std::size_t>(l), b = static_cast<std::size_t>(p[a] - 1);
                        if (hit[a] != hit[b]) {
                            hit[a] = hit[b] = true;
                            grew = true;
                        }
                    }
            }
            if (std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) ++trans;
        }
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == perms.size()) digit[i++] = 0;
        if (i == digit.size()) break;
    }
    if (transitive) *transitive = trans;
    return orbits;
}

/// Row-major digits of a flat index, party 1 slowest.
inline std::vector<int> digits(std::size_t x, const std::vector<int>& dims) {
    std::vector<int> d(dims.size());
    for (std::size_t j = dims.size(); j-- > 0;) {
        d[j] = static_cast<int>(x % static_cast<std::size_t>(dims[j]));
        x /= static_cast<std::size_t>(dims[j]);
    }
    return d;
}

inline std::size_t flat(const std::vector<int>& d, const std::vector<int>& dims) {
    std::size_t x = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) x = x * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(d[j]);
    return x;
}

inline std::size_t total(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

/// Σ ∏_l ψ(i^l) conj ψ(i_1^{σ_1(l)}, …, i_{k−1}^{σ_{k−1}(l)}, i_k^l)
inline cplx pure_invariant(const tuple& sigma, int m, const std::vector<int>& dims, const Eigen::VectorXcd& psi) {
    const std::size_t n = total(dims), k = dims.size();
    std::vector<std::size_t> x(static_cast<std::size_t>(m), 0);
    cplx sum = 0;
    while (true) {
        std::vector<std::vector<int>> idx;
        for (auto xi : x) idx.push_back(digits(xi, dims));
        cplx term = 1;
        for (int l = 0; l < m; ++l) {
            std::vector<int> other(k);
            for (std::size_t j = 0; j < k; ++j)
                other[j] = j + 1 < k ? idx[static_cast<std::size_t>(sigma[j][static_cast<std::size_t>(l)] - 1)][j]
                                     : idx[static_cast<std::size_t>(l)][j];
            term *= psi(static_cast<Eigen::Index>(x[static_cast<std::size_t>(l)])) *
                    std::conj(psi(static_cast<Eigen::Index>(flat(other, dims))));
        }
        sum += term;
        std::size_t i = 0;
        while (i < x.size() && ++x[i] == n) x[i++] = 0;
        if (i == x.size()) break;
    }
    return sum;
}

/// Σ ∏_l ρ(i^l ; i_1^{σ_1(l)}, …, i_k^{σ_k(l)})
inline cplx mixed_invariant(const tuple& sigma, int m, const std::vector<int>& dims, const Eigen::MatrixXcd& rho) {
    const std::size_t n = total(dims), k = dims.size();
    std::vector<std::size_t> x(static_cast<std::size_t>(m), 0);
    cplx sum = 0;
    while (true) {
        std::vector<std::vector<int>> idx;
        for (auto xi : x) idx.push_back(digits(xi, dims));
        cplx term = 1;
        for (int l = 0; l < m; ++l) {
            std::vector<int> col(k);
            for (std::size_t j = 0; j < k; ++j)
                col[j] = idx[static_cast<std::size_t>(sigma[j][static_cast<std::size_t>(l)] - 1)][j];
            term *= rho(static_cast<Eigen::Index>(x[static_cast<std::size_t>(l)]), static_cast<Eigen::Index>(flat(col, dims)));
        }
        sum += term;
        std::size_t i = 0;
        while (i < x.size() && ++x[i] == n) x[i++] = 0;
        if (i == x.size()) break;
    }
    return sum;
}

/// Partial trace over the parties flagged in `traced` (0-based flags).
inline Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                                      const std::vector<bool>& traced) {
    std::vector<int> kept_dims;
    for (std::size_t j = 0; j < dims.size(); ++j)
        if (!traced[j]) kept_dims.push_back(dims[j]);
    const auto nk = static_cast<Eigen::Index>(total(kept_dims));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nk, nk);
    const std::size_t n = total(dims);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const auto dr = digits(r, dims), dc = digits(c, dims);
            bool diag = true;
            std::vector<int> kr, kc;
            for (std::size_t j = 0; j < dims.size(); ++j) {
                if (traced[j]) {
                    diag = diag && dr[j] == dc[j];
                } else {
                    kr.push_back(dr[j]);
                    kc.push_back(dc[j]);
                }
            }
            if (diag)
                out(static_cast<Eigen::Index>(flat(kr, kept_dims)), static_cast<Eigen::Index>(flat(kc, kept_dims))) +=
                    rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    return out;
}

/// Cyclic orders (every permutation of the vertices, reflections and
/// rotations included) in which each cycle of each color is a walk with
/// steps of +1 or of −1 around the circle.
inline bool has_adjacent_ordering(const tuple& colors, int m) {
    auto order = identity(m);
    do {
        std::vector<int> pos(static_cast<std::size_t>(m) + 1);
        for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        bool good = true;
        for (const auto& p : colors) {
            std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
            for (int start = 1; start <= m && good; ++start) {
                if (seen[static_cast<std::size_t>(start)]) continue;
                std::vector<int> steps;
                int x = start;
                do {
                    seen[static_cast<std::size_t>(x)] = true;
                    const int y = p[static_cast<std::size_t>(x - 1)];
                    steps.push_back(((pos[static_cast<std::size_t>(y)] - pos[static_cast<std::size_t>(x)]) % m + m) % m);
                    x = y;
                } while (x != start);
                if (steps.size() < 2) continue;
                // the closing step of a walk is the wrap-around; all others share a direction
                const bool up = std::count(steps.begin(), steps.end(), 1) >= static_cast<long>(steps.size()) - 1;
                const bool down = std::count(steps.begin(), steps.end(), m - 1) >= static_cast<long>(steps.size()) - 1;
                good = up || down;
            }
            if (!good) break;
        }
        if (good) return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
}

}  // namespace oracle
