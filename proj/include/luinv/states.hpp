#pragma once

// Dense complex tensors for pure states and density matrices.
//
// Layout: a k-partite index (i₁,…,i_k) is flattened row-major with i₁
// slowest, so flat = Σ_j i_j·stride_j with stride_k = 1. Density matrices
// use that flattening for both rows and columns. Subsystems are numbered
// 1..k in every public interface.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "luinv/errors.hpp"

namespace luinv {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest accepted product of local dimensions. Raised by the CLI's
/// --max-dim flag.
inline std::atomic<std::size_t> max_total_dimension{4096};

/// Local dimensions (n₁,…,n_k).
class Dims {
public:
    Dims() = default;

    explicit Dims(std::vector<int> n) : n_(std::move(n)) {
        double total = 1;
        for (int d : n_) {
            if (d < 1) throw std::invalid_argument("local dimensions must be positive");
            total *= d;
        }
        if (total > static_cast<double>(max_total_dimension.load()))
            throw resource_error("total dimension " + std::to_string(static_cast<long long>(total)) +
                                 " exceeds the limit of " + std::to_string(max_total_dimension.load()));
    }

    Dims(std::initializer_list<int> n) : Dims(std::vector<int>(n)) {}

    int parties() const { return static_cast<int>(n_.size()); }
    /// Dimension of the 1-based subsystem j.
    int operator[](int j) const { return n_[static_cast<std::size_t>(j - 1)]; }
    const std::vector<int>& list() const { return n_; }

    std::size_t total() const {
        std::size_t t = 1;
        for (int d : n_) t *= static_cast<std::size_t>(d);
        return t;
    }

    /// Row-major strides, 1-based subsystem j at position j−1.
    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(n_.size(), 1);
        for (std::size_t j = n_.size(); j-- > 1;) s[j - 1] = s[j] * static_cast<std::size_t>(n_[j]);
        return s;
    }

    /// The dims of the listed 1-based subsystems, in the given order.
    Dims select(const std::vector<int>& subsystems) const {
        std::vector<int> out;
        for (int j : subsystems) out.push_back((*this)[j]);
        return Dims(std::move(out));
    }

    Dims appended(int n) const {
        auto out = n_;
        out.push_back(n);
        return Dims(std::move(out));
    }

    bool operator==(const Dims&) const = default;

private:
    std::vector<int> n_;
};

/// Strictly increasing set of 1-based subsystem indices.
class SubsystemSet {
public:
    SubsystemSet() = default;

    SubsystemSet(std::initializer_list<int> idx) : SubsystemSet(std::vector<int>(idx)) {}

    explicit SubsystemSet(std::vector<int> idx) : idx_(std::move(idx)) {
        for (std::size_t i = 0; i < idx_.size(); ++i) {
            if (idx_[i] < 1) throw std::out_of_range("subsystem index " + std::to_string(idx_[i]) + " out of range");
            if (i && idx_[i] <= idx_[i - 1]) throw std::invalid_argument("subsystem set must be strictly increasing");
        }
    }

    /// Builds a set from any list, sorting and dropping duplicates.
    static SubsystemSet of(std::vector<int> idx) {
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return SubsystemSet(std::move(idx));
    }

    static SubsystemSet all(int k) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), 1);
        return SubsystemSet(std::move(idx));
    }

    const std::vector<int>& list() const { return idx_; }
    bool empty() const { return idx_.empty(); }
    std::size_t size() const { return idx_.size(); }
    bool contains(int j) const { return std::binary_search(idx_.begin(), idx_.end(), j); }

    void check_within(int k) const {
        if (!idx_.empty() && idx_.back() > k)
            throw std::out_of_range("subsystem index " + std::to_string(idx_.back()) + " out of range for " +
                                    std::to_string(k) + " parties");
    }

    SubsystemSet complement(int k) const {
        check_within(k);
        std::vector<int> out;
        for (int j = 1; j <= k; ++j)
            if (!contains(j)) out.push_back(j);
        return SubsystemSet(std::move(out));
    }

    SubsystemSet united(const SubsystemSet& other) const {
        auto all = idx_;
        all.insert(all.end(), other.idx_.begin(), other.idx_.end());
        return of(std::move(all));
    }

    bool operator==(const SubsystemSet&) const = default;

private:
    std::vector<int> idx_;
};

/// ψ with amplitudes flattened per the layout above; the norm is free.
struct PureState {
    Dims dims;
    Vector amplitudes;

    PureState() = default;
    PureState(Dims d, Vector a) : dims(std::move(d)), amplitudes(std::move(a)) {
        if (static_cast<std::size_t>(amplitudes.size()) != dims.total())
            throw std::invalid_argument("amplitude count does not match dims");
    }
};

/// An operator on the product space; trace and positivity are free.
struct DensityMatrix {
    Dims dims;
    Matrix entries;

    DensityMatrix() = default;
    DensityMatrix(Dims d, Matrix e) : dims(std::move(d)), entries(std::move(e)) {
        const auto n = static_cast<Eigen::Index>(dims.total());
        if (entries.rows() != n || entries.cols() != n)
            throw std::invalid_argument("matrix order does not match dims");
    }

    cplx trace() const { return entries.trace(); }
};

namespace detail {

/// flat index -> Σ_{j∈set} digit_j(flat)·stride_j, for every flat index.
inline std::vector<std::size_t> partial_offsets(const Dims& dims, const SubsystemSet& set) {
    const auto strides = dims.strides();
    const std::size_t n = dims.total();
    std::vector<std::size_t> out(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t acc = 0;
        for (int j : set.list()) {
            const auto s = strides[static_cast<std::size_t>(j - 1)];
            acc += (x / s) % static_cast<std::size_t>(dims[j]) * s;
        }
        out[x] = acc;
    }
    return out;
}

/// Full-space offsets of every flat index of the sub-space on `subsystems`.
inline std::vector<std::size_t> embed_offsets(const Dims& full, const std::vector<int>& subsystems) {
    const auto strides = full.strides();
    std::vector<std::size_t> out{0};
    for (int j : subsystems) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * static_cast<std::size_t>(full[j]));
        for (auto base : out)
            for (int d = 0; d < full[j]; ++d) next.push_back(base + static_cast<std::size_t>(d) * strides[static_cast<std::size_t>(j - 1)]);
        out = std::move(next);
    }
    return out;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace detail

inline DensityMatrix projector(const PureState& psi) {
    return DensityMatrix(psi.dims, psi.amplitudes * psi.amplitudes.adjoint());
}

/// Tr_S ρ; the result lives on the complement of S in increasing order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSet& traced) {
    const int k = rho.dims.parties();
    traced.check_within(k);
    if (traced.empty()) return rho;
    const auto kept = traced.complement(k);
    const auto off_kept = detail::embed_offsets(rho.dims, kept.list());
    const auto off_traced = detail::embed_offsets(rho.dims, traced.list());
    const auto n = static_cast<Eigen::Index>(off_kept.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            cplx acc = 0;
            for (auto t : off_traced)
                acc += rho.entries(static_cast<Eigen::Index>(off_kept[static_cast<std::size_t>(a)] + t),
                                   static_cast<Eigen::Index>(off_kept[static_cast<std::size_t>(b)] + t));
            out(a, b) = acc;
        }
    return DensityMatrix(rho.dims.select(kept.list()), std::move(out));
}

/// Swaps row and column indices on the listed subsystems.
inline DensityMatrix partial_transpose(const DensityMatrix& rho, const SubsystemSet& set) {
    set.check_within(rho.dims.parties());
    if (set.empty()) return rho;
    const auto part = detail::partial_offsets(rho.dims, set);
    const auto n = static_cast<Eigen::Index>(rho.dims.total());
    Matrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto pr = part[static_cast<std::size_t>(r)], pc = part[static_cast<std::size_t>(c)];
            out(r, c) = rho.entries(static_cast<Eigen::Index>(static_cast<std::size_t>(r) - pr + pc),
                                    static_cast<Eigen::Index>(static_cast<std::size_t>(c) - pc + pr));
        }
    return DensityMatrix(rho.dims, std::move(out));
}

/// Tensor product placing the parties of `a` at result positions `pos_a`
/// and those of `b` at `pos_b` (1-based, disjoint, jointly 1..ka+kb).
inline DensityMatrix tensor_product(const DensityMatrix& a, const std::vector<int>& pos_a,
                                    const DensityMatrix& b, const std::vector<int>& pos_b) {
    const int k = static_cast<int>(pos_a.size() + pos_b.size());
    if (static_cast<int>(pos_a.size()) != a.dims.parties() || static_cast<int>(pos_b.size()) != b.dims.parties())
        throw std::invalid_argument("dimension mismatch: position lists do not match operand parties");
    std::vector<int> dims(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < pos_a.size(); ++i) dims.at(static_cast<std::size_t>(pos_a[i] - 1)) = a.dims.list()[i];
    for (std::size_t i = 0; i < pos_b.size(); ++i) {
        auto& slot = dims.at(static_cast<std::size_t>(pos_b[i] - 1));
        if (slot != 0) throw std::invalid_argument("dimension mismatch: overlapping positions");
        slot = b.dims.list()[i];
    }
    Dims full(dims);
    const auto off_a = detail::embed_offsets(full, pos_a);
    const auto off_b = detail::embed_offsets(full, pos_b);
    const auto n = static_cast<Eigen::Index>(full.total());
    Matrix out(n, n);
    for (std::size_t ar = 0; ar < off_a.size(); ++ar)
        for (std::size_t ac = 0; ac < off_a.size(); ++ac) {
            const cplx va = a.entries(static_cast<Eigen::Index>(ar), static_cast<Eigen::Index>(ac));
            for (std::size_t br = 0; br < off_b.size(); ++br)
                for (std::size_t bc = 0; bc < off_b.size(); ++bc)
                    out(static_cast<Eigen::Index>(off_a[ar] + off_b[br]), static_cast<Eigen::Index>(off_a[ac] + off_b[bc])) =
                        va * b.entries(static_cast<Eigen::Index>(br), static_cast<Eigen::Index>(bc));
        }
    return DensityMatrix(std::move(full), std::move(out));
}

/// 𝕀_S ⊗ ρ with identities on S and ρ's parties on the complement, in
/// subsystem order. A 1×1 ρ (everything traced) becomes a scaled identity.
inline DensityMatrix tensor_with_identity(const DensityMatrix& rho, const SubsystemSet& id_set, const Dims& full) {
    const int k = full.parties();
    id_set.check_within(k);
    const auto rest = id_set.complement(k);
    if (!(full.select(rest.list()) == rho.dims)) throw std::invalid_argument("dimension mismatch");
    if (id_set.empty()) return rho;
    const Dims id_dims = full.select(id_set.list());
    const auto n = static_cast<Eigen::Index>(id_dims.total());
    DensityMatrix identity(id_dims, Matrix::Identity(n, n));
    return tensor_product(identity, id_set.list(), rho, rest.list());
}

// ---------------------------------------------------------------------------
// Sampling

/// Seedable generator: std::mt19937_64 feeding a Box-Muller transform, so
/// every stream is reproducible bit for bit across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1].
    double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Real and imaginary parts i.i.d. N(0, 1).
    cplx complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

    Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
        Matrix z(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) z(i, j) = complex_normal();
        return z;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Independent sub-seed for (seed, stream, index) via splitmix64.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ stream) ^ index);
}

inline PureState random_pure(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    return PureState(dims, rng.ginibre(static_cast<Eigen::Index>(dims.total()), 1).col(0));
}

/// A·A† with A a (∏n_j × rank) Ginibre matrix.
inline DensityMatrix random_density(const Dims& dims, std::uint64_t seed, int rank) {
    if (rank < 1) throw std::invalid_argument("rank must be at least 1");
    Rng rng(seed);
    const Matrix a = rng.ginibre(static_cast<Eigen::Index>(dims.total()), rank);
    return DensityMatrix(dims, a * a.adjoint());
}

/// (Z + Z†)/2 for a Ginibre Z: Hermitian, generally indefinite.
inline DensityMatrix random_hermitian(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(dims.total());
    const Matrix z = rng.ginibre(n, n);
    return DensityMatrix(dims, (z + z.adjoint()) / 2.0);
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) moved
/// into Q.
inline Matrix haar_unitary(int n, Rng& rng) {
    const Matrix z = rng.ginibre(n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const auto r = qr.matrixQR();
    for (int i = 0; i < n; ++i) {
        const cplx d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= mag > 0 ? d / mag : cplx(1.0);
    }
    return q;
}

inline std::vector<Matrix> random_local_unitaries(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> out;
    for (int d : dims.list()) out.push_back(haar_unitary(d, rng));
    return out;
}

// ---------------------------------------------------------------------------
// Local unitary action

namespace detail {

/// Applies u (or its conjugate) to the given axis of a flat tensor whose
/// axis has `dim` entries at `stride`; `total` is the tensor size.
template <typename Access>
void apply_on_axis(Access&& at, std::size_t total, std::size_t dim, std::size_t stride, const Matrix& u, bool conjugate) {
    const std::size_t block = dim * stride;
    std::vector<cplx> buf(dim);
    for (std::size_t outer = 0; outer < total; outer += block)
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t base = outer + inner;
            for (std::size_t a = 0; a < dim; ++a) {
                cplx acc = 0;
                for (std::size_t b = 0; b < dim; ++b) {
                    const cplx ub = u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                    acc += (conjugate ? std::conj(ub) : ub) * at(base + b * stride);
                }
                buf[a] = acc;
            }
            for (std::size_t a = 0; a < dim; ++a) at(base + a * stride) = buf[a];
        }
}

inline void check_unitaries(const Dims& dims, const std::vector<Matrix>& us) {
    if (static_cast<int>(us.size()) != dims.parties()) throw std::invalid_argument("shape mismatch: one unitary per party");
    for (int j = 1; j <= dims.parties(); ++j) {
        const auto& u = us[static_cast<std::size_t>(j - 1)];
        if (u.rows() != dims[j] || u.cols() != dims[j]) throw std::invalid_argument("shape mismatch: unitary order");
    }
}

}  // namespace detail

/// (U₁⊗…⊗U_k)ψ
inline PureState apply_local_unitaries(const PureState& psi, const std::vector<Matrix>& us) {
    detail::check_unitaries(psi.dims, us);
    PureState out = psi;
    const auto strides = psi.dims.strides();
    const std::size_t n = psi.dims.total();
    auto at = [&](std::size_t i) -> cplx& { return out.amplitudes(static_cast<Eigen::Index>(i)); };
    for (int j = 1; j <= psi.dims.parties(); ++j)
        detail::apply_on_axis(at, n, static_cast<std::size_t>(psi.dims[j]), strides[static_cast<std::size_t>(j - 1)],
                              us[static_cast<std::size_t>(j - 1)], false);
    return out;
}

/// (⊗U_j) ρ (⊗U_j)†
inline DensityMatrix apply_local_unitaries(const DensityMatrix& rho, const std::vector<Matrix>& us) {
    detail::check_unitaries(rho.dims, us);
    DensityMatrix out = rho;
    const auto strides = rho.dims.strides();
    const std::size_t n = rho.dims.total();
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n); ++c) {
        auto at = [&](std::size_t i) -> cplx& { return out.entries(static_cast<Eigen::Index>(i), c); };
        for (int j = 1; j <= rho.dims.parties(); ++j)
            detail::apply_on_axis(at, n, static_cast<std::size_t>(rho.dims[j]), strides[static_cast<std::size_t>(j - 1)],
                                  us[static_cast<std::size_t>(j - 1)], false);
    }
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
        auto at = [&](std::size_t i) -> cplx& { return out.entries(r, static_cast<Eigen::Index>(i)); };
        for (int j = 1; j <= rho.dims.parties(); ++j)
            detail::apply_on_axis(at, n, static_cast<std::size_t>(rho.dims[j]), strides[static_cast<std::size_t>(j - 1)],
                                  us[static_cast<std::size_t>(j - 1)], true);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Purification

inline bool is_hermitian(const DensityMatrix& rho, double rel_tol = 1e-12) {
    const double scale = detail::max_abs(rho.entries);
    return detail::max_abs(rho.entries - rho.entries.adjoint()) <= rel_tol * std::max(scale, 1e-300);
}

/// φ = Σ_i √λ_i |v_i⟩|i⟩ on (n₁,…,n_k, rank ρ), with Tr_{k+1}|φ⟩⟨φ| = ρ.
inline PureState purify(const DensityMatrix& rho) {
    if (!is_hermitian(rho, 1e-10)) throw std::invalid_argument("purify: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> eig((rho.entries + rho.entries.adjoint()) / 2.0);
    const auto& lambda = eig.eigenvalues();
    const double scale = std::max(detail::max_abs(rho.entries), 1e-300);
    if (lambda.size() && lambda.minCoeff() < -1e-9 * scale)
        throw std::invalid_argument("purify: input is not positive semidefinite (eigenvalue " +
                                    std::to_string(lambda.minCoeff()) + ")");
    const double cutoff = 1e-13 * std::max(lambda.size() ? lambda.maxCoeff() : 0.0, 1e-300) *
                          static_cast<double>(std::max<Eigen::Index>(lambda.size(), 1));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = lambda.size(); i-- > 0;)
        if (lambda(i) > cutoff) keep.push_back(i);
    const int rank = std::max<int>(static_cast<int>(keep.size()), 1);
    const Dims dims = rho.dims.appended(rank);
    Vector phi = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
    const auto n = static_cast<Eigen::Index>(rho.dims.total());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        const double w = std::sqrt(lambda(keep[a]));
        for (Eigen::Index i = 0; i < n; ++i) phi(i * rank + static_cast<Eigen::Index>(a)) = w * eig.eigenvectors()(i, keep[a]);
    }
    return PureState(dims, std::move(phi));
}

}  // namespace luinv
