#pragma once

#include <functional>
#include <iosfwd>

#include "carlab/kernel.hpp"
#include "carlab/sequence.hpp"

namespace carlab {

/// Fixed seed for power-iteration start vectors: norms are deterministic
/// functions of their inputs unless the caller overrides the seed.
inline constexpr std::uint64_t kNormSeed = 0x67726d6e6f726dull;

/// Dense Hermitian PSD matrix of normalized-kernel inner products.
struct GramMatrix {
    Eigen::MatrixXcd entries;
    KernelSpec spec;
    std::vector<DyadicIndex> regions; ///< per-row region labels (may be empty)
    long point_count = 0;
};

GramMatrix build_gram(const KernelSpec& spec, const RandomSequence& seq,
                      long point_cap = kDefaultPointCap);

struct NormResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration with a
/// seeded random start. Stops when the relative Rayleigh increment drops
/// below tol, else flags the estimate unconverged at max_iter. The returned
/// value is never below the largest diagonal entry (also a lower bound for
/// the top eigenvalue of a Hermitian matrix).
NormResult operator_norm(const Eigen::MatrixXcd& m, double tol = 1e-8, int max_iter = 10000,
                         std::uint64_t seed = kNormSeed);
NormResult operator_norm(const GramMatrix& g, double tol = 1e-8, int max_iter = 10000,
                         std::uint64_t seed = kNormSeed);

/// Power iteration against an abstract matvec y = A x (n x n, Hermitian PSD).
NormResult power_iteration_norm(long n,
                                const std::function<void(const Complex*, Complex*)>& matvec,
                                double max_diag, double tol, int max_iter, std::uint64_t seed);

/// Overlapping degree blocks I_j = [2^{j-1}, 2^j/eps), j = 0, 1, ... (the
/// j = 0 block starts at degree 0). Tops are half-open so that no degree
/// belongs to more than ceil(M_eps) blocks, M_eps = log2(1/eps) + 1.
class BlockScheme {
public:
    struct Block {
        int index = 0;
        int lo = 0; ///< inclusive
        int hi = 0; ///< inclusive (largest integer below 2^j/eps)
    };

    static BlockScheme make(double epsilon, int max_degree);

    double epsilon() const noexcept { return epsilon_; }
    /// M_eps = log2(1/eps) + 1
    double overlap_bound() const noexcept { return overlap_bound_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    std::vector<int> blocks_containing(int degree) const;
    bool share_block(int deg_a, int deg_b) const;

private:
    double epsilon_ = 0.5;
    double overlap_bound_ = 2.0;
    std::vector<Block> blocks_;
};

/// Frobenius norm of G restricted to entries whose degree pair lies in no
/// common block of the scheme (the off-block part G_2).
double hs_norm_offdiagonal(const GramMatrix& g, const BlockScheme& scheme);

/// Second moment of a normalized Szego inner product over independent uniform
/// angles. `value` is the exact expectation
///     prod_i (1-r^2)(1-r'^2) / (1-(r r')^2),
/// `comparable_form` the comparable expression prod_i (1-r^2)(1-r'^2)/(1-r r')
/// (equal up to the factor prod_i (1+r r') in [1, 2^d)), and
/// `dyadic_surrogate` the band form prod_i 1/(2^{m_i}+2^{k_i}).
struct SzegoEntryMoment {
    double value = 0.0;
    double comparable_form = 0.0;
    double dyadic_surrogate = 0.0;
};
SzegoEntryMoment expected_sq_entry_szego(const std::vector<double>& r_n,
                                         const std::vector<double>& r_j);

/// Same moment for the Dirichlet-type kernel with parameter a in [0,1],
/// evaluated as the exact series. Per coordinate,
///     E = sum_l c_l^2 (r r')^{2l} / (k_a(r,r) k_a(r',r')),
/// with c_l the kernel Taylor coefficients (c_l = 1/(l+1) at a = 1).
/// `series_factor` keeps the bare sum_l c_l^2 (r r')^{2l} product, which is
/// bounded as radii approach 1 iff a > 1/2.
struct DirichletEntryMoment {
    double value = 0.0;
    double series_factor = 0.0;
    long terms = 0;
    bool converged = false;
};
DirichletEntryMoment expected_sq_entry_dirichlet(double a, const std::vector<double>& r_n,
                                                 const std::vector<double>& r_j,
                                                 double series_tol = 1e-12,
                                                 long max_terms = 50000000);

/// Diagonal of the expected truncated frame operator in monomial coordinates:
/// entry at multi-index l is sum_n prod_i (1-(r_n^i)^2) (r_n^i)^{2 l_i}.
/// Multi-indices are enumerated row-major (last coordinate fastest); the
/// off-diagonal expectations vanish identically. Its maximum is the Chernoff mu.
std::vector<double> expected_frame_diagonal(const std::vector<std::vector<double>>& radii, int L);

/// Frame operator of the monomial-truncated normalized Szego kernels of the
/// points with region degree in [window_lo, window_hi].
struct TruncatedFrame {
    Eigen::MatrixXcd matrix; ///< (L+1)^d square, Hermitian PSD
    int L = 0;
    int dim = 1;
    int window_lo = 0;
    int window_hi = 0;
};
TruncatedFrame truncated_frame(const RandomSequence& seq, int window_lo, int window_hi, int L,
                               long frame_dim_cap = 4096);

/// N_[a,b] (1-2^{-b})^{2L}, the tail bound modulo its dimensional constant.
double partial_sum_tail_bound(long n_window, int b, long L);

struct ChernoffParams {
    double delta = 0.0;
    double mu = 0.0;
    double l_dim = 1.0;
};

/// L (e/(1+delta))^{delta mu}, computed in log space.
double chernoff_bound(const ChernoffParams& p);

struct BlockNormEntry {
    int block_index = 0;
    int lo = 0;
    int hi = 0;
    long rows = 0;
    NormResult norm;
};
struct BlockNormReport {
    std::vector<BlockNormEntry> blocks;
    double sup_block_norm = 0.0;
    double certified_bound = 0.0; ///< M_eps * sup_j ||X_j||
    double overlap_bound = 0.0;
};

/// Principal-submatrix norms per block, plus the certified combination.
BlockNormReport block_gram_norms(const GramMatrix& g, const BlockScheme& scheme,
                                 double tol = 1e-8, int max_iter = 10000);

struct SchurFactorReport {
    double max_factor_error = 0.0; ///< max |G^0 - G^nu . G^{d-nu}| entrywise
    double norm_hardy = 0.0;       ///< ||G^0||
    double norm_major = 0.0;       ///< ||G^{d-nu}||
    double norm_minor = 0.0;       ///< ||G^nu||
    bool factorization_ok = false;
    bool norm_inequality_ok = false;
};

/// Entrywise Schur factorization of the ball Hardy Gramian through the
/// exponent split nu + (d - nu), with the norm inequality of the Schur bound.
SchurFactorReport ball_schur_factor_check(const RandomSequence& seq, double nu,
                                          double entry_tol = 1e-10, double norm_slack = 1e-8);

/// Binary container: magic 'CGRM', u32 version, u64 n, u32 d, u32 family,
/// f64 a, then the row-major lower triangle as little-endian f64 (re, im)
/// pairs. Region labels are not part of the container.
void write_gram(std::ostream& os, const GramMatrix& g);
GramMatrix read_gram(std::istream& is);

/// Gram operator norm for experiments: dense below dense_cap points, a packed
/// single-precision triangle with a blocked deterministic matvec above it
/// (norm error from the float entries is far below trend tolerances).
struct GramNormOptions {
    double tol = 1e-8;
    int max_iter = 10000;
    long dense_cap = 11000;
    long point_cap = kDefaultPointCap;
    int threads = 1;
    std::uint64_t seed = kNormSeed;
};
NormResult gram_operator_norm(const KernelSpec& spec, const RandomSequence& seq,
                              const GramNormOptions& opts = {});

} // namespace carlab
