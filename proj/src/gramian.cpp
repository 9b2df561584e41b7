#include "carlab/gramian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "carlab/parallel.hpp"
#include "carlab/rng.hpp"

namespace carlab {

namespace {

void check_sequence(const KernelSpec& spec, const RandomSequence& seq) {
    if (seq.domain != spec.domain())
        throw InvalidInput(std::string("build_gram: sequence lives on the ") +
                           domain_name(seq.domain) + ", kernel on the " +
                           domain_name(spec.domain()));
    if (seq.dim != spec.dim())
        throw InvalidInput("build_gram: sequence dimension " + std::to_string(seq.dim) +
                           " does not match the kernel dimension " + std::to_string(spec.dim()));
}

/// 1/sqrt(k(z,z)) per point.
std::vector<double> inverse_norms(const KernelSpec& spec, const RandomSequence& seq) {
    std::vector<double> out(seq.points.size());
    for (size_t i = 0; i < seq.points.size(); ++i)
        out[i] = 1.0 / std::sqrt(kernel_eval(spec, seq.points[i], seq.points[i]).real());
    return out;
}

} // namespace

GramMatrix build_gram(const KernelSpec& spec, const RandomSequence& seq, long point_cap) {
    check_sequence(spec, seq);
    const long n = seq.size();
    if (n > point_cap)
        throw ResourceLimit("build_gram: " + std::to_string(n) + " points exceed the cap of " +
                            std::to_string(point_cap));
    GramMatrix g{Eigen::MatrixXcd(n, n), spec, seq.region_of, n};
    const std::vector<double> ninv = inverse_norms(spec, seq);
    for (long j = 0; j < n; ++j) {
        g.entries(j, j) = 1.0; // normalized kernel against itself
        for (long i = j + 1; i < n; ++i) {
            const Complex v =
                kernel_eval(spec, seq.points[static_cast<size_t>(i)],
                            seq.points[static_cast<size_t>(j)]) *
                (ninv[static_cast<size_t>(i)] * ninv[static_cast<size_t>(j)]);
            g.entries(i, j) = v;
            g.entries(j, i) = std::conj(v);
        }
    }
    return g;
}

NormResult power_iteration_norm(long n,
                                const std::function<void(const Complex*, Complex*)>& matvec,
                                double max_diag, double tol, int max_iter, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("power_iteration_norm: empty matrix");
    Eigen::VectorXcd v(n), w(n);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n)));
    for (long i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
    v /= v.norm();

    NormResult res;
    double prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        matvec(v.data(), w.data());
        const double rayleigh = v.dot(w).real(); // v is unit
        res.iterations = it;
        res.value = rayleigh;
        const double wn = w.norm();
        if (wn == 0.0) { // the zero matrix
            res.value = 0.0;
            res.converged = true;
            break;
        }
        if (it > 1 && std::abs(rayleigh - prev) <= tol * std::max(std::abs(rayleigh), 1e-300)) {
            res.converged = true;
            break;
        }
        prev = rayleigh;
        v = w / wn;
    }
    if (res.value < max_diag) res.value = max_diag; // also a lower bound for lambda_max
    return res;
}

NormResult operator_norm(const Eigen::MatrixXcd& m, double tol, int max_iter,
                         std::uint64_t seed) {
    if (m.rows() != m.cols()) throw InvalidInput("operator_norm: matrix must be square");
    const long n = m.rows();
    double asym = 0.0;
    double max_diag = 0.0;
    for (long j = 0; j < n; ++j) {
        max_diag = std::max(max_diag, m(j, j).real());
        asym = std::max(asym, std::abs(m(j, j).imag()));
        for (long i = j + 1; i < n; ++i)
            asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
        if (asym > 1e-10)
            throw InvalidInput("operator_norm: input is not Hermitian (asymmetry " +
                               std::to_string(asym) + ")");
    }
    return power_iteration_norm(
        n,
        [&m](const Complex* x, Complex* y) {
            Eigen::Map<const Eigen::VectorXcd> xv(x, m.rows());
            Eigen::Map<Eigen::VectorXcd> yv(y, m.rows());
            yv.noalias() = m * xv;
        },
        max_diag, tol, max_iter, seed);
}

NormResult operator_norm(const GramMatrix& g, double tol, int max_iter, std::uint64_t seed) {
    return operator_norm(g.entries, tol, max_iter, seed);
}

BlockScheme BlockScheme::make(double epsilon, int max_degree) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidInput("BlockScheme: epsilon must lie in (0,1)");
    if (max_degree < 0) throw InvalidInput("BlockScheme: negative max degree");
    BlockScheme s;
    s.epsilon_ = epsilon;
    s.overlap_bound_ = std::log2(1.0 / epsilon) + 1.0;
    for (int j = 0;; ++j) {
        const int lo = j == 0 ? 0 : static_cast<int>(std::exp2(j - 1));
        if (lo > max_degree) break;
        const double top = std::exp2(j) / epsilon; // half-open
        int hi = static_cast<int>(std::floor(top));
        if (static_cast<double>(hi) == top) --hi;
        s.blocks_.push_back({j, lo, hi});
    }
    return s;
}

std::vector<int> BlockScheme::blocks_containing(int degree) const {
    std::vector<int> out;
    for (const Block& b : blocks_)
        if (degree >= b.lo && degree <= b.hi) out.push_back(b.index);
    return out;
}

bool BlockScheme::share_block(int deg_a, int deg_b) const {
    for (const Block& b : blocks_) {
        if (deg_a >= b.lo && deg_a <= b.hi && deg_b >= b.lo && deg_b <= b.hi) return true;
    }
    return false;
}

double hs_norm_offdiagonal(const GramMatrix& g, const BlockScheme& scheme) {
    const long n = g.entries.rows();
    if (static_cast<long>(g.regions.size()) != n)
        throw InvalidInput("hs_norm_offdiagonal: missing region labels");
    double sum = 0.0;
    for (long j = 0; j < n; ++j) {
        const int dj = g.regions[static_cast<size_t>(j)].degree;
        for (long i = j + 1; i < n; ++i) {
            const int di = g.regions[static_cast<size_t>(i)].degree;
            if (!scheme.share_block(di, dj)) sum += 2.0 * std::norm(g.entries(i, j));
        }
    }
    return std::sqrt(sum);
}

SzegoEntryMoment expected_sq_entry_szego(const std::vector<double>& r_n,
                                         const std::vector<double>& r_j) {
    if (r_n.empty() || r_n.size() != r_j.size())
        throw InvalidInput("expected_sq_entry_szego: radius vectors must have equal dimension");
    SzegoEntryMoment out{1.0, 1.0, 1.0};
    for (size_t i = 0; i < r_n.size(); ++i) {
        const double r = r_n[i], s = r_j[i];
        if (!(r >= 0.0 && r < 1.0 && s >= 0.0 && s < 1.0))
            throw InvalidInput("expected_sq_entry_szego: radii must lie in [0,1)");
        const double num = (1.0 - r * r) * (1.0 - s * s);
        out.value *= num / (1.0 - r * r * s * s);
        out.comparable_form *= num / (1.0 - r * s);
        const double mi = std::exp2(band_index(1.0 - r));
        const double ki = std::exp2(band_index(1.0 - s));
        out.dyadic_surrogate *= 1.0 / (mi + ki);
    }
    return out;
}

namespace {

/// k_a(r, r), the unnormalized Dirichlet-type kernel on the diagonal.
double dirichlet_diag(double a, double r) {
    const double x = r * r;
    if (a == 1.0) {
        if (x == 0.0) return 1.0;
        if (x < 1e-4) return 1.0 + x * (0.5 + x * (1.0 / 3.0 + x * (0.25 + x * 0.2)));
        return -std::log1p(-x) / x;
    }
    return std::pow(1.0 - x, a - 1.0);
}

} // namespace

DirichletEntryMoment expected_sq_entry_dirichlet(double a, const std::vector<double>& r_n,
                                                 const std::vector<double>& r_j,
                                                 double series_tol, long max_terms) {
    if (!(a >= 0.0 && a <= 1.0))
        throw InvalidInput("expected_sq_entry_dirichlet: a must lie in [0,1]");
    if (r_n.empty() || r_n.size() != r_j.size())
        throw InvalidInput("expected_sq_entry_dirichlet: radius vectors must have equal dimension");
    DirichletEntryMoment out{1.0, 1.0, 0, true};
    for (size_t i = 0; i < r_n.size(); ++i) {
        const double r = r_n[i], s = r_j[i];
        if (!(r >= 0.0 && r < 1.0 && s >= 0.0 && s < 1.0))
            throw InvalidInput("expected_sq_entry_dirichlet: radii must lie in [0,1)");
        const double x = (r * s) * (r * s);
        // c_0 = 1, c_l = c_{l-1} (l-a)/l for a < 1; c_l = 1/(l+1) at a = 1.
        double c = 1.0;
        double term = 1.0;
        double sum = 0.0;
        long l = 0;
        for (;; ++l) {
            sum += term;
            if (x == 0.0) { ++l; break; }
            // c_l is nonincreasing in l, so the tail is below a geometric one
            if (term * x / (1.0 - x) < series_tol) { ++l; break; }
            if (l + 1 > max_terms)
                throw NumericError(
                    "expected_sq_entry_dirichlet: series did not reach tol " +
                    std::to_string(series_tol) + " within " + std::to_string(max_terms) +
                    " terms; partial sum " + std::to_string(sum));
            const double lc = static_cast<double>(l + 1);
            c = a == 1.0 ? 1.0 / (lc + 1.0) : c * (lc - a) / lc;
            term = c * c * std::pow(x, static_cast<double>(l + 1));
        }
        out.terms = std::max(out.terms, l);
        out.series_factor *= sum;
        out.value *= sum / (dirichlet_diag(a, r) * dirichlet_diag(a, s));
    }
    return out;
}

namespace {

/// Enumerate multi-indices l in [0,L]^d row-major (last coordinate fastest).
template <class Fn>
void for_each_multiindex(int d, int L, Fn&& fn) {
    std::vector<int> l(static_cast<size_t>(d), 0);
    long flat = 0;
    while (true) {
        fn(flat, l);
        ++flat;
        int pos = d - 1;
        while (pos >= 0) {
            if (++l[static_cast<size_t>(pos)] <= L) break;
            l[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

} // namespace

std::vector<double> expected_frame_diagonal(const std::vector<std::vector<double>>& radii,
                                            int L) {
    if (radii.empty()) throw InvalidInput("expected_frame_diagonal: no radii");
    if (L < 0) throw InvalidInput("expected_frame_diagonal: negative cutoff");
    const int d = static_cast<int>(radii.front().size());
    long dim = 1;
    for (int i = 0; i < d; ++i) dim *= L + 1;
    std::vector<double> diag(static_cast<size_t>(dim), 0.0);
    std::vector<std::vector<double>> pow_table(static_cast<size_t>(d),
                                               std::vector<double>(static_cast<size_t>(L) + 1));
    for (const auto& r : radii) {
        if (static_cast<int>(r.size()) != d)
            throw InvalidInput("expected_frame_diagonal: ragged radius vectors");
        double pref = 1.0;
        for (int i = 0; i < d; ++i) {
            const double ri = r[static_cast<size_t>(i)];
            if (!(ri >= 0.0 && ri < 1.0))
                throw InvalidInput("expected_frame_diagonal: radii must lie in [0,1)");
            pref *= 1.0 - ri * ri;
            double p = 1.0;
            for (int l = 0; l <= L; ++l) {
                pow_table[static_cast<size_t>(i)][static_cast<size_t>(l)] = p;
                p *= ri * ri;
            }
        }
        for_each_multiindex(d, L, [&](long flat, const std::vector<int>& l) {
            double v = pref;
            for (int i = 0; i < d; ++i)
                v *= pow_table[static_cast<size_t>(i)][static_cast<size_t>(l[static_cast<size_t>(i)])];
            diag[static_cast<size_t>(flat)] += v;
        });
    }
    return diag;
}

TruncatedFrame truncated_frame(const RandomSequence& seq, int window_lo, int window_hi, int L,
                               long frame_dim_cap) {
    if (seq.domain != Domain::Polydisc)
        throw InvalidInput("truncated_frame: polydisc sequences only");
    if (window_lo > window_hi) throw InvalidInput("truncated_frame: empty degree window");
    if (L < 0) throw InvalidInput("truncated_frame: negative cutoff");
    const int d = seq.dim;
    long dim = 1;
    for (int i = 0; i < d; ++i) {
        dim *= L + 1;
        if (dim > frame_dim_cap)
            throw ResourceLimit("truncated_frame: (L+1)^d = " + std::to_string(dim) +
                                " exceeds the cap of " + std::to_string(frame_dim_cap));
    }
    TruncatedFrame f;
    f.L = L;
    f.dim = d;
    f.window_lo = window_lo;
    f.window_hi = window_hi;
    f.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd v(dim);
    std::vector<std::vector<Complex>> pows(static_cast<size_t>(d),
                                           std::vector<Complex>(static_cast<size_t>(L) + 1));
    for (size_t pidx = 0; pidx < seq.points.size(); ++pidx) {
        const int deg = seq.region_of[pidx].degree;
        if (deg < window_lo || deg > window_hi) continue;
        const Point& z = seq.points[pidx];
        double pref = 1.0;
        for (int i = 0; i < d; ++i) {
            pref *= 1.0 - std::norm(z[i]);
            Complex p = 1.0;
            const Complex zc = std::conj(z[i]);
            for (int l = 0; l <= L; ++l) {
                pows[static_cast<size_t>(i)][static_cast<size_t>(l)] = p;
                p *= zc;
            }
        }
        const double spref = std::sqrt(pref);
        for_each_multiindex(d, L, [&](long flat, const std::vector<int>& l) {
            Complex c = spref;
            for (int i = 0; i < d; ++i)
                c *= pows[static_cast<size_t>(i)][static_cast<size_t>(l[static_cast<size_t>(i)])];
            v(flat) = c;
        });
        f.matrix.noalias() += v * v.adjoint();
    }
    return f;
}

double partial_sum_tail_bound(long n_window, int b, long L) {
    if (n_window < 0 || b < 0 || L < 0) throw InvalidInput("partial_sum_tail_bound: bad arguments");
    return static_cast<double>(n_window) *
           std::pow(1.0 - std::exp2(-b), 2.0 * static_cast<double>(L));
}

double chernoff_bound(const ChernoffParams& p) {
    if (!(p.delta >= 0.0)) throw InvalidInput("chernoff_bound: delta must be >= 0");
    if (!(p.mu >= 0.0)) throw InvalidInput("chernoff_bound: mu must be >= 0");
    if (!(p.l_dim >= 1.0)) throw InvalidInput("chernoff_bound: ambient dimension must be >= 1");
    const double log_bound = std::log(p.l_dim) + p.delta * p.mu * (1.0 - std::log1p(p.delta));
    return std::exp(log_bound);
}

BlockNormReport block_gram_norms(const GramMatrix& g, const BlockScheme& scheme, double tol,
                                 int max_iter) {
    const long n = g.entries.rows();
    if (static_cast<long>(g.regions.size()) != n)
        throw InvalidInput("block_gram_norms: missing region labels");
    BlockNormReport rep;
    rep.overlap_bound = scheme.overlap_bound();
    for (const BlockScheme::Block& b : scheme.blocks()) {
        std::vector<long> rows;
        for (long i = 0; i < n; ++i) {
            const int deg = g.regions[static_cast<size_t>(i)].degree;
            if (deg >= b.lo && deg <= b.hi) rows.push_back(i);
        }
        BlockNormEntry entry;
        entry.block_index = b.index;
        entry.lo = b.lo;
        entry.hi = b.hi;
        entry.rows = static_cast<long>(rows.size());
        if (!rows.empty()) {
            Eigen::MatrixXcd sub(rows.size(), rows.size());
            for (size_t cj = 0; cj < rows.size(); ++cj)
                for (size_t ci = 0; ci < rows.size(); ++ci)
                    sub(static_cast<long>(ci), static_cast<long>(cj)) =
                        g.entries(rows[ci], rows[cj]);
            entry.norm = operator_norm(sub, tol, max_iter);
        } else {
            entry.norm.converged = true;
        }
        rep.sup_block_norm = std::max(rep.sup_block_norm, entry.norm.value);
        rep.blocks.push_back(std::move(entry));
    }
    rep.certified_bound = rep.overlap_bound * rep.sup_block_norm;
    return rep;
}

SchurFactorReport ball_schur_factor_check(const RandomSequence& seq, double nu,
                                          double entry_tol, double norm_slack) {
    if (seq.domain != Domain::Ball)
        throw InvalidInput("ball_schur_factor_check: ball sequences only");
    const double d = static_cast<double>(seq.dim);
    if (!(nu > 0.0 && nu < d))
        throw InvalidInput("ball_schur_factor_check: nu must lie in (0,d)");
    const GramMatrix g0 = build_gram(KernelSpec::besov_sobolev(seq.dim, 0.0), seq);
    const GramMatrix gnu = build_gram(KernelSpec::besov_sobolev(seq.dim, nu), seq);
    const GramMatrix gdnu = build_gram(KernelSpec::besov_sobolev(seq.dim, d - nu), seq);
    SchurFactorReport rep;
    rep.max_factor_error =
        (g0.entries - schur_product(gnu.entries, gdnu.entries)).cwiseAbs().maxCoeff();
    rep.norm_hardy = operator_norm(g0).value;
    rep.norm_major = operator_norm(gdnu).value;
    rep.norm_minor = operator_norm(gnu).value;
    rep.factorization_ok = rep.max_factor_error < entry_tol;
    rep.norm_inequality_ok = rep.norm_hardy <= rep.norm_major * (1.0 + norm_slack);
    return rep;
}

// ---------------------------------------------------------------------------
// binary container

namespace {

void put_bytes(std::ostream& os, std::uint64_t v, int nbytes) {
    char buf[8];
    for (int i = 0; i < nbytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, nbytes);
}

std::uint64_t get_bytes(std::istream& is, int nbytes) {
    unsigned char buf[8] = {0};
    is.read(reinterpret_cast<char*>(buf), nbytes);
    std::uint64_t v = 0;
    for (int i = 0; i < nbytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double x) { put_bytes(os, std::bit_cast<std::uint64_t>(x), 8); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_bytes(is, 8)); }

constexpr std::uint32_t kGramMagic = 0x4d524743u; // "CGRM" little-endian
constexpr std::uint32_t kGramVersion = 1;

std::uint32_t family_code(KernelFamily f) {
    switch (f) {
        case KernelFamily::SzegoPolydisc: return 0;
        case KernelFamily::DirichletPolydisc: return 1;
        case KernelFamily::BesovSobolevBall: return 2;
    }
    return 0xffffffffu;
}

} // namespace

void write_gram(std::ostream& os, const GramMatrix& g) {
    const long n = g.entries.rows();
    put_bytes(os, kGramMagic, 4);
    put_bytes(os, kGramVersion, 4);
    put_bytes(os, static_cast<std::uint64_t>(n), 8);
    put_bytes(os, static_cast<std::uint64_t>(g.spec.dim()), 4);
    put_bytes(os, family_code(g.spec.family()), 4);
    put_f64(os, g.spec.a());
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= i; ++j) {
            put_f64(os, g.entries(i, j).real());
            put_f64(os, g.entries(i, j).imag());
        }
    if (!os) throw InvalidInput("write_gram: stream write failed");
}

GramMatrix read_gram(std::istream& is) {
    if (get_bytes(is, 4) != kGramMagic) throw InvalidInput("read_gram: bad magic");
    if (get_bytes(is, 4) != kGramVersion) throw InvalidInput("read_gram: unsupported version");
    const long n = static_cast<long>(get_bytes(is, 8));
    const int d = static_cast<int>(get_bytes(is, 4));
    const std::uint32_t fam = static_cast<std::uint32_t>(get_bytes(is, 4));
    const double a = get_f64(is);
    KernelSpec spec = fam == 0   ? KernelSpec::szego(d)
                      : fam == 1 ? KernelSpec::dirichlet(d, a)
                      : fam == 2 ? KernelSpec::besov_sobolev(d, a)
                                 : throw InvalidInput("read_gram: unknown kernel family");
    GramMatrix g{Eigen::MatrixXcd(n, n), spec, {}, n};
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= i; ++j) {
            const double re = get_f64(is);
            const double im = get_f64(is);
            g.entries(i, j) = Complex(re, im);
            if (i != j) g.entries(j, i) = Complex(re, -im);
        }
    if (!is) throw InvalidInput("read_gram: truncated stream");
    return g;
}

// ---------------------------------------------------------------------------
// streaming norms for large sequences

namespace {

/// Lower triangle (diagonal included) in single precision, row-major packed,
/// stored as separate real/imaginary planes so the hot loops vectorize.
struct PackedHermitian {
    long n = 0;
    std::vector<float> re, im;

    static size_t tidx(long i, long j) noexcept {
        return static_cast<size_t>(i) * static_cast<size_t>(i + 1) / 2 + static_cast<size_t>(j);
    }

    /// Blocked symmetric matvec. Work is split into fixed row blocks of
    /// roughly equal triangle area; each block accumulates into its own
    /// partial vector and the partials are reduced in block order, so the
    /// result does not depend on the thread count.
    void matvec(const Complex* x, Complex* y, int threads) const {
        constexpr int kBlocks = 64;
        std::vector<double> xr(static_cast<size_t>(n)), xi(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            xr[static_cast<size_t>(i)] = x[i].real();
            xi[static_cast<size_t>(i)] = x[i].imag();
        }
        std::vector<std::vector<double>> pre(kBlocks), pim(kBlocks);
        std::vector<long> bounds(kBlocks + 1, 0);
        for (int b = 0; b <= kBlocks; ++b)
            bounds[static_cast<size_t>(b)] = static_cast<long>(
                std::llround(static_cast<double>(n) *
                             std::sqrt(static_cast<double>(b) / kBlocks)));
        bounds[static_cast<size_t>(kBlocks)] = n;
        parallel_blocks(kBlocks, threads, [&](int b) {
            auto& yr = pre[static_cast<size_t>(b)];
            auto& yi = pim[static_cast<size_t>(b)];
            yr.assign(static_cast<size_t>(n), 0.0);
            yi.assign(static_cast<size_t>(n), 0.0);
            for (long i = bounds[static_cast<size_t>(b)]; i < bounds[static_cast<size_t>(b) + 1];
                 ++i) {
                const double xri = xr[static_cast<size_t>(i)];
                const double xii = xi[static_cast<size_t>(i)];
                const float* ar = re.data() + tidx(i, 0);
                const float* ai = im.data() + tidx(i, 0);
                double accr = 0.0, acci = 0.0;
                double* yrp = yr.data();
                double* yip = yi.data();
                const double* xrp = xr.data();
                const double* xip = xi.data();
                for (long j = 0; j < i; ++j) {
                    const double r = ar[j], m = ai[j];
                    accr += r * xrp[j] - m * xip[j];
                    acci += r * xip[j] + m * xrp[j];
                    yrp[j] += r * xri + m * xii; // conj(a) * x_i
                    yip[j] += r * xii - m * xri;
                }
                accr += static_cast<double>(ar[i]) * xri - static_cast<double>(ai[i]) * xii;
                acci += static_cast<double>(ar[i]) * xii + static_cast<double>(ai[i]) * xri;
                yrp[i] += accr;
                yip[i] += acci;
            }
        });
        for (long i = 0; i < n; ++i) y[i] = Complex(0.0, 0.0);
        for (int b = 0; b < kBlocks; ++b) {
            const auto& yr = pre[static_cast<size_t>(b)];
            const auto& yi = pim[static_cast<size_t>(b)];
            for (long i = 0; i < n; ++i)
                y[i] += Complex(yr[static_cast<size_t>(i)], yi[static_cast<size_t>(i)]);
        }
    }
};

/// Top eigenvalue by Lanczos with full reorthogonalization. Used only for the
/// packed large-n path, where power iteration needs 2-3x more matvecs than
/// Lanczos for the same trend accuracy and each matvec streams gigabytes.
NormResult lanczos_top_norm(long n,
                            const std::function<void(const Complex*, Complex*)>& matvec,
                            double max_diag, double tol, int max_iter, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("lanczos_top_norm: empty matrix");
    const int max_steps = std::min<long>(std::max(8, max_iter), std::min<long>(n, 300));
    Eigen::VectorXcd v(n), w(n);
    Rng rng(derive_seed(seed, hash_str("lanczos"), static_cast<std::uint64_t>(n)));
    for (long i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
    v /= v.norm();

    std::vector<Eigen::VectorXcd> basis;
    std::vector<double> alpha, beta;
    NormResult res;
    double theta_prev = 0.0;
    for (int k = 0; k < max_steps; ++k) {
        basis.push_back(v);
        matvec(v.data(), w.data());
        const double a = v.dot(w).real();
        alpha.push_back(a);
        w -= a * v;
        if (k > 0) w -= beta[static_cast<size_t>(k - 1)] * basis[static_cast<size_t>(k - 1)];
        // full reorthogonalization; cheap next to the matvec
        for (const Eigen::VectorXcd& u : basis) w -= u.dot(w) * u;

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int i = 0; i <= k; ++i) {
            tri(i, i) = alpha[static_cast<size_t>(i)];
            if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[static_cast<size_t>(i - 1)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
        const double theta = es.eigenvalues().maxCoeff();
        res.iterations = k + 1;
        res.value = theta;
        if (k >= 4 && std::abs(theta - theta_prev) <= tol * std::max(std::abs(theta), 1e-300)) {
            res.converged = true;
            break;
        }
        theta_prev = theta;
        const double b = w.norm();
        if (b < 1e-14 * std::max(1.0, std::abs(a))) { // invariant subspace reached
            res.converged = true;
            break;
        }
        beta.push_back(b);
        v = w / b;
    }
    if (res.value < max_diag) res.value = max_diag;
    return res;
}

/// Per-point data for the d = 1 Szego fast path.
struct SzegoDisc {
    std::vector<double> re, im, s; // s = sqrt(1-|z|^2)
};

PackedHermitian pack_gram(const KernelSpec& spec, const RandomSequence& seq, int threads) {
    const long n = seq.size();
    PackedHermitian p;
    p.n = n;
    p.re.resize(PackedHermitian::tidx(n - 1, n - 1) + 1);
    p.im.resize(p.re.size());
    const bool szego1 = spec.family() == KernelFamily::SzegoPolydisc && spec.dim() == 1;
    SzegoDisc sd;
    std::vector<double> ninv;
    if (szego1) {
        sd.re.resize(static_cast<size_t>(n));
        sd.im.resize(static_cast<size_t>(n));
        sd.s.resize(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            const Complex z = seq.points[static_cast<size_t>(i)][0];
            sd.re[static_cast<size_t>(i)] = z.real();
            sd.im[static_cast<size_t>(i)] = z.imag();
            sd.s[static_cast<size_t>(i)] = std::sqrt(1.0 - std::norm(z));
        }
    } else {
        ninv = inverse_norms(spec, seq);
    }
    constexpr int kBlocks = 64;
    std::vector<long> bounds(kBlocks + 1, 0);
    for (int b = 0; b <= kBlocks; ++b)
        bounds[static_cast<size_t>(b)] = static_cast<long>(std::llround(
            static_cast<double>(n) * std::sqrt(static_cast<double>(b) / kBlocks)));
    bounds[static_cast<size_t>(kBlocks)] = n;
    parallel_blocks(kBlocks, threads, [&](int b) {
        for (long i = bounds[static_cast<size_t>(b)]; i < bounds[static_cast<size_t>(b) + 1]; ++i) {
            float* rr = p.re.data() + PackedHermitian::tidx(i, 0);
            float* ri = p.im.data() + PackedHermitian::tidx(i, 0);
            if (szego1) {
                const double zr = sd.re[static_cast<size_t>(i)];
                const double zi = sd.im[static_cast<size_t>(i)];
                const double si = sd.s[static_cast<size_t>(i)];
                const double* wr = sd.re.data();
                const double* wi = sd.im.data();
                const double* ws = sd.s.data();
                for (long j = 0; j < i; ++j) {
                    // s_i s_j / (1 - conj(z_j) z_i)
                    const double dr = 1.0 - (wr[j] * zr + wi[j] * zi);
                    const double di = -(wr[j] * zi - wi[j] * zr);
                    const double c = si * ws[j] / (dr * dr + di * di);
                    rr[j] = static_cast<float>(c * dr);
                    ri[j] = static_cast<float>(-c * di);
                }
            } else {
                for (long j = 0; j < i; ++j) {
                    const Complex v = kernel_eval(spec, seq.points[static_cast<size_t>(i)],
                                                  seq.points[static_cast<size_t>(j)]) *
                                      (ninv[static_cast<size_t>(i)] * ninv[static_cast<size_t>(j)]);
                    rr[j] = static_cast<float>(v.real());
                    ri[j] = static_cast<float>(v.imag());
                }
            }
            rr[i] = 1.0f;
            ri[i] = 0.0f;
        }
    });
    return p;
}

} // namespace

NormResult gram_operator_norm(const KernelSpec& spec, const RandomSequence& seq,
                              const GramNormOptions& opts) {
    check_sequence(spec, seq);
    const long n = seq.size();
    if (n == 0) return {0.0, true, 0};
    if (n > opts.point_cap)
        throw ResourceLimit("gram_operator_norm: " + std::to_string(n) +
                            " points exceed the cap of " + std::to_string(opts.point_cap));
    if (n <= opts.dense_cap) {
        const GramMatrix g = build_gram(spec, seq, opts.point_cap);
        return power_iteration_norm(
            n,
            [&g](const Complex* x, Complex* y) {
                Eigen::Map<const Eigen::VectorXcd> xv(x, g.entries.rows());
                Eigen::Map<Eigen::VectorXcd> yv(y, g.entries.rows());
                yv.noalias() = g.entries * xv;
            },
            1.0, opts.tol, opts.max_iter, opts.seed);
    }
    const PackedHermitian packed = pack_gram(spec, seq, opts.threads);
    const int threads = opts.threads;
    return lanczos_top_norm(
        n,
        [&packed, threads](const Complex* x, Complex* y) { packed.matvec(x, y, threads); },
        1.0, opts.tol, opts.max_iter, opts.seed);
}

} // namespace carlab
