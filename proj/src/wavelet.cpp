#include "wpd/wavelet.hpp"

#include "wpd/util.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <utility>

namespace wpd {

namespace {

using json = nlohmann::ordered_json;

constexpr double kSqrtHalf = 0.70710678118654752440;

const double kHaar[2] = {kSqrtHalf, kSqrtHalf};

// Minimum-phase Daubechies scaling taps in correlation order. Each set sums
// to sqrt(2), has unit energy, and is double-shift orthogonal to 1e-15.
const double kDb2[4] = {
    -0.12940952255126037, 0.22414386804201339,
    0.83651630373780794, 0.48296291314453416};
const double kDb3[6] = {
    0.035226291885709533, -0.085441273882026658, -0.13501102001025458,
    0.45987750211849154, 0.80689150931109255, 0.33267055295008263};
const double kDb4[8] = {
    -0.010597401785069032, 0.032883011666885197, 0.030841381835560764,
    -0.18703481171909309, -0.027983769416859854, 0.63088076792985892,
    0.71484657055291567, 0.23037781330889651};

Eigen::ArrayXd taps_from(const double* data, Eigen::Index n) {
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = data[i];
    return out;
}

// Maps an out-of-range index back into [0, n) for the given boundary rule.
inline Eigen::Index resolve_index(Eigen::Index idx, Eigen::Index n, BoundaryMode mode) {
    if (idx >= 0 && idx < n) return idx;
    if (mode == BoundaryMode::Periodic) return ((idx % n) + n) % n;
    // whole-sample reflection: x[-1] -> x[1], x[n] -> x[n-2], fold period 2n-2
    Eigen::Index period = 2 * n - 2;
    Eigen::Index r = ((idx % period) + period) % period;
    return r < n ? r : period - r;
}

// Periodic windows stay causal: output k reads x[2k .. 2k+L-1], matching the
// documented phase. Reflected windows are centered (L-2)/2 samples earlier so
// both edges fold. Causal alignment cannot work there: positions 0 and 1 are
// then covered by the first window alone, and the 2x2 minor of those columns
// is h0*g1 - h1*g0 = -(h0*h2 + h1*h3 + ...), exactly zero by double-shift
// orthogonality, so the analysis would lose rank at the left edge.
inline Eigen::Index phase_offset(const WaveletFilter& f, BoundaryMode mode) {
    return mode == BoundaryMode::SymmetricReflect ? (f.length() - 2) / 2 : 0;
}

// Fold-correlate analysis over an even-length domain, no boundary
// orthonormalization. This is the map S referred to below.
void raw_analyze(const Eigen::ArrayXd& z, const WaveletFilter& f, BoundaryMode mode,
                 Eigen::ArrayXd& approx, Eigen::ArrayXd& detail) {
    const Eigen::Index nn = z.size();
    const Eigen::Index L = f.length();
    const Eigen::Index m = nn / 2;
    const Eigen::Index delta = phase_offset(f, mode);
    approx.resize(m);
    detail.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        double sa = 0.0;
        double sd = 0.0;
        for (Eigen::Index j = 0; j < L; ++j) {
            double v = z[resolve_index(2 * k + j - delta, nn, mode)];
            sa += f.dec_lo[j] * v;
            sd += f.dec_hi[j] * v;
        }
        approx[k] = sa;
        detail[k] = sd;
    }
}

// Adjoint of raw_analyze (S^T): scatters coefficients back onto the domain.
Eigen::ArrayXd adjoint_scatter(const Eigen::ArrayXd& approx, const Eigen::ArrayXd& detail,
                               const WaveletFilter& f, BoundaryMode mode,
                               Eigen::Index n) {
    const Eigen::Index m = approx.size();
    const Eigen::Index L = f.length();
    const Eigen::Index delta = phase_offset(f, mode);
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double a = approx[k];
        const double d = detail[k];
        for (Eigen::Index j = 0; j < L; ++j) {
            Eigen::Index idx = resolve_index(2 * k + j - delta, n, mode);
            out[idx] += f.dec_lo[j] * a + f.dec_hi[j] * d;
        }
    }
    return out;
}

// One column of S^T S, probed through the raw paths.
Eigen::ArrayXd normal_column(Eigen::Index q, const WaveletFilter& f, Eigen::Index n) {
    Eigen::ArrayXd e = Eigen::ArrayXd::Zero(n);
    e[q] = 1.0;
    Eigen::ArrayXd a, d;
    raw_analyze(e, f, BoundaryMode::SymmetricReflect, a, d);
    return adjoint_scatter(a, d, f, BoundaryMode::SymmetricReflect, n);
}

// Folding makes the analysis rows non-orthonormal near the two edges, and no
// fold layout fixes that: the reflected cascade then amplifies coefficient
// roundoff by the inverse condition number per level, which ruins deep
// reconstructions. So the reflected transform is orthonormalized the way
// interval wavelets are: with S^T S = L L^T (Cholesky), analysis applies
// S L^-T and synthesis its exact adjoint L^-1 S^T. S^T S differs from the
// identity only within L of either edge, so L is the identity outside two
// corner blocks and the solves stay edge-local. Interior coefficients equal
// the plain reflected correlation.
struct SymFactor {
    bool trivial = true;      // haar never folds
    Eigen::Index w = 0;       // corner window, 0 when the factor is dense
    Eigen::MatrixXd full;     // dense lower factor for short domains
    Eigen::MatrixXd front;    // lower factors of the two corner blocks
    Eigen::MatrixXd tail;
};

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error("reflected boundary factor is not positive definite");
    return llt.matrixL();
}

SymFactor sym_factor(const WaveletFilter& f, Eigen::Index nn) {
    SymFactor sf;
    const Eigen::Index L = f.length();
    if (L <= 2) return sf;
    sf.trivial = false;

    if (nn < 4 * L) {
        // corner windows would overlap; factor the whole normal matrix
        Eigen::MatrixXd M(nn, nn);
        for (Eigen::Index q = 0; q < nn; ++q) M.col(q) = normal_column(q, f, nn).matrix();
        sf.full = lower_cholesky(M);
        return sf;
    }

    sf.w = 2 * L;
    Eigen::MatrixXd front(sf.w, sf.w);
    Eigen::MatrixXd tail(sf.w, sf.w);
    for (Eigen::Index q = 0; q < sf.w; ++q) {
        front.col(q) = normal_column(q, f, nn).head(sf.w).matrix();
        tail.col(sf.w - 1 - q) = normal_column(nn - 1 - q, f, nn).tail(sf.w).matrix();
    }
    sf.front = lower_cholesky(front);
    sf.tail = lower_cholesky(tail);
    return sf;
}

// z = L^-T x, the analysis-side preconditioner.
void solve_upper_transposed(const SymFactor& sf, Eigen::ArrayXd& v) {
    if (sf.trivial) return;
    if (sf.w == 0) {
        Eigen::VectorXd b = v.matrix();
        sf.full.transpose().triangularView<Eigen::Upper>().solveInPlace(b);
        v = b.array();
        return;
    }
    Eigen::VectorXd head = v.head(sf.w).matrix();
    Eigen::VectorXd tail = v.tail(sf.w).matrix();
    sf.front.transpose().triangularView<Eigen::Upper>().solveInPlace(head);
    sf.tail.transpose().triangularView<Eigen::Upper>().solveInPlace(tail);
    v.head(sf.w) = head.array();
    v.tail(sf.w) = tail.array();
}

// x = L^-1 y, the synthesis-side finisher.
void solve_lower(const SymFactor& sf, Eigen::ArrayXd& v) {
    if (sf.trivial) return;
    if (sf.w == 0) {
        Eigen::VectorXd b = v.matrix();
        sf.full.triangularView<Eigen::Lower>().solveInPlace(b);
        v = b.array();
        return;
    }
    Eigen::VectorXd head = v.head(sf.w).matrix();
    Eigen::VectorXd tail = v.tail(sf.w).matrix();
    sf.front.triangularView<Eigen::Lower>().solveInPlace(head);
    sf.tail.triangularView<Eigen::Lower>().solveInPlace(tail);
    v.head(sf.w) = head.array();
    v.tail(sf.w) = tail.array();
}

} // namespace

std::string boundary_name(BoundaryMode mode) {
    return mode == BoundaryMode::Periodic ? "periodic" : "symmetric-reflect";
}

BoundaryMode parse_boundary(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "periodic") return BoundaryMode::Periodic;
    if (n == "symmetric-reflect" || n == "symmetric") return BoundaryMode::SymmetricReflect;
    throw ParseError("unknown boundary mode: " + name);
}

void WaveletFilter::validate() const {
    const Eigen::Index L = length();
    if (L < 2 || L % 2 != 0)
        throw Error("filter length must be even and at least 2");
    if (dec_hi.size() != L)
        throw Error("low/high tap counts differ");

    const double tol = 1e-12;
    if (std::abs(dec_lo.sum() - std::sqrt(2.0)) > tol)
        throw Error("low-pass taps must sum to sqrt(2)");
    if (std::abs(dec_hi.sum()) > tol)
        throw Error("high-pass taps must sum to zero");
    if (std::abs(dec_lo.square().sum() - 1.0) > tol)
        throw Error("low-pass taps must have unit energy");
    for (Eigen::Index shift = 2; shift < L; shift += 2) {
        double dot = 0.0;
        for (Eigen::Index k = 0; k + shift < L; ++k) dot += dec_lo[k] * dec_lo[k + shift];
        if (std::abs(dot) > tol)
            throw Error("low-pass taps fail double-shift orthogonality");
    }
    for (Eigen::Index k = 0; k < L; ++k) {
        double mirror = (k % 2 == 0 ? 1.0 : -1.0) * dec_lo[L - 1 - k];
        if (std::abs(dec_hi[k] - mirror) > tol)
            throw Error("high-pass taps violate the quadrature-mirror relation");
    }
}

WaveletFilter make_filter(const std::string& name) {
    std::string n = to_lower(name);
    WaveletFilter f;
    if (n == "haar" || n == "db1") {
        f.name = "haar";
        f.dec_lo = taps_from(kHaar, 2);
    } else if (n == "db2") {
        f.name = "db2";
        f.dec_lo = taps_from(kDb2, 4);
    } else if (n == "db3") {
        f.name = "db3";
        f.dec_lo = taps_from(kDb3, 6);
    } else if (n == "db4") {
        f.name = "db4";
        f.dec_lo = taps_from(kDb4, 8);
    } else {
        throw ParseError("unknown wavelet: " + name);
    }
    const Eigen::Index L = f.dec_lo.size();
    f.dec_hi.resize(L);
    for (Eigen::Index k = 0; k < L; ++k)
        f.dec_hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.dec_lo[L - 1 - k];
    f.validate();
    return f;
}

double admissibility_residual(const Eigen::ArrayXd& samples, double dx) {
    if (samples.size() == 0) throw RangeError("admissibility needs samples");
    if (!(dx > 0.0)) throw RangeError("sample spacing must be positive");
    return std::abs(samples.sum() * dx);
}

void dwt_step(const Eigen::ArrayXd& x, const WaveletFilter& f, BoundaryMode mode,
              Eigen::ArrayXd& approx, Eigen::ArrayXd& detail) {
    const Eigen::Index n = x.size();
    const Eigen::Index L = f.length();
    if (n < L)
        throw RangeError("input length " + std::to_string(n) +
                         " below filter length " + std::to_string(L));

    Eigen::ArrayXd domain;
    Eigen::Index nn = n;
    if (n % 2 != 0) {
        domain.resize(n + 1);
        domain.head(n) = x;
        domain[n] = x[n - 1]; // repeat last sample
        nn = n + 1;
    } else {
        domain = x;
    }

    if (mode == BoundaryMode::SymmetricReflect)
        solve_upper_transposed(sym_factor(f, nn), domain);
    raw_analyze(domain, f, mode, approx, detail);
}

Eigen::ArrayXd idwt_step(const Eigen::ArrayXd& approx, const Eigen::ArrayXd& detail,
                         const WaveletFilter& f, BoundaryMode mode,
                         Eigen::Index out_length) {
    const Eigen::Index m = approx.size();
    if (detail.size() != m) throw RangeError("approx/detail length mismatch");
    if (m == 0) throw RangeError("empty coefficient block");
    const Eigen::Index nn = 2 * m;
    if (out_length != nn && out_length != nn - 1)
        throw RangeError("output length " + std::to_string(out_length) +
                         " incompatible with " + std::to_string(m) + " coefficients");
    if (nn < f.length())
        throw RangeError("coefficient block shorter than filter");

    Eigen::ArrayXd y = adjoint_scatter(approx, detail, f, mode, nn);
    if (mode == BoundaryMode::SymmetricReflect)
        solve_lower(sym_factor(f, nn), y);
    return y.head(out_length);
}

int max_level(Eigen::Index n, const WaveletFilter& f) {
    const Eigen::Index L = f.length();
    if (n < L)
        throw RangeError("length " + std::to_string(n) + " below filter length " +
                         std::to_string(L));
    const Eigen::Index denom = (L == 2) ? 1 : (L - 1);
    int j = 0;
    while ((denom << (j + 1)) <= n) ++j;
    return j;
}

Decomposition wavedec(const Eigen::ArrayXd& x, const WaveletFilter& f,
                      BoundaryMode mode, int levels) {
    if (x.size() < 2) throw RangeError("need at least two samples");
    const int deepest = max_level(x.size(), f);
    if (levels < 1 || levels > deepest)
        throw RangeError("depth " + std::to_string(levels) + " outside 1.." +
                         std::to_string(deepest) + " for length " +
                         std::to_string(x.size()) + " (" + f.name + ")");

    Decomposition dec;
    dec.filter = f.name;
    dec.boundary = mode;
    dec.depth = levels;
    dec.original_length = x.size();

    Eigen::ArrayXd cur = x;
    for (int j = 1; j <= levels; ++j) {
        dec.input_lengths.push_back(cur.size());
        Eigen::ArrayXd a, d;
        dwt_step(cur, f, mode, a, d);
        dec.details.push_back(std::move(d));
        cur = std::move(a);
    }
    dec.approx = std::move(cur);
    return dec;
}

namespace {

void check_chain(const Decomposition& dec) {
    const int J = dec.depth;
    if (J < 1 || dec.details.size() != static_cast<std::size_t>(J) ||
        dec.input_lengths.size() != static_cast<std::size_t>(J))
        throw Error("decomposition depth disagrees with stored levels");
    if (dec.input_lengths[0] != dec.original_length)
        throw Error("corrupted length bookkeeping at level 1");
    for (int j = 1; j <= J; ++j) {
        Eigen::Index expect = (dec.input_lengths[static_cast<std::size_t>(j - 1)] + 1) / 2;
        if (dec.details[static_cast<std::size_t>(j - 1)].size() != expect)
            throw Error("corrupted length bookkeeping at level " + std::to_string(j));
        if (j < J && dec.input_lengths[static_cast<std::size_t>(j)] != expect)
            throw Error("corrupted length bookkeeping at level " + std::to_string(j + 1));
    }
    if (dec.approx.size() != dec.details.back().size())
        throw Error("approximation length disagrees with deepest detail");
}

} // namespace

Eigen::ArrayXd waverec(const Decomposition& dec) {
    check_chain(dec);
    WaveletFilter f = make_filter(dec.filter);
    Eigen::ArrayXd cur = dec.approx;
    for (int j = dec.depth; j >= 1; --j) {
        cur = idwt_step(cur, dec.details[static_cast<std::size_t>(j - 1)], f,
                        dec.boundary, dec.input_lengths[static_cast<std::size_t>(j - 1)]);
    }
    return cur;
}

Eigen::ArrayXd detail_component(const Decomposition& dec, int level) {
    if (level < 1 || level > dec.depth)
        throw RangeError("level " + std::to_string(level) + " outside 1.." +
                         std::to_string(dec.depth));
    Decomposition only = dec;
    only.approx.setZero();
    for (int j = 1; j <= only.depth; ++j)
        if (j != level) only.details[static_cast<std::size_t>(j - 1)].setZero();
    return waverec(only);
}

Eigen::ArrayXd approx_component(const Decomposition& dec) {
    Decomposition only = dec;
    for (auto& d : only.details) d.setZero();
    return waverec(only);
}

std::string decomposition_to_json(const Decomposition& dec) {
    check_chain(dec);
    json j;
    j["filter"] = dec.filter;
    j["boundary"] = boundary_name(dec.boundary);
    j["depth"] = dec.depth;
    j["original_length"] = dec.original_length;
    j["approx"] = std::vector<double>(dec.approx.begin(), dec.approx.end());
    json levels = json::array();
    for (const auto& d : dec.details)
        levels.push_back(std::vector<double>(d.begin(), d.end()));
    j["details"] = std::move(levels);
    return j.dump(2) + "\n";
}

Decomposition decomposition_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad decomposition JSON: ") + e.what());
    }

    Decomposition dec;
    try {
        dec.filter = j.at("filter").get<std::string>();
        dec.boundary = parse_boundary(j.at("boundary").get<std::string>());
        dec.depth = j.at("depth").get<int>();
        dec.original_length = j.at("original_length").get<Eigen::Index>();
        auto approx = j.at("approx").get<std::vector<double>>();
        dec.approx = Eigen::Map<Eigen::ArrayXd>(approx.data(),
                                                static_cast<Eigen::Index>(approx.size()));
        for (const auto& level : j.at("details")) {
            auto v = level.get<std::vector<double>>();
            dec.details.push_back(Eigen::Map<Eigen::ArrayXd>(
                v.data(), static_cast<Eigen::Index>(v.size())));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad decomposition JSON: ") + e.what());
    }

    // input lengths are implied by the halving chain
    Eigen::Index len = dec.original_length;
    for (int j2 = 1; j2 <= dec.depth; ++j2) {
        dec.input_lengths.push_back(len);
        len = (len + 1) / 2;
    }
    check_chain(dec);
    make_filter(dec.filter);
    return dec;
}

} // namespace wpd
