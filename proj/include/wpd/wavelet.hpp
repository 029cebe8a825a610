#pragma once

#include "wpd/errors.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wpd {

enum class BoundaryMode { Periodic, SymmetricReflect };

std::string boundary_name(BoundaryMode mode);
BoundaryMode parse_boundary(const std::string& name);

/// Orthogonal two-channel filter bank. Decomposition uses correlation phase
///   a[k] = sum_j dec_lo[j] * x[2k + j]
/// and the high-pass taps follow the quadrature-mirror relation
///   dec_hi[k] = (-1)^k * dec_lo[L-1-k].
/// Under this convention synthesis is the adjoint, so rec_* == dec_*.
struct WaveletFilter {
    std::string name;
    Eigen::ArrayXd dec_lo;
    Eigen::ArrayXd dec_hi;

    Eigen::Index length() const { return dec_lo.size(); }

    /// Throws Error unless taps sum to sqrt(2), have unit energy, satisfy
    /// double-shift orthogonality, and obey the mirror relation (1e-12).
    void validate() const;
};

/// Filter by family name: haar (alias db1), db2, db3, db4.
WaveletFilter make_filter(const std::string& name);

/// |sum(samples) * dx|, the discrete admissibility residual. A usable
/// analysis wavelet keeps this near zero.
double admissibility_residual(const Eigen::ArrayXd& samples, double dx);

/// One analysis step: x -> (approx, detail), each ceil(n/2) long.
/// Odd-length input is extended by repeating the last sample. Periodic
/// windows are causal (output k reads x[2k..2k+L-1]) with wrap-around.
/// Reflected windows are centered (L-2)/2 samples earlier so both edges
/// fold under whole-sample reflection, and the folded rows are
/// orthonormalized so the transform stays energy-preserving and its exact
/// inverse is the adjoint; away from the edges the coefficients are the
/// plain reflected correlation. Requires x.size() >= filter length.
void dwt_step(const Eigen::ArrayXd& x, const WaveletFilter& f, BoundaryMode mode,
              Eigen::ArrayXd& approx, Eigen::ArrayXd& detail);

/// One synthesis step, exact inverse of dwt_step. out_length tells the
/// step whether the forward pass padded (it must be 2m or 2m-1 for
/// m = approx.size()).
Eigen::ArrayXd idwt_step(const Eigen::ArrayXd& approx, const Eigen::ArrayXd& detail,
                         const WaveletFilter& f, BoundaryMode mode,
                         Eigen::Index out_length);

/// Multilevel decomposition record. details[j-1] holds level j, level 1
/// being the finest. input_lengths[j-1] is the signal length fed into the
/// level-j analysis step, which is what synthesis must reproduce.
struct Decomposition {
    std::string filter;
    BoundaryMode boundary = BoundaryMode::Periodic;
    int depth = 0;
    Eigen::Index original_length = 0;
    Eigen::ArrayXd approx;
    std::vector<Eigen::ArrayXd> details;
    std::vector<Eigen::Index> input_lengths;
};

/// Deepest level the cascade supports: floor(log2(n)) for two-tap filters,
/// floor(log2(n / (L - 1))) otherwise. Requires n >= L.
int max_level(Eigen::Index n, const WaveletFilter& f);

/// Full cascade to the requested depth (1 <= levels <= max_level).
Decomposition wavedec(const Eigen::ArrayXd& x, const WaveletFilter& f,
                      BoundaryMode mode, int levels);

/// Exact reconstruction from a decomposition.
Eigen::ArrayXd waverec(const Decomposition& dec);

/// Reconstruction keeping only level j detail coefficients (others zeroed).
Eigen::ArrayXd detail_component(const Decomposition& dec, int level);

/// Reconstruction keeping only the final approximation.
Eigen::ArrayXd approx_component(const Decomposition& dec);

/// Decomposition as a JSON document with full-precision coefficients.
std::string decomposition_to_json(const Decomposition& dec);

/// Parses a document produced by decomposition_to_json.
Decomposition decomposition_from_json(const std::string& text);

} // namespace wpd
