#pragma once

// Spectra of L = -Lap + a R.
//
// Spheres are handled analytically: degree-l spherical harmonics on S^n of
// radius r have eigenvalue l (l + n - 1) / r^2 of the Laplacian, shifted by
// a R = a n / 2. The Gaussian soliton is handled numerically on Dirichlet
// balls B(0, r_max) through the radial reduction
//   u -> -u'' - (n - 1)/r u' + (a R + shift) u,
// discretised by a conservative three-point scheme that is symmetric in the
// volume-weighted inner product.

#include <cstddef>
#include <string_view>
#include <vector>

#include "solitonlab/spaces.hpp"

namespace solitonlab {

enum class SpectrumSource { analytic, discretized };
std::string_view to_string(SpectrumSource source);

/// Dimension of the space of degree-l spherical harmonics on S^n.
long spherical_harmonic_dimension(int n, int l);

/// Zonal harmonics Z_0..Z_lmax on S^n at x = cos(theta), normalised Z_l(1) = 1
/// (Legendre for n = 2, Gegenbauer ratios C_l^{(n-1)/2}(x) / C_l^{(n-1)/2}(1) in general).
std::vector<double> zonal_harmonics(int n, int l_max, double x);

struct SpectralLevel {
    double value = 0.0;
    long multiplicity = 1;
    int degree = 0;  // harmonic degree (analytic) or index (discretized)
};

class Spectrum {
public:
    Spectrum(std::vector<SpectralLevel> levels, double a, SpectrumSource source, double weyl_exponent);

    const std::vector<SpectralLevel>& levels() const noexcept { return levels_; }
    double coupling() const noexcept { return a_; }
    SpectrumSource source() const noexcept { return source_; }
    /// N(lambda) ~ C lambda^{weyl_exponent}; n/2 on S^n, 1/2 for radial reductions.
    double weyl_exponent() const noexcept { return weyl_exponent_; }

    /// Number of eigenvalues counted with multiplicity.
    std::size_t size() const noexcept { return total_; }
    /// k-th eigenvalue counted with multiplicity, k = 1, 2, ...
    double eigenvalue(std::size_t k) const;
    /// First `count` eigenvalues with multiplicity.
    std::vector<double> expanded(std::size_t count) const;
    /// #{ i : lambda_i <= lambda }.
    std::size_t counting_function(double lambda) const;

private:
    std::vector<SpectralLevel> levels_;
    double a_;
    SpectrumSource source_;
    double weyl_exponent_;
    std::size_t total_ = 0;
};

Spectrum sphere_spectrum(int n, double a, int l_max);

struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i + 1
};

struct DiscretizedOperator {
    int n = 1;           // dimension of the Gaussian soliton
    double r_max = 0.0;  // Dirichlet radius
    int m = 0;           // unknowns at r_i = i h, i = 0..m-1; u(r_max) = 0
    double a = 0.0;
    double shift = 0.0;  // extra constant potential
    double h = 0.0;
    std::vector<double> radii;
    std::vector<double> weights;  // cell volumes, so int u dv ~ sum w_i u_i
    std::vector<double> lower, diag, upper;  // A u = lower u_{i-1} + diag u_i + upper u_{i+1}
    SymTridiagonal symmetric;                 // W^{1/2} A W^{-1/2}

    std::vector<double> apply(const std::vector<double>& u) const;
    double weighted_inner(const std::vector<double>& u, const std::vector<double>& v) const;
};

/// Radial Dirichlet operator on B(0, r_max) for gaussian:n. Requires m >= 16.
DiscretizedOperator discretize_radial(const SolitonSpace& space, double r_max, int m, double a,
                                      double shift = 0.0);

/// k smallest eigenvalues of a symmetric tridiagonal matrix (LAPACK dstevr).
Spectrum eigen_solve(const SymTridiagonal& matrix, int k, double weyl_exponent = 0.5);
Spectrum eigen_solve(const DiscretizedOperator& op, int k);

struct EigenPairs {
    std::vector<double> values;
    /// Eigenvectors of A in grid coordinates, orthonormal in the weighted inner product.
    std::vector<std::vector<double>> vectors;
};
EigenPairs eigen_pairs(const DiscretizedOperator& op, int k);

struct PartitionValue {
    double partial = 0.0;
    double tail_estimate = 0.0;
    double total() const noexcept { return partial + tail_estimate; }
};

/// sum_i exp(-lambda_i t) with a Weyl-law estimate of the truncated tail.
PartitionValue partition_function(const Spectrum& spectrum, double t);

}  // namespace solitonlab
