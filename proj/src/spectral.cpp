#include "solitonlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <lapacke.h>

#include "solitonlab/error.hpp"

namespace solitonlab {

std::string_view to_string(SpectrumSource source) {
    return source == SpectrumSource::analytic ? "analytic" : "discretized";
}

long spherical_harmonic_dimension(int n, int l) {
    if (l < 0) return 0;
    if (l == 0) return 1;
    // (2l + n - 1) (l + n - 2)! / (l! (n - 1)!)
    const double log_dim = std::log(2.0 * l + n - 1) + std::lgamma(l + n - 1.0) -
                           std::lgamma(l + 1.0) - std::lgamma(static_cast<double>(n));
    return std::lround(std::exp(log_dim));
}

std::vector<double> zonal_harmonics(int n, int l_max, double x) {
    std::vector<double> z(static_cast<std::size_t>(std::max(l_max, 0)) + 1, 1.0);
    if (l_max >= 1) z[1] = x;
    // Gegenbauer recurrence divided through by C_l(1):
    //   Z_{l+1} = [2 (l + alpha) x Z_l - l Z_{l-1}] / (l + 2 alpha),  alpha = (n - 1)/2.
    const double alpha = 0.5 * (n - 1);
    for (int l = 1; l < l_max; ++l) {
        z[l + 1] = (2.0 * (l + alpha) * x * z[l] - l * z[l - 1]) / (l + 2.0 * alpha);
    }
    return z;
}

Spectrum::Spectrum(std::vector<SpectralLevel> levels, double a, SpectrumSource source,
                   double weyl_exponent)
    : levels_(std::move(levels)), a_(a), source_(source), weyl_exponent_(weyl_exponent) {
    std::stable_sort(levels_.begin(), levels_.end(),
                     [](const SpectralLevel& p, const SpectralLevel& q) { return p.value < q.value; });
    for (const auto& level : levels_) total_ += static_cast<std::size_t>(level.multiplicity);
}

double Spectrum::eigenvalue(std::size_t k) const {
    if (k == 0 || k > total_) {
        throw Error(ErrorCode::invalid_argument, "eigenvalue index " + std::to_string(k) +
                                                     " outside 1.." + std::to_string(total_));
    }
    std::size_t seen = 0;
    for (const auto& level : levels_) {
        seen += static_cast<std::size_t>(level.multiplicity);
        if (k <= seen) return level.value;
    }
    return levels_.back().value;
}

std::vector<double> Spectrum::expanded(std::size_t count) const {
    std::vector<double> out;
    out.reserve(std::min(count, total_));
    for (const auto& level : levels_) {
        for (long j = 0; j < level.multiplicity && out.size() < count; ++j) out.push_back(level.value);
        if (out.size() >= count) break;
    }
    return out;
}

std::size_t Spectrum::counting_function(double lambda) const {
    std::size_t count = 0;
    for (const auto& level : levels_) {
        if (level.value > lambda) break;
        count += static_cast<std::size_t>(level.multiplicity);
    }
    return count;
}

Spectrum sphere_spectrum(int n, double a, int l_max) {
    if (n < 2) throw Error(ErrorCode::dimension_out_of_range, "sphere spectrum requires n >= 2");
    if (l_max < 0) throw Error(ErrorCode::invalid_argument, "l_max must be >= 0");
    const double r2 = 2.0 * (n - 1);
    const double shift = a * 0.5 * n;
    std::vector<SpectralLevel> levels;
    levels.reserve(static_cast<std::size_t>(l_max) + 1);
    for (int l = 0; l <= l_max; ++l) {
        levels.push_back({l * (l + n - 1.0) / r2 + shift, spherical_harmonic_dimension(n, l), l});
    }
    return Spectrum(std::move(levels), a, SpectrumSource::analytic, 0.5 * n);
}

std::vector<double> DiscretizedOperator::apply(const std::vector<double>& u) const {
    std::vector<double> out(u.size());
    for (int i = 0; i < m; ++i) {
        double s = diag[i] * u[i];
        if (i > 0) s += lower[i] * u[i - 1];
        if (i + 1 < m) s += upper[i] * u[i + 1];
        out[i] = s;
    }
    return out;
}

double DiscretizedOperator::weighted_inner(const std::vector<double>& u,
                                           const std::vector<double>& v) const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += weights[i] * u[i] * v[i];
    return s;
}

DiscretizedOperator discretize_radial(const SolitonSpace& space, double r_max, int m, double a,
                                      double shift) {
    if (space.kind() != SpaceKind::gaussian) {
        throw Error(ErrorCode::kind_mismatch, "radial discretisation is defined for gaussian:n only");
    }
    if (!(r_max > 0.0) || m < 16) {
        throw Error(ErrorCode::invalid_argument, "invalid grid: need r_max > 0 and m >= 16");
    }
    DiscretizedOperator op;
    op.n = space.dimension();
    op.r_max = r_max;
    op.m = m;
    op.a = a;
    op.shift = shift;
    op.h = r_max / m;
    const double h = op.h;
    const int n = op.n;
    const double area = unit_sphere_area(n - 1);

    op.radii.resize(m);
    op.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        op.radii[i] = i * h;
        const double lo = i == 0 ? 0.0 : (i - 0.5) * h;
        const double hi = (i + 0.5) * h;
        op.weights[i] = area * (std::pow(hi, n) - std::pow(lo, n)) / n;
    }
    // Flux coefficient across the face at r_{i+1/2}.
    const auto face = [&](int i) { return area * std::pow((i + 0.5) * h, n - 1) / h; };

    op.lower.assign(m, 0.0);
    op.diag.assign(m, 0.0);
    op.upper.assign(m, 0.0);
    const double potential = a * space.sup_scalar_curvature() + shift;
    for (int i = 0; i < m; ++i) {
        const double right = face(i);  // i = m-1 couples to the Dirichlet value u_m = 0
        const double left = i == 0 ? 0.0 : face(i - 1);
        op.diag[i] = (left + right) / op.weights[i] + potential;
        if (i > 0) op.lower[i] = -left / op.weights[i];
        if (i + 1 < m) op.upper[i] = -right / op.weights[i];
    }

    op.symmetric.diag = op.diag;
    op.symmetric.off.resize(m - 1);
    for (int i = 0; i + 1 < m; ++i) {
        op.symmetric.off[i] = -face(i) / std::sqrt(op.weights[i] * op.weights[i + 1]);
    }
    return op;
}

namespace {

struct RawEigen {
    std::vector<double> values;
    std::vector<double> vectors;  // column-major m x k
};

RawEigen solve_tridiagonal(const SymTridiagonal& matrix, int k, bool want_vectors) {
    const int m = static_cast<int>(matrix.diag.size());
    if (k < 1 || k > m) {
        throw Error(ErrorCode::invalid_argument,
                    "requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(m) + "x" +
                        std::to_string(m) + " matrix");
    }
    std::vector<double> d = matrix.diag;
    std::vector<double> e(static_cast<std::size_t>(m), 0.0);
    std::copy(matrix.off.begin(), matrix.off.end(), e.begin());
    RawEigen out;
    out.values.assign(m, 0.0);
    if (want_vectors) out.vectors.assign(static_cast<std::size_t>(m) * k, 0.0);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', m, d.data(), e.data(), 0.0, 0.0, 1, k,
        0.0, &found, out.values.data(), want_vectors ? out.vectors.data() : nullptr, m, support.data());
    if (info != 0 || found != k) {
        throw Error(ErrorCode::convergence_failure,
                    "dstevr failed (info=" + std::to_string(info) + ", found " + std::to_string(found) +
                        " of " + std::to_string(k) + ")");
    }
    out.values.resize(k);
    if (want_vectors) {
        // Residual check ||S v - lambda v||_inf.
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            const double* v = out.vectors.data() + static_cast<std::size_t>(j) * m;
            for (int i = 0; i < m; ++i) {
                double s = matrix.diag[i] * v[i] - out.values[j] * v[i];
                if (i > 0) s += matrix.off[i - 1] * v[i - 1];
                if (i + 1 < m) s += matrix.off[i] * v[i + 1];
                worst = std::max(worst, std::abs(s));
            }
        }
        const double scale = std::max(1.0, std::abs(out.values.back()));
        if (worst > 1e-8 * scale) {
            throw Error(ErrorCode::convergence_failure,
                        "eigenvector residual " + std::to_string(worst) + " too large");
        }
    }
    return out;
}

}  // namespace

Spectrum eigen_solve(const SymTridiagonal& matrix, int k, double weyl_exponent) {
    const RawEigen raw = solve_tridiagonal(matrix, k, false);
    std::vector<SpectralLevel> levels;
    levels.reserve(raw.values.size());
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        levels.push_back({raw.values[i], 1, static_cast<int>(i) + 1});
    }
    return Spectrum(std::move(levels), 0.0, SpectrumSource::discretized, weyl_exponent);
}

Spectrum eigen_solve(const DiscretizedOperator& op, int k) {
    const Spectrum s = eigen_solve(op.symmetric, k, 0.5);
    return Spectrum(s.levels(), op.a, SpectrumSource::discretized, 0.5);
}

EigenPairs eigen_pairs(const DiscretizedOperator& op, int k) {
    const RawEigen raw = solve_tridiagonal(op.symmetric, k, true);
    EigenPairs out;
    out.values = raw.values;
    const int m = op.m;
    for (int j = 0; j < k; ++j) {
        std::vector<double> v(m);
        const double* col = raw.vectors.data() + static_cast<std::size_t>(j) * m;
        // Back from the symmetrized basis: u = W^{-1/2} v.
        for (int i = 0; i < m; ++i) v[i] = col[i] / std::sqrt(op.weights[i]);
        // Fix the sign so the value at the origin is non-negative.
        if (v[0] < 0.0) {
            for (double& x : v) x = -x;
        }
        out.vectors.push_back(std::move(v));
    }
    return out;
}

PartitionValue partition_function(const Spectrum& spectrum, double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "partition function needs t > 0");
    PartitionValue out;
    for (const auto& level : spectrum.levels()) {
        out.partial += static_cast<double>(level.multiplicity) * std::exp(-level.value * t);
    }
    if (spectrum.levels().empty()) return out;
    // Weyl growth fitted through the last level: N(lambda) ~ C lambda^p. The
    // tail sum is then C p int_{lambda_last}^inf lambda^{p-1} e^{-lambda t},
    // with the spectrum shifted so that the fit is taken on lambda - lambda_1 >= 0.
    const double p = spectrum.weyl_exponent();
    const double base = std::min(0.0, spectrum.levels().front().value);
    const double last = spectrum.levels().back().value - base;
    if (last <= 0.0 || p <= 0.0) return out;
    const double c = static_cast<double>(spectrum.size()) / std::pow(last, p);
    out.tail_estimate = c * p * std::pow(t, -p) * boost::math::tgamma(p, last * t) * std::exp(-base * t);
    return out;
}

}  // namespace solitonlab
