#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

// Periodic spectral utilities on uniform grids over [0, length).
// All routines assume the sampled function is smooth and periodic; grid
// sizes must be even so the antisymmetric differentiation matrix exists.

namespace shrinklab::fourier {

using Eigen::ArrayXd;
using Eigen::ArrayXcd;
using Eigen::MatrixXd;

// Forward transform, unnormalized: c_k = sum_j f_j exp(-2*pi*i*j*k/N).
ArrayXcd spectrum(const ArrayXd& f);

// Real part of the normalized inverse transform.
ArrayXd inverse_spectrum(const ArrayXcd& c);

// d^order f / d sigma^order. The Nyquist mode is zeroed for odd orders.
ArrayXd derivative(const ArrayXd& f, double length, int order = 1);

// Antiderivative G with G(0) = 0 and G' = f. Includes the linear ramp
// mean(f)*sigma; the ramp coefficient is returned through mean_out.
ArrayXd antiderivative(const ArrayXd& f, double length, double* mean_out = nullptr);

// Dense first-derivative matrix (exactly antisymmetric), even n only.
MatrixXd diff_matrix(int n, double length);

// Amplitude of cosine/sine mode j: |c_j| * 2/N for j >= 1, |c_0|/N for j = 0.
ArrayXd mode_amplitudes(const ArrayXd& f, int count);

// Periodic trapezoid rule (spectrally accurate for smooth periodic data).
inline double integrate(const ArrayXd& f, double length) {
  return f.sum() * (length / static_cast<double>(f.size()));
}

// Periodic cubic spline evaluation of `values` (on the uniform grid) at
// arbitrary parameters in [0, length).
ArrayXd resample_periodic(const ArrayXd& values, const ArrayXd& at, double length);

}  // namespace shrinklab::fourier
