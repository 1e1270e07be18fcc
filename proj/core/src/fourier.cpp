#include "shrinklab/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace shrinklab::fourier {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_even(Eigen::Index n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("periodic grid size must be even and >= 4");
  }
}

std::vector<std::complex<double>> to_complex(const ArrayXd& f) {
  std::vector<std::complex<double>> v(static_cast<size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) v[static_cast<size_t>(i)] = f[i];
  return v;
}

}  // namespace

ArrayXcd spectrum(const ArrayXd& f) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in = to_complex(f);
  std::vector<std::complex<double>> out(in.size());
  fft.fwd(out, in);
  ArrayXcd c(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) c[i] = out[static_cast<size_t>(i)];
  return c;
}

ArrayXd inverse_spectrum(const ArrayXcd& c) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(static_cast<size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) in[static_cast<size_t>(i)] = c[i];
  std::vector<std::complex<double>> out(in.size());
  fft.inv(out, in);
  ArrayXd g(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) g[i] = out[static_cast<size_t>(i)].real();
  return g;
}

ArrayXd derivative(const ArrayXd& f, double length, int order) {
  const Eigen::Index n = f.size();
  check_even(n);
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in = to_complex(f);
  std::vector<std::complex<double>> c(in.size());
  fft.fwd(c, in);

  const double omega = 2.0 * kPi / length;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index k = (j <= n / 2) ? j : j - n;
    if (k == n / 2 && order % 2 == 1) {
      c[static_cast<size_t>(j)] = 0.0;
      continue;
    }
    std::complex<double> ik(0.0, omega * static_cast<double>(k));
    c[static_cast<size_t>(j)] *= std::pow(ik, order);
  }

  std::vector<std::complex<double>> out(in.size());
  fft.inv(out, c);
  ArrayXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = out[static_cast<size_t>(i)].real();
  return g;
}

ArrayXd antiderivative(const ArrayXd& f, double length, double* mean_out) {
  const Eigen::Index n = f.size();
  check_even(n);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in = to_complex(f);
  std::vector<std::complex<double>> c(in.size());
  fft.fwd(c, in);

  const double mean = c[0].real() / static_cast<double>(n);
  if (mean_out) *mean_out = mean;

  const double omega = 2.0 * kPi / length;
  c[0] = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    const Eigen::Index k = (j <= n / 2) ? j : j - n;
    if (k == n / 2) {
      c[static_cast<size_t>(j)] = 0.0;
      continue;
    }
    c[static_cast<size_t>(j)] /= std::complex<double>(0.0, omega * static_cast<double>(k));
  }

  std::vector<std::complex<double>> out(in.size());
  fft.inv(out, c);

  const double h = length / static_cast<double>(n);
  ArrayXd g(n);
  const double g0 = out[0].real();
  for (Eigen::Index i = 0; i < n; ++i) {
    g[i] = out[static_cast<size_t>(i)].real() - g0 + mean * h * static_cast<double>(i);
  }
  return g;
}

MatrixXd diff_matrix(int n, double length) {
  check_even(n);
  MatrixXd d = MatrixXd::Zero(n, n);
  const double scale = kPi / length;  // (2*pi/L) * (1/2)
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const int diff = j - k;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      const double v = scale * sign / std::tan(kPi * static_cast<double>(diff) / n);
      d(j, k) = v;
      d(k, j) = -v;
    }
  }
  return d;
}

ArrayXd mode_amplitudes(const ArrayXd& f, int count) {
  const Eigen::Index n = f.size();
  ArrayXcd c = spectrum(f);
  ArrayXd a(count);
  for (int j = 0; j < count; ++j) {
    const double norm = (j == 0) ? 1.0 / static_cast<double>(n) : 2.0 / static_cast<double>(n);
    a[j] = std::abs(c[j]) * norm;
  }
  return a;
}

ArrayXd resample_periodic(const ArrayXd& values, const ArrayXd& at, double length) {
  const Eigen::Index n = values.size();
  if (n < 4) throw std::invalid_argument("resample_periodic needs >= 4 samples");
  const double h = length / static_cast<double>(n);

  // Periodic cubic spline: cyclic system M[i-1] + 4 M[i] + M[i+1] = rhs[i]
  // for the node second derivatives, via Sherman-Morrison. Writing the
  // cyclic matrix as T + u u^T with u = e_0 + e_{n-1} requires the first
  // and last diagonal entries of T to be 3.
  ArrayXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ym = values[(i + n - 1) % n];
    const double y0 = values[i];
    const double yp = values[(i + 1) % n];
    rhs[i] = 6.0 * (yp - 2.0 * y0 + ym) / (h * h);
  }

  auto solve_tridiag = [&](const ArrayXd& b) {
    auto diag = [&](Eigen::Index i) { return (i == 0 || i == n - 1) ? 3.0 : 4.0; };
    ArrayXd cp(n), dp(n);
    cp[0] = 1.0 / diag(0);
    dp[0] = b[0] / diag(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double m = diag(i) - cp[i - 1];
      cp[i] = 1.0 / m;
      dp[i] = (b[i] - dp[i - 1]) / m;
    }
    ArrayXd x(n);
    x[n - 1] = dp[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  };

  ArrayXd u = ArrayXd::Zero(n);
  u[0] = 1.0;
  u[n - 1] = 1.0;
  ArrayXd z1 = solve_tridiag(rhs);
  ArrayXd z2 = solve_tridiag(u);
  const double factor = (z1[0] + z1[n - 1]) / (1.0 + z2[0] + z2[n - 1]);
  ArrayXd m2 = z1 - factor * z2;  // spline second derivatives at nodes

  ArrayXd out(at.size());
  for (Eigen::Index j = 0; j < at.size(); ++j) {
    double t = std::fmod(at[j], length);
    if (t < 0) t += length;
    const auto i0 = static_cast<Eigen::Index>(std::floor(t / h)) % n;
    const Eigen::Index i1 = (i0 + 1) % n;
    const double a = (static_cast<double>(i0 + 1) * h - t) / h;
    const double b = 1.0 - a;
    out[j] = a * values[i0] + b * values[i1] +
             ((a * a * a - a) * m2[i0] + (b * b * b - b) * m2[i1]) * (h * h) / 6.0;
  }
  return out;
}

}  // namespace shrinklab::fourier
