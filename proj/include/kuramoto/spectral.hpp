#pragma once

// Eigen-machinery for the linear propagator x(t) = exp(gamma t A) x(0).
//
// Two routes to an eigensystem of the adjacency matrix:
//   - circulant matrices (ring, complete): closed-form Fourier spectrum,
//       u_rs = N^{-1/2} exp(-2 pi i r s / N),
//       E_r  = sum_j c_j exp(-2 pi i r j / N),     (0-based r, s, j);
//   - any symmetric matrix: cyclic Jacobi rotations.
// The propagator is applied in the eigenbasis, V exp(gamma t D) V^{-1} x0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kuramoto/error.hpp"
#include "kuramoto/format.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/matrix.hpp"
#include "kuramoto/state.hpp"

namespace kuramoto {

enum class SpectrumSource { cdt, numerical };

inline std::string_view to_string(SpectrumSource s) { return s == SpectrumSource::cdt ? "cdt" : "numerical"; }

struct EigenSystem {
  std::vector<cdouble> eigenvalues;
  Matrix<cdouble> basis;          // columns are eigenvectors
  Matrix<cdouble> inverse_basis;  // basis^{-1}
  SpectrumSource source = SpectrumSource::numerical;

  std::size_t size() const noexcept { return eigenvalues.size(); }

  double max_real_eigenvalue() const {
    double m = -std::numeric_limits<double>::infinity();
    for (auto l : eigenvalues) m = std::max(m, l.real());
    return m;
  }
};

// ---------------------------------------------------------------------------
// Circulant spectra

namespace detail {
/// exp(-2 pi i m / n) with the index reduced mod n first, so large r*s keep full accuracy.
inline cdouble fourier_root(std::size_t m, std::size_t n) {
  return std::polar(1.0, -two_pi * static_cast<double>(m % n) / static_cast<double>(n));
}
}  // namespace detail

inline std::vector<cdouble> cdt_eigenvalues(const GeneratingVector& g) {
  const std::size_t n = g.size();
  detail::require(n >= 1, "cdt_eigenvalues: empty generating vector");
  std::vector<cdouble> e(n);
  for (std::size_t r = 0; r < n; ++r) {
    cdouble sum{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
      if (g.c[j] != 0.0) sum += g.c[j] * detail::fourier_root(r * j, n);
    e[r] = sum;
  }
  return e;
}

/// The unitary Fourier matrix U.
inline Matrix<cdouble> cdt_fourier_matrix(std::size_t n) {
  detail::require(n >= 1, "cdt_fourier_matrix: n must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix<cdouble> u(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) u(r, s) = scale * detail::fourier_root(r * s, n);
  return u;
}

/// Eigensystem of circ(c) with c as first row: column r of U is the
/// eigenvector for E_r, and U^H is the inverse basis.
inline EigenSystem cdt_eigensystem(const GeneratingVector& g) {
  EigenSystem es;
  es.eigenvalues = cdt_eigenvalues(g);
  es.basis = cdt_fourier_matrix(g.size());
  es.inverse_basis = conjugate_transpose(es.basis);
  es.source = SpectrumSource::cdt;
  return es;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver

struct JacobiOptions {
  double relative_tolerance = 1e-12;  // on off-diagonal Frobenius norm, relative to ||A||_F
  std::size_t max_sweeps = 100;
};

inline EigenSystem eigendecompose_symmetric(Matrix<double> a, JacobiOptions opts = {}) {
  detail::require(a.rows() == a.cols() && a.rows() >= 1, "eigendecompose_symmetric: matrix must be square");
  const std::size_t n = a.rows();
  double frob2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      detail::require(std::abs(a(i, j) - a(j, i)) <= 1e-12, "eigendecompose_symmetric: matrix is not symmetric");
      frob2 += a(i, j) * a(i, j);
    }
  const double threshold = opts.relative_tolerance * std::sqrt(frob2);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  auto v = Matrix<double>::identity(n);
  std::size_t sweep = 0;
  for (;; ++sweep) {
    if (off_norm() <= threshold) break;
    if (sweep == opts.max_sweeps)
      throw ConvergenceFailure("Jacobi eigensolver did not converge in " + std::to_string(sweep) + " sweeps", sweep);

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenSystem es;
  es.source = SpectrumSource::numerical;
  es.eigenvalues.resize(n);
  es.basis = Matrix<cdouble>(n, n);
  es.inverse_basis = Matrix<cdouble>(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    es.eigenvalues[col] = cdouble(a(src, src), 0.0);
    for (std::size_t row = 0; row < n; ++row) {
      es.basis(row, col) = v(row, src);
      es.inverse_basis(col, row) = v(row, src);
    }
  }
  return es;
}

inline EigenSystem eigendecompose_symmetric(const AdjacencyMatrix& a, JacobiOptions opts = {}) {
  return eigendecompose_symmetric(a.as_real(), opts);
}

/// Real parts, sorted descending. For comparing spectra from the two routes.
inline std::vector<double> sorted_real_spectrum(std::span<const cdouble> eigenvalues) {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (auto l : eigenvalues) out.push_back(l.real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ---------------------------------------------------------------------------
// Propagator

enum class OverflowGuard { off, on };

/// Holds V^{-1} x0 so repeated evaluations at different times cost one
/// matrix-vector product each.
class Propagator {
public:
  Propagator(const EigenSystem& es, const ComplexState& x0) : es_(&es), coeffs_(es.size()) {
    detail::require(x0.size() == es.size(), "propagator: state dimension does not match eigensystem");
    const std::size_t n = es.size();
    for (std::size_t r = 0; r < n; ++r) {
      cdouble s{0.0, 0.0};
      const auto row = es.inverse_basis.row(r);
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x0.x[j];
      coeffs_[r] = s;
    }
    lambda_max_ = es.max_real_eigenvalue();
  }

  /// exp(gamma t A) x0, or that divided by exp(gamma t lambda_max) when guarded.
  ComplexState at(double gamma, double t, OverflowGuard guard) const {
    detail::require(std::isfinite(gamma), "propagator: gamma must be finite");
    detail::require(std::isfinite(t) && t >= 0.0, "propagator: t must be finite and non-negative");
    const std::size_t n = es_->size();
    const double shift = guard == OverflowGuard::on ? gamma * t * lambda_max_ : 0.0;
    constexpr double max_exponent = 709.782712893384;  // log(DBL_MAX)

    std::vector<cdouble> scaled(n);
    for (std::size_t r = 0; r < n; ++r) {
      const cdouble z = gamma * t * es_->eigenvalues[r];
      // Subtract the shift before exponentiating, so the guarded path never sees a huge exponent.
      const double re = z.real() - shift;
      if (guard == OverflowGuard::off && re > max_exponent)
        throw PropagatorOverflow("propagator exponent " + format_double(re) + " exceeds the double range");
      scaled[r] = std::exp(cdouble(re, z.imag())) * coeffs_[r];
    }

    ComplexState out;
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cdouble s{0.0, 0.0};
      const auto row = es_->basis.row(i);
      for (std::size_t r = 0; r < n; ++r) s += row[r] * scaled[r];
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw PropagatorOverflow("propagated state overflowed at t=" + format_double(t));
      out.x[i] = s;
    }
    return out;
  }

  double lambda_max() const noexcept { return lambda_max_; }

private:
  const EigenSystem* es_;
  std::vector<cdouble> coeffs_;
  double lambda_max_ = 0.0;
};

inline ComplexState apply_propagator(const EigenSystem& es, double gamma, double t, const ComplexState& x0,
                                     OverflowGuard guard = OverflowGuard::off) {
  return Propagator(es, x0).at(gamma, t, guard);
}

// ---------------------------------------------------------------------------
// CSV export

inline void write_eigenvalues_csv(std::ostream& os, std::span<const cdouble> eigenvalues) {
  os << "lambda_re,lambda_im\n";
  for (auto l : eigenvalues) os << format_double(l.real() + 0.0) << ',' << format_double(l.imag() + 0.0) << '\n';
}

/// Basis entries in column-major order, one "re,im" per line.
inline void write_eigenvectors_csv(std::ostream& os, const Matrix<cdouble>& basis) {
  os << "v_re,v_im\n";
  for (std::size_t c = 0; c < basis.cols(); ++c)
    for (std::size_t r = 0; r < basis.rows(); ++r)
      os << format_double(basis(r, c).real() + 0.0) << ',' << format_double(basis(r, c).imag() + 0.0) << '\n';
}

}  // namespace kuramoto
