#pragma once

// Lanczos-based Krylov routines shared by the tree-tensor-network sweeps
// (block vectors) and the exact-diagonalization path (flat vectors).
// The operator is assumed Hermitian throughout.

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "ttnring/symtensor.hpp"

namespace ttnring {

template <class Vec>
struct KrylovOps;

template <>
struct KrylovOps<Eigen::VectorXcd> {
  static cplx dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.dot(b);  // conjugates a
  }
  static double norm(const Eigen::VectorXcd& a) { return a.norm(); }
  static void scale(Eigen::VectorXcd& v, cplx c) { v *= c; }
  static void axpy(Eigen::VectorXcd& y, cplx c, const Eigen::VectorXcd& x) { y += c * x; }
};

template <>
struct KrylovOps<SymTensor> {
  static cplx dot(const SymTensor& a, const SymTensor& b) { return inner(a, b); }
  static double norm(const SymTensor& a) { return a.norm(); }
  static void scale(SymTensor& v, cplx c) { v.scale(c); }
  static void axpy(SymTensor& y, cplx c, const SymTensor& x) { y.add_scaled(c, x); }
};

struct KrylovStats {
  int matvecs = 0;
  int restarts = 0;
};

// w = exp(pref * H) v for Hermitian H given by `apply`.  `pref` is typically
// -i*dt (real-time step) or a negative real number.  Relative accuracy `tol`.
template <class Vec, class Apply>
Vec krylov_expm(const Apply& apply, const Vec& v, cplx pref, double tol, int max_m = 80,
                KrylovStats* stats = nullptr) {
  using Ops = KrylovOps<Vec>;
  const double beta0 = Ops::norm(v);
  if (beta0 == 0.0) throw NumericalError("krylov_expm: zero vector");

  std::vector<Vec> basis;
  basis.push_back(v);
  Ops::scale(basis[0], cplx(1.0 / beta0, 0));
  std::vector<double> alpha, beta;  // T diag / offdiag

  Eigen::VectorXcd f;
  auto small_exp = [&](int m) {
    Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tm(i, i) = alpha[i];
      if (i + 1 < m) tm(i, i + 1) = tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm);
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i) phases[i] = std::exp(pref * es.eigenvalues()[i]);
    f = es.eigenvectors().cast<cplx>() *
        (phases.array() * es.eigenvectors().row(0).transpose().cast<cplx>().array()).matrix();
  };

  for (int m = 0; m < max_m; ++m) {
    Vec w = apply(basis[m]);
    if (stats) ++stats->matvecs;
    const double a = std::real(Ops::dot(basis[m], w));
    alpha.push_back(a);
    Ops::axpy(w, cplx(-a, 0), basis[m]);
    if (m > 0) Ops::axpy(w, cplx(-beta[m - 1], 0), basis[m - 1]);
    // Full reorthogonalization keeps the basis clean for long steps.
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const cplx c = Ops::dot(basis[i], w);
      Ops::axpy(w, -c, basis[i]);
    }
    const double b = Ops::norm(w);
    small_exp(m + 1);
    const bool happy = b <= 1e-14 * beta0;
    const double err = happy ? 0.0 : std::abs(b * std::abs(f[m]));
    if (happy || err <= tol || m + 1 == max_m) {
      if (!happy && err > tol && m + 1 == max_m)
        throw NumericalError("krylov_expm: no convergence within max_m");
      Vec out = basis[0];
      Ops::scale(out, beta0 * f[0]);
      for (int i = 1; i <= m; ++i) Ops::axpy(out, beta0 * f[i], basis[i]);
      return out;
    }
    beta.push_back(b);
    Ops::scale(w, cplx(1.0 / b, 0));
    basis.push_back(std::move(w));
  }
  throw NumericalError("krylov_expm: unreachable");
}

// Lowest eigenpair of Hermitian H by restarted Lanczos with full
// reorthogonalization.  Residual target: ||Hx - ex|| <= tol * max(1, |e|).
template <class Vec, class Apply>
std::pair<double, Vec> krylov_lowest(const Apply& apply, const Vec& v0, double tol,
                                     int max_m = 40, int max_restarts = 200,
                                     KrylovStats* stats = nullptr) {
  using Ops = KrylovOps<Vec>;
  Vec x = v0;
  const double n0 = Ops::norm(x);
  if (n0 == 0.0) throw NumericalError("krylov_lowest: zero start vector");
  Ops::scale(x, cplx(1.0 / n0, 0));

  double theta = 0;
  for (int cycle = 0; cycle < max_restarts; ++cycle) {
    std::vector<Vec> basis;
    basis.push_back(x);
    std::vector<double> alpha, beta;
    bool happy = false;
    int m = 0;
    for (; m < max_m; ++m) {
      Vec w = apply(basis[m]);
      if (stats) ++stats->matvecs;
      const double a = std::real(Ops::dot(basis[m], w));
      alpha.push_back(a);
      Ops::axpy(w, cplx(-a, 0), basis[m]);
      if (m > 0) Ops::axpy(w, cplx(-beta[m - 1], 0), basis[m - 1]);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const cplx c = Ops::dot(basis[i], w);
        Ops::axpy(w, -c, basis[i]);
      }
      const double b = Ops::norm(w);
      if (b <= 1e-13) {
        happy = true;
        ++m;
        break;
      }
      if (m + 1 < max_m) {
        beta.push_back(b);
        Ops::scale(w, cplx(1.0 / b, 0));
        basis.push_back(std::move(w));
      } else {
        beta.push_back(b);
        ++m;
        break;
      }
    }
    const int dim = static_cast<int>(alpha.size());
    Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      tm(i, i) = alpha[i];
      if (i + 1 < dim) tm(i, i + 1) = tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm);
    theta = es.eigenvalues()[0];
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Vec xn = basis[0];
    Ops::scale(xn, cplx(y[0], 0));
    for (int i = 1; i < static_cast<int>(basis.size()); ++i)
      Ops::axpy(xn, cplx(y[i], 0), basis[i]);
    const double nn = Ops::norm(xn);
    Ops::scale(xn, cplx(1.0 / nn, 0));
    x = std::move(xn);
    // Residual bound for a Lanczos Ritz pair: beta_m * |y[m-1]|; exact
    // subspace (happy breakdown) means the pair is exact.
    const double resid =
        happy ? 0.0 : beta.back() * std::abs(y[dim - 1]);
    if (resid <= tol * std::max(1.0, std::abs(theta))) return {theta, std::move(x)};
    if (stats) ++stats->restarts;
  }
  throw NumericalError("krylov_lowest: no convergence");
}

}  // namespace ttnring
