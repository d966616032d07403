#include "oracles.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace oracle {

namespace {

using Sparse = Eigen::SparseMatrix<std::complex<double>>;
using Vec = Eigen::VectorXcd;

int idx(int m, int n, int cutoff) { return m * cutoff + n; }

/// Annihilation operators on the product space.
void ladder(int cutoff, Sparse& a, Sparse& b) {
  const int dim = cutoff * cutoff;
  std::vector<Eigen::Triplet<std::complex<double>>> ta, tb;
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      if (m > 0) ta.emplace_back(idx(m - 1, n, cutoff), idx(m, n, cutoff), std::sqrt(double(m)));
      if (n > 0) tb.emplace_back(idx(m, n - 1, cutoff), idx(m, n, cutoff), std::sqrt(double(n)));
    }
  a.resize(dim, dim);
  b.resize(dim, dim);
  a.setFromTriplets(ta.begin(), ta.end());
  b.setFromTriplets(tb.begin(), tb.end());
}

/// exp(G) v for anti-Hermitian G via sub-stepped Taylor series.
Vec apply_exp(const Sparse& g, Vec v, double norm_estimate) {
  const int sub = std::max(1, static_cast<int>(std::ceil(norm_estimate * 4.0)));
  const Sparse gs = g / static_cast<double>(sub);
  for (int s = 0; s < sub; ++s) {
    Vec term = v;
    Vec acc = v;
    for (int k = 1; k < 40; ++k) {
      term = gs * term / static_cast<double>(k);
      acc += term;
      if (term.norm() < 1e-17 * acc.norm()) break;
    }
    v = acc;
  }
  return v;
}

} // namespace

FockState build(const FockRecipe& r, int cutoff) {
  const int dim = cutoff * cutoff;
  Sparse a, b;
  ladder(cutoff, a, b);
  const Sparse ad = a.adjoint(), bd = b.adjoint();
  const std::complex<double> i(0.0, 1.0);

  std::vector<std::pair<Sparse, double>> gens;
  if (r.displacement_a != 0.0) gens.push_back({r.displacement_a * (ad - a), r.displacement_a * cutoff});
  if (r.phase_a != 0.0) gens.push_back({(i * r.phase_a) * Sparse(ad * a), r.phase_a * cutoff});
  if (r.squeeze_a != 0.0)
    gens.push_back({(0.5 * r.squeeze_a) * Sparse(a * a - ad * ad), r.squeeze_a * cutoff});
  if (r.two_mode_squeeze != 0.0)
    gens.push_back({r.two_mode_squeeze * Sparse(a * b - ad * bd), r.two_mode_squeeze * cutoff});

  auto weight = [](double n, int k) {
    return n == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::pow(n, k) / std::pow(n + 1.0, k + 1);
  };

  FockState s;
  s.cutoff = cutoff;
  s.rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      const double p = weight(r.n_a, m) * weight(r.n_b, n);
      if (p < 1e-14) continue;
      Vec v = Vec::Zero(dim);
      v(idx(m, n, cutoff)) = 1.0;
      for (const auto& [g, norm] : gens) v = apply_exp(g, v, norm);
      s.rho.noalias() += p * v * v.adjoint();
    }
  return s;
}

double purity(const FockState& s) { return s.rho.squaredNorm(); }

double log_negativity(const FockState& s) {
  const int c = s.cutoff;
  Eigen::MatrixXcd pt(s.rho.rows(), s.rho.cols());
  for (int m = 0; m < c; ++m)
    for (int n = 0; n < c; ++n)
      for (int mp = 0; mp < c; ++mp)
        for (int np = 0; np < c; ++np)
          pt(idx(m, n, c), idx(mp, np, c)) = s.rho(idx(m, np, c), idx(mp, n, c));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  return std::log(es.eigenvalues().cwiseAbs().sum());
}

namespace {

std::array<Sparse, 4> quadratures(int cutoff) {
  Sparse a, b;
  ladder(cutoff, a, b);
  const Sparse ad = a.adjoint(), bd = b.adjoint();
  const std::complex<double> mi(0.0, -1.0);
  const double r2 = std::sqrt(2.0);
  return {Sparse((a + ad) / r2), Sparse(mi * Sparse(a - ad) / r2), Sparse((b + bd) / r2),
          Sparse(mi * Sparse(b - bd) / r2)};
}

} // namespace

Eigen::Vector4d mean(const FockState& s) {
  const auto q = quadratures(s.cutoff);
  Eigen::Vector4d m;
  for (int k = 0; k < 4; ++k) m(k) = (s.rho * q[k]).trace().real();
  return m;
}

Eigen::Matrix4d covariance(const FockState& s) {
  const auto q = quadratures(s.cutoff);
  const Eigen::Vector4d mu = mean(s);
  std::array<Eigen::MatrixXcd, 4> rq, qt;
  for (int k = 0; k < 4; ++k) {
    rq[k] = s.rho * q[k];
    qt[k] = Eigen::MatrixXcd(q[k]).transpose();
  }
  Eigen::Matrix4d c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      // Tr(rho q_i q_j) = sum_kl (rho q_i)_kl (q_j)_lk
      const double ij = rq[i].cwiseProduct(qt[j]).sum().real();
      const double ji = rq[j].cwiseProduct(qt[i]).sum().real();
      c(i, j) = 0.5 * (ij + ji) - mu(i) * mu(j);
    }
  return c;
}

Eigen::Matrix4d care(const Eigen::Matrix4d& a, const Eigen::Matrix4d& d,
                     const Eigen::Matrix<double, 2, 4>& h) {
  Eigen::Matrix<double, 8, 8> ham;
  ham << a.transpose(), -h.transpose() * h, -d, -a;
  Eigen::ComplexEigenSolver<Eigen::Matrix<double, 8, 8>> es(ham);
  Eigen::Matrix<std::complex<double>, 8, 4> basis;
  int k = 0;
  for (int i = 0; i < 8; ++i)
    if (es.eigenvalues()(i).real() < 0.0 && k < 4) basis.col(k++) = es.eigenvectors().col(i);
  const Eigen::Matrix4cd u1 = basis.topRows<4>();
  const Eigen::Matrix4cd u2 = basis.bottomRows<4>();
  const Eigen::Matrix4d x = (u2 * u1.inverse()).real();
  return 0.5 * (x + x.transpose());
}

Ensemble langevin(const saddle::MomentModel& model, const saddle::GaussianState& initial,
                  double dt, std::size_t steps, std::size_t record_every, std::size_t members,
                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Eigen::LLT<Eigen::Matrix4d> chol(initial.cov);
  const Eigen::Matrix4d l = chol.matrixL();
  Eigen::Matrix<double, 4, Eigen::Dynamic> r(4, members);
  for (std::size_t k = 0; k < members; ++k) {
    Eigen::Vector4d z;
    for (int i = 0; i < 4; ++i) z(i) = normal(rng);
    r.col(k) = initial.mean + l * z;
  }
  // half kick on either side of the drift propagator
  const double kick_x = std::sqrt(0.5 * model.diffusion[0] * dt);
  const double kick_y = std::sqrt(0.5 * model.diffusion[1] * dt);
  auto kick = [&] {
    for (std::size_t k = 0; k < members; ++k) {
      r(1, k) += kick_x * normal(rng);
      r(3, k) += kick_y * normal(rng);
    }
  };

  Ensemble e;
  e.members = members;
  auto record = [&](double t) {
    const Eigen::Vector4d mu = r.rowwise().mean();
    const Eigen::Matrix<double, 4, Eigen::Dynamic> c = r.colwise() - mu;
    e.times.push_back(t);
    e.mean.push_back(mu);
    e.cov.push_back(c * c.transpose() / static_cast<double>(members - 1));
  };
  record(initial.time);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = initial.time + static_cast<double>(n) * dt;
    // Classical RK4 propagator of the drift
    const Eigen::Matrix4d a0 = model.drift(t);
    const Eigen::Matrix4d a1 = model.drift(t + 0.5 * dt);
    const Eigen::Matrix4d a2 = model.drift(t + dt);
    const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d k1 = a0;
    const Eigen::Matrix4d k2 = a1 * (id + 0.5 * dt * k1);
    const Eigen::Matrix4d k3 = a1 * (id + 0.5 * dt * k2);
    const Eigen::Matrix4d k4 = a2 * (id + dt * k3);
    const Eigen::Matrix4d phi = id + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    kick();
    r = phi * r;
    kick();
    if ((n + 1) % record_every == 0) record(t + dt);
  }
  return e;
}

} // namespace oracle
