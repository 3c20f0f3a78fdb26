#pragma once

// Recovering an integer lattice from noisy real period vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"

namespace tpzmc {

struct PeriodLattice {
  std::vector<Vec3> periods;
  int rank = 0;
  std::vector<Vec3> basis;
  double residual = 0.0;
};

enum class Periodicity { NonPeriodic, SinglyPeriodic, DoublyPeriodic, TriplyPeriodic };

inline const char* to_string(Periodicity p) {
  switch (p) {
    case Periodicity::NonPeriodic: return "non-periodic";
    case Periodicity::SinglyPeriodic: return "singly-periodic";
    case Periodicity::DoublyPeriodic: return "doubly-periodic";
    case Periodicity::TriplyPeriodic: return "triply-periodic";
  }
  return "?";
}

inline Periodicity periodicity_classify(const PeriodLattice& lat) {
  switch (lat.rank) {
    case 0: return Periodicity::NonPeriodic;
    case 1: return Periodicity::SinglyPeriodic;
    case 2: return Periodicity::DoublyPeriodic;
    default: return Periodicity::TriplyPeriodic;
  }
}

namespace detail {

inline Eigen::Vector3d to_eigen(const Vec3& v) { return {v.c0, v.c1, v.c2}; }
inline Vec3 from_eigen(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

/// Least-squares coordinates of v in the column basis B.
inline Eigen::VectorXd coords(const Eigen::MatrixXd& B, const Eigen::Vector3d& v) {
  return B.colPivHouseholderQr().solve(v);
}

/// Row-style Hermite reduction of integer rows; returns the nonzero rows.
inline std::vector<std::vector<std::int64_t>> hermite_rows(std::vector<std::vector<std::int64_t>> rows, int cols) {
  std::size_t pivot = 0;
  for (int c = 0; c < cols && pivot < rows.size(); ++c) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot; r < rows.size(); ++r)
        if (rows[r][c] != 0 && (best == rows.size() || std::llabs(rows[r][c]) < std::llabs(rows[best][c]))) best = r;
      if (best == rows.size()) break;
      std::swap(rows[pivot], rows[best]);
      bool done = true;
      for (std::size_t r = pivot + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const std::int64_t q = rows[r][c] / rows[pivot][c];
        for (int k = 0; k < cols; ++k) rows[r][k] -= q * rows[pivot][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (pivot < rows.size() && rows[pivot][c] != 0) ++pivot;
  }
  rows.resize(pivot);
  return rows;
}

/// LLL reduction (delta = 0.75) of a short list of independent vectors.
inline std::vector<Eigen::Vector3d> lll(std::vector<Eigen::Vector3d> b) {
  const int n = static_cast<int>(b.size());
  if (n < 2) return b;
  auto gso = [&](std::vector<Eigen::Vector3d>& bs, Eigen::MatrixXd& mu) {
    bs = b;
    mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b[i].dot(bs[j]) / bs[j].squaredNorm();
        bs[i] -= mu(i, j) * bs[j];
      }
    }
  };
  std::vector<Eigen::Vector3d> bs;
  Eigen::MatrixXd mu;
  gso(bs, mu);
  int k = 1, guard = 0;
  while (k < n && guard++ < 10000) {
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        b[k] -= q * b[j];
        gso(bs, mu);
      }
    }
    if (bs[k].squaredNorm() >= (0.75 - mu(k, k - 1) * mu(k, k - 1)) * bs[k - 1].squaredNorm()) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gso(bs, mu);
      k = std::max(k - 1, 1);
    }
  }
  return b;
}

/// Max over periods of the distance to the nearest integer combination of basis.
inline double integer_residual(const std::vector<Vec3>& periods, const std::vector<Vec3>& basis) {
  if (basis.empty()) {
    double r = 0.0;
    for (const auto& p : periods) r = std::max(r, norm(p));
    return r;
  }
  Eigen::MatrixXd B(3, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) B.col(j) = to_eigen(basis[j]);
  double worst = 0.0;
  for (const auto& p : periods) {
    const Eigen::Vector3d v = to_eigen(p);
    Eigen::VectorXd c = coords(B, v);
    for (int j = 0; j < c.size(); ++j) c[j] = std::round(c[j]);
    worst = std::max(worst, (B * c - v).norm());
  }
  return worst;
}

}  // namespace detail

/// Finds rank and a reduced basis such that every period is an integer
/// combination of the basis within tol. Throws LatticeError when no lattice
/// with denominators up to 64 relative to a greedy real basis fits.
inline PeriodLattice lattice_detect(const std::vector<Vec3>& periods, double tol) {
  if (periods.empty()) throw Error(ErrorKind::Precondition, "lattice detection needs at least one period");
  if (!(tol > 0.0)) throw Error(ErrorKind::Parameter, "lattice tolerance must be positive");
  PeriodLattice out;
  out.periods = periods;

  std::vector<Eigen::Vector3d> vs;
  double scale = 0.0;
  for (const auto& p : periods) {
    if (!p.finite()) throw LatticeError("non-finite period vector", std::numeric_limits<double>::infinity());
    if (norm(p) > tol) vs.push_back(detail::to_eigen(p));
    scale = std::max(scale, norm(p));
  }
  if (vs.empty()) {
    out.residual = scale;
    return out;
  }

  // Greedy real basis: repeatedly take the vector with the largest component
  // orthogonal to the span so far.
  const double indep = std::max(std::sqrt(tol) * scale, 10.0 * tol);
  std::vector<Eigen::Vector3d> b0, ortho;
  for (;;) {
    double best = indep;
    int pick = -1;
    Eigen::Vector3d pick_res;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Eigen::Vector3d r = vs[i];
      for (const auto& q : ortho) r -= r.dot(q) * q;
      if (r.norm() > best) {
        best = r.norm();
        pick = static_cast<int>(i);
        pick_res = r;
      }
    }
    if (pick < 0 || b0.size() == 3) break;
    b0.push_back(vs[pick]);
    ortho.push_back(pick_res.normalized());
  }
  const int rank = static_cast<int>(b0.size());
  Eigen::MatrixXd B(3, rank);
  for (int j = 0; j < rank; ++j) B.col(j) = b0[j];

  std::vector<Eigen::VectorXd> cs;
  for (const auto& v : vs) cs.push_back(detail::coords(B, v));

  double best_res = std::numeric_limits<double>::infinity();
  int denom = 0;
  for (int d = 1; d <= 64; ++d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Eigen::VectorXd c = cs[i] * d;
      for (int j = 0; j < rank; ++j) c[j] = std::round(c[j]);
      worst = std::max(worst, (B * c / d - vs[i]).norm());
    }
    best_res = std::min(best_res, worst);
    if (worst <= tol) {
      denom = d;
      break;
    }
  }
  if (denom == 0) {
    std::ostringstream msg;
    msg << "no integer lattice fits the periods (best residual " << best_res << ", tolerance " << tol << ")";
    throw LatticeError(msg.str(), best_res);
  }

  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& c : cs) {
    std::vector<std::int64_t> row(rank);
    for (int j = 0; j < rank; ++j) row[j] = static_cast<std::int64_t>(std::llround(c[j] * denom));
    rows.push_back(row);
  }
  rows = detail::hermite_rows(std::move(rows), rank);

  std::vector<Eigen::Vector3d> basis;
  for (const auto& row : rows) {
    Eigen::VectorXd c(rank);
    for (int j = 0; j < rank; ++j) c[j] = static_cast<double>(row[j]) / denom;
    basis.push_back(B * c);
  }
  basis = detail::lll(std::move(basis));

  for (auto& v : basis) {
    for (int k = 0; k < 3; ++k) {
      if (std::abs(v[k]) > tol) {
        if (v[k] < 0) v = -v;
        break;
      }
    }
  }
  std::sort(basis.begin(), basis.end(), [tol](const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
    if (std::abs(x.norm() - y.norm()) > tol) return x.norm() < y.norm();
    for (int k = 0; k < 3; ++k)
      if (std::abs(x[k] - y[k]) > tol) return x[k] > y[k];
    return false;
  });

  out.rank = rank;
  for (const auto& v : basis) out.basis.push_back(detail::from_eigen(v));
  out.residual = detail::integer_residual(periods, out.basis);
  return out;
}

}  // namespace tpzmc
