#pragma once

// Excitation-sector Hamiltonians of the atom-pair / three-level system.
//
// Sector m spans {|1,m-2>, |0,m-1>, |-1,m>} (Dicke label, photon number).
// Energies are in units of the single-atom coupling g.

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "micromaser/errors.hpp"

namespace micromaser {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

class SectorIndex {
 public:
  explicit SectorIndex(long m) : m_(m) {
    if (m < 2) {
      throw InvalidSector("sector index must be >= 2, got " +
                          std::to_string(m));
    }
  }
  long value() const { return m_; }

 private:
  long m_;
};

struct SectorHamiltonian {
  SectorIndex m;
  double delta = 0.0;  // one-photon detuning, units of g
  Matrix3 entries = Matrix3::Zero();
};

// Columns of `vectors` are orthonormal eigenvectors; ordering is not
// meaningful to callers.
struct EigenSystem {
  Vector3 lambdas = Vector3::Zero();
  Matrix3 vectors = Matrix3::Identity();
};

inline SectorHamiltonian build_sector(SectorIndex m, double delta) {
  if (!(delta >= 0.0)) {
    throw ConfigError("detuning must be >= 0");
  }
  const double n = static_cast<double>(m.value());
  const double upper = std::sqrt(2.0 * (n - 1.0));
  const double lower = std::sqrt(2.0 * n);
  SectorHamiltonian h{m, delta, Matrix3::Zero()};
  h.entries(0, 0) = -delta;
  h.entries(2, 2) = -delta;
  h.entries(0, 1) = h.entries(1, 0) = upper;
  h.entries(1, 2) = h.entries(2, 1) = lower;
  return h;
}

// Closed-form dressed states on resonance. Column order: lambda_0 = 0,
// lambda_+, lambda_-.
inline EigenSystem eigensystem_resonant(SectorIndex m) {
  const double n = static_cast<double>(m.value());
  const double split = std::sqrt(2.0 * (2.0 * n - 1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  EigenSystem es;
  es.lambdas << 0.0, split, -split;
  // zero mode
  es.vectors(0, 0) = std::sqrt(n / (2.0 * n - 1.0));
  es.vectors(1, 0) = 0.0;
  es.vectors(2, 0) = -std::sqrt((n - 1.0) / (2.0 * n - 1.0));
  // + mode
  es.vectors(0, 1) = -std::sqrt((n - 1.0) / (4.0 * n - 2.0));
  es.vectors(1, 1) = -inv_sqrt2;
  es.vectors(2, 1) = -std::sqrt(n / (4.0 * n - 2.0));
  // - mode
  es.vectors(0, 2) = -std::sqrt((n - 1.0) / (4.0 * n - 2.0));
  es.vectors(1, 2) = inv_sqrt2;
  es.vectors(2, 2) = -std::sqrt(n / (4.0 * n - 2.0));
  return es;
}

inline EigenSystem eigensystem_general(const SectorHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(h.entries,
                                                Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("3x3 symmetric eigensolver failed");
  }
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace micromaser
