// Hermitian matrix sets {alpha_1..alpha_n, beta} obeying the Dirac algebra
// in n+1 dimensions: alpha_i^2 = beta^2 = 1, {alpha_i, beta} = 0 and
// {alpha_i, alpha_j} = 2 delta_ij.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace diracstep::algebra {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-12;

/// Thrown when a representation is not even structurally a matrix set of
/// one common dimension. A well-formed set that fails the algebra is
/// reported through VerificationReport instead.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity(int dim);
ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

struct DiracRepresentation {
  int n = 0;    // spatial dimension
  int dim = 0;  // matrix dimension
  std::vector<ComplexMatrix> alphas;
  ComplexMatrix beta;
};

struct IdentityFailure {
  std::string identity;
  double deviation = 0.0;
};

struct VerificationReport {
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = kDefaultTolerance;
  std::vector<IdentityFailure> failures;
};

/// Smallest matrix dimension admitting n+1 mutually anticommuting Hermitian
/// involutions: 2^ceil(n/2). Throws std::invalid_argument for n < 1.
int minimal_spinor_dimension(int n);

/// Exact representation of dimension minimal_spinor_dimension(n).
///
/// n = 1 is {sigma_x; sigma_z}, n = 2 is {sigma_x, sigma_y; sigma_z}, and
/// n -> n+2 lifts a representation by
///   alpha_i' = sigma_x (x) alpha_i,  alpha_{n+1}' = sigma_x (x) beta,
///   alpha_{n+2}' = sigma_y (x) I,    beta' = sigma_z (x) I.
/// Every entry is one of 0, +-1, +-i.
DiracRepresentation build_representation(int n);

/// Checks, in order: Hermiticity, squares equal to I, all anticommutators,
/// zero traces and the spectrum condition (M - I)(M + I) = 0. Deviations are
/// the largest absolute entry of each residual. Throws StructureError when
/// the matrices do not share one dimension.
VerificationReport verify_clifford(const DiracRepresentation& rep,
                                   double tolerance = kDefaultTolerance);

/// {U alpha_i U^dagger, U beta U^dagger}.
DiracRepresentation conjugate(const DiracRepresentation& rep, const ComplexMatrix& unitary);

}  // namespace diracstep::algebra
