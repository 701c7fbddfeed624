#include "diracstep/algebra.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <complex>

namespace diracstep::algebra {

namespace {

using cd = std::complex<double>;

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string alpha_name(std::size_t i) { return "alpha_" + std::to_string(i + 1); }

void check_structure(const DiracRepresentation& rep) {
  if (rep.n < 1) throw StructureError("representation needs n >= 1, got " + std::to_string(rep.n));
  if (rep.dim < 1) throw StructureError("representation needs dim >= 1");
  if (rep.alphas.size() != static_cast<std::size_t>(rep.n)) {
    throw StructureError("expected " + std::to_string(rep.n) + " alpha matrices, got " +
                         std::to_string(rep.alphas.size()));
  }
  auto check = [&](const ComplexMatrix& m, const std::string& name) {
    if (m.rows() != rep.dim || m.cols() != rep.dim) {
      throw StructureError(name + " is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " + std::to_string(rep.dim) +
                           "x" + std::to_string(rep.dim));
    }
  };
  for (std::size_t i = 0; i < rep.alphas.size(); ++i) check(rep.alphas[i], alpha_name(i));
  check(rep.beta, "beta");
}

}  // namespace

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  return Eigen::kroneckerProduct(lhs, rhs).eval();
}

int minimal_spinor_dimension(int n) {
  if (n < 1) throw std::invalid_argument("spatial dimension must be >= 1, got " + std::to_string(n));
  return 1 << ((n + 1) / 2);
}

DiracRepresentation build_representation(int n) {
  if (n < 1) throw std::invalid_argument("spatial dimension must be >= 1, got " + std::to_string(n));

  DiracRepresentation rep;
  if (n % 2 == 1) {
    rep = {1, 2, {pauli_x()}, pauli_z()};
  } else {
    rep = {2, 2, {pauli_x(), pauli_y()}, pauli_z()};
  }

  const ComplexMatrix sx = pauli_x();
  const ComplexMatrix sy = pauli_y();
  const ComplexMatrix sz = pauli_z();
  while (rep.n < n) {
    DiracRepresentation next;
    next.n = rep.n + 2;
    next.dim = 2 * rep.dim;
    const ComplexMatrix id = identity(rep.dim);
    next.alphas.reserve(static_cast<std::size_t>(next.n));
    for (const auto& alpha : rep.alphas) next.alphas.push_back(kron(sx, alpha));
    next.alphas.push_back(kron(sx, rep.beta));
    next.alphas.push_back(kron(sy, id));
    next.beta = kron(sz, id);
    rep = std::move(next);
  }
  return rep;
}

VerificationReport verify_clifford(const DiracRepresentation& rep, double tolerance) {
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  check_structure(rep);

  VerificationReport report;
  report.tolerance = tolerance;
  auto record = [&](std::string name, double deviation) {
    report.max_deviation = std::max(report.max_deviation, deviation);
    if (!(deviation <= tolerance)) report.failures.push_back({std::move(name), deviation});
  };

  // beta is treated as generator number n so every loop covers the full set.
  std::vector<const ComplexMatrix*> gens;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
    gens.push_back(&rep.alphas[i]);
    names.push_back(alpha_name(i));
  }
  gens.push_back(&rep.beta);
  names.emplace_back("beta");

  const ComplexMatrix id = identity(rep.dim);

  for (std::size_t i = 0; i < gens.size(); ++i) {
    record("hermitian(" + names[i] + ")", max_abs_entry(*gens[i] - gens[i]->adjoint()));
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    record(names[i] + "^2=I", max_abs_entry(*gens[i] * *gens[i] - id));
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const ComplexMatrix anti = *gens[i] * *gens[j] + *gens[j] * *gens[i];
      record("{" + names[i] + "," + names[j] + "}=0", max_abs_entry(anti));
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    record("tr(" + names[i] + ")=0", std::abs(gens[i]->trace()));
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    record("spectrum(" + names[i] + ")={-1,+1}",
           max_abs_entry((*gens[i] - id) * (*gens[i] + id)));
  }

  report.passed = report.max_deviation <= tolerance;
  return report;
}

DiracRepresentation conjugate(const DiracRepresentation& rep, const ComplexMatrix& unitary) {
  check_structure(rep);
  if (unitary.rows() != rep.dim || unitary.cols() != rep.dim) {
    throw StructureError("conjugating matrix must be " + std::to_string(rep.dim) + "x" +
                         std::to_string(rep.dim));
  }
  const ComplexMatrix u_dag = unitary.adjoint();
  DiracRepresentation out{rep.n, rep.dim, {}, unitary * rep.beta * u_dag};
  out.alphas.reserve(rep.alphas.size());
  for (const auto& alpha : rep.alphas) out.alphas.push_back(unitary * alpha * u_dag);
  return out;
}

}  // namespace diracstep::algebra
