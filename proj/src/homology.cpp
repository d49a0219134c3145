#include "simploscore/homology.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

#include "simploscore/errors.hpp"

namespace simploscore {

namespace {

std::string order_label(const char* what, int k) { return std::string(what) + "_" + std::to_string(k); }

IntMatrix up_term(const SimplicialComplex& complex, int k) {
  const std::size_t n = complex.count(k);
  if (k + 1 > complex.dimension()) return IntMatrix(n, n);
  const IntMatrix b = boundary_matrix(complex, k + 1).entries;
  return multiply(b, b.transposed());
}

IntMatrix down_term(const SimplicialComplex& complex, int k) {
  const std::size_t n = complex.count(k);
  if (k == 0) return IntMatrix(n, n);
  const IntMatrix b = boundary_matrix(complex, k).entries;
  return multiply(b.transposed(), b);
}

}  // namespace

BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k) {
  if (k < 1 || k > complex.dimension()) {
    throw DomainError("boundary matrix order " + std::to_string(k) + " outside [1, " +
                      std::to_string(complex.dimension()) + "]");
  }
  BoundaryMatrix b{k, IntMatrix(complex.count(k - 1), complex.count(k))};
  const auto simplices = complex.simplices(k);
  for (std::size_t col = 0; col < simplices.size(); ++col) {
    const Simplex& s = simplices[col];
    for (std::size_t p = 0; p <= static_cast<std::size_t>(k); ++p) {
      b.entries(complex.index_of(s.facet(p)), col) = (p % 2 == 0) ? 1 : -1;
    }
  }
  return b;
}

HodgeLaplacian hodge_laplacian(const SimplicialComplex& complex, int k) {
  if (k < 0 || k > complex.dimension()) {
    throw DomainError("Hodge Laplacian order " + std::to_string(k) + " outside [0, " +
                      std::to_string(complex.dimension()) + "]");
  }
  HodgeLaplacian l;
  l.k = k;
  l.down = down_term(complex, k);
  l.up = up_term(complex, k);
  l.total = l.down + l.up;
  return l;
}

std::vector<std::size_t> betti_exact(const SimplicialComplex& complex) {
  const int d = complex.dimension();
  std::vector<std::size_t> ranks(static_cast<std::size_t>(d + 2), 0);  // rank B_0 .. rank B_{d+1}
  for (int k = 1; k <= d; ++k) ranks[static_cast<std::size_t>(k)] = exact_rank(boundary_matrix(complex, k).entries);
  std::vector<std::size_t> betti;
  for (int k = 0; k <= d; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    betti.push_back(complex.count(k) - ranks[uk] - ranks[uk + 1]);
  }
  return betti;
}

std::vector<double> laplacian_eigenvalues(const IntMatrix& laplacian, int k) {
  const auto n = static_cast<Eigen::Index>(laplacian.rows());
  if (n == 0) return {};
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = laplacian(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ComputationError("eigensolver did not converge for " + order_label("L", k));
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<std::size_t> betti_spectral(const SimplicialComplex& complex, double tol) {
  if (!(tol > 0.0)) throw DomainError("spectral tolerance must be positive");
  std::vector<std::size_t> betti;
  for (int k = 0; k <= complex.dimension(); ++k) {
    const auto ev = laplacian_eigenvalues(hodge_laplacian(complex, k).total, k);
    const double lambda_max = ev.empty() ? 0.0 : ev.back();
    const double threshold = tol * std::max(lambda_max, 1.0);
    betti.push_back(static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [&](double x) { return x <= threshold; })));
  }
  return betti;
}

std::int64_t alternating_sum(std::span<const std::size_t> values) {
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto v = static_cast<std::int64_t>(values[k]);
    sum += (k % 2 == 0) ? v : -v;
  }
  return sum;
}

std::int64_t euler_characteristic(std::span<const std::size_t> counts, std::span<const std::size_t> betti) {
  const std::int64_t from_betti = alternating_sum(betti);
  const std::int64_t from_counts = alternating_sum(counts);
  if (from_betti != from_counts) {
    throw ConsistencyError("Euler-Poincare mismatch: sum of signed Betti numbers = " + std::to_string(from_betti) +
                           ", sum of signed simplex counts = " + std::to_string(from_counts));
  }
  return from_betti;
}

void verify_identities(const SimplicialComplex& complex) {
  const int d = complex.dimension();
  if (d < 0) return;
  if (!complex.check_closure()) throw ConsistencyError("complex is not closed under faces");

  std::vector<IntMatrix> b(static_cast<std::size_t>(d + 1));
  for (int k = 1; k <= d; ++k) b[static_cast<std::size_t>(k)] = boundary_matrix(complex, k).entries;
  for (int k = 1; k < d; ++k) {
    if (!multiply(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k + 1)]).is_zero()) {
      throw ConsistencyError(order_label("B", k) + " * " + order_label("B", k + 1) + " is not zero");
    }
  }
  for (int k = 0; k <= d; ++k) {
    const std::size_t n = complex.count(k);
    const auto uk = static_cast<std::size_t>(k);
    const IntMatrix down = k == 0 ? IntMatrix(n, n) : multiply(b[uk].transposed(), b[uk]);
    const IntMatrix up = k == d ? IntMatrix(n, n) : multiply(b[uk + 1], b[uk + 1].transposed());
    if (!down.is_symmetric() || !up.is_symmetric()) {
      throw ConsistencyError(order_label("L", k) + " is not symmetric");
    }
    if (!multiply(up, down).is_zero()) {
      throw ConsistencyError(order_label("L", k) + "^up * " + order_label("L", k) + "^down is not zero");
    }
    if (!multiply(down, up).is_zero()) {
      throw ConsistencyError(order_label("L", k) + "^down * " + order_label("L", k) + "^up is not zero");
    }
  }
}

TopologySnapshot analyze_topology(const SimplicialComplex& complex, std::int64_t step, const TopologyOptions& options) {
  if (options.verify_identities) verify_identities(complex);
  TopologySnapshot snap;
  snap.step = step;
  snap.simplex_counts = complex.simplex_counts();
  snap.betti = betti_exact(complex);
  if (options.spectral_cross_check) {
    const auto spectral = betti_spectral(complex, options.spectral_tolerance);
    if (spectral != snap.betti) {
      throw ConsistencyError("spectral and exact Betti numbers disagree at step " + std::to_string(step));
    }
  }
  snap.euler = euler_characteristic(snap.simplex_counts, snap.betti);
  return snap;
}

nlohmann::json to_json(const TopologySnapshot& snapshot) {
  return nlohmann::json{{"step", snapshot.step},
                        {"counts", snapshot.simplex_counts},
                        {"betti", snapshot.betti},
                        {"euler", snapshot.euler}};
}

}  // namespace simploscore
