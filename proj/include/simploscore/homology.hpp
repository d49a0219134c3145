#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "simploscore/complex.hpp"
#include "simploscore/int_matrix.hpp"

namespace simploscore {

// Oriented incidence matrix B_k: rows index (k-1)-simplices, columns index k-simplices,
// both in registry order.
struct BoundaryMatrix {
  int k = 1;
  IntMatrix entries;
};

// Entry (face, s) = (-1)^p when face is s with its p-th vertex removed. 1 <= k <= d.
BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k);

// L_k = down + up with down = B_k^T B_k and up = B_{k+1} B_{k+1}^T.
// B_0 and B_{d+1} are empty, so L_0 has no down term and L_d no up term.
struct HodgeLaplacian {
  int k = 0;
  IntMatrix down;
  IntMatrix up;
  IntMatrix total;
};

HodgeLaplacian hodge_laplacian(const SimplicialComplex& complex, int k);

// Rank over the rationals by fraction-free (Bareiss) elimination. Exact.
std::size_t exact_rank(const IntMatrix& m);

// beta_k = N_k - rank B_k - rank B_{k+1}.
std::vector<std::size_t> betti_exact(const SimplicialComplex& complex);

inline constexpr double kDefaultSpectralTolerance = 1e-8;

// beta_k = number of eigenvalues of L_k at most tol * max(lambda_max, 1).
// Throws ComputationError naming k if the eigensolver fails.
std::vector<std::size_t> betti_spectral(const SimplicialComplex& complex,
                                        double tol = kDefaultSpectralTolerance);

std::vector<double> laplacian_eigenvalues(const IntMatrix& laplacian, int k);

std::int64_t alternating_sum(std::span<const std::size_t> values);

// Sum (-1)^k beta_k; throws ConsistencyError when it differs from sum (-1)^k N_k.
std::int64_t euler_characteristic(std::span<const std::size_t> counts, std::span<const std::size_t> betti);

// Checks B_k B_{k+1} = 0 and L_k^up L_k^down = L_k^down L_k^up = 0 exactly for every k.
// Throws ConsistencyError describing the first violation.
void verify_identities(const SimplicialComplex& complex);

struct TopologySnapshot {
  std::int64_t step = 0;
  std::vector<std::size_t> simplex_counts;
  std::vector<std::size_t> betti;
  std::int64_t euler = 0;

  friend bool operator==(const TopologySnapshot&, const TopologySnapshot&) = default;
};

struct TopologyOptions {
  bool verify_identities = true;
  // Also run the spectral path and require agreement with the exact ranks.
  bool spectral_cross_check = false;
  double spectral_tolerance = kDefaultSpectralTolerance;
};

TopologySnapshot analyze_topology(const SimplicialComplex& complex, std::int64_t step,
                                  const TopologyOptions& options = {});

// {step, counts, betti, euler}
nlohmann::json to_json(const TopologySnapshot& snapshot);

}  // namespace simploscore
