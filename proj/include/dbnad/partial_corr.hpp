#pragma once

#include <span>

#include "dbnad/types.hpp"

namespace dbnad {

/// Partial correlation of i and j given `given`, read off the precision
/// matrix of the corresponding sub-block of `R`:
/// rho = -K_ij / sqrt(K_ii K_jj). Throws NumericError if the sub-block is not
/// positive definite.
double long_run_partial(const Matrix& R, int i, int j, std::span<const int> given);

/// Removes one conditioning variable z_k:
///   rho_{ij|z-k} = rho_{ij|z} sqrt((1-rho_{ik|z-k}^2)(1-rho_{jk|z-k}^2)) + rho_{ik|z-k} rho_{jk|z-k}
double recursion_drop(double rho_ij_given_z, double rho_ik, double rho_jk);

/// Adds one conditioning variable k (inverse of recursion_drop).
double recursion_add(double rho_ij, double rho_ik, double rho_jk);

/// Same quantity as long_run_partial, computed by repeatedly conditioning
/// with recursion_add in the order of `given`.
double partial_corr_recursive(const Matrix& R, int i, int j, std::span<const int> given);

}  // namespace dbnad
