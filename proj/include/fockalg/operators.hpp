#pragma once

#include <complex>
#include <cstddef>

#include "fockalg/fock.hpp"

namespace fockalg {

// Ladder operators on the truncated space. On monomials, with n = |I|:
//
//   create(j):     z^I -> (1/k_j) z^{I+e_j}
//   annihilate(j): z^I -> i_j k_j (w(n)^2 / w(n-1)^2) z^{I-e_j}
//
// annihilate is the algebra-norm adjoint of create. The commutator is the
// identity only after twisting by the diagonal weight operator D:
// conjugating annihilate by D and commuting with create leaves exactly the
// identity, because the monomial factor telescopes to (i_j + 1) - i_j.

/// Raising operator; terms at the cap are discarded and flag the result as
/// truncated.
FockElement create(std::size_t j, const FockElement& f);

/// Lowering operator, adjoint of create(j) in the algebra inner product.
FockElement annihilate(std::size_t j, const FockElement& f);

/// Diagonal weight operator D: z^I -> w(|I|)^2 z^I, and its inverse.
FockElement apply_d(const FockElement& f);
FockElement apply_d_inv(const FockElement& f);

/// || (D a_j D^-1 a_j^+ - a_j^+ D a_j D^-1) f - f ||_alg.
/// Requires deg f <= cap - 2 so both orderings avoid the cap.
double ccr_defect(std::size_t j, const FockElement& f);

/// Generalized derivative induced by a one-variable cone series phi:
/// coefficient at degree m moves to m - 1 scaled by phi_{m-1} / phi_m.
/// With phi_m = 1/m! this is the ordinary derivative. Only for dims == 1;
/// requires phi_m > 0 up to deg f.
FockElement gl_derivative(const ConeSeries& phi, const FockElement& f);

/// Kernel integral operator at truncation: z^I -> z^I / w(|I|)^2, and its
/// square root. apply_t_half is an isometry from the L2 norm onto the
/// algebra norm: norm_alg(apply_t_half(f)) = norm_l2(f).
FockElement apply_t(const FockElement& f);
FockElement apply_t_half(const FockElement& f);

struct CoherentCheck {
  std::complex<double> eigenvalue;  // Rayleigh quotient of annihilate(j) at K_eta
  double residual;                  // ||a_j K_eta - eigenvalue K_eta|| / ||K_eta||
};

/// Kernel sections are approximate eigenvectors of the lowering operators:
/// the eigenvalue tends to conj(alpha_j(eta)) / k_j and the residual is
/// dominated by the weight of the top degree shell, hence shrinks as the
/// cap grows. Requires eta strictly inside the Cameron-Martin ball.
CoherentCheck coherent_eigencheck(std::size_t j, const HVector& eta, const ContextPtr& ctx);

}  // namespace fockalg
