#pragma once

// Reference evaluation of L(s, chi), the generalized Riemann-Siegel theta
// function and the Hardy Z-function. Everything here is ground truth for the
// interpolation code, so it is built on Euler-Maclaurin summation with an
// explicit remainder bound rather than on asymptotic expansions.

#include "dirichlet/characters.hpp"
#include "dirichlet/mpnum.hpp"

namespace dirichlet {

struct LValue {
  Complex s;
  Complex value;
  int achieved_digits = 0;
};

/// Hurwitz zeta(s, x) for rational x = numerator/denominator in (0, 1].
/// Throws DomainError at the pole s = 1.
Complex hurwitz_zeta(const Complex& s, long numerator, long denominator,
                     const PrecisionContext& ctx);

/// L(s, chi) = q^{-s} sum_r chi(r) zeta(s, r/q); entire for our characters.
LValue l_value(const RealPrimitiveCharacter& chi, const Complex& s, const PrecisionContext& ctx);

/// theta(t, chi) = Im log Gamma(1/4 + a/2 + it/2) + (t/2) log(q/pi)
///                 + (i/2) log epsilon(chi).
Real theta(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx);

/// e^{i theta(t)} L(1/2 + it, chi), which is real up to rounding.
Complex rotated_l(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx);

/// Z(t, chi). Throws PrecisionFault if the rotated value has an imaginary part
/// above 10^-(digits-20).
Real hardy_z(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx);

/// xi(s) = (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi).
Complex completed_l(const RealPrimitiveCharacter& chi, const Complex& s,
                    const PrecisionContext& ctx);

/// |xi(s) - epsilon(chi) xi(1 - s)|.
Real functional_equation_residual(const RealPrimitiveCharacter& chi, const Complex& s,
                                  const PrecisionContext& ctx);

}  // namespace dirichlet
