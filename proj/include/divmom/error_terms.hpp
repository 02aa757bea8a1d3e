#pragma once
// Exact evaluation of the three classical lattice/divisor error terms
//
//   delta(x)       = D(x) - x(log x + 2*gamma - 1)
//   delta_star(x)  = (1/2) sum_{n<=4x} (-1)^n d(n) - x(log x + 2*gamma - 1)
//   circle_error(x)= #{i^2+j^2 <= x} - pi*x
//
// "Exact" means the arithmetic part is an integer count; only the smooth
// main term is floating point, evaluated in long double so the cancellation
// at x ~ 10^7 (count ~ 10^8, error term ~ 10^2) keeps ~12 clean digits.
// No convention constant (+1/4 or similar) is added to any of these.

#include "divmom/arith.hpp"

namespace divmom::error_terms {

// Euler-Mascheroni constant; 30 decimal digits, which is beyond double
// precision on purpose.  validate_euler_gamma() recomputes gamma by
// Euler-Maclaurin on the harmonic series and throws if the literal drifts
// from the recomputation by more than 1e-12 (a transcription tripwire, run
// once on first use of the main-term helpers).
inline constexpr double euler_gamma = 0.577215664901532860606512090082;

double euler_gamma_recomputed();
void validate_euler_gamma();

double delta(double x);        // requires x >= 1
double delta_star(double x);   // requires x >= 0.25
double circle_error(double x); // requires x >= 0

} // namespace divmom::error_terms
