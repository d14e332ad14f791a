#pragma once

// Angular momentum coupling coefficients for the small momenta that appear in
// the channel basis (electron spins 1/2, partial waves l <= 4, nuclear spins
// up to 9/2). All spins are passed as twice their value so half-integers stay
// exact integers.

namespace ccmol {

// Wigner 3-j symbol (tj1/2 tj2/2 tj3/2; tm1/2 tm2/2 tm3/2).
double wigner3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3);

// Clebsch-Gordan <j1 m1 j2 m2 | J M>, twice-value arguments.
double clebsch(int tj1, int tm1, int tj2, int tm2, int tJ, int tM);

// <l' m' | C^k_q | l m> with C^k_q = sqrt(4 pi/(2k+1)) Y_kq; integer momenta.
double reducedSphericalElement(int k, int q, int lp, int mp, int l, int m);

}  // namespace ccmol
