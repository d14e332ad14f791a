#include "ccmol/angular.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

namespace ccmol {
namespace {

// factorials of n/1 for n <= 40 in long double; exact through 25! which covers
// every sum term reachable with the momenta used here
const std::array<long double, 41>& factTable() {
  static const std::array<long double, 41> table = [] {
    std::array<long double, 41> f{};
    f[0] = 1.0L;
    for (int n = 1; n <= 40; ++n) f[n] = f[n - 1] * n;
    return f;
  }();
  return table;
}

long double fact(int n) {
  if (n < 0) return 0.0L;
  return factTable()[n];
}

bool triangleViolated(int tj1, int tj2, int tj3) {
  return tj3 > tj1 + tj2 || tj3 < std::abs(tj1 - tj2) || ((tj1 + tj2 + tj3) % 2) != 0;
}

}  // namespace

double wigner3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (triangleViolated(tj1, tj2, tj3)) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
  if (((tj1 + tm1) % 2) != 0 || ((tj2 + tm2) % 2) != 0 || ((tj3 + tm3) % 2) != 0) return 0.0;

  // Racah's sum; all arguments below are true integers
  const int a = (tj1 + tj2 - tj3) / 2;
  const int b = (tj1 - tj2 + tj3) / 2;
  const int c = (-tj1 + tj2 + tj3) / 2;
  const int j1m1 = (tj1 - tm1) / 2, j1p1 = (tj1 + tm1) / 2;
  const int j2m2 = (tj2 - tm2) / 2, j2p2 = (tj2 + tm2) / 2;
  const int j3m3 = (tj3 - tm3) / 2, j3p3 = (tj3 + tm3) / 2;

  const long double delta =
      fact(a) * fact(b) * fact(c) / fact((tj1 + tj2 + tj3) / 2 + 1);
  const long double norm = std::sqrt(delta * fact(j1m1) * fact(j1p1) * fact(j2m2) *
                                     fact(j2p2) * fact(j3m3) * fact(j3p3));

  const int k_lo = std::max(0, std::max((tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2));
  const int k_hi = std::min(a, std::min(j1m1, j2p2));

  long double sum = 0.0L;
  for (int k = k_lo; k <= k_hi; ++k) {
    const long double denom = fact(k) * fact(a - k) * fact(j1m1 - k) * fact(j2p2 - k) *
                              fact((tj3 - tj2 + tm1) / 2 + k) *
                              fact((tj3 - tj1 - tm2) / 2 + k);
    sum += ((k % 2) ? -1.0L : 1.0L) / denom;
  }

  const int phase = (tj1 - tj2 - tm3) / 2;
  const long double sign = (std::abs(phase) % 2) ? -1.0L : 1.0L;
  return static_cast<double>(sign * norm * sum);
}

double clebsch(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tm1 + tm2 != tM) return 0.0;
  const int phase = (tj1 - tj2 + tM) / 2;
  const double sign = (std::abs(phase) % 2) ? -1.0 : 1.0;
  return sign * std::sqrt(tJ + 1.0) * wigner3j(tj1, tj2, tJ, tm1, tm2, -tM);
}

double reducedSphericalElement(int k, int q, int lp, int mp, int l, int m) {
  if (mp != m + q) return 0.0;
  const double sign = (std::abs(mp) % 2) ? -1.0 : 1.0;
  return sign * std::sqrt((2.0 * lp + 1.0) * (2.0 * l + 1.0)) *
         wigner3j(2 * lp, 2 * k, 2 * l, 0, 0, 0) *
         wigner3j(2 * lp, 2 * k, 2 * l, -2 * mp, 2 * q, 2 * m);
}

}  // namespace ccmol
