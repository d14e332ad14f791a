#include "ccmol/atom.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ccmol/errors.hpp"

namespace ccmol {

std::vector<PrimitiveState> primitiveBasis(const AtomSpec& atom) {
  std::vector<PrimitiveState> basis;
  for (int twoMs : {+1, -1})
    for (int twoMi = atom.twoI; twoMi >= -atom.twoI; twoMi -= 2)
      basis.push_back({twoMs, twoMi});
  return basis;
}

std::vector<AtomicLevel> atomicLevels(const AtomSpec& atom, double B,
                                      const Constants& cst) {
  if (atom.twoI < 0) throw ValidationError(atom.label + ": negative nuclear spin");
  const auto basis = primitiveBasis(atom);
  const int dim = static_cast<int>(basis.size());
  const double A = atom.hyperfineA;
  const double zS = cst.gS * cst.muB * B;
  const double zI = atom.gI * cst.muN() * B;

  // group primitive indices by total projection
  std::map<int, std::vector<int>, std::greater<int>> blocks;
  for (int p = 0; p < dim; ++p) blocks[basis[p].twoMs + basis[p].twoMi].push_back(p);

  std::vector<AtomicLevel> levels;
  for (const auto& [twoM, members] : blocks) {
    const int n = static_cast<int>(members.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      const auto& sa = basis[members[a]];
      const double ms = 0.5 * sa.twoMs, mi = 0.5 * sa.twoMi;
      h(a, a) = A * ms * mi + zS * ms - zI * mi;
      for (int b = a + 1; b < n; ++b) {
        const auto& sb = basis[members[b]];
        if (sb.twoMs == sa.twoMs - 2 && sb.twoMi == sa.twoMi + 2) {
          // <ms-1, mi+1| I+S- |ms, mi> with S=1/2
          const double ii = 0.25 * atom.twoI * (atom.twoI + 2);
          const double amp = 0.5 * A * std::sqrt(ii - 0.25 * sa.twoMi * (sa.twoMi + 2));
          h(a, b) = amp;
          h(b, a) = amp;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

    // zero-field f labels in ascending block order: the block holds at most one
    // state of each f, lower branch belongs to sign(A) deciding which f is low
    std::vector<int> fOrder;
    if (n == 1) {
      fOrder = {atom.twoI + 1};
    } else {
      const int fLow = (A >= 0) ? atom.twoI - 1 : atom.twoI + 1;
      const int fHigh = (A >= 0) ? atom.twoI + 1 : atom.twoI - 1;
      fOrder = {fLow, fHigh};
    }
    for (int k = 0; k < n; ++k) {
      AtomicLevel lv;
      lv.twoM = twoM;
      lv.twoFAdiabatic = fOrder[k];
      lv.energy = es.eigenvalues()(k);
      lv.amplitudes = Eigen::VectorXd::Zero(dim);
      for (int a = 0; a < n; ++a) lv.amplitudes(members[a]) = es.eigenvectors()(a, k);
      // sign convention: largest-magnitude amplitude positive
      int imax = 0;
      lv.amplitudes.cwiseAbs().maxCoeff(&imax);
      if (lv.amplitudes(imax) < 0) lv.amplitudes = -lv.amplitudes;
      levels.push_back(std::move(lv));
    }
  }

  std::sort(levels.begin(), levels.end(), [](const AtomicLevel& x, const AtomicLevel& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.twoM > y.twoM;
  });
  for (int i = 0; i < static_cast<int>(levels.size()); ++i) levels[i].index = i;
  return levels;
}

std::vector<double> breitRabiEnergies(const AtomSpec& atom, double B,
                                      const Constants& cst) {
  const double A = atom.hyperfineA;
  const double zS = cst.gS * cst.muB * B;
  const double zI = atom.gI * cst.muN() * B;
  const double I = 0.5 * atom.twoI;
  std::vector<double> out;

  // stretched m = +-(I + 1/2): pure |mS = +-1/2, mI = +-I>
  out.push_back(A * I / 2.0 + zS / 2.0 - zI * I);
  out.push_back(A * I / 2.0 - zS / 2.0 + zI * I);

  // interior blocks: two-state secular equation
  for (int twoM = -(atom.twoI - 1); twoM <= atom.twoI - 1; twoM += 2) {
    const double mi1 = 0.5 * (twoM - 1);  // with mS = +1/2
    const double mi2 = 0.5 * (twoM + 1);  // with mS = -1/2
    const double h11 = 0.5 * A * mi1 + 0.5 * zS - zI * mi1;
    const double h22 = -0.5 * A * mi2 - 0.5 * zS - zI * mi2;
    const double h12 = 0.5 * A * std::sqrt(I * (I + 1.0) - mi1 * mi2);
    const double mid = 0.5 * (h11 + h22);
    const double gap = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
    out.push_back(mid - gap);
    out.push_back(mid + gap);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ccmol
