#include "ccmol/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ccmol/angular.hpp"
#include "ccmol/errors.hpp"

namespace ccmol {
namespace {

// electron-pair basis (msA, msB) in {++, +-, -+, --} order
int esIndex(int twoMsA, int twoMsB) {
  return (twoMsA < 0 ? 2 : 0) + (twoMsB < 0 ? 1 : 0);
}

Eigen::Matrix4d singletProjector() {
  Eigen::Matrix4d p1 = Eigen::Matrix4d::Zero();
  p1(0, 0) = 1.0;
  p1(3, 3) = 1.0;
  p1(1, 1) = p1(2, 2) = p1(1, 2) = p1(2, 1) = 0.5;
  return Eigen::Matrix4d::Identity() - p1;
}

// T^2_q built from the total spin S = S_A + S_B; real in this basis
std::array<Eigen::Matrix4d, 5> rank2SpinTensor() {
  Eigen::Matrix4d sz = Eigen::Matrix4d::Zero();
  sz(0, 0) = 1.0;
  sz(3, 3) = -1.0;
  Eigen::Matrix4d sp = Eigen::Matrix4d::Zero();  // S+ = S_A+ + S_B+
  sp(0, 2) = 1.0;
  sp(1, 3) = 1.0;
  sp(0, 1) = 1.0;
  sp(2, 3) = 1.0;
  const Eigen::Matrix4d sm = sp.transpose();
  const Eigen::Matrix4d s2 = 2.0 * (Eigen::Matrix4d::Identity() - singletProjector());

  std::array<Eigen::Matrix4d, 5> t;  // q = -2..+2 at offsets 0..4
  t[0 + 2] = (3.0 * sz * sz - s2) / std::sqrt(6.0);
  t[1 + 2] = -0.5 * (sz * sp + sp * sz);
  t[-1 + 2] = 0.5 * (sz * sm + sm * sz);
  t[2 + 2] = 0.5 * sp * sp;
  t[-2 + 2] = 0.5 * sm * sm;
  return t;
}

// lift a 4x4 electron-pair operator to the primitive product space of both
// atoms (identity on the nuclear projections)
Eigen::MatrixXd liftToProduct(const Eigen::Matrix4d& op,
                              const std::vector<PrimitiveState>& basisA,
                              const std::vector<PrimitiveState>& basisB) {
  const int nA = static_cast<int>(basisA.size());
  const int nB = static_cast<int>(basisB.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nA * nB, nA * nB);
  for (int a1 = 0; a1 < nA; ++a1)
    for (int b1 = 0; b1 < nB; ++b1)
      for (int a2 = 0; a2 < nA; ++a2)
        for (int b2 = 0; b2 < nB; ++b2) {
          if (basisA[a1].twoMi != basisA[a2].twoMi) continue;
          if (basisB[b1].twoMi != basisB[b2].twoMi) continue;
          const double v = op(esIndex(basisA[a1].twoMs, basisB[b1].twoMs),
                              esIndex(basisA[a2].twoMs, basisB[b2].twoMs));
          if (v != 0.0) out(a1 * nB + b1, a2 * nB + b2) = v;
        }
  return out;
}

// product-space vector of a dressed pair state
Eigen::VectorXd pairVector(const AtomicLevel& la, const AtomicLevel& lb) {
  const int nA = static_cast<int>(la.amplitudes.size());
  const int nB = static_cast<int>(lb.amplitudes.size());
  Eigen::VectorXd v(nA * nB);
  for (int a = 0; a < nA; ++a)
    for (int b = 0; b < nB; ++b) v(a * nB + b) = la.amplitudes(a) * lb.amplitudes(b);
  return v;
}

}  // namespace

ChannelBasis enumerateChannels(const AtomSpec& atomA, const AtomSpec& atomB, double B,
                               int twoMtot, const std::vector<int>& ells,
                               const Constants& cst) {
  ChannelBasis basis;
  basis.atomA = atomA;
  basis.atomB = atomB;
  basis.field = B;
  basis.twoMtot = twoMtot;
  basis.ells = ells;
  basis.levelsA = atomicLevels(atomA, B, cst);
  basis.levelsB = atomicLevels(atomB, B, cst);

  for (int ell : ells) {
    if (ell < 0) throw ValidationError("negative partial wave");
    for (int mEll = -ell; mEll <= ell; ++mEll)
      for (const auto& la : basis.levelsA)
        for (const auto& lb : basis.levelsB) {
          if (la.twoM + lb.twoM + 2 * mEll != twoMtot) continue;
          Channel c;
          c.levelA = la.index;
          c.levelB = lb.index;
          c.twoMA = la.twoM;
          c.twoMB = lb.twoM;
          c.ell = ell;
          c.mEll = mEll;
          c.threshold = la.energy + lb.energy;
          basis.channels.push_back(c);
        }
  }

  std::sort(basis.channels.begin(), basis.channels.end(),
            [](const Channel& x, const Channel& y) {
              if (x.ell != y.ell) return x.ell < y.ell;
              if (x.threshold != y.threshold) return x.threshold < y.threshold;
              return x.twoMA > y.twoMA;
            });
  for (int i = 0; i < basis.dim(); ++i) basis.channels[i].index = i;

  for (const auto& c : basis.channels)
    if (c.ell == 0) {
      basis.entrance = c.index;
      break;
    }
  return basis;
}

SpinProjectors spinProjectors(const ChannelBasis& basis) {
  const auto primA = primitiveBasis(basis.atomA);
  const auto primB = primitiveBasis(basis.atomB);
  const Eigen::MatrixXd p0prod = liftToProduct(singletProjector(), primA, primB);

  const int n = basis.dim();
  SpinProjectors pr;
  pr.P0 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& ci = basis.channels[i];
    const Eigen::VectorXd vi =
        pairVector(basis.levelsA[ci.levelA], basis.levelsB[ci.levelB]);
    for (int j = i; j < n; ++j) {
      const auto& cj = basis.channels[j];
      if (ci.ell != cj.ell || ci.mEll != cj.mEll) continue;
      const Eigen::VectorXd vj =
          pairVector(basis.levelsA[cj.levelA], basis.levelsB[cj.levelB]);
      const double v = vi.dot(p0prod * vj);
      pr.P0(i, j) = v;
      pr.P0(j, i) = v;
    }
  }
  pr.P1 = Eigen::MatrixXd::Identity(n, n) - pr.P0;
  // P1 must vanish between different (l, ml) blocks as well
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& ci = basis.channels[i];
      const auto& cj = basis.channels[j];
      if (ci.ell != cj.ell || ci.mEll != cj.mEll) pr.P1(i, j) = 0.0;
    }
  return pr;
}

Eigen::MatrixXd anisotropicCoupling(const ChannelBasis& basis) {
  const auto primA = primitiveBasis(basis.atomA);
  const auto primB = primitiveBasis(basis.atomB);
  const auto t4 = rank2SpinTensor();
  std::array<Eigen::MatrixXd, 5> tprod;
  for (int k = 0; k < 5; ++k) tprod[k] = liftToProduct(t4[k], primA, primB);

  const int n = basis.dim();
  std::vector<Eigen::VectorXd> pv(n);
  for (int i = 0; i < n; ++i)
    pv[i] = pairVector(basis.levelsA[basis.channels[i].levelA],
                       basis.levelsB[basis.channels[i].levelB]);

  const double scale = 2.0 / 3.0 * std::sqrt(6.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& ci = basis.channels[i];
    for (int j = i; j < n; ++j) {
      const auto& cj = basis.channels[j];
      double sum = 0.0;
      for (int q = -2; q <= 2; ++q) {
        const double ang =
            reducedSphericalElement(2, -q, ci.ell, ci.mEll, cj.ell, cj.mEll);
        if (ang == 0.0) continue;
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        sum += sign * ang * pv[i].dot(tprod[q + 2] * pv[j]);
      }
      m(i, j) = scale * sum;
      m(j, i) = scale * sum;
    }
  }
  return m;
}

}  // namespace ccmol
