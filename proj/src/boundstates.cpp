#include "ccmol/boundstates.hpp"

#include <algorithm>
#include <cmath>

#include "ccmol/errors.hpp"

namespace ccmol {

int boundCountBelow(const CollisionSystem& sys, const FieldModel& fm,
                    const RadialCache& rc, double eRel) {
  if (!(eRel < 0.0))
    throw ValidationError("bound search needs energy below the entrance");
  ChannelQ src(sys, fm, rc, eRel);
  SweepOptions opt;
  opt.countNodes = true;
  return matrixSweepOutward(src, rc.mesh, opt).nodes;
}

std::vector<BoundState> boundStatesIn(const CollisionSystem& sys,
                                      const FieldModel& fm,
                                      const RadialCache& rc, double eLo,
                                      double eHi, bool keepCompositions) {
  if (!(eLo < eHi) || !(eHi < 0.0))
    throw ValidationError("bound window must satisfy eLo < eHi < 0");
  const int nLo = boundCountBelow(sys, fm, rc, eLo);
  const int nHi = boundCountBelow(sys, fm, rc, eHi);

  std::vector<BoundState> out;
  double floorE = eLo;
  for (int target = nLo + 1; target <= nHi; ++target) {
    double lo = floorE, hi = eHi;
    for (int iter = 0; iter < 64; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (hi - lo <= std::max(std::abs(mid) * 1e-13, 1e-16)) break;
      if (boundCountBelow(sys, fm, rc, mid) >= target) hi = mid;
      else lo = mid;
    }
    BoundState st;
    st.energy = 0.5 * (lo + hi);
    floorE = lo;

    if (keepCompositions) {
      ChannelQ src(sys, fm, rc, st.energy);
      SweepOptions opt;
      opt.storeRatios = true;
      // stop where the slowest channel has decayed past usefulness, else the
      // energy-bisection residual floods the tail with a growing admixture
      opt.stopNode = rc.decayStopNode(st.energy, kReconstructBudget);
      const MatrixSweep sw = matrixSweepOutward(src, rc.mesh, opt);
      // at an eigenvalue the extension ratio is singular and its null vector
      // is the outermost F of the level
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          0.5 * (sw.extensionRatio + sw.extensionRatio.transpose()));
      int iMin = 0;
      es.eigenvalues().cwiseAbs().minCoeff(&iMin);
      const Eigen::VectorXd fEnd = es.eigenvectors().col(iMin);
      const std::vector<Eigen::VectorXd> psi =
          matrixReconstruct(src, rc.mesh, sw, fEnd, opt.stopNode);

      const int n = fm.basis.dim();
      Eigen::VectorXd wCh = Eigen::VectorXd::Zero(n);
      double s0 = 0.0;
      for (std::size_t g = 0; g < psi.size(); ++g) {
        const double w = rc.weights[g];
        wCh += w * psi[g].cwiseAbs2();
        s0 += w * psi[g].dot(fm.p0 * psi[g]);
      }
      const double norm = wCh.sum();
      st.channelWeights = wCh / norm;
      st.singletWeight = s0 / norm;
      st.tripletWeight = 1.0 - st.singletWeight;
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace ccmol
