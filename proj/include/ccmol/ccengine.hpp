#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ccmol/channels.hpp"
#include "ccmol/potential.hpp"
#include "ccmol/propagator.hpp"

// Coupled-channels machinery for two colliding 2S atoms in a magnetic field.
// The radial interaction in the channel basis is
//   W(R) = VX(R) P0 + Va(R) P1 + lambda(R) M
//        + diag(threshold_i - E_entrance) + diag(l_i(l_i+1) / (2 mu R^2))
// and every energy is measured from the entrance-channel threshold at the
// working field. All quantities are atomic units.

namespace ccmol {

// field-independent description of the colliding pair
struct CollisionSystem {
  AtomSpec atomA, atomB;
  double mu = 0;  // m_e
  PotentialCurve singlet, triplet;
  SpinSplittingFit splitting;
  Constants cst;
  int twoMtot = 0;
  std::vector<int> ells = {0, 2};
};

// channel-space geometry frozen at one field
struct FieldModel {
  double field = 0;  // atomic units
  ChannelBasis basis;
  Eigen::MatrixXd p0, p1, m;
  Eigen::VectorXd thresholds;  // relative to the entrance channel, >= 0
  Eigen::VectorXd lCent;       // l(l+1)
  double entranceThreshold = 0;  // absolute, E_h
};

FieldModel buildFieldModel(const CollisionSystem& sys, double B);

// one mesh plus every field-independent radial factor cached at its samples;
// valid for all fields up to the threshold spread and energies in [eLo, eTop]
// (relative to the entrance threshold) it was built for
struct RadialCache {
  RadialMesh mesh;
  std::vector<double> nodeR;
  std::vector<double> weights;
  std::vector<double> vx, va, lam, invR2;  // at mesh.samples
  double eLo = 0, eTop = 0;  // validity window the mesh resolves
  double thresholdSpread = 0;
  std::vector<double> probeR, probeV;  // most-binding diagonal, coarse grid
  double twoMu = 0;

  // node index `budget` decay e-folds past the slowest channel's turning
  // point at entrance-relative energy e, or -1 when rMax decays less
  int decayStopNode(double e, double budget) const;
};

struct EngineMeshParams {
  double rMin = 0;
  double rMax = 0;
  double eLo = 0;   // lowest energy the mesh must serve (<= 0)
  double eTop = 0;  // highest energy (>= 0 for scattering)
  double thresholdSpread = 0;  // max over the field range of max_i threshold_i
  double phaseStep = 0.15;
  double hMax = 6.0;
};

RadialCache buildRadialCache(const CollisionSystem& sys,
                             const EngineMeshParams& p);

// Q(sample; E, field) = 2 mu (W - E) assembled from the cached factors
class ChannelQ : public MatrixQSource {
 public:
  ChannelQ(const CollisionSystem& sys, const FieldModel& fm,
           const RadialCache& rc, double eRel);
  int dim() const override;
  void q(int sampleIndex, Eigen::MatrixXd& out) const override;

 private:
  const FieldModel& fm_;
  const RadialCache& rc_;
  double twoMu_;
  Eigen::VectorXd diagShift_;  // 2 mu (threshold_i - eRel)
};

struct ScatterPoint {
  double field = 0;   // atomic units
  double energy = 0;  // relative to the entrance threshold
  double scatteringLength = 0;  // entrance channel, a0, tail-corrected
  int openCount = 0;
  std::vector<int> openChannels;  // basis indices, entrance first
  Eigen::MatrixXd kOpen;
  Eigen::MatrixXcd sOpen;
  double kAsymmetry = 0;  // max |K - K^T| before symmetrization
};

// full solve at one (field, energy); eRel must lie inside the cache's range
ScatterPoint scatterAt(const CollisionSystem& sys, const FieldModel& fm,
                       const RadialCache& rc, double eRel);

}  // namespace ccmol
