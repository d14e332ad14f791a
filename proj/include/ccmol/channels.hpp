#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ccmol/atom.hpp"

// Scattering channel basis |i_A, i_B, l, ml> built on the dressed atomic
// levels at a given field, restricted to one conserved total projection
// Mtot = mA + mB + ml. The electron-spin operators (singlet/triplet
// projectors, rank-2 anisotropy) are evaluated in this basis; they act on the
// electron spins only, so their primitive forms are field independent and are
// dressed with the atomic eigenvectors.

namespace ccmol {

struct Channel {
  int index = 0;
  int levelA = 0;  // index into the first atom's sorted level list
  int levelB = 0;
  int twoMA = 0;
  int twoMB = 0;
  int ell = 0;
  int mEll = 0;
  double threshold = 0;  // E_h, sum of the two dressed level energies
};

struct ChannelBasis {
  AtomSpec atomA, atomB;
  double field = 0;  // atomic units
  int twoMtot = 0;
  std::vector<int> ells;
  std::vector<AtomicLevel> levelsA, levelsB;
  std::vector<Channel> channels;
  int entrance = -1;  // lowest-threshold l=0 channel

  int dim() const { return static_cast<int>(channels.size()); }
};

// Channels ordered by (l asc, threshold asc, mA desc); entrance resolved.
ChannelBasis enumerateChannels(const AtomSpec& atomA, const AtomSpec& atomB, double B,
                               int twoMtot, const std::vector<int>& ells,
                               const Constants& cst);

struct SpinProjectors {
  Eigen::MatrixXd P0;  // electron singlet
  Eigen::MatrixXd P1;  // electron triplet
};

// Projector matrices in the channel basis; diagonal in (l, ml).
SpinProjectors spinProjectors(const ChannelBasis& basis);

// Rank-2 spin-angular coupling M with H_ss = lambda(R) * M, normalized so a
// pure-triplet body-frame eigenbasis splits by E(|Omega|=1) - E(0-) = 2 lambda.
Eigen::MatrixXd anisotropicCoupling(const ChannelBasis& basis);

}  // namespace ccmol
