#pragma once

#include <vector>

#include "ccmol/ccengine.hpp"

// Bound levels of the coupled system below the entrance threshold, located by
// bisection on the outward node count and characterized by their spin and
// channel composition.

namespace ccmol {

// number of coupled-system levels below energy eRel (< 0, relative to the
// entrance threshold), with a hard wall at the cache's outer edge
int boundCountBelow(const CollisionSystem& sys, const FieldModel& fm,
                    const RadialCache& rc, double eRel);

struct BoundState {
  double energy = 0;  // relative to the entrance threshold, < 0
  double singletWeight = 0;   // <P0>
  double tripletWeight = 0;   // <P1>
  Eigen::VectorXd channelWeights;  // per channel, sums to 1
};

// every level in (eLo, eHi], energies ascending; both bounds < 0 and inside
// the cache's energy window
std::vector<BoundState> boundStatesIn(const CollisionSystem& sys,
                                      const FieldModel& fm,
                                      const RadialCache& rc, double eLo,
                                      double eHi,
                                      bool keepCompositions = true);

}  // namespace ccmol
