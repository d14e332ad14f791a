#pragma once

#include <functional>
#include <vector>

#include "ccmol/ccengine.hpp"

// Magnetic Feshbach resonance discovery. A resonance is a bound level of the
// coupled system crossing the entrance threshold: the node count just below
// threshold changes by one. Poles are located by bisecting the count flip;
// widths come from the zero of the scattering length, a(B0 + Delta) = 0.

namespace ccmol {

struct Resonance {
  double b0 = 0;     // pole field, atomic units
  double bFlip = 0;  // field of the node-count step that revealed the pole
  double width = 0;  // signed Delta, same units (0 when no zero was found)
  double abg = 0;    // background scattering length, a0
  int countStep = 0; // count(B > b0) - count(B < b0), normally -1 or +1
};

struct ResonanceScan {
  double bLo = 0, bHi = 0;  // atomic units
  double bStep = 0;         // grid spacing of the count scan
  double bTol = 0;          // pole bracket width to stop at
  double probeBinding = 1e-12;    // E_h below threshold for counting
  double collisionEnergy = 1e-12; // E_h above threshold for a(B)
  double widthFloor = 0;    // smallest |Delta| resolved; defaults to 2 bTol
};

// Poles sorted ascending. Resonance pairs closer than bStep with opposite
// count steps cancel in the scan and are not seen. The count flip only
// locates a resonance to within the outer-wall bias (the boxed level reaches
// -probeBinding early); b0 is therefore refined to the divergence of a(B),
// which carries no wall bias beyond collisionEnergy / (level slope).
std::vector<Resonance> findResonances(
    const CollisionSystem& sys, const RadialCache& rc, const ResonanceScan& p,
    const std::function<void(const Resonance&)>& onFound = nullptr);

// a(B) with the field model rebuilt at each field
double scatteringLengthAt(const CollisionSystem& sys, const RadialCache& rc,
                          double B, double collisionEnergy);

}  // namespace ccmol
