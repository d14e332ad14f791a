#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ccmol/constants.hpp"

// Single-atom hyperfine/Zeeman structure for a 2S1/2 atom:
//   H = A I.S + gS muB B Sz - gI muN B Iz
// diagonalized per total-projection block. Energies in E_h, field passed in
// atomic units.

namespace ccmol {

struct AtomSpec {
  std::string label;
  double mass = 0;       // m_e
  int twoI = 0;          // twice the nuclear spin
  double hyperfineA = 0; // E_h; negative for inverted structure
  double gI = 0;         // nuclear g factor, mu = gI * I * muN
};

// Primitive basis |mS, mI> ordered (twoMs desc, twoMi desc); dimension 2(2I+1).
struct PrimitiveState {
  int twoMs;
  int twoMi;
};
std::vector<PrimitiveState> primitiveBasis(const AtomSpec& atom);

struct AtomicLevel {
  int index = 0;          // position in the energy-sorted list at this field
  int twoM = 0;           // conserved projection mS + mI (twice)
  int twoFAdiabatic = 0;  // zero-field f reached by adiabatic continuation
  double energy = 0;      // E_h
  Eigen::VectorXd amplitudes;  // over primitiveBasis(atom)
};

// All dressed levels at field B (atomic units), sorted by energy ascending.
// Within each m block the ordering is field-continuous: the 2x2 blocks have a
// field-independent off-diagonal element, so branches never cross.
std::vector<AtomicLevel> atomicLevels(const AtomSpec& atom, double B,
                                      const Constants& cst);

// Closed-form level energies (stretched states exactly, interior m blocks via
// the two-state secular formula). Independent of the dense path above; used
// for self-checks. Sorted ascending.
std::vector<double> breitRabiEnergies(const AtomSpec& atom, double B,
                                      const Constants& cst);

}  // namespace ccmol
