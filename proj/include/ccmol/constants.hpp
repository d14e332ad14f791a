#pragma once

// Unit conversion table. Everything internal is in Hartree atomic units
// (energy E_h, length a0, mass m_e, hbar = 1); these factors convert the
// external units used in configs and outputs. Values are CODATA 2018 and can
// be overridden from the config so a run records the table it actually used.

namespace ccmol {

struct Constants {
  // energy equivalents, in E_h
  double cm1 = 1.0 / 219474.63136320;   // hc * 1 cm^-1
  double GHz = 1.0 / 6579683.920502;    // h * 1 GHz
  double kelvin = 1.0 / 315775.02480407;  // k_B * 1 K

  // magnetic field: 1 gauss in atomic field units (hbar/(e a0^2))
  double gauss = 1.0e-4 / 235051.756758;

  double amu = 1822.888486209;  // atomic mass unit in m_e
  double alpha = 7.2973525693e-3;  // fine-structure constant
  double gS = 2.00231930436256;    // free-electron g factor, positive

  double muB = 0.5;  // Bohr magneton in atomic units
  double muN() const { return muB / 1836.15267343; }

  double MHz() const { return GHz * 1.0e-3; }
  double microK() const { return kelvin * 1.0e-6; }
};

}  // namespace ccmol
