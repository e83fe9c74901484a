#pragma once

namespace mrange {

// Lumped motor-propeller model:
//   Q = c_d * w^2
//   P_elec = m0 * w + m1 * w^3 + m2 * w^6
//   eta(w) = c_d * w^3 / P_elec
// Assumes constant motor supply voltage.
struct MotorPropCoeffs {
  double c_d;  // N m s^2
  double m0;   // N m, sliding friction
  double m1;
  double m2;

  void validate() const;
};

double drag_torque(const MotorPropCoeffs& coeffs, double omega);

// Throws DomainError for omega <= 0. Values above 1 are returned unclamped.
double efficiency(const MotorPropCoeffs& coeffs, double omega);

// Electrical power modelled directly from the lumped loss polynomial.
double modelled_electrical_power(const MotorPropCoeffs& coeffs, double omega);

// P_mot = Q * w / eta.
double electrical_power(double torque, double omega, double eta);

// Same relation on a pre-multiplied mechanical power Q * w.
double electrical_power_from_mech(double mech_power, double eta);

// Rotor speed at which the propeller absorbs the given mechanical power (Q * w = c_d * w^3).
double omega_for_mech_power(const MotorPropCoeffs& coeffs, double mech_power);

}  // namespace mrange
