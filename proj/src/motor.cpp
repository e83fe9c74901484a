#include "mrange/motor.hpp"

#include <cmath>

#include "mrange/errors.hpp"

namespace mrange {

void MotorPropCoeffs::validate() const {
  if (!(c_d > 0.0)) throw InputError("motor coeffs: c_d must be > 0");
  if (!(m0 >= 0.0)) throw InputError("motor coeffs: m0 must be >= 0");
  if (!(m1 > 0.0)) throw InputError("motor coeffs: m1 must be > 0");
  if (!(m2 >= 0.0)) throw InputError("motor coeffs: m2 must be >= 0");
}

double drag_torque(const MotorPropCoeffs& coeffs, double omega) {
  if (omega < 0.0) throw DomainError("drag_torque: omega must be >= 0");
  return coeffs.c_d * omega * omega;
}

double modelled_electrical_power(const MotorPropCoeffs& coeffs, double omega) {
  const double w3 = omega * omega * omega;
  return coeffs.m0 * omega + coeffs.m1 * w3 + coeffs.m2 * w3 * w3;
}

double efficiency(const MotorPropCoeffs& coeffs, double omega) {
  if (!(omega > 0.0)) throw DomainError("efficiency: undefined at omega <= 0");
  // Divide through by w^3 to keep the magnitudes sane at high speed.
  const double w2 = omega * omega;
  return coeffs.c_d / (coeffs.m0 / w2 + coeffs.m1 + coeffs.m2 * w2 * omega);
}

double electrical_power(double torque, double omega, double eta) {
  if (!(eta > 0.0)) throw DomainError("electrical_power: efficiency must be > 0");
  if (torque < 0.0 || omega < 0.0) throw DomainError("electrical_power: negative load");
  return torque * omega / eta;
}

double electrical_power_from_mech(double mech_power, double eta) {
  if (!(eta > 0.0)) throw DomainError("electrical_power: efficiency must be > 0");
  if (mech_power < 0.0) throw DomainError("electrical_power: negative load");
  return mech_power / eta;
}

double omega_for_mech_power(const MotorPropCoeffs& coeffs, double mech_power) {
  if (mech_power < 0.0) throw DomainError("omega_for_mech_power: negative power");
  return std::cbrt(mech_power / coeffs.c_d);
}

}  // namespace mrange
