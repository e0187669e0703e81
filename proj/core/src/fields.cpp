#include "eitlab/fields.hpp"

#include <sstream>

#include "eitlab/errors.hpp"

namespace eitlab {
namespace {

void check(const ComplexVector& v, std::size_t nz, const char* what) {
  if (static_cast<std::size_t>(v.size()) != nz) {
    std::ostringstream msg;
    msg << what << " has " << v.size() << " samples, grid has " << nz;
    throw ValidationError(msg.str());
  }
  if (!v.allFinite()) throw ValidationError(std::string(what) + " contains non-finite samples");
}

}  // namespace

FieldState FieldState::zeros(std::size_t nz, double t) {
  const auto n = static_cast<Eigen::Index>(nz);
  return {t, ComplexVector::Zero(n), ComplexVector::Zero(n), ComplexVector::Zero(n)};
}

void FieldState::validate(std::size_t nz) const {
  check(E, nz, "E");
  check(sba, nz, "sba");
  check(sbc, nz, "sbc");
}

PolaritonField PolaritonField::zeros(std::size_t nz, double t) {
  const auto n = static_cast<Eigen::Index>(nz);
  return {t, ComplexVector::Zero(n), ComplexVector::Zero(n)};
}

void PolaritonField::validate(std::size_t nz) const {
  check(psi, nz, "psi");
  check(phi, nz, "phi");
}

double max_spin_population(const FieldState& fs, double atom_number) {
  if (fs.sbc.size() == 0) return 0.0;
  return fs.sbc.cwiseAbs2().maxCoeff() / atom_number;
}

}  // namespace eitlab
