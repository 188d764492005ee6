#include "pbf/ion_model.hpp"

#include <cmath>

namespace pbf {

namespace {
constexpr double kExpGuard = 500.0;

double guarded_exp(double e) {
  if (std::abs(e) > kExpGuard)
    throw SaturationError("ion model: Boltzmann exponent exceeds the overflow guard");
  return std::exp(e);
}
}  // namespace

IonModel::IonModel(std::vector<IonicSpecies> sp, double beta_inv_kT)
    : species(std::move(sp)), beta(beta_inv_kT) {
  if (species.size() < 2) throw ConfigError("ion model: at least two species required");
  if (!(beta > 0)) throw ConfigError("ion model: beta must be positive");
  double net = 0.0, gross = 0.0;
  bool has_pos = false, has_neg = false;
  for (const auto& s : species) {
    if (s.charge == 0.0) throw ConfigError("ion model: zero-charge species");
    if (!(s.bulk > 0.0)) throw ConfigError("ion model: bulk concentration must be positive");
    net += s.charge * s.bulk;
    gross += std::abs(s.charge) * s.bulk;
    (s.charge > 0 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw ConfigError("ion model: both ion signs must be present");
  if (std::abs(net) > 1e-12 * gross)
    throw ConfigError("ion model: bulk charges are not neutral (sum q_j c_j != 0)");
}

IonModel make_symmetric_salt(double bulk, double beta) {
  return IonModel({{+1.0, bulk}, {-1.0, bulk}}, beta);
}

double b_value(const IonModel& m, double s) {
  double acc = 0.0;
  for (const auto& sp : m.species) acc += sp.bulk * (guarded_exp(-m.beta * sp.charge * s) - 1.0);
  return acc / m.beta;
}

double b_deriv(const IonModel& m, double s) {
  double acc = 0.0;
  for (const auto& sp : m.species)
    acc -= sp.charge * sp.bulk * guarded_exp(-m.beta * sp.charge * s);
  return acc;
}

double b_deriv2(const IonModel& m, double s) {
  double acc = 0.0;
  for (const auto& sp : m.species)
    acc += m.beta * sp.charge * sp.charge * sp.bulk * guarded_exp(-m.beta * sp.charge * s);
  return acc;
}

std::vector<ScalarField> equilibrium_concentrations(const IonModel& m, const ScalarField& psi,
                                                    const ScalarField& phi_dirichlet,
                                                    const LevelSet& ls) {
  if (!(psi.grid == ls.grid()) || !(phi_dirichlet.grid == ls.grid()))
    throw ConfigError("equilibrium_concentrations: fields on different grids");
  std::vector<ScalarField> out;
  out.reserve(m.species.size());
  for (const auto& sp : m.species) {
    ScalarField c(ls.grid(), 0.0, "concentration");
    for (std::size_t idx = 0; idx < c.v.size(); ++idx) {
      if (!ls.is_plus(idx)) continue;
      double arg = psi.v[idx] - 0.5 * phi_dirichlet.v[idx];
      c.v[idx] = sp.bulk * guarded_exp(-m.beta * sp.charge * arg);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pbf
