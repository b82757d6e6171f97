#pragma once

#include <functional>
#include <vector>

namespace ncgauss {

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the Legendre recurrence (accurate to ~1e-15 for the orders used here).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Panels at the Farey nodes of the given level; integrands coming from
/// trace fields are affine (hence analytic) on each panel.
struct QuadratureSpec {
  int farey_level = 8;
  int points = 32;
};

/// int_0^1 f(t) dmu(t) with dmu = dt/(ln2 (1+t)), per-panel Gauss-Legendre.
double integrate_mu(const std::function<double(double)>& f, const QuadratureSpec& spec);

/// Same against plain Lebesgue measure on [a,b], uniform panels.
double integrate_lebesgue(const std::function<double(double)>& f, double a, double b,
                          int panels, int points);

/// int_a^b f dmu with uniform panels (used for window integrals in theta).
double integrate_mu_interval(const std::function<double(double)>& f, double a, double b,
                             int panels, int points);

}  // namespace ncgauss
