#include "ncgauss/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "ncgauss/farey.hpp"

namespace ncgauss {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

GaussLegendre compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order >= 1");
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.nodes[static_cast<std::size_t>(i)] = -x;
    gl.weights[static_cast<std::size_t>(i)] = w;
    gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double integrate_mu(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  const GaussLegendre& gl = gauss_legendre(spec.points);
  const FareyLevel panels = farey_level(spec.farey_level);
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < panels.nodes.size(); ++i) {
    const double a = panels.nodes[i].value();
    const double b = panels.nodes[i + 1].value();
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    long double panel = 0.0L;
    for (std::size_t p = 0; p < gl.nodes.size(); ++p) {
      const double t = mid + rad * gl.nodes[p];
      panel += gl.weights[p] * f(t) / (kLn2 * (1.0 + t));
    }
    total += panel * rad;
  }
  return static_cast<double>(total);
}

double integrate_lebesgue(const std::function<double(double)>& f, double a, double b,
                          int panels, int points) {
  const GaussLegendre& gl = gauss_legendre(points);
  long double total = 0.0L;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h, hi = lo + h;
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    long double panel = 0.0L;
    for (std::size_t p = 0; p < gl.nodes.size(); ++p)
      panel += gl.weights[p] * f(mid + rad * gl.nodes[p]);
    total += panel * rad;
  }
  return static_cast<double>(total);
}

double integrate_mu_interval(const std::function<double(double)>& f, double a, double b,
                             int panels, int points) {
  return integrate_lebesgue([&](double t) { return f(t) / (kLn2 * (1.0 + t)); }, a, b,
                            panels, points);
}

}  // namespace ncgauss
