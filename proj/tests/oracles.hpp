#pragma once

// Test-only oracles: central finite differences and seeded random
// expression text. Nothing here touches the jet pipeline.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Central difference of f along coordinate i.
inline double central_diff(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> p, int i, double h) {
  const double x = p[i];
  p[i] = x + h;
  const double fp = f(p);
  p[i] = x - h;
  const double fm = f(p);
  return (fp - fm) / (2.0 * h);
}

inline double default_step(double scale) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(scale));
}

// Random smooth expression text over the given coordinates. Every function
// argument is shaped so the expression is defined everywhere.
class ExprGen {
 public:
  ExprGen(std::vector<std::string> coords, unsigned seed) : coords_(std::move(coords)), rng_(seed) {}

  std::string make(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    const std::string a = make(depth - 1);
    switch (pick(12)) {
      case 0: return "(" + a + " + " + make(depth - 1) + ")";
      case 1: return "(" + a + " - " + make(depth - 1) + ")";
      case 2: return "(" + a + " * " + make(depth - 1) + ")";
      case 3: return "(" + a + " / (1.5 + sin(" + make(depth - 1) + ")^2))";
      case 4: return "(" + a + ")^" + std::to_string(2 + pick(2));
      case 5: return "sin(" + a + ")";
      case 6: return "cos(" + a + ")";
      case 7: return "exp(0.3 * sin(" + a + "))";
      case 8: return "log(2 + cos(" + a + "))";
      case 9: return "sqrt(1.5 + sin(" + a + "))";
      case 10: return (pick(2) ? "sinh(" : "cosh(") + std::string("0.5 * cos(") + a + "))";
      default: return "tan(0.4 * sin(" + a + "))";
    }
  }

  std::vector<double> point(double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> p(coords_.size());
    for (double& x : p) x = u(rng_);
    return p;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string leaf() {
    if (pick(3) == 0) {
      std::uniform_real_distribution<double> u(0.25, 2.0);
      return std::to_string(u(rng_));
    }
    return coords_[static_cast<std::size_t>(pick(static_cast<int>(coords_.size())))];
  }

  std::vector<std::string> coords_;
  std::mt19937 rng_;
};

// Metric values as a function of the point; row-major n x n.
using MetricFn = std::function<Eigen::MatrixXd(const std::vector<double>&)>;

// Γ^k_ij by central differences of metric values, Γ[k][i][j] flattened.
inline std::vector<double> fd_christoffel(const MetricFn& g, const std::vector<double>& p, double h) {
  const int n = static_cast<int>(p.size());
  std::vector<Eigen::MatrixXd> dg(n);
  for (int l = 0; l < n; ++l) {
    std::vector<double> a = p, b = p;
    a[l] += h;
    b[l] -= h;
    dg[l] = (g(a) - g(b)) / (2.0 * h);
  }
  const Eigen::MatrixXd inv = g(p).inverse();
  std::vector<double> out(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out[(k * n + i) * n + j] = 0.5 * s;
      }
  return out;
}

// R^l_kij from finite differences of fd_christoffel (nested central
// differences); accuracy is roughly 1e-6 for O(1) data.
inline std::vector<double> fd_riemann(const MetricFn& g, const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  const double h1 = 1e-3, h2 = 1e-5;
  auto gam = [&](const std::vector<double>& q) { return fd_christoffel(g, q, h2); };
  std::vector<std::vector<double>> dgam(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> a = p, b = p;
    a[i] += h1;
    b[i] -= h1;
    auto ga = gam(a), gb = gam(b);
    dgam[i].resize(ga.size());
    for (std::size_t c = 0; c < ga.size(); ++c) dgam[i][c] = (ga[c] - gb[c]) / (2.0 * h1);
  }
  const auto G = gam(p);
  auto at = [&](const std::vector<double>& v, int a, int b, int c) { return v[(a * n + b) * n + c]; };
  std::vector<double> out(n * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = at(dgam[i], l, j, k) - at(dgam[j], l, i, k);
          for (int m = 0; m < n; ++m) r += at(G, l, i, m) * at(G, m, j, k) - at(G, l, j, m) * at(G, m, i, k);
          out[((l * n + k) * n + i) * n + j] = r;
        }
  return out;
}

}  // namespace oracle

