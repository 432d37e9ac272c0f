#pragma once

#include <span>
#include <vector>

namespace bkrisk {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// Cached 64-point rule.
const GaussLegendreRule& gauss_legendre_64();

}  // namespace bkrisk
