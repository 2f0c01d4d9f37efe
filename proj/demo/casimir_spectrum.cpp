// Casimir spectrum on low-degree symbols of the 3-dimensional contact space.
// For each (k, delta) the Casimir matrix is built on polynomial symbols of
// base degree <= 2, restricted to its largest stable subspace, and its
// eigenvalues are compared with the predicted eps^{k,l}.
#include <iostream>

#include "contactsym/casimir.hpp"

using namespace contactsym;

int main(int argc, char** argv) {
  const int n = 1;
  const unsigned D = 2;
  const Rational delta = argc > 1 ? Rational::parse(argv[1]) : Rational(1, 3);
  for (int k = 0; k <= 3; ++k) {
    if (critical_index(k, delta, n) >= 0) {
      std::cout << "k=" << k << ": delta=" << delta << " is critical, skipped\n";
      continue;
    }
    const CasimirMatrix cm = casimir_matrix(n, k, delta, D);
    std::cout << "k=" << k << " delta=" << delta << "  span " << cm.basis.size() << ", stable "
              << cm.invariant_basis.size() << "\n";
    const auto predicted = eigenvalues(n, k, delta);
    for (const auto& [root, mult] : cm.roots) {
      int l = -1;
      for (int i = 0; i <= k; ++i)
        if (predicted[static_cast<std::size_t>(i)] == root) l = i;
      std::cout << "  " << root << "  x" << mult;
      if (l >= 0) std::cout << "  (l=" << l << ")";
      else std::cout << "  (unexpected)";
      std::cout << "\n";
    }
    if (!cm.roots_complete) std::cout << "  characteristic polynomial does not split over the predicted values\n";
  }
  return 0;
}
