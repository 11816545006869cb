#include "offdiag/fieldkit/grid.hpp"

#include <string>

namespace offdiag {

Grid3::Grid3(Axis a1, Axis a2, Axis at) : x1(a1), x2(a2), t(at) { validate(); }

void Grid3::validate() const {
  const Axis* axes[3] = {&x1, &x2, &t};
  const char* names[3] = {"x1", "x2", "t"};
  for (int i = 0; i < 3; ++i) {
    if (axes[i]->n < 4) throw GridError(std::string("axis ") + names[i] + " needs at least 4 points");
    if (!(axes[i]->hi > axes[i]->lo)) throw GridError(std::string("axis ") + names[i] + " has non-positive spacing");
  }
}

}  // namespace offdiag
