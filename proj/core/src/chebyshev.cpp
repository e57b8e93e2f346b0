#include "barrier/errors.hpp"
#include "barrier/numeric_core.hpp"

namespace barrier {

cplx chebyshev_U(int n, cplx xi) {
  if (n < 0) throw ValidationError("chebyshev_U: negative order");
  cplx prev = 1.0;
  if (n == 0) return prev;
  cplx cur = 2.0 * xi;
  for (int k = 1; k < n; ++k) {
    const cplx next = 2.0 * xi * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace barrier
