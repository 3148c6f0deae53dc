#pragma once

#include "siht/types.hpp"

namespace siht {

// Indices of the s largest-magnitude entries of x. Equal magnitudes are
// ordered by index, with the tie rule choosing which end wins. The result
// always has exactly s indices: when x has fewer than s nonzeros the support
// is padded with zero entries, again chosen by the tie rule, so restricted
// index sets always have a well-defined size.
SupportSet top_support(const DenseVector& x, int s, TieRule rule);

// Projection onto the set of at-most-s-sparse vectors: keeps x on
// top_support(x, s, rule), zero elsewhere.
SparseIterate hard_threshold(const DenseVector& x, int s, TieRule rule);

}  // namespace siht
