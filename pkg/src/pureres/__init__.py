"""Exact computations with vector bundles on projective space presented by resolutions by sums of line bundles."""
