"""homkernel: exact invariant geometry of non-reductive homogeneous 4-spaces.

The kernel computes, over an exact rational-function field, the
Levi-Civita data of a built-in catalog of non-reductive homogeneous
pseudo-Riemannian four-manifolds (families A1, A2, A3, A4, B1, B2):
canonical connection maps, curvature, symmetry loci, non-reductivity
certificates, and the classification of constant-coefficient hypersurface
data (Codazzi, parallel, totally geodesic) against reference tables.
"""

__version__ = "0.1.0"
