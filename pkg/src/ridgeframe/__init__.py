"""ridgeframe: directional frame decompositions via ridge functions and the
Radon transform.

One-dimensional frame generators (Meyer wavelet, complex B-splines, Gabor
windows) are lifted to directionally sensitive systems on the cube
[-1,1]^n, n in {2,3}.  The package computes the resulting semi-discrete and
fully discrete decompositions, reconstructs fields from coefficients, and
numerically certifies the underlying frame inequalities and identities.
"""

from .spectral import SampledSignal, Spectrum, forward_ft, frac_diff, inverse_ft

__all__ = [
    "SampledSignal",
    "Spectrum",
    "forward_ft",
    "inverse_ft",
    "frac_diff",
]

__version__ = "0.1.0"
