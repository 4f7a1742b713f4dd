"""Numerical toolkit for nodal-length statistics of random toral eigenfunctions.

Submodules:
    lattice       -- exact arithmetic for sums of two squares and circle lattice points
    correlations  -- spectral (quasi-)correlation enumeration and separatedness scans
    sectors       -- Gaussian primes in narrow sectors and the four-arc limit measures
    field         -- Gaussian eigenfunction sampler and covariance kernel machinery
    moments       -- restricted moments of the covariance and its derivative traces
    nodal         -- nodal-length extraction, Monte Carlo statistics, Kac-Rice bracket
    cli           -- unified command-line entry point
"""

__version__ = "0.1.0"
