"""qrdet: exact and high-precision verification of determinant identities
built from quadratic residues modulo primes."""

__version__ = "0.1.0"
