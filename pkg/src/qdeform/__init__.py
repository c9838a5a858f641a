"""q-deformed oscillator states, their Wigner functions, and Bell-state phase space."""

__version__ = "0.1.0"
