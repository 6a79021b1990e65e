"""
ThabitSolver - Certified Baker's-method solver for Thabit and Williams numbers
in the Padovan, Perrin and Narayana's cows sequences.
"""

__version__ = "1.0.0"
