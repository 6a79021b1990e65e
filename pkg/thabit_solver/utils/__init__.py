"""
Utility functions for ThabitSolver
"""
