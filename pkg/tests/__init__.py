"""Unit and integration tests for ThabitSolver"""
