"""Simulation, spectral analysis and experiment services."""
