"""Spectral simulation of linear evolution equations with stationary random initial data."""
