"""Spectral analysis of ranking data on S_n with Markov-basis MCMC calibration."""

__version__ = "0.1.0"
