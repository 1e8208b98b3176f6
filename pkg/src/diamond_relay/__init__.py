"""Capacity bounds and achievable rates for the Gaussian N-relay diamond network."""
