"""Optimal-scaling theory: acceptance approximations, the optimal block size and the limiting jump process."""
