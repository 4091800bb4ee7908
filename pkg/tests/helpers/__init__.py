"""Independent brute-force oracles used to check the fast implementations."""
