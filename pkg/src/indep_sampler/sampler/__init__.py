"""Block independence-sampler and random walk Metropolis kernels with a chain runner."""
