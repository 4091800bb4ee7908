"""CLI entry point scripts for indep-sampler-scaling package."""
