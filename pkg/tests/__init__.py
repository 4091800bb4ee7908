"""Test suite for indep_sampler."""
