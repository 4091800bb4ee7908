"""Product-density experiment sweeps and the seeded parallel task runner."""
