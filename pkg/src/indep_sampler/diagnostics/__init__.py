"""Chain diagnostics, tuning tables, dataset loaders, CSV writers and run reports."""
