"""Applied models: SIR epidemic data augmentation and birth-death-mutation pseudo-marginal inference."""
