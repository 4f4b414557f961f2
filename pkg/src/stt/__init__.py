"""A kernel for simple type theories: signatures, typed syntax, substitution,
equational rewriting, and bounded clone extraction."""
