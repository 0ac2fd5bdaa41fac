class InputError(ValueError):
    """Rejected input: malformed data, mismatched bases, broken preconditions."""


class SizeCapError(InputError):
    """A requested enumeration or functor application exceeds a configured cap."""


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration ran out of steps on what should be a finite lattice."""
