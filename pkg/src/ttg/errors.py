"""Exception types shared across the package."""


class TTGError(ValueError):
    """Base class for input errors raised by ttg."""


class UnknownPointError(TTGError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class NonT0Error(TTGError):
    """Specialization relation fails antisymmetry: two distinct points specialize to each other."""

    def __init__(self, a, b):
        super().__init__(f"not T0: {a!r} and {b!r} specialize to each other")
        self.pair = (a, b)


class NotMonotoneError(TTGError):
    """Assignment does not preserve specialization."""

    def __init__(self, a, b, fa, fb):
        super().__init__(
            f"assignment not monotone: {a!r} ~> {b!r} but {fa!r} does not specialize to {fb!r}"
        )
        self.pair = (a, b)


class CapExceeded(TTGError):
    pass


class PreconditionError(TTGError):
    pass


class HypothesisFailed(TTGError):
    """The section lemma does not apply; carries which hypothesis failed and a witness point."""

    def __init__(self, which, witness):
        super().__init__(f"hypothesis ({which}) fails at {witness!r}")
        self.which = which
        self.witness = witness
