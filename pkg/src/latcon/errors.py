"""Exception types shared by the lattice, congruence and search modules."""


class LatticeError(Exception):
    """Base class for all errors raised by latcon."""


class ParseError(LatticeError):
    pass


class NotAPartialOrder(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotALattice(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAHom(LatticeError):
    """A map fails to preserve meet, join, zero or the bounds.

    ``witness`` is the offending pair (or element) and ``law`` names the
    operation that is not preserved.
    """

    def __init__(self, message, witness=None, law=None):
        super().__init__(message)
        self.witness = witness
        self.law = law


class HostMismatch(LatticeError):
    pass


class RelationViolated(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotASubset(LatticeError):
    pass


class UnknownCheck(LatticeError):
    pass


class ResourceCap(LatticeError):
    """A configured resource ceiling was hit.

    ``partial`` carries whatever was computed before giving up (a size, a
    partial report, ...).
    """

    def __init__(self, message, resource=None, limit=None, partial=None):
        super().__init__(message)
        self.resource = resource
        self.limit = limit
        self.partial = partial
