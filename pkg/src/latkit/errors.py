"""Exception hierarchy for latkit.

Every error carries enough context (offending pair, element, witness) to be
rendered as a JSON error object by the command-line front end.
"""


class LatkitError(Exception):
    """Base class for all latkit errors."""

    exit_code = 1

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


class InvalidInput(LatkitError):
    exit_code = 2


class CycleInCovers(InvalidInput):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"cover relation has a cycle through {self.cycle}")


class DuplicateCover(InvalidInput):
    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(f"cover pair {list(self.pair)} listed twice")


class NotALattice(InvalidInput):
    def __init__(self, pair, kind):
        self.pair = tuple(pair)
        self.kind = kind
        super().__init__(f"elements {list(self.pair)} have no {kind}")


class IndexOutOfRange(InvalidInput):
    def __init__(self, index, n):
        super().__init__(f"element index {index} outside 0..{n - 1}")


class SizeCapExceeded(LatkitError):
    exit_code = 3

    def __init__(self, size, cap):
        self.size, self.cap = size, cap
        super().__init__(f"size {size} exceeds cap {cap}")


class CapExceeded(LatkitError):
    """A bounded search stopped before reaching its fixpoint."""

    exit_code = 3

    def __init__(self, size, cap):
        self.size, self.cap = size, cap
        super().__init__(f"search aborted at {size} items (cap {cap})")


class SubsetBoundExceeded(CapExceeded):
    pass


class SearchBudgetExceeded(CapExceeded):
    pass


class ParamOutOfRange(InvalidInput):
    pass


class SigmaNotJoinIrreducible(InvalidInput):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element {element} is not join-irreducible")


class WMCRPFails(LatkitError):
    def __init__(self, p, cover):
        self.p, self.cover = p, sorted(cover)
        super().__init__(f"join-cover {self.cover} of {p} has no minimal refinement")


class NotAHomomorphism(LatkitError):
    def __init__(self, pair, op):
        self.pair, self.op = tuple(pair), op
        super().__init__(f"map does not preserve {op} at {list(self.pair)}")


class LeavenInvalid(LatkitError):
    exit_code = 2

    def __init__(self, report):
        self.report = report
        super().__init__(f"not a leaven: {report.failed} ({report.witness})")


class AxiomViolation(LatkitError):
    def __init__(self, axiom, instance):
        self.axiom, self.instance = axiom, instance
        super().__init__(f"axiom {axiom} fails at {instance}")


class NotModular(LatkitError):
    exit_code = 2

    def __init__(self, triple):
        self.triple = tuple(triple)
        super().__init__(f"lattice is not modular, witness {list(self.triple)}")


class ConstructionInvalid(LatkitError):
    def __init__(self, relation):
        self.relation = relation
        super().__init__(f"construction fails relation: {relation}")


class ViolationFound(LatkitError):
    exit_code = 4

    def __init__(self, lattice_id, invariant, detail=None):
        self.lattice_id, self.invariant, self.detail = lattice_id, invariant, detail
        super().__init__(f"{lattice_id}: invariant {invariant} violated ({detail})")
