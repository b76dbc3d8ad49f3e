"""
Exception hierarchy for the Condorcet domain toolkit.
Library code raises these; only the command line maps them to exit codes.
"""
from typing import Any, Dict, List, Optional


class CondorcetError(Exception):
    """Base class for every error raised by this package"""


class DegreeError(CondorcetError, ValueError):
    """Degree out of the supported range, or two objects of different degree"""


class PermutationError(CondorcetError, ValueError):
    """Malformed slot sequence or out-of-range rank"""


class EmptyDomainError(CondorcetError, ValueError):
    """An operation that needs at least one order received an empty domain"""


class NonUnitaryError(CondorcetError, ValueError):
    """An operation that needs the identity order received a domain without it"""


class LawError(CondorcetError, ValueError):
    """Law does not belong to the triple the search node is positioned at"""


class ClassFileError(CondorcetError):
    """Malformed class list file"""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, block: Optional[int] = None):
        self.path = path
        self.line = line
        self.block = block
        where = [str(path)] if path is not None else []
        if line is not None:
            where.append(f"line {line}")
        if block is not None:
            where.append(f"block {block}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class FrontierFileError(CondorcetError):
    """Frontier or checkpoint file with a bad header, body or checksum"""


class InvariantViolation(CondorcetError):
    """A structural invariant failed, or the oracle disagreed with the search"""

    def __init__(self, message: str, details: Optional[List[Dict[str, Any]]] = None):
        self.details = details or []
        super().__init__(message)


class SearchAborted(CondorcetError):
    """The search stopped early; the remaining frontier was written to a checkpoint"""

    def __init__(self, message: str, checkpoint: Optional[str] = None):
        self.checkpoint = checkpoint
        super().__init__(message)
