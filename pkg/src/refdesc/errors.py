"""Exception types shared across the toolkit."""


class RefdescError(Exception):
    """Base class for all refdesc errors."""


class InvalidArc(RefdescError):
    """Arc references a node id or label outside the graph."""


class DuplicateArc(RefdescError):
    """The same (source, label, target) triple was given twice."""


class InvalidConfig(RefdescError):
    """Generator or naming configuration violates its invariants."""


class UnknownName(RefdescError):
    """A name was required to be known but is absent from the table."""


class EmptyInput(RefdescError):
    """An aggregate was requested over an empty collection."""


class EmptyEnsemble(RefdescError):
    """Salience rate requested for an ensemble with no descriptions."""


class UnboundDescriptor(RefdescError):
    """Description salience needs concrete descriptor node bindings."""


class NodeSetMismatch(RefdescError):
    """Sender and receiver graphs must share the same node set."""


class NotEnoughNodes(RefdescError):
    """Fewer eligible descriptor nodes than the requested description size."""


class NoNeighbors(RefdescError):
    """Salient sampling requires the target to have usable out-arcs."""


class BudgetExceeded(RefdescError):
    """Decode exhausted its node-expansion budget; result is unknown, not ambiguous."""


class NoUniqueDescription(RefdescError):
    """No uniquely identifying description exists within the search limits."""


class GraphTooLarge(RefdescError):
    """Brute-force enumeration is guarded to small graphs."""


class ConfigError(RefdescError):
    """Experiment configuration is inconsistent."""


class InvalidInput(RefdescError):
    """Predictor input outside its domain."""


class InfeasibleBound(RefdescError):
    """The k-anonymity bound is undefined (salience does not exceed descriptor ambiguity)."""
