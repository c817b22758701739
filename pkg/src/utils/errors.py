class BdsError(ValueError):
    """ Base class for every input or precondition problem raised by this package """


class UniverseMismatchError(BdsError):
    pass


class ValidationError(BdsError):
    pass


class SchemaError(ValidationError):
    """ A document does not follow the BDS / Graph JSON schema.

    `field` is a dotted path to the offending entry (eg. "dual_maps.a.x"),
    `line` is the 1-based line of a JSON syntax error when known.
    """
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None: where.append(f'line {line}')
        if field is not None: where.append(f'field "{field}"')
        super().__init__(f'{message} ({", ".join(where)})' if where else message)


class UndeclaredIdError(ValidationError):
    pass


class NonFunctionalMapError(ValidationError):
    pass


class NotANoExitCycleError(BdsError):
    pass


class NotACyclicWitnessError(BdsError):
    pass


class SizeLimitError(BdsError):
    def __init__(self, atom_count, limit):
        self.atom_count = atom_count
        self.limit = limit
        super().__init__(f'{atom_count} atoms exceeds the enumeration limit of {limit}')


class InfiniteBoundaryError(BdsError):
    """ The boundary path space is infinite. `cycle` is a list of edge names
    forming a closed path and `exit_edge` leaves one of its vertices. """
    def __init__(self, cycle, exit_edge):
        self.cycle = tuple(cycle)
        self.exit_edge = exit_edge
        super().__init__(f'Boundary path space is infinite: cycle {".".join(self.cycle)} has exit "{exit_edge}"')


class DisagreementError(RuntimeError):
    """ Two independent deciders returned different answers. Always a bug. """
