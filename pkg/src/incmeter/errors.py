class IncmeterError(Exception):
    """Base class for all library errors."""


class DataError(IncmeterError):
    """Bad schema, row or tuple reference."""

    def __init__(self, message, relation=None, row=None):
        self.relation = relation
        self.row = row
        where = []
        if relation is not None:
            where.append(f"relation {relation}")
        if row is not None:
            where.append(f"row {row}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ConstraintSyntaxError(IncmeterError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ConstraintError(IncmeterError):
    """A constraint that parses but does not fit the schema."""


class OracleBoundError(IncmeterError):
    """Instance too large for a brute-force oracle."""
