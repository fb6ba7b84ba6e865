"""Exception hierarchy with stable machine-readable codes.

Every failure the engine signals carries a short ``code`` string so scripts
driving the CLI can branch on stderr content without matching prose. Two
families exist: :class:`InputParseError` for malformed input text (CLI exit
status 2) and :class:`EngineError` for domain failures (exit status 1).
"""


class EngineError(Exception):
    """A domain failure: valid syntax, but the request cannot be honored."""

    code = "ERR_DOMAIN"


class InvalidStateError(EngineError):
    """A state point violates the shared validity invariants."""

    code = "ERR_INVALID_STATE"

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))


class InvalidDiagramError(EngineError):
    """Diagram fails the structural rules; carries the validation report."""

    code = "ERR_INVALID_DIAGRAM"

    def __init__(self, report):
        self.report = report
        if report.violations:
            # stable code for the first broken rule, e.g. ERR_RULE_1
            self.code = f"ERR_RULE_{report.violations[0].rule}"
        super().__init__(
            "; ".join(v.message for v in report.violations) or "invalid diagram"
        )


class NegativeDemandError(EngineError):
    """The surface predicts negative demand at the requested point."""

    code = "ERR_NEGATIVE_DEMAND"


class SingularInversionError(EngineError):
    """Inversion requested along a coordinate with a zero coefficient."""

    code = "ERR_SINGULAR"


class OffSurfaceError(EngineError):
    """A path endpoint does not lie on the model surface."""

    code = "ERR_OFF_SURFACE"


class ConstraintViolationError(EngineError):
    """Path endpoints do not satisfy the process kind's constraint."""

    code = "ERR_CONSTRAINT"


class DomainBoundsError(EngineError):
    """An evaluation left the economically meaningful domain."""

    code = "ERR_DOMAIN"


class DegenerateDataError(EngineError):
    """Observations cannot support estimation (e.g. non-positive baseline)."""

    code = "ERR_DEGENERATE"


class CollinearRegressorsError(EngineError):
    """Regressor columns are collinear to working precision."""

    code = "ERR_COLLINEAR"


class InsufficientDataError(EngineError):
    """Fewer observations than the operation requires."""

    code = "ERR_TOO_FEW_ROWS"


class InputParseError(ValueError):
    """Malformed input text (diagram strings, CSV, params files)."""

    code = "ERR_SYNTAX"


class DiagramParseError(InputParseError):
    """Diagram text does not match the ``A->B, ...`` grammar."""

    code = "ERR_SYNTAX"


class UnknownNodeNameError(DiagramParseError):
    """A node name resolves to none of the known aliases."""

    code = "ERR_UNKNOWN_NAME"


class SelfLoopError(DiagramParseError):
    """An edge from a node to itself."""

    code = "ERR_SELF_LOOP"


class CsvFormatError(InputParseError):
    """Observation CSV has a wrong header or an unreadable row."""

    code = "ERR_CSV"


class ParamsFormatError(InputParseError):
    """Model parameter document is malformed or incomplete."""

    code = "ERR_PARAMS"
