"""minibmc: a bounded model checker for an embedded C subset.

Programs are unrolled to a user-supplied bound, turned into guarded
single-assignment equations, encoded as quantifier-free formulas over
bit-vectors, arrays and tuples (or integers/reals), and decided with the
built-in bit-blasting solver or any external SMT-LIB2 solver.
"""

from .encode import BITVECTOR, INTEGER_REAL, EncodingCtx
from .errors import Diagnostic, DiagnosticsError, SourceUnit
from .pipeline import RunConfig, build_ssa, verify
from .report import VerificationReport, render_report
from .typeinfo import TypeInfo, Widths
from .vcgen import ChecksConfig

__version__ = "0.1.0"

__all__ = [
    "BITVECTOR", "INTEGER_REAL", "EncodingCtx", "Diagnostic",
    "DiagnosticsError", "SourceUnit", "RunConfig", "build_ssa", "verify",
    "VerificationReport", "render_report", "TypeInfo", "Widths",
    "ChecksConfig", "__version__",
]
