"""Verification report rows and deterministic CSV serialization.

CSV cells use 17 significant digits, complex values as ``re+imj``, LF line
endings, UTF-8.  Wall time is kept on the in-memory report but excluded
from the CSV so reruns are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    identity_name: str
    parameters: dict = field(default_factory=dict)
    lhs: complex = 0.0 + 0.0j
    rhs: complex = 0.0 + 0.0j
    abs_error: float = 0.0
    rel_error: float = 0.0
    tolerance: float = 0.0
    passed: bool = False
    wall_time: float = 0.0


def make_report(
    identity_name: str,
    parameters: dict,
    lhs: complex,
    rhs: complex,
    tolerance: float,
    wall_time: float = 0.0,
) -> VerificationReport:
    """Build a report row; near-zero identities (|lhs|+|rhs| < 1) pass on
    absolute error, everything else on relative error."""
    lhs = complex(lhs)
    rhs = complex(rhs)
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0 else 0.0
    if abs(lhs) + abs(rhs) < 1.0:
        passed = abs_err <= tolerance
    else:
        passed = rel_err <= tolerance
    return VerificationReport(
        identity_name=identity_name,
        parameters=dict(parameters),
        lhs=lhs,
        rhs=rhs,
        abs_error=abs_err,
        rel_error=rel_err,
        tolerance=tolerance,
        passed=passed,
        wall_time=wall_time,
    )


def format_real(x: float) -> str:
    return f"{float(x):.17g}"


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _format_parameters(parameters: dict) -> str:
    return ";".join(f"{k}={parameters[k]}" for k in parameters)


CSV_HEADER = "identity,parameters,lhs,rhs,abs_error,rel_error,tolerance,passed"


def reports_to_csv(reports) -> str:
    lines = [CSV_HEADER]
    for r in reports:
        lines.append(
            ",".join(
                [
                    r.identity_name,
                    _format_parameters(r.parameters),
                    format_complex(r.lhs),
                    format_complex(r.rhs),
                    format_real(r.abs_error),
                    format_real(r.rel_error),
                    format_real(r.tolerance),
                    "1" if r.passed else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(reports, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(reports_to_csv(reports))
