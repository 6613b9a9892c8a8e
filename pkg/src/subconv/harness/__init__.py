from .exponents import ExponentSolution, exponent_calculator
from .report import VerificationReport, make_report, reports_to_csv, write_csv
from .config import HarnessConfig, load_config
from .scan import subconvexity_scan, scan_to_csv
from .suite import run_suite

__all__ = [
    "ExponentSolution",
    "exponent_calculator",
    "VerificationReport",
    "make_report",
    "reports_to_csv",
    "write_csv",
    "HarnessConfig",
    "load_config",
    "subconvexity_scan",
    "scan_to_csv",
    "run_suite",
]
