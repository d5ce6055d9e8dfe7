"""Scan harness: configuration, inequality scans, targeted checks and report emission."""

from .config import ScanConfig, config_from_dict, default_config, load_config
from .scan import VerificationReport, run_scan

__all__ = ["ScanConfig", "VerificationReport", "config_from_dict", "default_config", "load_config",
           "run_scan"]
