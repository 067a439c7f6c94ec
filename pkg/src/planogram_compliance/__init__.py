"""Planogram compliance: graph consistency check, aisle localisation and product verification."""

__version__ = "0.1.0"

from planogram_compliance.config import Settings
from planogram_compliance.orchestrator import ComplianceChecker, SceneInput

__all__ = ["ComplianceChecker", "SceneInput", "Settings", "__version__"]
