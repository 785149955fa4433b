"""
Version stamps for reports.
"""

from typing import Dict

import numpy as np
import scipy


def package_versions() -> Dict[str, str]:
    """Versions of subwalk and the numerical stack."""
    from .. import __version__

    return {"subwalk": __version__, "numpy": np.__version__, "scipy": scipy.__version__}
