# SPDX-License-Identifier: Apache-2.0
"""Uplink multi-user MIMO scheduling for receivers with low-resolution ADCs.

Thin wrapper over the compiled _core module: beamspace channel generation,
AQNM quantization, zero-forcing rates, and the scheduling algorithms plus
the Monte Carlo sweep driver.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
