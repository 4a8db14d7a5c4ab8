"""Simeck32/64 side-channel cube attack workbench.

Blocks and keys are plain Python ints. Bit index 0 is the most significant
bit of the block (or of the 64-bit key).
"""

try:
    from ._sccube import *  # noqa: F401,F403
    from ._sccube import __doc__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to the package
    from _sccube import *  # noqa: F401,F403
