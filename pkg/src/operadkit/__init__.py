"""Finite, exact models of operads, their modules and configuration spaces."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

from . import fm, homology, labels, partial, perms, sigma, trees, wconstruction  # noqa: E402,F401
