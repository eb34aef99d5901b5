"""Ontology annotation quality scoring for ISA-Tab metadata."""

from ._annorate import *  # noqa: F401,F403
from ._annorate import AnnorateError, __doc__  # noqa: F401

__version__ = "0.1.0"
