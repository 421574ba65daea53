"""Lexicon sentiment audit toolkit.

Thin python surface over the native core: lexicon loading and scoring,
tokenization, coverage statistics, the difference regression (OLS with
t-based p-values), Benjamini-Hochberg adjustment, Spearman correlation,
and the config-driven score/audit/synth pipelines.
"""

try:
    from ._native import *  # noqa: F401,F403  (installed package layout)
    from ._native import __doc__ as _native_doc  # noqa: F401
except ImportError:  # build-tree layout: _native.so next to the build dir
    from _native import *  # noqa: F401,F403

__version__ = "0.1.0"
