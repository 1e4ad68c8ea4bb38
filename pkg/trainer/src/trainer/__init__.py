"""Training-side companion to the svmcert engine.

Builds datasets (synthetic generators, plus best-effort public downloads),
preprocesses them into the engine's normalized layout, trains scikit-learn
SVCs, and exports model + dataset + manifest bundles in the engine's file
formats.  The engine is only ever consumed through those files and its CLI.
"""

from .preprocess import PreprocessResult, Table, preprocess
from .export import ExportBundle, ExportError, probe_agreement, train_and_export
from .pfi_ref import reference_pfi
from .synth import compas_like_table, example1_table

__all__ = [
    "ExportBundle",
    "ExportError",
    "PreprocessResult",
    "Table",
    "compas_like_table",
    "example1_table",
    "preprocess",
    "probe_agreement",
    "reference_pfi",
    "train_and_export",
]
