"""LSTM kernel backend selection.

Imports the compiled extension when available, otherwise the numpy
fallback. ``SPANTAG_PYTHON_KERNELS=1`` forces the fallback, which is
useful for benchmarking and for debugging numeric differences.
"""

import os

from . import fallback

if os.environ.get("SPANTAG_PYTHON_KERNELS") == "1":
    _impl = fallback
    BACKEND = "python"
else:
    try:
        from . import _lstmc as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "python"

lstm_seq_forward = _impl.lstm_seq_forward
lstm_seq_backward = _impl.lstm_seq_backward

__all__ = ["BACKEND", "lstm_seq_forward", "lstm_seq_backward", "fallback"]
