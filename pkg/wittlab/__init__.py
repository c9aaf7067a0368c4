__version__ = "0.1.0"

from . import api  # noqa: E402

__all__ = ["api"]
