"""Reference embedding service for the destructure remote-provider contract."""

from .app import BATCH_LIMIT, create_app
from .encoders import HashingEncoder, load_encoder

__version__ = "0.1.0"

__all__ = ["BATCH_LIMIT", "HashingEncoder", "create_app", "load_encoder"]
