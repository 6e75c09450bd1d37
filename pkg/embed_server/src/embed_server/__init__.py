from .app import create_app
from .config import MAX_TEXT_CHARS, ServerConfig
from .encoders import Encoder, HashEncoder, build_encoder

__all__ = ["Encoder", "HashEncoder", "MAX_TEXT_CHARS", "ServerConfig", "build_encoder", "create_app"]
