"""Server configuration."""

from dataclasses import dataclass

MAX_TEXT_CHARS = 512


@dataclass(frozen=True)
class ServerConfig:
    model: str = "hash"  # encoder spec: hash[:dim] | st:<model-name> | laser
    host: str = "127.0.0.1"
    port: int = 8090
    max_batch: int = 64  # encode calls are chunked to this size
    device: str = "cpu"

    def __post_init__(self):
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")
