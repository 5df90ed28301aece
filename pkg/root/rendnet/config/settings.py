import os
from dotenv import load_dotenv
from dataclasses import dataclass
from typing import Optional


@dataclass
class RuntimeSettings:
    """Process-wide knobs that are not part of any experiment's identity."""
    log_level: str = "INFO"
    workers: int = 1
    plan_cache_size: int = 4096


@dataclass
class DataSettings:
    """Default locations and seeds used when the CLI is not told otherwise."""
    data_dir: str = "data/synth"
    seed: int = 7
    checkpoint_path: Optional[str] = None


class Settings:
    """Central settings management"""
    def __init__(self):
        load_dotenv()  # Load environment variables from .env
        self._load_settings()

    def _load_settings(self):
        self.runtime = RuntimeSettings(
            log_level=os.getenv('RENDNET_LOG_LEVEL', 'INFO').upper(),
            workers=int(os.getenv('RENDNET_WORKERS', 1)),
            plan_cache_size=int(os.getenv('RENDNET_PLAN_CACHE_SIZE', 4096)),
        )

        self.data = DataSettings(
            data_dir=os.getenv('RENDNET_DATA_DIR', 'data/synth'),
            seed=int(os.getenv('RENDNET_SEED', 7)),
            checkpoint_path=os.getenv('RENDNET_CHECKPOINT'),
        )

        if self.runtime.workers < 1:
            raise ValueError(f"RENDNET_WORKERS must be >= 1, got {self.runtime.workers}")


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the lazily created process settings."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
