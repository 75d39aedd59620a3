import dataclasses
import json
import logging
import typing as T
from dataclasses import dataclass
from pathlib import Path

from numpyencoder import NumpyEncoder

DATA_DIR = Path.home() / "Pupil Labs" / "Rel Frobenius"
SETTINGS_PATH = DATA_DIR / "settings.json"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class GeneralSettings:
    jobs: int = 1
    chunk_size: int = 8192
    show_progress: bool = True
    log_level: str = "INFO"
    log_to_file: bool = False

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be at least 1, got {self.chunk_size}")
        self.log_level = self.log_level.upper()
        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}, got {self.log_level}")

    def to_dict(self) -> dict[str, T.Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: T.Mapping[str, T.Any]) -> "GeneralSettings":
        known = {f.name for f in dataclasses.fields(cls)}
        for key in sorted(set(data) - known):
            logging.warning(f"Ignoring unknown setting: {key}")

        return cls(**{k: v for k, v in data.items() if k in known})


def load_settings(path: Path = SETTINGS_PATH) -> GeneralSettings:
    try:
        logging.info(f"Loading settings from {path}")
        return GeneralSettings.from_dict(json.loads(path.read_text()))
    except FileNotFoundError:
        logging.warning("Settings file not found")
    except Exception:
        logging.exception("Failed to load settings")

    return GeneralSettings()


def save_settings(settings: GeneralSettings, path: Path = SETTINGS_PATH) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as f:
            json.dump(settings.to_dict(), f, cls=NumpyEncoder, indent=2)

        logging.info(f"Settings saved to {path}")
    except Exception:
        logging.exception("Failed to save settings")
        raise
