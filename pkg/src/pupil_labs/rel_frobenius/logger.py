import logging
import logging.handlers
from pathlib import Path

from pupil_labs import rel_frobenius
from pupil_labs.rel_frobenius.settings import DATA_DIR, GeneralSettings

LOG_DIR = DATA_DIR / "logs"


def setup_logging(
    settings: GeneralSettings, level: str | None = None, log_dir: Path = LOG_DIR
) -> None:
    """Configure logging to the console and, if enabled, to a rotating file."""
    logger = logging.getLogger()
    logger.setLevel(level or settings.log_level)

    for handler in list(logger.handlers):
        if getattr(handler, "_rel_frobenius", False):
            logger.removeHandler(handler)
            handler.close()

    log_formatter = logging.Formatter(rel_frobenius.LOG_FORMAT_STRING)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(log_formatter)
    console_handler._rel_frobenius = True  # type: ignore[attr-defined]
    logger.addHandler(console_handler)

    if not settings.log_to_file:
        return

    log_file = log_dir / "rel_frobenius.log"
    # 10MB per file, keep 5 backups
    try:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=10 * 1024 * 1024, backupCount=5, encoding="utf-8"
        )
        file_handler.setFormatter(log_formatter)
        file_handler._rel_frobenius = True  # type: ignore[attr-defined]
        logger.addHandler(file_handler)
        logging.info(f"Logging to file: {log_file}")
    except Exception:
        logging.exception(f"Could not start file logger [{log_file}]")
