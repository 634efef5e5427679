import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def setup(cache_dir: str) -> Path:
    """
    Create the transition cache directory if it does not exist yet.
    """
    path = Path(cache_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
        logger.info(f"Cache directory ready at {path}")
        return path
    except OSError as e:
        logger.error(f"Failed to set up cache directory: {str(e)}")
        raise
