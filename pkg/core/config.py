import logging
from typing import Any, Optional

from django.conf import settings

logger = logging.getLogger(__name__)


class ConfigurationManager:
    """
    Read-only access to the numerical defaults in settings.RMTK with type casting.
    """

    @classmethod
    def get_setting(cls, key: str, default: Any = None, cast: Optional[type] = None) -> Any:
        """
        Retrieves a setting value by key.

        1. Looks the key up in settings.RMTK.
        2. Casts it when a target type is given.
        3. Returns default (with a warning) if not found or not castable.
        """
        values = getattr(settings, 'RMTK', {})
        if key not in values:
            logger.warning(f"Setting key '{key}' not found. Using default.")
            return default

        value = values[key]
        if cast is None:
            return value
        return cls._cast_value(key, value, cast, default)

    @classmethod
    def worker_count(cls, requested: Optional[int] = None) -> int:
        """RMTK_THREADS wins over the --workers flag, which wins over the default."""
        override = getattr(settings, 'RMTK_THREADS', None)
        if override:
            if requested and requested != override:
                logger.info(f"RMTK_THREADS={override} overrides --workers {requested}.")
            return max(1, int(override))
        if requested:
            return max(1, int(requested))
        return cls.get_setting('MC_WORKERS', 1, int)

    @staticmethod
    def _cast_value(key: str, value: Any, cast: type, default: Any) -> Any:
        try:
            if cast is bool and isinstance(value, str):
                return value.lower() in ('true', '1', 't', 'yes', 'on')
            return cast(value)
        except (TypeError, ValueError) as e:
            logger.error(f"Type casting error for '{key}'={value!r} as {cast.__name__}: {e}")
            return default
