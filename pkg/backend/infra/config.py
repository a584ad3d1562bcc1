"""
Global Configuration Management

Engine limits, sampling defaults and the log location for weyl-cone-lab.
Values come from backend/settings.json and may be overridden by environment
variables.
"""

import os
import json
from typing import Any, Dict


class Config:
    """
    Global Configuration Class
    """
    BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    # settings.json path
    _settings_path = os.path.join(BASE_DIR, 'backend', 'settings.json')

    _data: Dict[str, Any] = {}

    # Path configuration
    LOG_DIR = os.path.join(BASE_DIR, "logs")
    LOG_PATH = os.path.join(LOG_DIR, "weyl_lab.log")
    LOG_LEVEL = "INFO"

    # Enumeration limits
    MAX_ELEMENTS = 1_000_000
    STEP_CAP = 10_000
    POWER_BOUND = 50

    # Sampling
    DENOMINATOR_BOUND = 10
    DEFAULT_SAMPLES = 500
    DEFAULT_SEED = 0

    # Looijenga region around the chamber, in word length
    REGION_DEPTH = 2

    # Worker count for parallel overlap checks
    JOBS = 1

    _initialized = False

    @classmethod
    def load_settings(cls):
        """Load settings.json"""
        try:
            if os.path.exists(cls._settings_path):
                with open(cls._settings_path, 'r', encoding='utf-8') as f:
                    cls._data = json.load(f)
        except Exception as e:
            print(f"[Config] Error loading settings: {e}")
            cls._data = {}

        enumeration = cls._data.get('enumeration', {})
        cls.MAX_ELEMENTS = int(enumeration.get('max_elements', cls.MAX_ELEMENTS))

        cls.STEP_CAP = int(cls._data.get('dominance', {}).get('step_cap', cls.STEP_CAP))
        cls.POWER_BOUND = int(cls._data.get('relations', {}).get('power_bound', cls.POWER_BOUND))

        sampling = cls._data.get('sampling', {})
        cls.DENOMINATOR_BOUND = int(sampling.get('denominator_bound', cls.DENOMINATOR_BOUND))
        cls.DEFAULT_SAMPLES = int(sampling.get('default_samples', cls.DEFAULT_SAMPLES))
        cls.DEFAULT_SEED = int(sampling.get('seed', cls.DEFAULT_SEED))

        cls.REGION_DEPTH = int(cls._data.get('looijenga', {}).get('region_depth', cls.REGION_DEPTH))
        cls.JOBS = int(cls._data.get('workers', {}).get('jobs', cls.JOBS))

        cls.LOG_LEVEL = str(cls._data.get('logging', {}).get('level', cls.LOG_LEVEL)).upper()
        log_path = cls._data.get('logging', {}).get('path')
        if log_path:
            cls.LOG_PATH = log_path if os.path.isabs(log_path) else os.path.join(cls.BASE_DIR, log_path)
            cls.LOG_DIR = os.path.dirname(cls.LOG_PATH)

    @classmethod
    def _ensure_initialized(cls):
        """Lazy initialization: only initialize on first access."""
        if not cls._initialized:
            cls.initialize()

    @classmethod
    def initialize(cls):
        """Initialize configuration"""
        if cls._initialized:
            return
        cls._initialized = True

        cls.load_settings()
        cls._apply_env_overrides()
        cls.ensure_dirs()

    @classmethod
    def _apply_env_overrides(cls):
        """Environment variable overrides"""
        if os.environ.get("WEYL_LAB_MAX_ELEMENTS"):
            cls.MAX_ELEMENTS = int(os.environ["WEYL_LAB_MAX_ELEMENTS"])
        if os.environ.get("WEYL_LAB_STEP_CAP"):
            cls.STEP_CAP = int(os.environ["WEYL_LAB_STEP_CAP"])
        if os.environ.get("WEYL_LAB_JOBS"):
            cls.JOBS = int(os.environ["WEYL_LAB_JOBS"])
        if os.environ.get("WEYL_LAB_LOG_LEVEL"):
            cls.LOG_LEVEL = os.environ["WEYL_LAB_LOG_LEVEL"].upper()
        if os.environ.get("WEYL_LAB_LOG_PATH"):
            cls.LOG_PATH = os.path.abspath(os.environ["WEYL_LAB_LOG_PATH"])
            cls.LOG_DIR = os.path.dirname(cls.LOG_PATH)

    @classmethod
    def ensure_dirs(cls):
        try:
            os.makedirs(cls.LOG_DIR, exist_ok=True)
        except OSError:
            pass

    @classmethod
    def get(cls, name: str) -> Any:
        """Read a configuration attribute, initializing on first use."""
        cls._ensure_initialized()
        return getattr(cls, name)

# Lazy initialization: Config.initialize() is called on first access via _ensure_initialized()
