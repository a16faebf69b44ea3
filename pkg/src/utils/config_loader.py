"""
Configuration Loader

Loads application settings and sweep presets from YAML files.
"""

import yaml
from pathlib import Path
from typing import Dict, Any, Optional

try:
    from ..data.errors import ConfigurationError
except ImportError:
    from data.errors import ConfigurationError


DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent.parent.parent / "config"


class ConfigLoader:
    """
    Configuration loader for the toolkit
    """

    def __init__(self, config_dir: Optional[str] = None):
        """
        Initialize configuration loader

        Args:
            config_dir: Directory containing settings.yaml and presets.yaml
                (defaults to the repository's config/ directory)
        """
        self.config_dir = Path(config_dir) if config_dir else DEFAULT_CONFIG_DIR
        self._settings: Optional[Dict[str, Any]] = None
        self._presets: Optional[Dict[str, Any]] = None

    def load_settings(self) -> Dict[str, Any]:
        """
        Load application settings from settings.yaml

        Returns:
            Dictionary containing settings
        """
        if self._settings is None:
            self._settings = self._load_yaml(self.config_dir / "settings.yaml")

        return self._settings

    def load_presets(self) -> Dict[str, Any]:
        """
        Load sweep presets from presets.yaml

        Returns:
            Dictionary mapping preset name to a sweep config document
        """
        if self._presets is None:
            self._presets = self._load_yaml(self.config_dir / "presets.yaml")

        return self._presets

    def get_preset(self, name: str) -> Dict[str, Any]:
        """
        Get one preset sweep document

        Args:
            name: Preset name (fig1, fig2)

        Returns:
            A copy of the preset document

        Raises:
            ConfigurationError: If the preset is not defined
        """
        presets = self.load_presets().get('presets', {})
        if name not in presets:
            raise ConfigurationError(f"Unknown preset: {name}")
        return dict(presets[name])

    def get_setting(self, key_path: str, default: Any = None) -> Any:
        """
        Get a specific setting using dot notation

        Args:
            key_path: Dot-separated path to setting (e.g., 'oracle.dense_limit')
            default: Default value if setting not found

        Returns:
            Setting value or default
        """
        settings = self.load_settings()
        keys = key_path.split('.')

        value = settings
        for key in keys:
            if isinstance(value, dict):
                value = value.get(key)
                if value is None:
                    return default
            else:
                return default

        return value

    def _load_yaml(self, file_path: Path) -> Dict[str, Any]:
        """
        Load YAML file

        Args:
            file_path: Path to YAML file

        Returns:
            Dictionary containing YAML data

        Raises:
            ConfigurationError: If the file is missing or not valid YAML
        """
        if not file_path.exists():
            raise ConfigurationError(f"Configuration file not found: {file_path}")

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
                return data if data is not None else {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Error parsing YAML file {file_path}: {e}")

    def reload(self) -> None:
        """Reload all configuration files"""
        self._settings = None
        self._presets = None
        self.load_settings()
        self.load_presets()


# Global config instance
_config_instance: Optional[ConfigLoader] = None


def get_config(config_dir: Optional[str] = None) -> ConfigLoader:
    """
    Get global configuration instance

    Args:
        config_dir: Configuration directory path

    Returns:
        ConfigLoader instance
    """
    global _config_instance
    if _config_instance is None or (
        config_dir is not None and Path(config_dir) != _config_instance.config_dir
    ):
        _config_instance = ConfigLoader(config_dir)
    return _config_instance
