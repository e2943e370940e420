"""Tests for run configuration."""

import os
from unittest.mock import patch

import pytest

from feyncut.config.settings import Config


class TestConfig:
    """Test cases for Config."""

    def test_defaults(self):
        """Test the default settings."""
        with patch.dict(os.environ, {'FEYNCUT_THREADS': ''}):
            config = Config()
        assert config.threads == 1
        assert config.output_format == 'json'
        assert config.degrees == (3, 4)

    def test_from_env(self):
        """Test that environment values are read and overrides win."""
        with patch.dict(os.environ, {'FEYNCUT_THREADS': '4', 'FEYNCUT_SEED': '7'}):
            config = Config.from_env()
            assert (config.threads, config.seed) == (4, 7)
            config = Config.from_env(threads=2, seed=None)
            assert (config.threads, config.seed) == (2, 7)

    @pytest.mark.parametrize("overrides, message", [
        ({'threads': 0}, "Thread count must be positive"),
        ({'output_format': 'xml'}, "Unknown output format"),
        ({'massless_default': 'some'}, "Unknown massless default"),
    ])
    def test_invalid(self, overrides, message):
        """Test validation of settings."""
        with pytest.raises(ValueError, match=message):
            Config.from_dict(overrides)

    def test_dict_round_trip(self):
        """Test that to_dict and from_dict agree."""
        config = Config(threads=3, degrees=[4])
        data = config.to_dict()
        assert data['degrees'] == [4]
        assert Config.from_dict(data) == config
