"""
Configuration handling for ThabitSolver
"""
import os
import yaml
import logging
from dataclasses import dataclass, field
from typing import Dict, Any, Optional

from dotenv import load_dotenv

from thabit_solver.algebraic import DEFAULT_PRECISION, PRECISION_CAP
from thabit_solver.errors import ConfigurationError

logger = logging.getLogger("thabit_solver")

ENV_OVERRIDES = {
    "THABIT_PRECISION_CAP": ("precision_cap", int),
    "THABIT_MAX_WORKERS": ("max_workers", int),
    "THABIT_OUTPUT_DIR": ("output_dir", str),
}


@dataclass
class SolverConfig:
    """Configuration settings for ThabitSolver"""
    # Precision ladder
    precision: int = DEFAULT_PRECISION
    precision_cap: int = PRECISION_CAP

    # Search range
    b_min: int = 2
    b_max: int = 10
    n_max: Optional[int] = None  # overrides the per-sequence search cutoff
    search_cutoffs: Dict[str, int] = field(default_factory=lambda: {
        "padovan": 300,
        "perrin": 350,
        "narayana": 400,
    })

    # Reduction
    max_attempts: int = 10

    # Output
    check_paper: bool = False
    output_dir: str = "certificates"
    show_progress: bool = True

    # Performance settings
    parallel_processing: bool = False
    max_workers: int = 4

    @classmethod
    def from_file(cls, config_path: str) -> 'SolverConfig':
        """
        Load configuration from a YAML file

        Args:
            config_path: Path to the config file

        Returns:
            SolverConfig object
        """
        if not os.path.exists(config_path):
            logger.warning(f"Config file not found: {config_path}, using defaults")
            return cls()

        try:
            with open(config_path, 'r') as f:
                config_data = yaml.safe_load(f)

            if not config_data:
                logger.warning("Empty config file, using defaults")
                return cls()

            config = cls()

            config.precision = config_data.get('precision', config.precision)
            config.precision_cap = config_data.get('precision_cap', config.precision_cap)

            config.b_min = config_data.get('b_min', config.b_min)
            config.b_max = config_data.get('b_max', config.b_max)
            config.n_max = config_data.get('n_max', config.n_max)
            if 'search_cutoffs' in config_data:
                for key, value in config_data['search_cutoffs'].items():
                    if key in config.search_cutoffs:
                        config.search_cutoffs[key] = value

            config.max_attempts = config_data.get('max_attempts', config.max_attempts)

            config.check_paper = config_data.get('check_paper', config.check_paper)
            config.output_dir = config_data.get('output_dir', config.output_dir)
            config.show_progress = config_data.get('show_progress', config.show_progress)

            config.parallel_processing = config_data.get('parallel_processing', config.parallel_processing)
            config.max_workers = config_data.get('max_workers', config.max_workers)

            return config

        except Exception as e:
            logger.error(f"Error loading config file: {e}")
            return cls()

    def apply_environment(self) -> 'SolverConfig':
        """
        Apply THABIT_* overrides from the environment or a .env file

        Returns:
            self, for chaining
        """
        load_dotenv()
        for variable, (attribute, convert) in ENV_OVERRIDES.items():
            raw = os.environ.get(variable)
            if raw is None:
                continue
            try:
                setattr(self, attribute, convert(raw))
                logger.debug(f"{attribute} set from {variable}")
            except ValueError:
                logger.warning(f"Ignoring {variable}={raw!r}: not a valid {convert.__name__}")
        return self

    def validate(self) -> None:
        """
        Check the settings for consistency

        Raises:
            ConfigurationError: On the first invalid setting
        """
        if self.b_min < 2:
            raise ConfigurationError(f"b_min must be at least 2, got {self.b_min}")
        if self.b_min > self.b_max:
            raise ConfigurationError(f"empty base range: b_min={self.b_min} > b_max={self.b_max}")
        if self.precision < 64:
            raise ConfigurationError(f"precision must be at least 64 bits, got {self.precision}")
        if self.precision_cap < self.precision:
            raise ConfigurationError(
                f"precision_cap ({self.precision_cap}) is below precision ({self.precision})"
            )
        if self.n_max is not None and self.n_max < 0:
            raise ConfigurationError(f"n_max must be non-negative, got {self.n_max}")
        if self.max_attempts < 1:
            raise ConfigurationError(f"max_attempts must be positive, got {self.max_attempts}")
        for sequence, cutoff in self.search_cutoffs.items():
            if cutoff < 0:
                raise ConfigurationError(f"search cutoff for {sequence} must be non-negative")

    def search_cutoff(self, sequence: str) -> int:
        """Search range for a sequence: n_max if set, else its cutoff."""
        if self.n_max is not None:
            return self.n_max
        return self.search_cutoffs[sequence]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'precision': self.precision,
            'precision_cap': self.precision_cap,
            'b_min': self.b_min,
            'b_max': self.b_max,
            'n_max': self.n_max,
            'search_cutoffs': dict(self.search_cutoffs),
            'max_attempts': self.max_attempts,
            'check_paper': self.check_paper,
            'output_dir': self.output_dir,
            'show_progress': self.show_progress,
            'parallel_processing': self.parallel_processing,
            'max_workers': self.max_workers,
        }

    def to_file(self, config_path: str) -> bool:
        """
        Save configuration to a YAML file

        Args:
            config_path: Path to save the config

        Returns:
            True if successful, False otherwise
        """
        try:
            os.makedirs(os.path.dirname(os.path.abspath(config_path)), exist_ok=True)

            with open(config_path, 'w') as f:
                yaml.dump(self.to_dict(), f, default_flow_style=False)

            logger.info(f"Configuration saved to {config_path}")
            return True

        except Exception as e:
            logger.error(f"Error saving config file: {e}")
            return False

    @classmethod
    def create_default_config(cls, config_path: str = "thabit.yaml") -> bool:
        """
        Create a default configuration file

        Args:
            config_path: Path to save the config

        Returns:
            True if successful, False otherwise
        """
        config = cls()
        return config.to_file(config_path)
