from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class AppConfig(BaseSettings):
    model_config = SettingsConfigDict()
    log_config: str = "logging.json"
    log_level: Optional[str] = None

    # Solver
    bisection_tolerance: float = 1e-6
    default_param_cap: float = 20.0
    default_beta: float = 0.05

    # O(1) comparator
    o1_grid_size: int = 50

    # Result documents
    schema_version: str = "1.0"
    tool_version: str = "0.1.0"


config = AppConfig()
