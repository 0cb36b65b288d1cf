"""
Application settings configuration.
"""
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""
    # Application
    PROJECT_NAME: str = Field(
        default="paramvex",
        description="Project name"
    )

    # Problem size caps (desk-scale tool)
    PARAMVEX_MAX_DIM: int = Field(
        default=32,
        ge=1,
        description="Maximum decision and parameter dimension (n, m)"
    )
    PARAMVEX_MAX_ROWS: int = Field(
        default=128,
        ge=0,
        description="Maximum number of feasible-mapping rows (k)"
    )

    # Execution
    PARAMVEX_WORKERS: int = Field(
        default=4,
        ge=1,
        description="Thread pool size for grid evaluation; 1 runs sequentially"
    )
    PARAMVEX_LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        description="Logging level for the command line"
    )

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

# Create settings instance
settings = Settings()
