import os
from pydantic import AliasChoices, Field, PositiveInt
from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # env type
    ENVIRONMENT: str = "development"

    # State-space caps
    STATE_CAP: PositiveInt = Field(
        20_000_000,
        validation_alias=AliasChoices("RESONANCE_LAB_CAP", "STATE_CAP"),
    )
    FPL_MAX_N: PositiveInt = 6
    LINEAR_EXTENSION_CAP: PositiveInt = 100_000
    CODOMAIN_ENUMERATION_LIMIT: PositiveInt = 1 << 20

    # Workers
    DEFAULT_WORKERS: PositiveInt = 1
    SHARDS_PER_WORKER: PositiveInt = 4

    # Debug / validation
    DEBUG: bool = False
    VALIDATE_IDEALS: bool = True
    SHOW_PROGRESS: bool = True

    # Report rendering
    REPORT_INDENT: int = 2

    # Log settings
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = False
    LOG_ROTATION: str = "00:00"
    LOG_RETENTION: str = "30 days"

    # Configure the location of the .env file (based on environment)
    class Config:
        env_file = ".env"
        populate_by_name = True

def load_settings(environment: str = "development") -> Settings:
    env_file = f".env.{environment}"
    settings = Settings(_env_file=env_file)
    if environment == "testing":
        settings.SHOW_PROGRESS = False
        settings.LOG_LEVEL = "WARNING"
    elif environment == "production":
        settings.VALIDATE_IDEALS = settings.DEBUG
    return settings

environment = os.getenv('ENVIRONMENT', 'development')
settings = load_settings(environment)
