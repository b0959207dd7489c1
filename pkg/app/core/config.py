from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic import AliasChoices, Field, validator
from pydantic_settings import BaseSettings

_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}


class Settings(BaseSettings):
    """Application configuration loaded from environment variables."""

    app_name: str = Field("drillfill", description="Display name for the API and CLI banner")
    environment: str = Field("development", description="Environment name")
    log_level: str = Field(
        "WARNING",
        validation_alias=AliasChoices("LOG_LEVEL", "DRILLFILL_LOG_LEVEL"),
        description="Python logging level",
    )

    prove_max_depth: int = Field(
        60,
        validation_alias=AliasChoices("PROVE_MAX_DEPTH", "DRILLFILL_DEPTH", "MAX_DEPTH"),
        description="Deepest bisection level explored by the branch-and-bound prover",
    )
    prove_max_boxes: int = Field(
        2_000_000,
        validation_alias=AliasChoices("PROVE_MAX_BOXES", "DRILLFILL_MAX_BOXES"),
        description="Box budget after which a proof attempt is reported inconclusive",
    )
    workers: int = Field(
        1,
        validation_alias=AliasChoices("WORKERS", "DRILLFILL_WORKERS"),
        description="Thread pool size used to evaluate sub-boxes",
    )
    root_tolerance: float = Field(
        1e-13,
        validation_alias=AliasChoices("ROOT_TOLERANCE", "DRILLFILL_ROOT_TOL"),
        description="Target bracket width for verified root isolation",
    )

    display_digits: int = Field(
        12,
        validation_alias=AliasChoices("DISPLAY_DIGITS", "DRILLFILL_DIGITS"),
        description="Significant digits printed for interval endpoints",
    )
    output_format: str = Field(
        "human",
        validation_alias=AliasChoices("OUTPUT_FORMAT", "DRILLFILL_OUTPUT"),
        description="CLI output mode: human or json",
    )
    ledger_path: Path = Field(
        Path("verify_ledger.json"),
        validation_alias=AliasChoices("LEDGER_PATH", "VERIFY_LEDGER", "DRILLFILL_LEDGER"),
        description="JSON file caching verification results",
    )

    class Config:
        env_file = "drillfill.env"
        env_file_encoding = "utf-8"
        case_sensitive = False

    @validator("ledger_path", pre=True)
    def _coerce_ledger_path(cls, value: str | Path) -> Path:
        return Path(value)

    @validator("log_level", pre=True)
    def _normalize_log_level(cls, value: str | None) -> str:
        if not value:
            return "WARNING"
        normalized = str(value).strip().upper()
        if normalized == "WARN":
            normalized = "WARNING"
        if normalized not in _LEVELS:
            raise ValueError("LOG_LEVEL must be a logging level name such as INFO or DEBUG")
        return normalized

    @validator("output_format", pre=True)
    def _normalize_output_format(cls, value: str | None) -> str:
        if not value:
            return "human"
        normalized = str(value).strip().lower()
        if normalized in {"human", "text", "table"}:
            return "human"
        if normalized == "json":
            return "json"
        raise ValueError("OUTPUT_FORMAT must be human or json")

    @validator("prove_max_depth", "prove_max_boxes", "workers", pre=True)
    def _normalize_positive(cls, value: int | str) -> int:
        number = int(value)
        if number < 1:
            raise ValueError("PROVE_MAX_DEPTH, PROVE_MAX_BOXES and WORKERS must be at least 1")
        return number

    @validator("display_digits", pre=True)
    def _normalize_digits(cls, value: int | str) -> int:
        number = int(value)
        if not 1 <= number <= 17:
            raise ValueError("DISPLAY_DIGITS must be between 1 and 17")
        return number

    @validator("root_tolerance", pre=True)
    def _normalize_tolerance(cls, value: float | str) -> float:
        number = float(value)
        if not number > 0:
            raise ValueError("ROOT_TOLERANCE must be positive")
        return number


@lru_cache()
def get_settings() -> Settings:
    return Settings()  # type: ignore[arg-type]


settings = get_settings()
