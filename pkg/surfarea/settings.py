"""Environment-driven defaults shared by the library and the CLI."""
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from surfarea.constants import (
    BAND_TRIANGLES,
    DEFAULT_EDGE_ORDER,
    DEFAULT_QUAD_DEGREE,
    DEFAULT_REFERENCE_REFINE,
    DEFAULT_SEMINORM_REFINE,
    MAX_EDGE_ORDER,
    MAX_TRIANGLE_DEGREE,
)


class StudySettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="SURFAREA_")

    # Worker processes for convergence studies
    num_workers: int = Field(default=1, ge=1)
    quad_degree: int = Field(default=DEFAULT_QUAD_DEGREE, ge=1, le=MAX_TRIANGLE_DEGREE)
    edge_order: int = Field(default=DEFAULT_EDGE_ORDER, ge=1, le=MAX_EDGE_ORDER)
    seminorm_refine: int = Field(default=DEFAULT_SEMINORM_REFINE, ge=0, le=6)
    reference_refine: int = Field(default=DEFAULT_REFERENCE_REFINE, ge=0, le=6)
    band_triangles: int = Field(default=BAND_TRIANGLES, ge=1000)


def get_settings() -> StudySettings:
    return StudySettings()
