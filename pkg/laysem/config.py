"""Run configuration and YAML instance descriptions."""

import logging
import os
from pathlib import Path
from typing import Any, Literal, Mapping, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from laysem.core import ConstructedSemiring, build_layered, naive_layered
from laysem.errors import ConfigError, LaysemError
from laysem.extensions import truncation_projection
from laysem.monoids import ValuedMonoid, parse_monoid, parse_monoid_value
from laysem.reports import DEFAULT_BUDGET, DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_SEED
from laysem.sorting import Sort, SortingSemiring, parse_sort, parse_sorting

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "LAYSEM_SEED"
MAX_SEED = 2**64


class InstanceDescription(BaseModel):
    """A layered instance: sorting, monoid and optional truncations."""

    model_config = ConfigDict(extra="forbid")

    sorting: str = "nat-inf"
    monoid: str = "qmax"
    nu_trunc: Optional[str] = None
    sort_trunc: Optional[str] = None
    truncation_order: Literal["nu-first", "sort-first"] = "nu-first"
    force_empty_ideal: bool = False

    @field_validator("sorting")
    @classmethod
    def _known_sorting(cls, value: str) -> str:
        try:
            parse_sorting(value)
        except LaysemError as exc:
            raise ValueError(str(exc)) from exc
        return value

    @field_validator("monoid")
    @classmethod
    def _known_monoid(cls, value: str) -> str:
        try:
            parse_monoid(value)
        except LaysemError as exc:
            raise ValueError(str(exc)) from exc
        return value

    @field_validator("nu_trunc", "sort_trunc", mode="before")
    @classmethod
    def _as_text(cls, value: Any) -> Any:
        return None if value is None else str(value)

    @model_validator(mode="after")
    def _valid_thresholds(self) -> "InstanceDescription":
        try:
            if self.nu_trunc is not None:
                self.monoid_object().truncate(self.nu_threshold())
            if self.sort_trunc is not None:
                self.sorting_semiring().truncate(self.sort_threshold())
        except LaysemError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def sorting_semiring(self) -> SortingSemiring:
        return parse_sorting(self.sorting)

    def monoid_object(self) -> ValuedMonoid:
        return parse_monoid(self.monoid)

    def nu_threshold(self) -> Any:
        if self.nu_trunc is None:
            return None
        return parse_monoid_value(self.nu_trunc, self.monoid_object())

    def sort_threshold(self) -> Optional[Sort]:
        if self.sort_trunc is None:
            return None
        return parse_sort(self.sort_trunc, self.sorting_semiring())

    def build(self) -> ConstructedSemiring:
        """Construct the instance, applying truncations in the configured order."""
        L, M = self.sorting_semiring(), self.monoid_object()
        R = naive_layered(L, M) if self.force_empty_ideal else build_layered(L, M)
        if self.nu_trunc is None and self.sort_trunc is None:
            return R
        projection = truncation_projection(
            R,
            self.nu_threshold(),
            self.sort_threshold(),
            sort_first=self.truncation_order == "sort-first",
        )
        assert isinstance(projection.dst, ConstructedSemiring)
        return projection.dst

    @classmethod
    def load(cls, path: Union[str, Path]) -> "InstanceDescription":
        """Read a YAML instance description.

        Raises:
            ConfigError: If the file is missing, not YAML, or fails validation
        """
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read instance {path}: {exc}") from exc
        if isinstance(data, dict) and isinstance(data.get("instance"), dict):
            data = data["instance"]
        if not isinstance(data, dict):
            raise ConfigError(f"instance {path} must be a mapping")
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise ConfigError(f"invalid instance {path}: {_first_error(exc)}") from exc

    def dump(self) -> str:
        return yaml.safe_dump(self.model_dump(), sort_keys=False)


class RunConfig(BaseModel):
    """Validated settings for one CLI invocation."""

    model_config = ConfigDict(extra="forbid")

    command: str
    instance: InstanceDescription = Field(default_factory=InstanceDescription)
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=MAX_SEED)
    budget: int = Field(default=DEFAULT_BUDGET, ge=1)
    exhaustive_limit: int = Field(default=DEFAULT_EXHAUSTIVE_LIMIT, ge=1)
    verbose: bool = False

    @classmethod
    def from_args(cls, args: Any, environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        """Merge parsed flags with the environment.

        Seed precedence is --seed, then LAYSEM_SEED, then the built-in default.

        Raises:
            ConfigError: On any invalid flag, file or environment value
        """
        env = os.environ if environ is None else environ
        seed = getattr(args, "seed", None)
        if seed is None and env.get(SEED_ENV_VAR):
            try:
                seed = int(env[SEED_ENV_VAR])
            except ValueError as exc:
                raise ConfigError(f"{SEED_ENV_VAR} must be an integer") from exc
        instance_path = getattr(args, "instance", None)
        try:
            if instance_path is not None:
                instance = InstanceDescription.load(instance_path)
            else:
                instance = InstanceDescription(
                    sorting=args.sorting,
                    monoid=args.monoid,
                    nu_trunc=getattr(args, "nu_trunc", None),
                    sort_trunc=getattr(args, "sort_trunc", None),
                    truncation_order="sort-first" if getattr(args, "sort_first", False) else "nu-first",
                    force_empty_ideal=getattr(args, "force_empty_ideal", False),
                )
            config = cls(
                command=args.command,
                instance=instance,
                seed=DEFAULT_SEED if seed is None else seed,
                budget=args.budget,
                exhaustive_limit=args.exhaustive_limit,
                verbose=args.verbose,
            )
        except ValidationError as exc:
            raise ConfigError(_first_error(exc)) from exc
        logger.debug("run config: %s", config.model_dump())
        return config


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    return f"{location}: {error['msg']}" if location else error["msg"]
