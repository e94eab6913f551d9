"""Run configuration: one JSON document, unknown keys rejected.

Every section is optional; the defaults describe the Hadamard benchmark
(theta = pi/4, phi = 0, K22 = 0 family, durations 1/4, 3/4, 1).
"""
import json
import math
import os
from dataclasses import dataclass
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError
from .experiments import HADAMARD_EPSILONS
from .path import TWO_PI, load_path_csv, make_cap_loop, make_hadamard_path, solid_angle, wrap_angle


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GateSection(_Section):
    theta: float = Field(math.pi / 4, ge=0.0, le=math.pi)
    phi: float = Field(0.0, ge=0.0, lt=TWO_PI)
    phi_tau: Optional[float] = Field(None, ge=0.0, lt=TWO_PI)


class PathSection(_Section):
    kind: Literal["fig1", "hadamard", "custom"] = "hadamard"
    alpha0: Optional[float] = Field(None, gt=0.0, le=math.pi)
    tau1: float = 0.25
    tau2: float = 0.75
    tau: float = 1.0
    csv_source: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind != "custom" and not 0.0 < self.tau1 < self.tau2 < self.tau:
            raise ValueError(f"need 0 < tau1 < tau2 < tau, got "
                             f"tau1={self.tau1}, tau2={self.tau2}, tau={self.tau}")
        if self.kind == "custom" and not self.csv_source:
            raise ValueError("kind 'custom' needs csv_source")
        if self.kind != "custom" and self.csv_source:
            raise ValueError("csv_source is only valid with kind 'custom'")
        if self.kind == "hadamard" and self.alpha0 is not None and abs(self.alpha0 - math.pi / 2) > 1e-12:
            raise ValueError("the hadamard path has alpha0 = pi/2; use kind 'fig1' for other loops")
        return self


class ModelSection(_Section):
    family: Literal["k22_zero", "k22_negbeta"] = "k22_zero"


class ErrorSection(_Section):
    epsilon: Optional[float] = Field(None, gt=-1.0, lt=1.0)
    epsilon_list: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check(self):
        if self.epsilon is not None and self.epsilon_list is not None:
            raise ValueError("give either epsilon or epsilon_list, not both")
        if self.epsilon_list is not None:
            if not self.epsilon_list:
                raise ValueError("epsilon_list must not be empty")
            bad = [e for e in self.epsilon_list if not abs(e) < 1]
            if bad:
                raise ValueError(f"|epsilon| must be < 1, got {bad}")
        return self


class PropagatorSection(_Section):
    steps_per_segment: int = Field(4000, ge=16)


class OutputSection(_Section):
    directory: str = "."
    format: Literal["csv", "json"] = "csv"


class ScanSection(_Section):
    alpha_grid: Optional[List[float]] = None
    alpha_min: float = Field(0.2, gt=0.0, le=math.pi)
    alpha_max: float = Field(math.pi, gt=0.0, le=math.pi)
    points: int = Field(50, ge=2)

    @model_validator(mode="after")
    def _check(self):
        if self.alpha_grid is not None:
            if not self.alpha_grid or any(not 0 < a <= math.pi for a in self.alpha_grid):
                raise ValueError("alpha_grid values must lie in (0, pi]")
        elif self.alpha_min >= self.alpha_max:
            raise ValueError("alpha_min must be below alpha_max")
        return self

    def grid(self):
        if self.alpha_grid is not None:
            return list(self.alpha_grid)
        return np.linspace(self.alpha_min, self.alpha_max, self.points).tolist()


class VerificationSection(_Section):
    trials: int = Field(20, ge=1)
    seed: int = 2024


class RunConfig(_Section):
    gate: GateSection = Field(default_factory=GateSection)
    path: PathSection = Field(default_factory=PathSection)
    model: ModelSection = Field(default_factory=ModelSection)
    error: ErrorSection = Field(default_factory=ErrorSection)
    propagator: PropagatorSection = Field(default_factory=PropagatorSection)
    output: OutputSection = Field(default_factory=OutputSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    verification: VerificationSection = Field(default_factory=VerificationSection)

    def single_epsilon(self, command):
        if self.error.epsilon_list is not None:
            raise ConfigError(f"{command} takes a single error.epsilon, not error.epsilon_list")
        return 0.0 if self.error.epsilon is None else self.error.epsilon

    def epsilon_list(self):
        if self.error.epsilon_list is not None:
            return list(self.error.epsilon_list)
        if self.error.epsilon is not None:
            return [self.error.epsilon]
        return list(HADAMARD_EPSILONS)


def _describe(exc):
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_config(text, source="<config>"):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"{source}: {_describe(exc)}") from None


def load_config(path):
    if path is None:
        return RunConfig(), os.getcwd()
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, path), os.path.dirname(os.path.abspath(path))


@dataclass(frozen=True)
class Resolved:
    path: object
    theta: float
    phi: float
    alpha0: Optional[float]


def resolve_path(cfg, base_dir, validate=True):
    """Build the configured path and check it against ``gate.phi_tau`` if given."""
    pc = cfg.path
    alpha0 = pc.alpha0
    if pc.kind == "hadamard":
        path, alpha0 = make_hadamard_path(pc.tau1, pc.tau2, pc.tau), math.pi / 2
    elif pc.kind == "fig1":
        if alpha0 is None:
            if cfg.gate.phi_tau is None:
                raise ConfigError("path.alpha0 or gate.phi_tau is required for kind 'fig1'")
            alpha0 = math.acos(1 - cfg.gate.phi_tau / math.pi)
            if alpha0 == 0.0:
                raise ConfigError("gate.phi_tau = 0 gives a degenerate loop")
        path = make_cap_loop(alpha0, pc.tau1, pc.tau2, pc.tau)
    else:
        source = pc.csv_source
        if not os.path.isabs(source):
            source = os.path.join(base_dir, source)
        if not os.path.exists(source):
            raise ConfigError(f"path.csv_source: file not found: {source}")
        path = load_path_csv(source, validate=validate)
    if cfg.gate.phi_tau is not None:
        angle = solid_angle(path)
        if abs(wrap_angle(angle - cfg.gate.phi_tau)) > 1e-8:
            raise ConfigError(
                f"gate.phi_tau = {cfg.gate.phi_tau} but the path encloses half solid angle {angle:.12g}")
    return Resolved(path, cfg.gate.theta, cfg.gate.phi, alpha0)
