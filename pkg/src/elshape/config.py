"""Experiment configuration: flat key-value files with dotted sections.

The on-disk format is one ``key = value`` pair per line, ``#`` comments,
dotted keys for grouping:

    shape = kite
    lame.lambda = 1.0
    lame.omega = 5.0
    delta = 0.05
    truncation.mode = practical

Unknown keys are rejected with their path, since silent typos are the
main hazard in flat config files.  Numeric invariants are enforced at
build time (rho > guess radius > R > 0, delta in [0,1), epsilon > 0,
degree >= 1).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .elastic import LameSystem
from .errors import ConfigError
from .modal import choose_truncation

_SQ2 = math.sqrt(0.5)

#: key -> (python type, default)
CONFIG_SCHEMA = {
    "shape": (str, "kite"),
    "shape.radius": (float, 1.0),
    "shape.coeffs": (str, ""),
    "lame.lambda": (float, 1.0),
    "lame.mu": (float, 1.0),
    "lame.omega": (float, 5.0),
    "polarization.x": (float, _SQ2),
    "polarization.y": (float, _SQ2),
    "rho": (float, 3.0),
    "n_receivers": (int, 128),
    "n_sources": (int, 20),
    "aperture.lo": (float, 0.0),
    "aperture.hi": (float, 2.0 * math.pi),
    "delta": (float, 0.05),
    "seed": (int, 1),
    "epsilon": (float, 1e-4),
    "np": (int, 8),
    "guess.radius": (float, 1.5),
    "r_policy.mode": (str, "auto"),
    "r_policy.fraction": (float, 0.4),
    "r_policy.value": (float, 0.0),
    "max_iter": (int, 50),
    "damping": (float, 1.0),
    "reg": (float, 1e-10),
    "fit_reg": (float, -1.0),  # -1 = auto: 1e-8 noise-free, 2*delta otherwise
    "truncation.mode": (str, "practical"),
    "truncation.n": (int, 0),
    "truncation.tau2": (float, 0.0),
    "stop.rule": (str, "relative"),
    "stop.c1": (float, 0.0),
    "collocation.n": (int, 64),
    "mfs.n_collocation": (int, 0),
    "mfs.n_charges": (int, 0),
    "mfs.shrink": (float, 0.0),
}

#: per-shape MFS resolution giving comfortable forward accuracy; zeros in
#: the config mean "use these"
_MFS_BY_SHAPE = {
    "disk": (128, 64, 0.6),
    "kite": (512, 256, 0.92),
    "starfish": (384, 192, 0.85),
    "custom": (256, 128, 0.8),
}


def parse_config_text(text: str) -> dict:
    """Parse the flat key-value format; values typed per the schema."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip().strip('"')
        if key not in CONFIG_SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        typ, _ = CONFIG_SCHEMA[key]
        try:
            values[key] = typ(val) if typ is not str else val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: key '{key}': {exc}") from None
    return values


@dataclass(frozen=True)
class ReconstructionConfig:
    """Validated experiment parameters; see CONFIG_SCHEMA for defaults."""

    raw: dict = field(repr=False)

    def __post_init__(self):
        merged = {k: d for k, (_, d) in CONFIG_SCHEMA.items()}
        merged.update(self.raw)
        object.__setattr__(self, "raw", merged)
        self._validate()

    def _validate(self):
        g = self.raw
        errors = []
        if g["shape"] not in ("disk", "kite", "starfish", "custom"):
            errors.append(f"shape: unknown shape '{g['shape']}'")
        if g["shape"] == "custom":
            try:
                c = self.shape_coeffs()
                if c.size % 2 == 0 or c.size < 1:
                    errors.append("shape.coeffs: need odd number of coefficients")
            except ValueError:
                errors.append("shape.coeffs: expected comma-separated floats")
        if g["lame.mu"] <= 0.0 or g["lame.lambda"] + g["lame.mu"] <= 0.0:
            errors.append("lame: need mu > 0 and lambda + mu > 0")
        if g["lame.omega"] <= 0.0:
            errors.append("lame.omega: must be positive")
        if not 0.0 <= g["delta"] < 1.0:
            errors.append("delta: must lie in [0, 1)")
        if g["epsilon"] <= 0.0:
            errors.append("epsilon: must be positive")
        if g["np"] < 1:
            errors.append("np: trigonometric degree must be >= 1")
        if g["n_receivers"] < 4:
            errors.append("n_receivers: must be >= 4")
        if g["n_sources"] < 0:
            errors.append("n_sources: must be >= 0")
        if not (g["aperture.hi"] > g["aperture.lo"]):
            errors.append("aperture: need lo < hi")
        if g["aperture.hi"] - g["aperture.lo"] > 2.0 * math.pi + 1e-12:
            errors.append("aperture: span cannot exceed 2*pi")
        if g["max_iter"] < 0:
            errors.append("max_iter: must be >= 0")
        if not 0.0 < g["damping"] <= 1.0:
            errors.append("damping: must lie in (0, 1]")
        if g["reg"] < 0.0:
            errors.append("reg: must be nonnegative")
        if g["fit_reg"] < 0.0 and g["fit_reg"] != -1.0:
            errors.append("fit_reg: must be nonnegative (or -1 for auto)")
        if g["truncation.mode"] not in ("practical", "theoretical", "fixed"):
            errors.append("truncation.mode: expected practical|theoretical|fixed")
        if g["truncation.mode"] == "fixed" and g["truncation.n"] < 0:
            errors.append("truncation.n: must be >= 0")
        if g["truncation.mode"] != "fixed" and not 0.0 < g["delta"] < 1.0:
            errors.append("truncation: practical/theoretical modes need delta in (0,1)")
        if g["truncation.mode"] == "theoretical" and g["truncation.tau2"] <= 1.0:
            errors.append("truncation.tau2: theoretical rule needs tau2 > 1")
        if g["stop.rule"] not in ("relative", "theoretical"):
            errors.append("stop.rule: expected relative|theoretical")
        if g["stop.rule"] == "theoretical" and g["stop.c1"] <= 0.0:
            errors.append("stop.c1: theoretical stop needs a positive constant")
        if g["r_policy.mode"] not in ("auto", "fixed"):
            errors.append("r_policy.mode: expected auto|fixed")

        R = self.resolve_R()
        if not 0.0 < R < g["guess.radius"]:
            errors.append(
                f"r_policy: resolved R={R:g} must satisfy 0 < R < guess radius"
            )
        if not g["guess.radius"] < g["rho"]:
            errors.append("guess.radius: must be smaller than rho")
        if errors:
            raise ConfigError("; ".join(errors))

    # -- typed accessors ---------------------------------------------------

    def __getitem__(self, key):
        return self.raw[key]

    @property
    def sys(self) -> LameSystem:
        return LameSystem(self.raw["lame.lambda"], self.raw["lame.mu"], self.raw["lame.omega"])

    @property
    def delta_active(self) -> bool:
        return self.raw["delta"] > 0.0

    @property
    def polarization(self):
        return (self.raw["polarization.x"], self.raw["polarization.y"])

    @property
    def aperture(self):
        return (self.raw["aperture.lo"], self.raw["aperture.hi"])

    def shape_coeffs(self) -> np.ndarray:
        return np.array(
            [float(v) for v in self.raw["shape.coeffs"].split(",") if v.strip() != ""]
        )

    def mfs_params(self):
        n_col = self.raw["mfs.n_collocation"]
        n_chg = self.raw["mfs.n_charges"]
        shrink = self.raw["mfs.shrink"]
        by_shape = _MFS_BY_SHAPE[self.raw["shape"]]
        return (
            n_col if n_col > 0 else by_shape[0],
            n_chg if n_chg > 0 else by_shape[1],
            shrink if shrink > 0.0 else by_shape[2],
        )

    def resolve_R(self, guess_min_radius: float | None = None) -> float:
        """Expansion radius from the policy; auto mode clamps to sane bounds."""
        g = self.raw
        if g["r_policy.mode"] == "fixed":
            return g["r_policy.value"]
        base = g["guess.radius"] if guess_min_radius is None else guess_min_radius
        return float(np.clip(g["r_policy.fraction"] * base, 0.1, 0.9 * base))

    def resolve_fit_reg(self) -> float:
        """Aperture-fit ridge: noise-free fits barely need one, noisy fits
        need a weight on the noise scale."""
        v = self.raw["fit_reg"]
        if v >= 0.0:
            return v
        return 1e-8 if self.raw["delta"] == 0.0 else 2.0 * self.raw["delta"]

    def resolve_truncation(self) -> int:
        g = self.raw
        mode = g["truncation.mode"]
        if mode == "fixed":
            return g["truncation.n"]
        if mode == "theoretical":
            return choose_truncation(g["delta"], "theoretical", g["truncation.tau2"])
        return choose_truncation(g["delta"], "practical")

    def echo(self) -> dict:
        """Stable dict for embedding into run artifacts."""
        return dict(sorted(self.raw.items()))


def load_config(path) -> ReconstructionConfig:
    with open(path) as fh:
        return ReconstructionConfig(parse_config_text(fh.read()))


def make_shape(cfg: ReconstructionConfig):
    """Truth curve named by the config."""
    from . import geometry

    name = cfg["shape"]
    if name == "disk":
        return geometry.disk(cfg["shape.radius"])
    if name == "kite":
        return geometry.kite()
    if name == "starfish":
        return geometry.starfish()
    return geometry.radial_curve(cfg.shape_coeffs(), "custom")
