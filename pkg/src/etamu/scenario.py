"""Sweep configuration stored as flat key=value text with dotted keys.

Example::

    fading.format=I
    fading.eta=0.5
    fading.mu=1
    fading.branches=3
    modulation.scheme=BPSK
    noise.a=1
    snr_grid.start_db=0
    snr_grid.stop_db=30
    snr_grid.step_db=1
    seed=1
"""
import math
import os
from dataclasses import dataclass, field, replace
from importlib import resources

from . import kvtext
from .approx import fit_expsum, from_record, preset_qa
from .errors import DomainError
from .fading import FadingSpec, from_special_case, hoyt_literature_spec
from .metrics import modulation_params
from .noise import NoiseSpec

__all__ = ["SnrGrid", "Scenario", "parse_grid", "load", "loads", "dumps", "shipped", "shipped_names"]

CASES = ("eta_mu", "nakagami", "rayleigh", "hoyt", "hoyt_literature")


@dataclass(frozen=True)
class SnrGrid:
    start_db: float
    stop_db: float
    step_db: float

    def __post_init__(self):
        vals = (self.start_db, self.stop_db, self.step_db)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("SNR grid values must be finite")
        if self.step_db <= 0.0:
            raise DomainError("SNR grid step must be positive")
        if self.stop_db < self.start_db:
            raise DomainError("SNR grid stop must not be below start")

    def points(self):
        n = int(math.floor((self.stop_db - self.start_db) / self.step_db + 1e-9)) + 1
        return [round(self.start_db + i * self.step_db, 10) for i in range(n)]

    def text(self):
        return f"{self.start_db!r}:{self.stop_db!r}:{self.step_db!r}"


def parse_grid(text):
    """``a:b:step`` in dB, endpoints inclusive."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:stop:step, got {text!r}")
    try:
        return SnrGrid(*(float(p) for p in parts))
    except ValueError:
        raise DomainError(f"grid must be numeric, got {text!r}") from None


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    description: str = ""
    case: str = "eta_mu"
    fmt: str = "I"
    eta: float = 0.5
    mu: float = 1.0
    m: float = 1.0
    q: float = 0.5
    branches: int = 1
    scheme: str = "BPSK"
    M: int = 2
    noise_a: float = 2.0
    noise_approx: str = "preset"
    capacity_approx: str = "fit"
    grid: SnrGrid = field(default_factory=lambda: SnrGrid(0.0, 30.0, 1.0))
    seed: int = 1
    budget: float = 0.1
    out_aber: str = ""
    out_acc: str = ""
    base_dir: str = field(default="", compare=False)

    def __post_init__(self):
        if self.case not in CASES:
            raise DomainError(f"fading.case must be one of {CASES}, got {self.case!r}")
        if self.budget <= 0.0:
            raise DomainError("budget must be positive")
        # validate eagerly so config errors surface at load time
        self.fading_spec()
        self.modulation()
        self.noise()

    def fading_spec(self, mean_snr=1.0):
        if self.case == "eta_mu":
            return FadingSpec(self.fmt, self.eta, self.mu, self.branches, mean_snr, self.name)
        if self.case == "hoyt_literature":
            return hoyt_literature_spec(self.q, self.branches, mean_snr)
        return from_special_case(self.case, self.branches, mean_snr, m=self.m, q=self.q)

    def modulation(self):
        return modulation_params(self.scheme, self.M)

    def noise(self):
        return NoiseSpec(self.noise_a)

    def _resolve(self, ref):
        path = ref if os.path.isabs(ref) else os.path.join(self.base_dir, ref)
        with open(path, encoding="utf-8") as fh:
            return from_record(fh.read())

    def noise_approximation(self):
        if self.noise_approx == "preset":
            return preset_qa(self.noise_a)
        if self.noise_approx == "fit":
            return fit_expsum(f"qa{self.noise_a!r}", "decaying", lo=0.1, hi=40.0)
        return self._resolve(self.noise_approx)

    def capacity_approximation(self):
        if self.capacity_approx == "fit":
            return fit_expsum("log2", "saturating")
        return self._resolve(self.capacity_approx)


_KEYS = {
    "name": ("name", str),
    "description": ("description", str),
    "fading.case": ("case", str),
    "fading.format": ("fmt", str),
    "fading.eta": ("eta", float),
    "fading.mu": ("mu", float),
    "fading.m": ("m", float),
    "fading.q": ("q", float),
    "fading.branches": ("branches", int),
    "modulation.scheme": ("scheme", str),
    "modulation.M": ("M", int),
    "noise.a": ("noise_a", float),
    "approx.noise": ("noise_approx", str),
    "approx.capacity": ("capacity_approx", str),
    "seed": ("seed", int),
    "budget": ("budget", float),
    "outputs.aber": ("out_aber", str),
    "outputs.acc": ("out_acc", str),
}
_GRID_KEYS = ("snr_grid.start_db", "snr_grid.stop_db", "snr_grid.step_db")


def loads(text, base_dir=""):
    items = kvtext.parse(text)
    kwargs = {}
    unknown = [k for k in items if k not in _KEYS and k not in _GRID_KEYS]
    if unknown:
        raise DomainError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    for key, (attr, conv) in _KEYS.items():
        if key in items:
            try:
                kwargs[attr] = conv(items[key])
            except ValueError:
                raise DomainError(f"bad value for {key}: {items[key]!r}") from None
    if any(k in items for k in _GRID_KEYS):
        missing = [k for k in _GRID_KEYS if k not in items]
        if missing:
            raise DomainError(f"incomplete SNR grid, missing {', '.join(missing)}")
        try:
            kwargs["grid"] = SnrGrid(*(float(items[k]) for k in _GRID_KEYS))
        except ValueError:
            raise DomainError("SNR grid values must be numeric") from None
    return Scenario(base_dir=base_dir, **kwargs)


def load(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads(text, os.path.dirname(os.path.abspath(path)))


def _fmt(v):
    return kvtext.fmt_float(v) if isinstance(v, float) else str(v)


def dumps(sc, header=None):
    items = [(key, _fmt(getattr(sc, attr))) for key, (attr, _) in _KEYS.items()]
    g = sc.grid
    items += [(k, _fmt(v)) for k, v in zip(_GRID_KEYS, (g.start_db, g.stop_db, g.step_db))]
    return kvtext.dump(items, header)


def shipped_names():
    root = resources.files("etamu") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".scn"))


def shipped(name):
    """Load one of the bundled example scenarios by file name."""
    if not name.endswith(".scn"):
        name += ".scn"
    res = resources.files("etamu") / "scenarios" / name
    if not res.is_file():
        raise DomainError(f"no bundled scenario {name!r}")
    with resources.as_file(res) as path:
        return load(str(path))


def with_overrides(sc, grid=None, seed=None, budget=None):
    kw = {}
    if grid is not None:
        kw["grid"] = grid
    if seed is not None:
        kw["seed"] = seed
    if budget is not None:
        kw["budget"] = budget
    return replace(sc, **kw) if kw else sc
