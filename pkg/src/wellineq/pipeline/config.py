"""Run configuration loaded from TOML."""

from dataclasses import dataclass, field, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..wellbeing import DimensionGoalpost, Goalposts, IndexParams

DEFAULT_OMEGAS = tuple(round(0.1 * k, 10) for k in range(11))


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    benchmark_years: tuple = (1990, 2000, 2010)
    epsilons: tuple = (0.5, 1.0, 1.5)
    betas: tuple = (0.0, 0.5, 1.0)
    omegas: tuple = DEFAULT_OMEGAS
    n: int = 10000
    seed: int = 0
    goalposts: Goalposts = field(default_factory=Goalposts)
    weights: tuple = (1 / 3, 1 / 3, 1 / 3)
    output_dir: str = "out"
    table_epsilon: float = 0.5
    window: int = 4
    school_entry_age: float = 6.0

    def __post_init__(self):
        for name in ("benchmark_years", "epsilons", "betas", "omegas"):
            if not getattr(self, name):
                raise ConfigError(f"{name} grid must be nonempty")
        if any(e < 0 for e in self.epsilons) or any(b < 0 for b in self.betas):
            raise ConfigError("epsilon and beta values must be nonnegative")
        if any(not 0 <= w <= 1 for w in self.omegas):
            raise ConfigError("omega values must lie in [0, 1]")
        if self.n < 100:
            raise ConfigError("n must be at least 100")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.window < 0:
            raise ConfigError("window must be nonnegative")
        try:
            IndexParams(1.0, 1.0, self.weights)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def index_params(self, epsilon, beta):
        return IndexParams(float(epsilon), float(beta), self.weights)

    def with_overrides(self, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        try:
            return replace(self, **kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


_KEYS = {
    "benchmark_years": "benchmark_years",
    "epsilon": "epsilons",
    "beta": "betas",
    "omega": "omegas",
    "n": "n",
    "seed": "seed",
    "output_dir": "output_dir",
    "table_epsilon": "table_epsilon",
    "window": "window",
    "school_entry_age": "school_entry_age",
}


def _goalposts(table):
    unknown = set(table) - {"income", "lifespan", "education", "floor"}
    if unknown:
        raise ConfigError(f"unknown goalposts keys: {sorted(unknown)}")
    base = Goalposts()
    kw = {}
    for dim in ("income", "lifespan", "education"):
        if dim in table:
            spec = dict(table[dim])
            cur = getattr(base, dim)
            extra = set(spec) - {"lower", "upper", "kind"}
            if extra:
                raise ConfigError(f"unknown goalposts.{dim} keys: {sorted(extra)}")
            kw[dim] = DimensionGoalpost(float(spec.get("lower", cur.lower)),
                                        float(spec.get("upper", cur.upper)),
                                        str(spec.get("kind", cur.kind)))
    if "floor" in table:
        kw["floor"] = float(table["floor"])
    return Goalposts(**kw)


def parse_config(doc):
    """Build a :class:`RunConfig` from a parsed TOML mapping."""
    kw = {}
    for key, value in doc.items():
        if key == "goalposts":
            try:
                kw["goalposts"] = _goalposts(value)
            except ValueError as exc:
                raise ConfigError(f"goalposts: {exc}") from None
        elif key == "weights":
            w = value
            if isinstance(w, dict):
                w = [w.get("income"), w.get("lifespan"), w.get("education")]
            if any(x is None for x in w) or len(w) != 3:
                raise ConfigError("weights need income, lifespan and education entries")
            kw["weights"] = tuple(float(x) for x in w)
        elif key in _KEYS:
            target = _KEYS[key]
            if target in ("benchmark_years", "epsilons", "betas", "omegas"):
                if not isinstance(value, list):
                    raise ConfigError(f"{key} must be a list")
                cast = int if target == "benchmark_years" else float
                kw[target] = tuple(cast(x) for x in value)
            elif target in ("n", "seed", "window"):
                kw[target] = int(value)
            elif target == "output_dir":
                kw[target] = str(value)
            else:
                kw[target] = float(value)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return RunConfig(**kw)


def load_config(path):
    path = Path(path)
    try:
        with path.open("rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(doc)
