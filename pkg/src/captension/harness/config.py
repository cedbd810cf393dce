"""Experiment configuration: flat key = value files plus CLI overrides."""

import dataclasses
from dataclasses import dataclass

from ..errors import ConfigError

__all__ = ["ExperimentConfig"]

# file/CLI spellings that differ from the attribute name
_ALIASES = {"t_final": "T"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; defaults are the reference desk scale."""

    n_theta: int = 32
    n_r: int = 16
    T: float = 0.1
    c_cfl: float = 0.5
    k_list: tuple = (100.0, 200.0, 400.0, 800.0)
    stream_mode: int = 2
    amplitude: float = 0.05
    n_outputs: int = 21
    dt_fixed: float = 1e-3
    tol_ell: float = 1e-9
    tol_vol: float = 1e-9
    tol_L1: float = 1e-9
    delta0: float = 0.1
    norms_to_report: tuple = (("nabla_f", 0), ("nabla_f", 1),
                              ("eta_gap", 1), ("etadot_gap", 1))
    out_dir: str = "out"
    seed: int = 0

    def __post_init__(self):
        if self.n_theta < 8 or self.n_theta % 2:
            raise ConfigError("n_theta must be an even integer >= 8")
        if self.n_r < 8:
            raise ConfigError("n_r must be >= 8")
        if not self.T > 0:
            raise ConfigError("T must be positive")
        if not self.c_cfl > 0:
            raise ConfigError("c_cfl must be positive")
        if not self.k_list:
            raise ConfigError("k_list must not be empty")
        ks = tuple(float(k) for k in self.k_list)
        if any(k <= 0 for k in ks):
            raise ConfigError("every k must be positive")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ConfigError("k_list must be strictly increasing")
        if self.stream_mode < 0:
            raise ConfigError("stream_mode must be >= 0")
        if self.amplitude < 0:
            raise ConfigError("amplitude must be >= 0")
        if self.n_outputs < 2:
            raise ConfigError("n_outputs must be >= 2")
        if not self.dt_fixed > 0:
            raise ConfigError("dt_fixed must be positive")

    @classmethod
    def from_mapping(cls, mapping):
        """Build from string-keyed values, coercing types per field."""
        types = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for raw_key, value in mapping.items():
            key = _ALIASES.get(raw_key, raw_key)
            if key not in types:
                raise ConfigError(f"unknown configuration key {raw_key!r}")
            kwargs[key] = _coerce(key, value)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        mapping = {}
        try:
            with open(path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.split("#", 1)[0].strip()
                    if not line:
                        continue
                    if "=" not in line:
                        raise ConfigError(
                            f"{path}:{lineno}: expected key = value")
                    key, _, value = line.partition("=")
                    mapping[key.strip()] = value.strip()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_mapping(mapping)

    def with_overrides(self, **kwargs):
        updates = {}
        for raw_key, value in kwargs.items():
            if value is None:
                continue
            key = _ALIASES.get(raw_key, raw_key)
            updates[key] = _coerce(key, value)
        return dataclasses.replace(self, **updates)


_INT_KEYS = {"n_theta", "n_r", "stream_mode", "n_outputs", "seed"}
_FLOAT_KEYS = {"T", "c_cfl", "amplitude", "dt_fixed",
               "tol_ell", "tol_vol", "tol_L1", "delta0"}


def _coerce(key, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "k_list":
            if isinstance(value, str):
                value = value.split(",")
            return tuple(float(v) for v in value)
        if key == "norms_to_report":
            if isinstance(value, str):
                pairs = [p for p in value.split(",") if p.strip()]
                return tuple((p.split(":")[0].strip(), int(p.split(":")[1]))
                             for p in pairs)
            return tuple((str(q), int(s)) for q, s in value)
        return value
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
