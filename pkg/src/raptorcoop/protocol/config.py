"""Scenario configuration and its JSON form."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..channel import ErasureMatrix
from ..codec import DegreeDistribution, PrecodeSpec
from .. import tables

SCHEMES = ("fcc", "pcc", "nocoop", "perfect")
FIDELITIES = ("structural", "payload")


class ConfigError(ValueError):
    """Invalid scenario; ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ScenarioConfig:
    M: int
    k: int
    N: int
    erasures: ErasureMatrix
    scheme: str
    dists: tuple[DegreeDistribution, ...]
    n: int | None = None
    T: int = 1024
    F: int = 1
    precode: PrecodeSpec = field(default_factory=PrecodeSpec)
    trials: int = 200
    master_seed: int = 0
    fidelity: str = "structural"
    max_frames: int | None = None
    fold_overhead: bool = False

    def __post_init__(self):
        if self.M < 1:
            raise ConfigError("M", "need at least one user")
        if self.k < 1 or self.N < 1:
            raise ConfigError("k" if self.k < 1 else "N", "must be positive")
        if self.erasures.num_users != self.M:
            raise ConfigError("erasures", f"expected {self.M} users")
        if self.scheme not in SCHEMES:
            raise ConfigError("scheme", f"must be one of {SCHEMES}")
        if self.fidelity not in FIDELITIES:
            raise ConfigError("fidelity", f"must be one of {FIDELITIES}")
        want = self.M if self.scheme == "fcc" else 1
        if len(self.dists) != want:
            raise ConfigError("dists", f"scheme {self.scheme} needs {want} distribution(s)")
        if self.F < 1:
            raise ConfigError("F", "decode period must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        n = self.precode.message_count(self.k) if self.n is None else self.n
        if self.precode.intermediate_count(n) != self.k:
            raise ConfigError("n", f"n={n} does not give k={self.k} at rate {self.precode.rate}")
        object.__setattr__(self, "n", n)
        if self.max_frames is None:
            object.__setattr__(self, "max_frames", math.ceil(10 * self.k / self.N))
        if self.N * self.max_frames < self.k:
            raise ConfigError("max_frames", "N * max_frames must be at least k")

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "M": self.M, "n": self.n, "k": self.k, "N": self.N, "T": self.T,
            "erasures": {"user_to_dest": list(self.erasures.user_to_dest),
                         "inter_user": [list(r) for r in self.erasures.inter_user]},
            "scheme": self.scheme,
            "dists": [d.probs for d in self.dists],
            "F": self.F,
            "precode": {"kind": self.precode.kind, "rate": self.precode.rate,
                        "check_degree": self.precode.check_degree},
            "trials": self.trials, "master_seed": self.master_seed,
            "fidelity": self.fidelity, "max_frames": self.max_frames,
            "fold_overhead": self.fold_overhead,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def resolve_distribution(spec, base_dir: Path | None = None) -> DegreeDistribution:
    """Accepts a dict, a named table ("fcc:M", "pcc:M[:ratio]", "fig4") or a file path."""
    if isinstance(spec, DegreeDistribution):
        return spec
    if isinstance(spec, dict):
        return DegreeDistribution.from_weights({int(d): p for d, p in spec.items()})
    if isinstance(spec, str):
        head, _, rest = spec.partition(":")
        if head == "fcc":
            return tables.fcc_table(int(rest))
        if head == "pcc":
            M, _, ratio = rest.partition(":")
            return tables.pcc_table(int(M), float(ratio or 0.1))
        if head == "fig4":
            return tables.partial_recovery_omega()
        path = Path(spec)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return DegreeDistribution.from_text(path.read_text())
    raise TypeError(f"cannot interpret distribution {spec!r}")


def default_dists(scheme: str, M: int):
    if scheme == "fcc":
        return tuple(tables.fcc_tables(M))
    if scheme == "perfect":
        return (tables.fcc_table(M),)
    if scheme == "pcc":
        return (tables.pcc_table(M) if M > 1 else tables.fcc_table(1),)
    return (tables.fcc_table(1),)


def erasures_from(raw, M: int) -> ErasureMatrix:
    dest = raw.get("user_to_dest")
    if dest is None or len(dest) != M:
        raise ConfigError("erasures.user_to_dest", f"need {M} values")
    inter = raw.get("inter_user", 0.0)
    try:
        if isinstance(inter, (int, float)):
            return ErasureMatrix.uniform(dest, float(inter))
        return ErasureMatrix(tuple(float(e) for e in dest),
                             tuple(tuple(float(x) for x in row) for row in inter))
    except ValueError as exc:
        raise ConfigError("erasures", str(exc)) from None


_KNOWN_KEYS = {"M", "n", "k", "N", "T", "erasures", "scheme", "dists", "F", "precode",
               "trials", "master_seed", "fidelity", "max_frames", "fold_overhead",
               "sweep", "name", "description", "analysis"}


def config_from_dict(raw: dict, base_dir: Path | None = None) -> ScenarioConfig:
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    for key in ("M", "N", "erasures", "scheme"):
        if key not in raw:
            raise ConfigError(key, "missing")
    try:
        M = int(raw["M"])
        scheme = raw["scheme"]
        pre = raw.get("precode", {}) or {}
        precode = PrecodeSpec(rate=float(pre.get("rate", 1.0)), kind=pre.get("kind", "none"),
                              **({"check_degree": int(pre["check_degree"])}
                                 if "check_degree" in pre else {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError("precode", str(exc)) from None
    if "k" in raw:
        k = int(raw["k"])
    elif "n" in raw:
        k = precode.intermediate_count(int(raw["n"]))
    else:
        raise ConfigError("k", "missing (give k or n)")
    if "dists" in raw and raw["dists"] is not None:
        try:
            dists = tuple(resolve_distribution(d, base_dir) for d in raw["dists"])
        except (ValueError, KeyError, OSError, TypeError) as exc:
            raise ConfigError("dists", str(exc)) from None
    else:
        if scheme not in SCHEMES:
            raise ConfigError("scheme", f"must be one of {SCHEMES}")
        dists = default_dists(scheme, M)
    return ScenarioConfig(
        M=M, k=k, N=int(raw["N"]), erasures=erasures_from(raw["erasures"], M),
        scheme=scheme, dists=dists, n=raw.get("n"), T=int(raw.get("T", 1024)),
        F=int(raw.get("F", 1)), precode=precode, trials=int(raw.get("trials", 200)),
        master_seed=int(raw.get("master_seed", 0)),
        fidelity=raw.get("fidelity", "structural"),
        max_frames=raw.get("max_frames"),
        fold_overhead=bool(raw.get("fold_overhead", False)),
    )


def load_config(path) -> tuple[ScenarioConfig, dict]:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be an object")
    return config_from_dict(raw, path.parent), raw
