"""Degree distributions, their text serialization and conditional transforms."""
from __future__ import annotations

import zlib
from typing import Mapping

import numpy as np

from .hypergeom import hypergeom_matrix

SUM_TOL = 1e-12
COND_SUM_TOL = 1e-10
FILE_SUM_TOL = 1e-9


class DistributionFormatError(ValueError):
    pass


class _Pmf:
    min_degree = 1
    sum_tol = SUM_TOL

    def __init__(self, probs):
        if isinstance(probs, Mapping):
            if not probs:
                raise ValueError("empty distribution")
            D = max(int(d) for d in probs)
            pmf = np.zeros(D + 1)
            for d, p in probs.items():
                d = int(d)
                if d < self.min_degree:
                    raise ValueError(f"degree {d} below {self.min_degree}")
                pmf[d] += float(p)
        else:
            pmf = np.array(probs, dtype=float)
        if pmf.ndim != 1 or pmf.size < 2:
            raise ValueError("probability vector must be 1-d with a degree >= 1")
        if self.min_degree > 0 and pmf[0] != 0.0:
            raise ValueError("degree 0 carries mass")
        if np.any(pmf < 0):
            raise ValueError("negative probability")
        if abs(pmf.sum() - 1.0) > self.sum_tol:
            raise ValueError(f"probabilities sum to {pmf.sum()!r}, not 1")
        # trim trailing zeros so max_degree is the true support maximum
        nz = np.flatnonzero(pmf)
        pmf = pmf[: nz[-1] + 1] if nz.size else pmf[:2]
        if pmf.size < 2:
            pmf = np.append(pmf, 0.0)
        pmf.setflags(write=False)
        self.pmf = pmf

    @classmethod
    def from_weights(cls, weights):
        """Build from non-negative weights, renormalizing them to sum 1."""
        if isinstance(weights, Mapping):
            total = sum(float(v) for v in weights.values())
            return cls({int(d): float(v) / total for d, v in weights.items()})
        w = np.asarray(weights, dtype=float)
        w = np.where(w < 0, 0.0, w)
        return cls(w / w.sum())

    @property
    def max_degree(self) -> int:
        return self.pmf.size - 1

    @property
    def probs(self) -> dict[int, float]:
        return {d: float(p) for d, p in enumerate(self.pmf) if p > 0}

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.pmf.size), self.pmf))

    def __call__(self, x):
        """Generating polynomial sum_d p_d x^d."""
        return np.polynomial.polynomial.polyval(x, self.pmf)

    def derivative(self, x):
        return np.polynomial.polynomial.polyval(
            x, np.polynomial.polynomial.polyder(self.pmf))

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, self.pmf.size))
        out[: self.pmf.size] = self.pmf
        return out

    def tv_distance(self, other) -> float:
        other_pmf = other.pmf if isinstance(other, _Pmf) else np.asarray(other)
        n = max(self.pmf.size, other_pmf.size)
        a = self.padded(n)
        b = np.zeros(n)
        b[: other_pmf.size] = other_pmf
        return 0.5 * float(np.abs(a - b).sum())

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.pmf, other.pmf)

    def __hash__(self):
        return hash((type(self).__name__, self.pmf.tobytes()))

    def __repr__(self):
        terms = ", ".join(f"{d}: {p:.6g}" for d, p in self.probs.items())
        return f"{type(self).__name__}({{{terms}}})"


class DegreeDistribution(_Pmf):
    """Probability vector over coded-symbol degrees 1..D."""

    def sample(self, rng: np.random.Generator, size=None):
        cdf = np.cumsum(self.pmf)
        cdf[-1] = 1.0
        u = rng.random(size)
        return np.searchsorted(cdf, u, side="right")

    def edge_perspective(self) -> np.ndarray:
        """omega_d = (d+1) p_{d+1} / mean for d = 0..D-1 (children per AND node)."""
        d = np.arange(1, self.pmf.size)
        return d * self.pmf[1:] / self.mean

    def to_text(self) -> str:
        body = "\n".join(f"{d} {p:.17g}" for d, p in self.probs.items())
        crc = zlib.crc32(body.encode()) & 0xFFFFFFFF
        return (f"# degree distribution\nmax_degree {self.max_degree}\n"
                f"checksum {crc:08x}\n{body}\n")

    @classmethod
    def from_text(cls, text: str) -> "DegreeDistribution":
        header = {}
        rows = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(" ")
            if key in ("max_degree", "checksum"):
                header[key] = value.strip()
                continue
            rows.append(line)
        if "max_degree" not in header or "checksum" not in header:
            raise DistributionFormatError("missing max_degree/checksum header")
        body = "\n".join(rows)
        crc = zlib.crc32(body.encode()) & 0xFFFFFFFF
        if f"{crc:08x}" != header["checksum"].lower():
            raise DistributionFormatError("checksum mismatch")
        D = int(header["max_degree"])
        probs = {}
        for line in rows:
            try:
                d_str, p_str = line.split()
                d, p = int(d_str), float(p_str)
            except ValueError:
                raise DistributionFormatError(f"bad row {line!r}") from None
            if not 1 <= d <= D:
                raise DistributionFormatError(f"degree {d} outside 1..{D}")
            if p < 0:
                raise DistributionFormatError(f"negative probability at degree {d}")
            probs[d] = probs.get(d, 0.0) + p
        total = sum(probs.values())
        if abs(total - 1.0) > FILE_SUM_TOL:
            raise DistributionFormatError(f"probabilities sum to {total!r}")
        return cls.from_weights(probs)


class ConditionalDistribution(_Pmf):
    """Degree distribution after stripping edges to known symbols.

    Degree 0 is allowed; its mass is the fraction of coded symbols whose
    neighbors are all known already.
    """
    min_degree = 0
    sum_tol = COND_SUM_TOL

    def derivative_at_one(self) -> float:
        return self.mean


def conditional_distribution(dist: DegreeDistribution, total: int, known: int
                             ) -> ConditionalDistribution:
    """Degree distribution of symbols over `total` ids once `known` are stripped.

    A degree d+w symbol keeps d edges when w of its picks hit the known pool,
    which for uniform picks is a hypergeometric split.
    """
    if known >= total:
        raise ValueError(f"known={known} must be smaller than total={total}")
    if known < 0:
        raise ValueError("known must be non-negative")
    H = hypergeom_matrix(total, known, dist.max_degree)
    out = dist.pmf @ H
    # truncation can leave a few ulps; the invariant is sum = 1 within 1e-10
    return ConditionalDistribution(out / out.sum())
