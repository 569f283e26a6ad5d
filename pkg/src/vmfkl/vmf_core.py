"""The von Mises-Fisher distribution on the unit hypersphere S^(d-1).

Parameter containers, the log normalization constant, log density,
first-moment scale, exact sampling, and the surface area of the sphere
(as the r = 1 case of the orthonormal-frame manifold area).

Distribution objects are immutable after construction and safe to share
across threads. Sampling takes an explicit seed and owns a private
generator per call; to split work across workers deterministically,
derive per-chunk seeds as ``seed XOR chunk_index`` so the union of the
chunks is independent of scheduling.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import special_functions as sf
from ._kernels import _sample_cosines
from .errors import DomainError, SamplingError

_MASK64 = 0xFFFFFFFFFFFFFFFF
_REJECTION_CAP = 10_000_000


class UnitVector:
    """A point on S^(d-1), stored normalized to unit Euclidean norm.

    The constructor rescales its input and rejects vectors with norm
    below 1e-12 (there is no meaningful direction to recover from
    those). Coordinates are exposed as a read-only float64 array.
    """

    __slots__ = ("coords",)

    def __init__(self, coords) -> None:
        arr = np.asarray(coords, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise DomainError("UnitVector requires a 1-d sequence of length >= 2")
        norm = float(np.linalg.norm(arr))
        if not math.isfinite(norm) or norm < 1e-12:
            raise DomainError(f"UnitVector norm {norm} too small to normalize")
        arr = arr / norm
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def dim(self) -> int:
        return self.coords.size

    def dot(self, other: "UnitVector") -> float:
        return float(self.coords @ other.coords)

    def __repr__(self) -> str:
        return f"UnitVector({self.coords.tolist()})"


@dataclass(frozen=True)
class VmfDistribution:
    """Parameter triple (mu, kappa, dim) with the log normalizer cached.

    kappa = 0 is a first-class citizen denoting the uniform distribution
    on the sphere, so that limits toward a flat prior can be taken
    explicitly.
    """

    mu: UnitVector
    kappa: float
    dim: int = field(init=False)
    log_norm: float = field(init=False)

    def __post_init__(self) -> None:
        if self.kappa < 0.0 or not math.isfinite(self.kappa):
            raise DomainError(f"kappa must be finite and >= 0, got {self.kappa}")
        object.__setattr__(self, "dim", self.mu.dim)
        object.__setattr__(self, "log_norm", log_norm_const(self.dim, self.kappa))

    # Shorthand indices derived from the dimension; computed, never stored.
    @property
    def d_star(self) -> float:
        return 0.5 * self.dim - 1.0

    @property
    def d_diamond(self) -> float:
        return 0.5 * (self.dim - 3.0)

    @property
    def d_bullet(self) -> float:
        return 0.5 * (self.dim - 1.0)


@dataclass(frozen=True)
class SampleBatch:
    """n unit vectors plus everything needed to regenerate them.

    ``points`` is an (n, dim) read-only array, one unit vector per row.
    Regenerating with the same (seed, params, n) yields bit-identical
    points.
    """

    points: np.ndarray
    seed: int
    params: VmfDistribution
    n: int


def log_norm_const(d: int, kappa: float) -> float:
    """log c_d(kappa), the log normalization constant of the density.

    For kappa > 0:

        log c = (d/2 - 1) log kappa - (d/2) log(2 pi) - log I_(d/2-1)(kappa)

    and for kappa = 0 the uniform value log(Gamma(d/2) / (2 pi^(d/2))),
    which is one over the sphere area. The two branches agree in the
    kappa -> 0 limit.
    """
    d = _check_dim(d)
    if kappa < 0.0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    if kappa == 0.0:
        return math.lgamma(0.5 * d) - math.log(2.0) - 0.5 * d * math.log(math.pi)
    half = 0.5 * d
    log_i = sf.log_bessel_i(half - 1.0, kappa).value
    return (half - 1.0) * math.log(kappa) - half * math.log(2.0 * math.pi) - log_i


def log_pdf(dist: VmfDistribution, x) -> float | np.ndarray:
    """Log density of ``dist`` at ``x``.

    ``x`` may be a UnitVector, a length-d array, or an (n, d) array of
    points; the return is a scalar or a length-n vector accordingly.
    """
    if isinstance(x, UnitVector):
        if x.dim != dist.dim:
            raise DomainError(f"dimension mismatch: x has {x.dim}, dist has {dist.dim}")
        return dist.log_norm + dist.kappa * x.dot(dist.mu)
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1] != dist.dim:
        raise DomainError(f"dimension mismatch: x has {arr.shape[-1]}, dist has {dist.dim}")
    out = dist.log_norm + dist.kappa * (arr @ dist.mu.coords)
    return float(out) if arr.ndim == 1 else out


def mean_resultant_length(d: int, kappa: float) -> float:
    """First-moment scale A_d(kappa) = I_(d/2)(kappa) / I_(d/2-1)(kappa).

    The mean of a draw is A_d(kappa) * mu; the value is 0 at kappa = 0
    and approaches 1 as kappa grows, always staying below it.
    """
    d = _check_dim(d)
    if kappa < 0.0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    if kappa == 0.0:
        return 0.0
    half = 0.5 * d
    return math.exp(sf.log_bessel_i(half, kappa).value - sf.log_bessel_i(half - 1.0, kappa).value)


def sample(dist: VmfDistribution, n: int, seed: int) -> SampleBatch:
    """Draw n independent points from ``dist``, deterministically in ``seed``.

    Tangent-normal construction: the cosine w against mu comes from the
    rejection kernel (its target density is proportional to
    (1-w^2)^((d-3)/2) e^(kappa w)), the tangential part is an isotropic
    unit vector in the complement of the first axis, and the frame is
    rotated onto mu by the Householder reflection taking e1 to mu
    (exactly orthogonal, no re-orthogonalization drift).
    """
    if n < 1:
        raise DomainError(f"sample requires n >= 1, got {n}")
    rng = np.random.default_rng(int(seed) & _MASK64)
    w, status = _sample_cosines(rng, n, dist.dim, float(dist.kappa), _REJECTION_CAP)
    if status != 0:
        raise SamplingError(
            f"cosine rejection exceeded {_REJECTION_CAP} iterations for a single draw"
        )
    w = np.clip(w, -1.0, 1.0)
    d = dist.dim
    tang = rng.standard_normal((n, d - 1))
    norms = np.linalg.norm(tang, axis=1)
    norms[norms < 1e-300] = 1.0
    tang /= norms[:, None]
    pts = np.empty((n, d))
    pts[:, 0] = w
    pts[:, 1:] = np.sqrt(1.0 - w * w)[:, None] * tang
    # reflect e1 onto mu
    v = -dist.mu.coords.copy()
    v[0] += 1.0
    vn = float(np.linalg.norm(v))
    if vn > 1e-14:
        v /= vn
        pts -= 2.0 * np.outer(pts @ v, v)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    pts.flags.writeable = False
    return SampleBatch(points=pts, seed=int(seed), params=dist, n=n)


def stiefel_area(d: int, r: int) -> float:
    """Surface area of the manifold of orthonormal r-frames in R^d.

    tau(d, r) = 2^r pi^(dr/2) / (pi^(r(r-1)/4) prod_j Gamma((d-j+1)/2)),
    evaluated in the log domain. tau(d, 1) is the area of S^(d-1), and
    the uniform density on the sphere is exactly 1 / tau(d, 1).
    """
    d = _check_dim(d)
    if not float(r).is_integer() or r < 1 or r > d:
        raise DomainError(f"stiefel_area requires integer 1 <= r <= d, got r={r}")
    r = int(r)
    log_tau = (
        r * math.log(2.0)
        + (0.5 * d * r) * math.log(math.pi)
        - (0.25 * r * (r - 1)) * math.log(math.pi)
        - sum(math.lgamma(0.5 * (d - j + 1)) for j in range(1, r + 1))
    )
    return math.exp(log_tau)


def _check_dim(d) -> int:
    if not float(d).is_integer() or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")
    return int(d)


# -- serialization ----------------------------------------------------------


def sample_batch_to_csv(batch: SampleBatch) -> str:
    """CSV with one row per point and columns x1..xd."""
    d = batch.params.dim
    lines = [",".join(f"x{i + 1}" for i in range(d))]
    for row in batch.points:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def sample_batch_to_json(batch: SampleBatch) -> str:
    payload = {
        "seed": batch.seed,
        "kappa": batch.params.kappa,
        "mu": batch.params.mu.coords.tolist(),
        "points": [list(map(float, row)) for row in batch.points],
    }
    return json.dumps(payload)


def sample_batch_from_json(text: str) -> SampleBatch:
    data = json.loads(text)
    dist = VmfDistribution(UnitVector(data["mu"]), float(data["kappa"]))
    pts = np.asarray(data["points"], dtype=float)
    pts.flags.writeable = False
    return SampleBatch(points=pts, seed=int(data["seed"]), params=dist, n=pts.shape[0])
