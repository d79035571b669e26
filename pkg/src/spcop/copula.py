"""Bivariate copula families, transforms, evaluation, sampling, validation.

Specs are immutable node trees. Each node knows its cdf, a component-tagged
sampler, its singular mass, the closed-form pair (eta, xi) = (measure of
{u<=v}, measure of the diagonal), and, for absolutely continuous families,
the conditional cdfs d1C and d2C used by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoDensity, SpecError, UnknownMass, WeightError
from .rng import chunk_sizes, clip_open, open_uniform, resolve_workers, worker_streams
from .special import normal_cdf, normal_quantile

__all__ = [
    "CopulaSpec", "Independence", "Comonotone", "Countermonotone", "Shuffle",
    "Gaussian", "MarshallOlkinSurvival", "MarshallOlkinConnecting",
    "OrderStatistics", "Mixture", "Transpose", "SurvivalOf", "CopulaSample",
    "copula_cdf", "rect_measure", "copula_sample", "sample_uv", "singular_mass",
    "transpose", "survival_of", "mix", "validate_copula", "conditional_cdf",
    "copula_to_json", "copula_from_json",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
_GL_T = 0.5 * (_GL_NODES + 1.0)           # nodes on (0,1)
_GL_W = 0.5 * _GL_WEIGHTS
_TAIL_DEPTH = 16.6                         # phi mass beyond it is < 1e-19
_UV_CLAMP = 1e-13                          # copulas are 1-Lipschitz per argument


class CopulaSpec:
    """Base node. All copula operations are pure; specs are hashable values."""

    node: str = ""

    def cdf(self, u, v):
        raise NotImplementedError

    def sample_arrays(self, rng, n):
        """Return (u, v, singular_component, structural_tie) arrays."""
        raise NotImplementedError

    def singular_mass(self) -> float:
        raise UnknownMass(self.node)

    def closed_eta_xi(self):
        """(C-measure of {u<=v}, C-measure of the diagonal), closed form."""
        raise UnknownMass(self.node)

    def conditional_cdf(self, u, v):
        """d/du C(u,v); defined only for absolutely continuous families."""
        raise NoDensity(f"{self.node} has a singular component")

    def conditional_cdf_second(self, u, v):
        """d/dv C(u,v); defined only for absolutely continuous families."""
        raise NoDensity(f"{self.node} has a singular component")

    @property
    def absolutely_continuous(self) -> bool:
        return False


@dataclass(frozen=True)
class Independence(CopulaSpec):
    node = "independence"

    def cdf(self, u, v):
        return np.asarray(u, dtype=float) * np.asarray(v, dtype=float)

    def sample_arrays(self, rng, n):
        u = open_uniform(rng, n)
        v = open_uniform(rng, n)
        z = np.zeros(n, dtype=bool)
        return u, v, z, z.copy()

    def singular_mass(self):
        return 0.0

    def closed_eta_xi(self):
        return 0.5, 0.0

    def conditional_cdf(self, u, v):
        return np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(u, dtype=float))[0].copy()

    def conditional_cdf_second(self, u, v):
        return np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))[0].copy()

    @property
    def absolutely_continuous(self):
        return True


@dataclass(frozen=True)
class Comonotone(CopulaSpec):
    node = "comonotone"

    def cdf(self, u, v):
        return np.minimum(np.asarray(u, dtype=float), np.asarray(v, dtype=float))

    def sample_arrays(self, rng, n):
        u = open_uniform(rng, n)
        ones = np.ones(n, dtype=bool)
        return u, u.copy(), ones, ones.copy()

    def singular_mass(self):
        return 1.0

    def closed_eta_xi(self):
        return 1.0, 1.0


@dataclass(frozen=True)
class Countermonotone(CopulaSpec):
    node = "countermonotone"

    def cdf(self, u, v):
        return np.maximum(np.asarray(u, dtype=float) + np.asarray(v, dtype=float) - 1.0, 0.0)

    def sample_arrays(self, rng, n):
        u = open_uniform(rng, n)
        v = clip_open(1.0 - u)
        ones = np.ones(n, dtype=bool)
        return u, v, ones, np.zeros(n, dtype=bool)

    def singular_mass(self):
        return 1.0

    def closed_eta_xi(self):
        return 0.5, 0.0


@dataclass(frozen=True)
class Shuffle(CopulaSpec):
    """Straight shuffle: v = u+1-gamma below gamma, v = u-gamma above."""

    gamma: float
    node = "shuffle"

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise SpecError(f"shuffle gamma must lie in (0,1], got {self.gamma}")

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        g = self.gamma
        return np.minimum(np.minimum(u, v),
                          np.maximum(u - g, 0.0) + np.maximum(v + g - 1.0, 0.0))

    def sample_arrays(self, rng, n):
        u = open_uniform(rng, n)
        g = self.gamma
        v = np.where(u <= g, u + (1.0 - g), u - g)
        ones = np.ones(n, dtype=bool)
        tie = np.zeros(n, dtype=bool)
        return u, v, ones, tie

    def singular_mass(self):
        return 1.0

    def closed_eta_xi(self):
        # gamma=1 degenerates to the comonotone copula: all mass on u=v
        return self.gamma, (1.0 if self.gamma == 1.0 else 0.0)


@dataclass(frozen=True)
class Gaussian(CopulaSpec):
    rho: float
    node = "gaussian"

    def __post_init__(self):
        if not (-1.0 < self.rho < 1.0):
            raise SpecError(f"gaussian rho must lie in (-1,1), got {self.rho}")

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u, v = np.broadcast_arrays(u, v)
        shape = u.shape
        uf = u.reshape(-1)
        vf = v.reshape(-1)
        out = self._cdf_flat(uf, vf)
        return out.reshape(shape) if shape else float(out[0])

    def _cdf_flat(self, u, v):
        rho = self.rho
        if abs(rho) < 1e-15:
            return u * v
        # exact on the boundary, then clamp interior points: |dC| <= |du|
        out = np.empty_like(u)
        uz = (u <= 0.0) | (v <= 0.0)
        u1 = u >= 1.0
        v1 = v >= 1.0
        out[uz] = 0.0
        out[u1 & ~uz] = v[u1 & ~uz]
        out[v1 & ~uz & ~u1] = u[v1 & ~uz & ~u1]
        inner = ~(uz | u1 | v1)
        if inner.any():
            ui = np.clip(u[inner], _UV_CLAMP, 1.0 - _UV_CLAMP)
            vi = np.clip(v[inner], _UV_CLAMP, 1.0 - _UV_CLAMP)
            # integrate the conditional factorization over the smaller tail
            lo = np.minimum(ui, vi)
            hi = np.maximum(ui, vi)
            a = normal_quantile(lo)
            b = normal_quantile(hi)
            s = math.sqrt(1.0 - rho * rho)
            # composite 64-node Gauss-Legendre in y = a - z: coarse bell panels
            # plus panels straddling the conditional's transition layer, whose
            # width collapses like s/|rho| as |rho| -> 1
            y0 = a - b / rho
            w = 8.0 * s / max(abs(rho), 0.125)
            edges = np.column_stack([
                np.zeros_like(a),
                np.full_like(a, 1.5),
                np.full_like(a, 6.0),
                np.clip(y0 - w, 0.0, _TAIL_DEPTH),
                np.clip(y0 + w, 0.0, _TAIL_DEPTH),
                np.full_like(a, _TAIL_DEPTH),
            ])
            edges.sort(axis=1)
            acc = np.zeros_like(a)
            for p in range(edges.shape[1] - 1):
                lo_e = edges[:, p]
                width = edges[:, p + 1] - lo_e
                y = lo_e[:, None] + width[:, None] * _GL_T[None, :]
                z = a[:, None] - y
                phi = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
                cond = normal_cdf((b[:, None] - rho * z) / s)
                acc += width * np.einsum("mk,k->m", phi * cond, _GL_W)
            out[inner] = acc
        return out

    def sample_arrays(self, rng, n):
        z1 = rng.standard_normal(n)
        z2 = self.rho * z1 + math.sqrt(1.0 - self.rho ** 2) * rng.standard_normal(n)
        u = clip_open(normal_cdf(z1))
        v = clip_open(normal_cdf(z2))
        z = np.zeros(n, dtype=bool)
        return u, v, z, z.copy()

    def singular_mass(self):
        return 0.0

    def closed_eta_xi(self):
        return 0.5, 0.0

    def conditional_cdf(self, u, v):
        u = np.clip(np.asarray(u, dtype=float), _UV_CLAMP, 1.0 - _UV_CLAMP)
        v = np.asarray(v, dtype=float)
        s = math.sqrt(1.0 - self.rho ** 2)
        vc = np.clip(v, _UV_CLAMP, 1.0 - _UV_CLAMP)
        raw = normal_cdf((normal_quantile(vc) - self.rho * normal_quantile(u)) / s)
        return np.where(v <= 0.0, 0.0, np.where(v >= 1.0, 1.0, raw))

    def conditional_cdf_second(self, u, v):
        return self.conditional_cdf(v, u)

    @property
    def absolutely_continuous(self):
        return True


def _mo_validate(alpha1, alpha2):
    if not (0.0 < alpha1 < 1.0 and 0.0 < alpha2 < 1.0):
        raise SpecError(f"Marshall-Olkin alphas must lie in (0,1), got ({alpha1}, {alpha2})")


def _mo_singular_mass(a1, a2):
    return a1 * a2 / (a1 + a2 - a1 * a2)


def _mo_survival_eta_xi(a1, a2):
    # measured at alpha1=alpha2: continuous from the alpha1<=alpha2 branch,
    # where the singular curve u^a1=v^a2 sits on/above the diagonal
    xi = _mo_singular_mass(a1, a2) if a1 == a2 else 0.0
    if a1 <= a2:
        eta = 1.0 / (2.0 - a1)
    else:
        eta = (1.0 - a2) / (2.0 - a2)
    return eta, xi


def _mo_construction(rng, n, a1, a2):
    v_shock = rng.exponential(scale=1.0 / (1.0 / a1 - 1.0), size=n)
    w_shock = rng.exponential(scale=1.0 / (1.0 / a2 - 1.0), size=n)
    z_shock = rng.exponential(scale=1.0, size=n)
    x1 = np.minimum(v_shock, z_shock)
    x2 = np.minimum(w_shock, z_shock)
    tie = z_shock <= np.minimum(v_shock, w_shock)
    return x1, x2, tie


@dataclass(frozen=True)
class MarshallOlkinSurvival(CopulaSpec):
    """u v min(u^-a1, v^-a2); singular part on the curve u^a1 = v^a2."""

    alpha1: float
    alpha2: float
    node = "mo_survival"

    def __post_init__(self):
        _mo_validate(self.alpha1, self.alpha2)

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.minimum(u ** (1.0 - self.alpha1) * v, u * v ** (1.0 - self.alpha2))

    def sample_arrays(self, rng, n):
        x1, x2, tie = _mo_construction(rng, n, self.alpha1, self.alpha2)
        u = clip_open(np.exp(-x1 / self.alpha1))
        v = clip_open(np.exp(-x2 / self.alpha2))
        return u, v, tie.copy(), tie

    def singular_mass(self):
        return _mo_singular_mass(self.alpha1, self.alpha2)

    def closed_eta_xi(self):
        return _mo_survival_eta_xi(self.alpha1, self.alpha2)


@dataclass(frozen=True)
class MarshallOlkinConnecting(CopulaSpec):
    """Connecting copula of the common-shock minima; survival transform of
    the mo_survival node."""

    alpha1: float
    alpha2: float
    node = "mo_connecting"

    def __post_init__(self):
        _mo_validate(self.alpha1, self.alpha2)

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        inner = MarshallOlkinSurvival(self.alpha1, self.alpha2)
        return u + v - 1.0 + inner.cdf(1.0 - u, 1.0 - v)

    def sample_arrays(self, rng, n):
        x1, x2, tie = _mo_construction(rng, n, self.alpha1, self.alpha2)
        u = clip_open(-np.expm1(-x1 / self.alpha1))
        v = clip_open(-np.expm1(-x2 / self.alpha2))
        return u, v, tie.copy(), tie

    def singular_mass(self):
        return _mo_singular_mass(self.alpha1, self.alpha2)

    def closed_eta_xi(self):
        eta_s, xi_s = _mo_survival_eta_xi(self.alpha1, self.alpha2)
        return 1.0 - eta_s + xi_s, xi_s


@dataclass(frozen=True)
class OrderStatistics(CopulaSpec):
    """Connecting copula of (min, max) of two iid continuous draws.

    Fully absolutely continuous: the density 1/(2 sqrt(v) sqrt(1-u)) on
    {v > (1-sqrt(1-u))^2} integrates to exactly 1, so the boundary curve
    carries no mass and the registry stores singular mass 0.
    """

    node = "order_statistics"

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        r = 1.0 - np.sqrt(np.maximum(1.0 - u, 0.0))
        sv = np.sqrt(np.maximum(v, 0.0))
        above = sv >= r
        return np.where(above, 2.0 * r * sv - r * r, v)

    def sample_arrays(self, rng, n):
        a = open_uniform(rng, n)
        b = open_uniform(rng, n)
        s = np.minimum(a, b)
        t = np.maximum(a, b)
        u = s * (2.0 - s)
        v = t * t
        z = np.zeros(n, dtype=bool)
        return u, v, z, z.copy()

    def singular_mass(self):
        return 0.0

    def closed_eta_xi(self):
        return 2.0 - math.pi / 2.0, 0.0

    def conditional_cdf(self, u, v):
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0 - 1e-15)
        v = np.clip(np.asarray(v, dtype=float), 0.0, 1.0)
        w = np.sqrt(1.0 - u)
        r = 1.0 - w
        sv = np.sqrt(v)
        above = sv >= r
        return np.where(above, np.clip((sv - r) / w, 0.0, 1.0), 0.0)

    def conditional_cdf_second(self, u, v):
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        v = np.clip(np.asarray(v, dtype=float), 1e-30, 1.0)
        r = 1.0 - np.sqrt(1.0 - u)
        sv = np.sqrt(v)
        above = sv >= r
        return np.where(above, np.clip(r / sv, 0.0, 1.0), 1.0)

    @property
    def absolutely_continuous(self):
        return True


@dataclass(frozen=True)
class Mixture(CopulaSpec):
    components: tuple[CopulaSpec, ...]
    weights: tuple[float, ...]
    node = "mixture"

    def __post_init__(self):
        comps = tuple(self.components)
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", ws)
        if not comps or len(comps) != len(ws):
            raise WeightError("mixture needs matching non-empty components and weights")
        if any(w < -1e-12 for w in ws) or abs(sum(ws) - 1.0) > 1e-12:
            raise WeightError(f"mixture weights must form a simplex, got {ws}")

    def cdf(self, u, v):
        return sum(w * c.cdf(u, v) for c, w in zip(self.components, self.weights))

    def sample_arrays(self, rng, n):
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, rng.random(n), side="right")
        idx = np.minimum(idx, len(self.components) - 1)
        u = np.empty(n)
        v = np.empty(n)
        sing = np.empty(n, dtype=bool)
        tie = np.empty(n, dtype=bool)
        for i, comp in enumerate(self.components):
            mask = idx == i
            m = int(mask.sum())
            if m == 0:
                continue
            cu, cv, cs, ct = comp.sample_arrays(rng, m)
            u[mask], v[mask], sing[mask], tie[mask] = cu, cv, cs, ct
        return u, v, sing, tie

    def singular_mass(self):
        return sum(w * c.singular_mass() for c, w in zip(self.components, self.weights))

    def closed_eta_xi(self):
        etas, xis = zip(*(c.closed_eta_xi() for c in self.components))
        eta = sum(w * e for w, e in zip(self.weights, etas))
        xi = sum(w * x for w, x in zip(self.weights, xis))
        return eta, xi

    def conditional_cdf(self, u, v):
        return sum(w * c.conditional_cdf(u, v) for c, w in zip(self.components, self.weights))

    def conditional_cdf_second(self, u, v):
        return sum(w * c.conditional_cdf_second(u, v) for c, w in zip(self.components, self.weights))

    @property
    def absolutely_continuous(self):
        return all(c.absolutely_continuous for c in self.components)


@dataclass(frozen=True)
class Transpose(CopulaSpec):
    inner: CopulaSpec
    node = "transpose"

    def cdf(self, u, v):
        return self.inner.cdf(v, u)

    def sample_arrays(self, rng, n):
        u, v, sing, tie = self.inner.sample_arrays(rng, n)
        return v, u, sing, tie

    def singular_mass(self):
        return self.inner.singular_mass()

    def closed_eta_xi(self):
        eta, xi = self.inner.closed_eta_xi()
        return 1.0 - eta + xi, xi

    def conditional_cdf(self, u, v):
        return self.inner.conditional_cdf_second(v, u)

    def conditional_cdf_second(self, u, v):
        return self.inner.conditional_cdf(v, u)

    @property
    def absolutely_continuous(self):
        return self.inner.absolutely_continuous


@dataclass(frozen=True)
class SurvivalOf(CopulaSpec):
    inner: CopulaSpec
    node = "survival"

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return u + v - 1.0 + self.inner.cdf(1.0 - u, 1.0 - v)

    def sample_arrays(self, rng, n):
        u, v, sing, tie = self.inner.sample_arrays(rng, n)
        return clip_open(1.0 - u), clip_open(1.0 - v), sing, tie

    def singular_mass(self):
        return self.inner.singular_mass()

    def closed_eta_xi(self):
        eta, xi = self.inner.closed_eta_xi()
        return 1.0 - eta + xi, xi

    def conditional_cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return 1.0 - self.inner.conditional_cdf(1.0 - u, 1.0 - v)

    def conditional_cdf_second(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return 1.0 - self.inner.conditional_cdf_second(1.0 - u, 1.0 - v)

    @property
    def absolutely_continuous(self):
        return self.inner.absolutely_continuous


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class CopulaSample:
    u: float
    v: float
    component: str  # "absolutely_continuous" | "singular"
    structural_tie: bool


def copula_cdf(spec: CopulaSpec, u, v):
    """C(u,v), elementwise over scalars or broadcastable arrays."""
    res = spec.cdf(u, v)
    if np.ndim(u) == 0 and np.ndim(v) == 0:
        return float(res)
    return res


def rect_measure(spec: CopulaSpec, u1, u2, v1, v2):
    """C-mass of [u1,u2] x [v1,v2] by inclusion-exclusion."""
    if np.any(np.asarray(u1) > np.asarray(u2)) or np.any(np.asarray(v1) > np.asarray(v2)):
        raise SpecError("rect_measure needs u1 <= u2 and v1 <= v2")
    res = spec.cdf(u2, v2) - spec.cdf(u1, v2) - spec.cdf(u2, v1) + spec.cdf(u1, v1)
    if all(np.ndim(x) == 0 for x in (u1, u2, v1, v2)):
        return float(res)
    return res


def sample_uv(spec: CopulaSpec, n: int, seed: int, workers: int = 1):
    """Array-form sampler: (u, v, singular_mask, tie_mask), worker-chunked."""
    if n < 1:
        raise SpecError("sample count must be >= 1")
    workers = resolve_workers(workers)
    streams = worker_streams(seed, workers)
    parts = [spec.sample_arrays(stream, m)
             for stream, m in zip(streams, chunk_sizes(n, workers)) if m > 0]
    u = np.concatenate([p[0] for p in parts])
    v = np.concatenate([p[1] for p in parts])
    sing = np.concatenate([p[2] for p in parts])
    tie = np.concatenate([p[3] for p in parts])
    return u, v, sing, tie


def copula_sample(spec: CopulaSpec, seed: int, n: int, workers: int = 1) -> list[CopulaSample]:
    u, v, sing, tie = sample_uv(spec, n, seed, workers)
    comp = np.where(sing, "singular", "absolutely_continuous")
    return [CopulaSample(float(a), float(b), str(c), bool(t))
            for a, b, c, t in zip(u, v, comp, tie)]


def singular_mass(spec: CopulaSpec) -> float:
    return spec.singular_mass()


def transpose(spec: CopulaSpec) -> CopulaSpec:
    if isinstance(spec, Transpose):
        return spec.inner
    return Transpose(spec)


def survival_of(spec: CopulaSpec) -> CopulaSpec:
    if isinstance(spec, SurvivalOf):
        return spec.inner
    return SurvivalOf(spec)


def mix(specs, weights) -> CopulaSpec:
    return Mixture(tuple(specs), tuple(weights))


def conditional_cdf(spec: CopulaSpec, u, v):
    return spec.conditional_cdf(u, v)


def validate_copula(spec: CopulaSpec, grid: int = 64, tol: float = 1e-9,
                    max_violations: int = 50) -> list[dict]:
    """Numerically check the copula axioms on a (grid+1)^2 lattice.

    Returns a list of violation records, empty on pass: boundary identities,
    2-increasingness of every lattice cell, and the Frechet-Hoeffding bounds.
    """
    if grid < 8:
        raise SpecError("validation grid must be at least 8")
    ts = np.linspace(0.0, 1.0, grid + 1)
    out = []

    def report(check, u, v, value):
        if len(out) < max_violations:
            out.append({"check": check, "u": float(u), "v": float(v), "value": float(value)})

    c_u0 = np.asarray(spec.cdf(ts, np.zeros_like(ts)))
    c_0v = np.asarray(spec.cdf(np.zeros_like(ts), ts))
    c_u1 = np.asarray(spec.cdf(ts, np.ones_like(ts)))
    c_1v = np.asarray(spec.cdf(np.ones_like(ts), ts))
    for i, t in enumerate(ts):
        if abs(c_u0[i]) > tol:
            report("boundary C(u,0)=0", t, 0.0, c_u0[i])
        if abs(c_0v[i]) > tol:
            report("boundary C(0,v)=0", 0.0, t, c_0v[i])
        if abs(c_u1[i] - t) > tol:
            report("boundary C(u,1)=u", t, 1.0, c_u1[i])
        if abs(c_1v[i] - t) > tol:
            report("boundary C(1,v)=v", 1.0, t, c_1v[i])

    uu, vv = np.meshgrid(ts, ts, indexing="ij")
    cc = np.asarray(spec.cdf(uu, vv))
    masses = cc[1:, 1:] - cc[:-1, 1:] - cc[1:, :-1] + cc[:-1, :-1]
    bad = np.argwhere(masses < -tol)
    for i, j in bad[:max_violations]:
        report("2-increasing", ts[i], ts[j], masses[i, j])

    lower = np.maximum(uu + vv - 1.0, 0.0)
    upper = np.minimum(uu, vv)
    low_bad = np.argwhere(cc < lower - tol)
    for i, j in low_bad[:max_violations]:
        report("frechet lower", ts[i], ts[j], cc[i, j] - lower[i, j])
    up_bad = np.argwhere(cc > upper + tol)
    for i, j in up_bad[:max_violations]:
        report("frechet upper", ts[i], ts[j], cc[i, j] - upper[i, j])
    return out


# ---------------------------------------------------------------------------
# JSON codec


def copula_to_json(spec: CopulaSpec) -> dict:
    if isinstance(spec, Independence):
        return {"node": "independence"}
    if isinstance(spec, Comonotone):
        return {"node": "comonotone"}
    if isinstance(spec, Countermonotone):
        return {"node": "countermonotone"}
    if isinstance(spec, Shuffle):
        return {"node": "shuffle", "gamma": spec.gamma}
    if isinstance(spec, Gaussian):
        return {"node": "gaussian", "rho": spec.rho}
    if isinstance(spec, MarshallOlkinSurvival):
        return {"node": "mo_survival", "alpha1": spec.alpha1, "alpha2": spec.alpha2}
    if isinstance(spec, MarshallOlkinConnecting):
        return {"node": "mo_connecting", "alpha1": spec.alpha1, "alpha2": spec.alpha2}
    if isinstance(spec, OrderStatistics):
        return {"node": "order_statistics"}
    if isinstance(spec, Mixture):
        return {"node": "mixture", "weights": list(spec.weights),
                "components": [copula_to_json(c) for c in spec.components]}
    if isinstance(spec, Transpose):
        return {"node": "transpose", "inner": copula_to_json(spec.inner)}
    if isinstance(spec, SurvivalOf):
        return {"node": "survival", "inner": copula_to_json(spec.inner)}
    raise SpecError(f"cannot encode copula {spec!r}")


def copula_from_json(doc) -> CopulaSpec:
    if not isinstance(doc, dict) or "node" not in doc:
        raise SpecError(f"copula document must be an object with a 'node': {doc!r}")
    node = doc["node"]
    try:
        if node == "independence":
            return Independence()
        if node == "comonotone":
            return Comonotone()
        if node == "countermonotone":
            return Countermonotone()
        if node == "shuffle":
            return Shuffle(float(doc["gamma"]))
        if node == "gaussian":
            return Gaussian(float(doc["rho"]))
        if node == "mo_survival":
            return MarshallOlkinSurvival(float(doc["alpha1"]), float(doc["alpha2"]))
        if node == "mo_connecting":
            return MarshallOlkinConnecting(float(doc["alpha1"]), float(doc["alpha2"]))
        if node == "order_statistics":
            return OrderStatistics()
        if node == "mixture":
            return mix([copula_from_json(c) for c in doc["components"]],
                       [float(w) for w in doc["weights"]])
        if node == "transpose":
            return transpose(copula_from_json(doc["inner"]))
        if node == "survival":
            return survival_of(copula_from_json(doc["inner"]))
    except (SpecError, WeightError):
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad {node!r} copula document: {exc}") from exc
    raise SpecError(f"unknown copula node {node!r}")
