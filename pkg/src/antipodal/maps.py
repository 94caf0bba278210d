"""Polynomial maps from the sphere to the plane and their odd difference fields.

Maps are stored as polynomials in the ambient coordinates (x, y, z) with
canonical merged terms in lexicographic exponent order. That makes odd/even
splitting, differentiation, and the antipodal symmetry F(-p) = -F(p) exact
rather than approximate: a monomial of odd total degree flips sign exactly
under negation in IEEE arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooLarge
from .sphere import SpherePoint, _frames_rows, tangent_frame

MAX_TOTAL_DEGREE = 31
_EVAL_CHUNK = 65536


def _canonical_terms(terms) -> tuple[np.ndarray, np.ndarray]:
    merged: dict[tuple[int, int, int], float] = {}
    for coeff, powers in terms:
        i, j, k = (int(powers[0]), int(powers[1]), int(powers[2]))
        if i < 0 or j < 0 or k < 0:
            raise ValueError(f"negative exponent in term {(coeff, powers)}")
        if i + j + k > MAX_TOTAL_DEGREE:
            raise DegreeTooLarge(
                f"total degree {i + j + k} exceeds cap {MAX_TOTAL_DEGREE}"
            )
        merged[(i, j, k)] = merged.get((i, j, k), 0.0) + float(coeff)
    keys = sorted(key for key, value in merged.items() if value != 0.0)
    coeffs = np.array([merged[key] for key in keys], dtype=float)
    powers = np.array(keys, dtype=np.int64).reshape(len(keys), 3)
    coeffs.setflags(write=False)
    powers.setflags(write=False)
    return coeffs, powers


@dataclass(frozen=True, eq=False)
class Poly3:
    """Polynomial sum(c * x**i * y**j * z**k) in canonical merged form."""

    coeffs: np.ndarray  # (T,)
    powers: np.ndarray  # (T, 3)

    @classmethod
    def from_terms(cls, terms) -> "Poly3":
        coeffs, powers = _canonical_terms(terms)
        return cls(coeffs=coeffs, powers=powers)

    @classmethod
    def zero(cls) -> "Poly3":
        return cls.from_terms([])

    @classmethod
    def constant(cls, c: float) -> "Poly3":
        return cls.from_terms([(c, (0, 0, 0))])

    def terms(self) -> list[tuple[float, tuple[int, int, int]]]:
        return [
            (float(c), (int(p[0]), int(p[1]), int(p[2])))
            for c, p in zip(self.coeffs, self.powers)
        ]

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def total_degree(self) -> int:
        if self.is_zero:
            return 0
        return int(self.powers.sum(axis=1).max())

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at (N, 3) points by direct monomial summation.

        Monomials are evaluated individually and summed in canonical term
        order, so repeated runs are bit-reproducible.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0])
        if self.is_zero:
            return out
        ex, ey, ez = self.powers[:, 0], self.powers[:, 1], self.powers[:, 2]
        for s in range(0, pts.shape[0], _EVAL_CHUNK):
            blk = pts[s : s + _EVAL_CHUNK]
            mono = (blk[:, 0:1] ** ex) * (blk[:, 1:2] ** ey) * (blk[:, 2:3] ** ez)
            out[s : s + _EVAL_CHUNK] = (mono * self.coeffs).sum(axis=1)
        return out

    def eval_one(self, p) -> float:
        coords = p.coords if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)
        return float(self.evaluate(coords[None, :])[0])

    def diff(self, axis: int) -> "Poly3":
        """Exact partial derivative with respect to x, y, or z."""
        keep = self.powers[:, axis] > 0
        coeffs = self.coeffs[keep] * self.powers[keep, axis]
        powers = self.powers[keep].copy()
        powers[:, axis] -= 1
        return Poly3.from_terms(zip(coeffs, powers))

    def scale(self, alpha: float) -> "Poly3":
        return Poly3.from_terms(zip(self.coeffs * float(alpha), self.powers))

    def add(self, other: "Poly3") -> "Poly3":
        """Term-wise sum; terms unique to one operand keep their bits."""
        merged = {tuple(p): c for c, p in zip(self.coeffs, self.powers)}
        for c, p in zip(other.coeffs, other.powers):
            key = tuple(p)
            merged[key] = merged.get(key, 0.0) + c
        return Poly3.from_terms((c, k) for k, c in merged.items())

    def multiply(self, other: "Poly3") -> "Poly3":
        out: dict[tuple[int, int, int], float] = {}
        for c1, p1 in zip(self.coeffs, self.powers):
            for c2, p2 in zip(other.coeffs, other.powers):
                key = (int(p1[0] + p2[0]), int(p1[1] + p2[1]), int(p1[2] + p2[2]))
                out[key] = out.get(key, 0.0) + c1 * c2
        return Poly3.from_terms((c, k) for k, c in out.items())

    __mul__ = multiply
    __add__ = add

    def odd_part(self) -> "Poly3":
        keep = self.powers.sum(axis=1) % 2 == 1
        return Poly3.from_terms(zip(self.coeffs[keep], self.powers[keep]))

    def even_part(self) -> "Poly3":
        keep = self.powers.sum(axis=1) % 2 == 0
        return Poly3.from_terms(zip(self.coeffs[keep], self.powers[keep]))


@dataclass(frozen=True, eq=False)
class PolyMap2:
    """A map S^2 -> R^2 with polynomial components."""

    comp1: Poly3
    comp2: Poly3

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.column_stack([self.comp1.evaluate(pts), self.comp2.evaluate(pts)])


@dataclass(frozen=True, eq=False)
class OddField(PolyMap2):
    """Antipodal difference field; every stored monomial has odd total degree."""

    def __post_init__(self):
        for comp in (self.comp1, self.comp2):
            if comp.powers.size and not (comp.powers.sum(axis=1) % 2 == 1).all():
                raise ValueError("OddField components must be odd polynomials")


@dataclass(frozen=True, eq=False)
class MapFamily:
    """Linear perturbation family: the map at parameter eps is base + eps * direction."""

    base: PolyMap2
    direction: PolyMap2
    epsilon: float = 0.0


def eval_map(f: PolyMap2, p) -> np.ndarray:
    """Value of a two-component map at a single point, as a length-2 array."""
    coords = p.coords if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)
    return f.evaluate(coords[None, :])[0]


def odd_even_split(q: Poly3) -> tuple[Poly3, Poly3]:
    """Split by total-degree parity; the parts reconstruct q term-for-term."""
    return q.odd_part(), q.even_part()


def difference_field(f: PolyMap2) -> OddField:
    """The field p -> f(p) - f(-p), built exactly as twice the odd part of f.

    For polynomials the pointwise difference equals 2 * odd(f), so oddness
    holds by construction: even perturbations of f cannot change the result.
    """
    return OddField(
        comp1=f.comp1.odd_part().scale(2.0),
        comp2=f.comp2.odd_part().scale(2.0),
    )


def instantiate(family: MapFamily, eps: float) -> PolyMap2:
    """The family member base + eps * direction, merged into canonical form."""
    eps = float(eps)
    return PolyMap2(
        comp1=family.base.comp1.add(family.direction.comp1.scale(eps)),
        comp2=family.base.comp2.add(family.direction.comp2.scale(eps)),
    )


def _gradient_polys(f: PolyMap2):
    return (
        (f.comp1.diff(0), f.comp1.diff(1), f.comp1.diff(2)),
        (f.comp2.diff(0), f.comp2.diff(1), f.comp2.diff(2)),
    )


def _jacobian_entries(grads, points, e1, e2):
    """Tangent Jacobian entries (a, b, c, d) at unit rows (K, 3)."""
    (d1x, d1y, d1z), (d2x, d2y, d2z) = grads
    g1 = np.column_stack(
        [d1x.evaluate(points), d1y.evaluate(points), d1z.evaluate(points)]
    )
    g2 = np.column_stack(
        [d2x.evaluate(points), d2y.evaluate(points), d2z.evaluate(points)]
    )
    a = (g1 * e1).sum(axis=1)
    b = (g1 * e2).sum(axis=1)
    c = (g2 * e1).sum(axis=1)
    d = (g2 * e2).sum(axis=1)
    return a, b, c, d


def jacobian_tangent(field: PolyMap2, p: SpherePoint) -> np.ndarray:
    """2x2 Jacobian of the field restricted to the tangent plane at p.

    Row a, column b holds grad(F_a) . e_b in the deterministic frame of p;
    gradients are exact from the monomial exponents.
    """
    pts = p.coords[None, :]
    e1, e2 = _frames_rows(pts)
    a, b, c, d = _jacobian_entries(_gradient_polys(field), pts, e1, e2)
    return np.array([[a[0], b[0]], [c[0], d[0]]])


def jacobian_tangent_fd(field: PolyMap2, p: SpherePoint, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference check of jacobian_tangent along retraction curves."""
    frame = tangent_frame(p)
    cols = []
    for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
        from .sphere import retract  # local import avoids polluting module API

        fp = eval_map(field, retract(p, h * e, frame))
        fm = eval_map(field, retract(p, -h * e, frame))
        cols.append((fp - fm) / (2.0 * h))
    return np.column_stack(cols)


def map_to_json(f: PolyMap2) -> dict:
    """JSON form {"comp1": [[c, i, j, k], ...], "comp2": [...]}."""
    def conv(poly: Poly3):
        return [[c, i, j, k] for c, (i, j, k) in poly.terms()]

    return {"comp1": conv(f.comp1), "comp2": conv(f.comp2)}


def _poly_from_json(rows) -> Poly3:
    terms = []
    for row in rows:
        if len(row) != 4:
            raise ValueError(f"term {row!r} must be [c, i, j, k]")
        c, i, j, k = row
        terms.append((float(c), (int(i), int(j), int(k))))
    return Poly3.from_terms(terms)


def map_from_json(obj: dict) -> PolyMap2:
    try:
        return PolyMap2(
            comp1=_poly_from_json(obj["comp1"]), comp2=_poly_from_json(obj["comp2"])
        )
    except KeyError as exc:
        raise ValueError(f"map JSON is missing key {exc}") from exc


def family_to_json(family: MapFamily) -> dict:
    return {"base": map_to_json(family.base), "direction": map_to_json(family.direction)}


def family_from_json(obj: dict) -> MapFamily:
    try:
        base = map_from_json(obj["base"])
        direction = map_from_json(obj["direction"])
    except KeyError as exc:
        raise ValueError(f"family JSON is missing key {exc}") from exc
    return MapFamily(base=base, direction=direction, epsilon=float(obj.get("epsilon", 0.0)))
