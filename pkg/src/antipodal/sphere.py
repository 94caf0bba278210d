"""Points, tangent frames, retraction, and antipodally symmetric geodesic meshes on S^2."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LevelTooLarge, NearZeroVector

MAX_MESH_LEVEL = 9
_NORM_FLOOR = 1e-14

# Golden-ratio icosahedron. The vertex list is closed under negation:
# vertex i and vertex _ICOSA_PAIR[i] are exact antipodes.
_PHI = (1.0 + np.sqrt(5.0)) / 2.0
_ICOSA_VERTICES = np.array(
    [
        [-1.0, _PHI, 0.0],
        [1.0, _PHI, 0.0],
        [-1.0, -_PHI, 0.0],
        [1.0, -_PHI, 0.0],
        [0.0, -1.0, _PHI],
        [0.0, 1.0, _PHI],
        [0.0, -1.0, -_PHI],
        [0.0, 1.0, -_PHI],
        [_PHI, 0.0, -1.0],
        [_PHI, 0.0, 1.0],
        [-_PHI, 0.0, -1.0],
        [-_PHI, 0.0, 1.0],
    ]
)
_ICOSA_PAIR = np.array([3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8], dtype=np.int64)
# Outward counterclockwise faces.
_ICOSA_FACES = np.array(
    [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """A unit 3-vector; renormalized on construction."""

    coords: np.ndarray

    def __post_init__(self):
        v = np.array(self.coords, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"expected a 3-vector, got shape {v.shape}")
        n = float(np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        if n <= _NORM_FLOOR:
            raise NearZeroVector(f"cannot normalize vector of norm {n:.3e}")
        v = v / n
        v.setflags(write=False)
        object.__setattr__(self, "coords", v)

    @classmethod
    def _wrap(cls, unit_coords: np.ndarray) -> "SpherePoint":
        # Bypass renormalization for vectors already unit by construction
        # (exact negations, mesh rows). Keeps sign symmetries bit-exact.
        p = object.__new__(cls)
        v = np.asarray(unit_coords, dtype=float)
        if not v.flags.writeable:
            object.__setattr__(p, "coords", v)
        else:
            v = v.copy()
            v.setflags(write=False)
            object.__setattr__(p, "coords", v)
        return p

    @property
    def x(self) -> float:
        return float(self.coords[0])

    @property
    def y(self) -> float:
        return float(self.coords[1])

    @property
    def z(self) -> float:
        return float(self.coords[2])

    def __repr__(self) -> str:
        return f"SpherePoint([{self.coords[0]!r}, {self.coords[1]!r}, {self.coords[2]!r}])"


@dataclass(frozen=True, eq=False)
class TangentFrame:
    """Orthonormal basis (e1, e2) of the tangent plane at a base point."""

    base: SpherePoint
    e1: np.ndarray
    e2: np.ndarray


@dataclass(frozen=True, eq=False)
class SymmetricMesh:
    """Subdivided icosahedral mesh whose vertex set is exactly closed under negation.

    ``vertices[antipode_index[i]] == -vertices[i]`` holds bit-for-bit: midpoint
    subdivision and row normalization commute exactly with negation in IEEE
    arithmetic, and the pairing table is propagated combinatorially.
    """

    level: int
    vertices: np.ndarray  # (N, 3) unit rows, read-only
    triangles: np.ndarray  # (M, 3) vertex indices, read-only
    antipode_index: np.ndarray  # (N,) fixed-point-free involution

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    def vertex(self, i: int) -> SpherePoint:
        return SpherePoint._wrap(self.vertices[i])


def normalize(v) -> SpherePoint:
    """Project a nonzero 3-vector onto the unit sphere."""
    return SpherePoint(np.asarray(v, dtype=float))


def antipode(p: SpherePoint) -> SpherePoint:
    """Exact negation; antipode(antipode(p)) is p bit-for-bit."""
    return SpherePoint._wrap(-p.coords)


def _frames_rows(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal tangent frames for unit rows (K, 3).

    Rule: take the coordinate axis with the smallest absolute component
    (ties broken by axis order x < y < z), Gram-Schmidt it against the
    point for e1, and set e2 = p x e1.
    """
    p = np.atleast_2d(points)
    axis = np.argmin(np.abs(p), axis=1)  # argmin takes the first minimum
    e = np.zeros_like(p)
    e[np.arange(len(p)), axis] = 1.0
    e1 = e - (e * p).sum(axis=1)[:, None] * p
    e1 = e1 / np.sqrt((e1 * e1).sum(axis=1))[:, None]
    e2 = np.cross(p, e1)
    return e1, e2


def tangent_frame(p: SpherePoint) -> TangentFrame:
    """Deterministic orthonormal frame of the tangent plane at p."""
    e1, e2 = _frames_rows(p.coords[None, :])
    return TangentFrame(base=p, e1=e1[0], e2=e2[0])


def _retract_rows(
    points: np.ndarray,
    t1: np.ndarray,
    t2: np.ndarray,
    e1: np.ndarray,
    e2: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Normalize points + t1*e1 + t2*e2 rowwise; flag rows that collapse."""
    moved = points + t1[:, None] * e1 + t2[:, None] * e2
    norms = np.sqrt((moved * moved).sum(axis=1))
    ok = norms > _NORM_FLOOR
    safe = np.where(ok, norms, 1.0)
    return moved / safe[:, None], ok


def retract(p: SpherePoint, t, frame: TangentFrame | None = None) -> SpherePoint:
    """Map a tangent displacement t = (t1, t2) back to the sphere by projection."""
    if frame is None:
        frame = tangent_frame(p)
    elif not np.array_equal(frame.base.coords, p.coords):
        raise ValueError("frame.base must equal p")
    t = np.asarray(t, dtype=float)
    rows, ok = _retract_rows(
        p.coords[None, :],
        t[0:1].reshape(1),
        t[1:2].reshape(1),
        frame.e1[None, :],
        frame.e2[None, :],
    )
    if not ok[0]:
        raise NearZeroVector("displacement lands too close to the origin")
    return SpherePoint._wrap(rows[0])


def _subdivide(
    vertices: np.ndarray, triangles: np.ndarray, pairing: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One midpoint-subdivision step with exact pairing propagation."""
    n = vertices.shape[0]
    m = triangles.shape[0]
    e = np.vstack(
        [triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]]
    )
    e.sort(axis=1)
    edges, inverse = np.unique(e, axis=0, return_inverse=True)

    mids = vertices[edges[:, 0]] + vertices[edges[:, 1]]
    mids = mids / np.sqrt((mids * mids).sum(axis=1))[:, None]
    new_vertices = np.vstack([vertices, mids])

    m01 = n + inverse[0:m]
    m12 = n + inverse[m : 2 * m]
    m20 = n + inverse[2 * m : 3 * m]
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    new_triangles = np.vstack(
        [
            np.column_stack([a, m01, m20]),
            np.column_stack([b, m12, m01]),
            np.column_stack([c, m20, m12]),
            np.column_stack([m01, m12, m20]),
        ]
    )

    # The midpoint of edge (i, j) pairs with the midpoint of the negated edge.
    partner_edges = pairing[edges]
    partner_edges.sort(axis=1)
    keys = edges[:, 0] * np.int64(new_vertices.shape[0]) + edges[:, 1]
    partner_keys = (
        partner_edges[:, 0] * np.int64(new_vertices.shape[0]) + partner_edges[:, 1]
    )
    pos = np.searchsorted(keys, partner_keys)
    if not np.array_equal(keys[pos], partner_keys):
        raise AssertionError("edge set is not antipodally closed")
    new_pairing = np.concatenate([pairing, n + pos])
    return new_vertices, new_triangles, new_pairing


@lru_cache(maxsize=None)
def _build_mesh(level: int) -> SymmetricMesh:
    norms = np.sqrt((_ICOSA_VERTICES * _ICOSA_VERTICES).sum(axis=1))
    vertices = _ICOSA_VERTICES / norms[:, None]
    triangles = _ICOSA_FACES.copy()
    pairing = _ICOSA_PAIR.copy()
    for _ in range(level):
        vertices, triangles, pairing = _subdivide(vertices, triangles, pairing)
    if not np.array_equal(vertices[pairing], -vertices):
        raise AssertionError("antipodal pairing lost exactness")
    vertices.setflags(write=False)
    triangles.setflags(write=False)
    pairing.setflags(write=False)
    return SymmetricMesh(
        level=level, vertices=vertices, triangles=triangles, antipode_index=pairing
    )


def build_symmetric_mesh(level: int) -> SymmetricMesh:
    """Icosahedron subdivided `level` times; 10 * 4**level + 2 vertices.

    Levels above MAX_MESH_LEVEL are refused (memory guard). Meshes are
    cached and immutable, so repeated calls are cheap.
    """
    level = int(level)
    if level < 0:
        raise ValueError("level must be nonnegative")
    if level > MAX_MESH_LEVEL:
        raise LevelTooLarge(f"level {level} exceeds cap {MAX_MESH_LEVEL}")
    return _build_mesh(level)


def spherical_triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Signed solid angles of geodesic triangles (van Oosterom-Strackee).

    Positive for outward counterclockwise triangles; geodesic triangles of a
    subdivided icosahedron tile the sphere, so the areas sum to 4*pi.
    """
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (
        1.0
        + np.einsum("ij,ij->i", a, b)
        + np.einsum("ij,ij->i", b, c)
        + np.einsum("ij,ij->i", c, a)
    )
    return 2.0 * np.arctan2(num, den)


def chord_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Euclidean distance between two sphere points."""
    d = p.coords - q.coords
    return float(np.sqrt(d @ d))
