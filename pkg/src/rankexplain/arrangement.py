"""Weight-space regions cut out by pairwise score comparisons.

Every pair of rows (i, j) contributes the central hyperplane
(x_i - x_j) . w = 0; inside an open cell of the arrangement the induced
ranking is constant. Two enumeration routes are provided: a critical-angle
sweep specialised to two dimensions, and a breadth-first search over sign
prefixes for general dimension that certifies each cell with an interior
witness LP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, InputError, Ranking, ranking_from_weights
from .lpsolve import INTERIOR_MARGIN, interior_witness

CERT_TOL = 1e-9
ANGLE_DEDUP_TOL = 1e-12

QUADRANTS = ("positive", "full")


def quadrant_is_positive(quadrant: str) -> bool:
    """Validate a quadrant name; True when restricted to the positive cone."""
    if quadrant not in QUADRANTS:
        raise InputError("quadrant must be one of %s" % (QUADRANTS,))
    return quadrant == "positive"


@dataclass(frozen=True)
class ComparisonHyperplane:
    i: int
    j: int
    normal: np.ndarray
    degenerate: bool


def _points_of(data) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.values
    return np.atleast_2d(np.asarray(data, dtype=float))


def pair_normals(points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All i<j difference vectors. Returns (ii, jj, normals)."""
    pts = _points_of(points)
    n = pts.shape[0]
    ii, jj = np.triu_indices(n, 1)
    return ii, jj, pts[ii] - pts[jj]


def build_hyperplanes(points) -> list[ComparisonHyperplane]:
    ii, jj, normals = pair_normals(points)
    nonzero = normals.astype(bool).any(axis=1)
    return [
        ComparisonHyperplane(int(ii[t]), int(jj[t]), normals[t].copy(), not bool(nonzero[t]))
        for t in range(ii.shape[0])
    ]


def dedup_planes(normals: np.ndarray) -> np.ndarray:
    """Canonical representatives of the distinct central hyperplanes.

    Rows are flipped so their first nonzero entry is positive, zero rows are
    dropped, and exact duplicates removed (first occurrence kept). Exactness
    is intentional: structurally repeated difference vectors are bit-equal.
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    nz = normals != 0.0
    keep = nz.any(axis=1)
    normals = normals[keep]
    nz = nz[keep]
    if normals.shape[0] == 0:
        return normals.copy()
    first = np.argmax(nz, axis=1)
    lead = normals[np.arange(normals.shape[0]), first]
    flipped = normals * np.sign(lead)[:, None]
    flipped[flipped == 0.0] = 0.0  # normalise -0.0 so byte comparison works
    seen: dict[bytes, None] = {}
    rows = []
    for row in flipped:
        key = row.tobytes()
        if key not in seen:
            seen[key] = None
            rows.append(row)
    return np.array(rows)


@dataclass
class SignRegion:
    witness: np.ndarray
    margin: float
    signs: np.ndarray | None = None
    ranking: Ranking | None = None


@dataclass
class RegionEnumeration:
    regions: list[SignRegion]
    planes: np.ndarray
    lp_calls: int = 0
    skipped: int = 0
    method: str = ""


def region_signs(normals: np.ndarray, witness: np.ndarray) -> np.ndarray:
    """Side of each hyperplane the witness lies on, as int8 in {-1, 0, +1}."""
    return np.sign(np.atleast_2d(normals) @ np.asarray(witness, dtype=float)).astype(np.int8)


def sweep_angles(normals: np.ndarray, positive: bool = False, dedup_tol: float = ANGLE_DEDUP_TOL) -> np.ndarray:
    """Midpoint angles of the open arcs between critical directions.

    A normal (a, b) is crossed at theta* = atan2(-a, b) mod pi. The sweep
    covers (0, pi/2) when restricted to positive weights, (0, pi) otherwise;
    critical angles closer than dedup_tol are merged.
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    if normals.size and normals.shape[1] != 2:
        raise InputError("angle sweep needs 2-dimensional normals")
    hi = np.pi / 2 if positive else np.pi
    if normals.shape[0]:
        nz = normals.astype(bool).any(axis=1)
        theta = np.arctan2(-normals[nz, 0], normals[nz, 1]) % np.pi
        theta = theta[(theta > dedup_tol) & (theta < hi - dedup_tol)]
        theta = np.sort(theta)
        if theta.size:
            gaps = np.diff(theta) > dedup_tol
            theta = theta[np.concatenate([[True], gaps])]
    else:
        theta = np.zeros(0)
    cuts = np.concatenate([[0.0], theta, [hi]])
    return (cuts[:-1] + cuts[1:]) / 2.0


def sweep_regions_2d(normals: np.ndarray, positive: bool = False) -> list[SignRegion]:
    """Regions of a central arrangement in the plane via the angle sweep.

    Without the positive restriction the antipode of each sweep witness is
    appended as well, covering the lower half of the circle. Witnesses are
    unit 1-norm; margins are angular half-widths of the source arc.
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    hi = np.pi / 2 if positive else np.pi
    mids = sweep_angles(normals, positive)
    if mids.size == 0:
        return []
    cuts = np.concatenate([[0.0], (mids[:-1] + mids[1:]) / 2.0, [hi]])
    half = np.minimum(mids - cuts[:-1], cuts[1:] - mids)
    w = np.column_stack([np.cos(mids), np.sin(mids)])
    w /= np.abs(w).sum(axis=1)[:, None]
    regions = [SignRegion(w[t], float(half[t])) for t in range(len(mids))]
    if not positive:
        regions.extend(SignRegion(-w[t], float(half[t])) for t in range(len(mids)))
    return regions


def slice_regions_3d(planes: np.ndarray, positive_dims=()) -> RegionEnumeration:
    """Cells of a central arrangement in R^3, found on an affine slice.

    Every open cone cell either meets the slice or (when no coordinate is
    sign-restricted) its antipode does, so enumerating the induced 2-d line
    arrangement with a slab sweep — candidate points at the midpoints of
    consecutive line crossings inside each vertical slab — visits every
    cell without a single LP. With sign-restricted coordinates the slice is
    the plane where they sum to one (strictly positive inside every cell of
    the restricted domain); otherwise it is the all-coordinates sum and
    antipodes are added. Cells are deduplicated by their sign vector over
    the planes; margins are euclidean distances to the nearest plane.
    """
    planes = np.atleast_2d(np.asarray(planes, dtype=float))
    npl = planes.shape[0]
    if planes.size and planes.shape[1] != 3:
        raise InputError("the slice route needs 3-dimensional planes")
    pos = sorted({int(t) for t in positive_dims})
    if any(t < 0 or t > 2 for t in pos):
        raise InputError("positive_dims out of range")
    quad = pos if pos else [0, 1, 2]
    antipodal = not pos
    eye = np.eye(3)
    origin = eye[quad].mean(axis=0)
    basis = [eye[t] for t in range(3) if t not in quad]
    basis += [eye[t] - eye[quad[0]] for t in quad[1:]]
    # a fixed irrational rotation of the in-plane frame makes vertical or
    # coincident-slope lines vanishingly unlikely for real data
    ang = 2.39996322972865332  # golden angle
    u1 = np.cos(ang) * basis[0] + np.sin(ang) * basis[1]
    u2 = -np.sin(ang) * basis[0] + np.cos(ang) * basis[1]

    if npl == 0:
        return RegionEnumeration(
            [SignRegion(origin, float("inf"), np.zeros(0, dtype=np.int8))], planes, method="cell-slice"
        )

    norms = np.linalg.norm(planes, axis=1)
    la = planes @ u1
    lb = planes @ u2
    lc = planes @ origin
    if pos:
        dom = eye[pos]
        la = np.concatenate([la, dom @ u1])
        lb = np.concatenate([lb, dom @ u2])
        lc = np.concatenate([lc, dom @ origin])
    live = (la != 0.0) | (lb != 0.0)  # slice-constant planes draw no line
    la, lb, lc = la[live], lb[live], lc[live]
    m = la.shape[0]

    cuts = []
    if m:
        i, j = np.triu_indices(m, 1)
        den = la[i] * lb[j] - la[j] * lb[i]
        ok = den != 0.0
        cuts.append((lb[i][ok] * lc[j][ok] - lb[j][ok] * lc[i][ok]) / den[ok])
        vert = lb == 0.0
        if vert.any():
            cuts.append(-lc[vert] / la[vert])
    xs = np.sort(np.concatenate(cuts)) if cuts else np.zeros(0)
    if len(pos) == 3 and xs.size:
        # the domain is a bounded simplex on the slice; every domain cell
        # keeps a vertex inside its x-extent, so outside cuts are redundant
        gram = np.array([[u1 @ u1, u1 @ u2], [u1 @ u2, u2 @ u2]])
        rhs = np.stack([(eye[t] - origin) @ np.stack([u1, u2], axis=1) for t in quad])
        corner_x = np.linalg.solve(gram, rhs.T).T[:, 0]
        lo, hi = corner_x.min() - 1e-9, corner_x.max() + 1e-9
        xs = xs[(xs >= lo) & (xs <= hi)]
    if xs.size:
        keep = np.empty(xs.size, dtype=bool)
        keep[0] = True
        keep[1:] = np.diff(xs) > ANGLE_DEDUP_TOL * np.maximum(1.0, np.abs(xs[1:]))
        xs = xs[keep]
        mids = np.concatenate([[xs[0] - 1.0], (xs[:-1] + xs[1:]) / 2.0, [xs[-1] + 1.0]])
    else:
        mids = np.zeros(1)

    slope = np.where(lb == 0.0, 0.0, -la / np.where(lb == 0.0, 1.0, lb))
    icept = np.where(lb == 0.0, 0.0, -lc / np.where(lb == 0.0, 1.0, lb))
    nonvert = lb != 0.0

    best: dict[bytes, SignRegion] = {}
    step = max(1, int(2e7 / ((m + 3) * max(npl, 1))))
    for lo in range(0, mids.size, step):
        chunk = mids[lo : lo + step]
        ys = chunk[:, None] * slope[None, :] + icept[None, :]  # (slabs, m)
        if nonvert.all():
            ys_sorted = np.sort(ys, axis=1)
        else:
            ys_sorted = np.sort(ys[:, nonvert], axis=1)
        if ys_sorted.shape[1]:
            cand_y = np.concatenate(
                [
                    ys_sorted[:, :1] - 1.0,
                    (ys_sorted[:, :-1] + ys_sorted[:, 1:]) / 2.0,
                    ys_sorted[:, -1:] + 1.0,
                ],
                axis=1,
            )
        else:
            cand_y = np.zeros((chunk.size, 1))
        cand_x = np.broadcast_to(chunk[:, None], cand_y.shape)
        pts = (
            origin[None, :]
            + cand_x.reshape(-1)[:, None] * u1[None, :]
            + cand_y.reshape(-1)[:, None] * u2[None, :]
        )
        dots = pts @ planes.T
        signs = np.sign(dots).astype(np.int8)
        interior = (signs != 0).all(axis=1)
        if pos:
            interior &= (pts[:, pos] > 0.0).all(axis=1)
        margins = (np.abs(dots) / norms[None, :]).min(axis=1)
        for t in np.nonzero(interior)[0]:
            key = signs[t].tobytes()
            reg = best.get(key)
            if reg is None or margins[t] > reg.margin:
                best[key] = SignRegion(pts[t], float(margins[t]), signs[t])

    if antipodal:
        for reg in list(best.values()):
            key = (-reg.signs).tobytes()
            if key not in best:
                best[key] = SignRegion(-reg.witness, reg.margin, -reg.signs)
    return RegionEnumeration(list(best.values()), planes, method="cell-slice")


def cell_regions(
    normals: np.ndarray,
    dim: int,
    positive_dims=(),
    cert_tol: float = CERT_TOL,
    margin_floor: float = INTERIOR_MARGIN,
    method: str = "auto",
) -> RegionEnumeration:
    """All open cells of the central arrangement, any dimension.

    ``method="auto"`` routes 3-dimensional inputs to the LP-free affine
    slice (:func:`slice_regions_3d`) and everything else to the
    breadth-first search; ``"bfs"`` and ``"slice"`` force a route.

    The BFS walks sign prefixes of the deduplicated hyperplane list. A
    child cell whose side the parent witness already certifies
    (|h.w| > cert_tol) is extended for free; the opposite side runs a
    max-margin witness LP. Subtrees whose best margin is at most
    margin_floor are dropped; ``skipped`` counts drops whose prefix was
    feasible with positive margin, i.e. possibly nonempty thin cells. A cell
    reached purely by certificates is always emitted (its witness proves it
    nonempty) even if its final max-margin LP lands under the floor.
    """
    if method not in ("auto", "bfs", "slice"):
        raise InputError("method must be auto, bfs, or slice")
    if method == "slice" and dim != 3:
        raise InputError("the slice route needs exactly 3 dimensions")
    planes = dedup_planes(normals)
    if dim == 3 and method in ("auto", "slice"):
        if planes.size and planes.shape[1] != dim:
            raise InputError("hyperplane dimension mismatch")
        return slice_regions_3d(planes, positive_dims)
    npl = planes.shape[0]
    if npl and planes.shape[1] != dim:
        raise InputError("hyperplane dimension mismatch")
    root_w = np.full(dim, 1.0 / dim)
    if npl == 0:
        return RegionEnumeration(
            [SignRegion(root_w, float("inf"), np.zeros(0, dtype=np.int8))], planes, method="cell-bfs"
        )

    lp_calls = 0
    skipped = 0
    # node: (witness, margin upper bound, signs int8, lp ran at this depth)
    frontier: list[tuple[np.ndarray, float, np.ndarray, bool]] = [
        (root_w, float("inf"), np.zeros(0, dtype=np.int8), False)
    ]
    for t in range(npl):
        plane = planes[t]
        nxt: list[tuple[np.ndarray, float, np.ndarray, bool]] = []
        for w, margin, signs, _ in frontier:
            dot = float(plane @ w)
            for side in (-1, 1):
                child_signs = np.append(signs, np.int8(side))
                if side * dot > cert_tol:
                    nxt.append((w, margin, child_signs, False))
                    continue
                cw, cm = interior_witness(
                    planes[: t + 1], child_signs, dim, positive_dims, margin_floor=margin_floor
                )
                lp_calls += 1
                if cw is None:
                    if cm > 0.0:
                        skipped += 1
                    continue
                nxt.append((cw, cm, child_signs, True))
        frontier = nxt

    regions: list[SignRegion] = []
    for w, margin, signs, lp_here in frontier:
        if lp_here:
            regions.append(SignRegion(w, margin, signs))
            continue
        fw, fm = interior_witness(planes, signs, dim, positive_dims, margin_floor=margin_floor)
        lp_calls += 1
        if fw is not None:
            regions.append(SignRegion(fw, fm, signs))
        else:
            # certificates already prove the cell nonempty; keep the
            # certified witness rather than losing a region to thinness
            regions.append(SignRegion(w, fm if np.isfinite(fm) else margin, signs))
    return RegionEnumeration(regions, planes, lp_calls, skipped, method="cell-bfs")


def _attach_rankings(dataset: Dataset, regions: list[SignRegion]) -> list[SignRegion]:
    for reg in regions:
        reg.ranking = ranking_from_weights(dataset, reg.witness)
    return regions


def enumerate_regions_2d(dataset: Dataset, quadrant: str = "positive") -> RegionEnumeration:
    """Linear-ranking regions of a 2-attribute dataset via the angle sweep.

    ``quadrant="positive"`` keeps weight vectors with both entries strictly
    positive; ``"full"`` covers every direction of the plane. Each region
    carries the ranking its witness induces.
    """
    positive = quadrant_is_positive(quadrant)
    if dataset.d != 2:
        raise InputError("the planar sweep needs exactly 2 attributes")
    _, _, normals = pair_normals(dataset.values)
    planes = dedup_planes(normals)
    regions = sweep_regions_2d(planes, positive=positive)
    for reg in regions:
        reg.signs = region_signs(planes, reg.witness)
    return RegionEnumeration(_attach_rankings(dataset, regions), planes, method="sweep-2d")


def enumerate_regions(dataset: Dataset, quadrant: str = "positive") -> RegionEnumeration:
    """Linear-ranking regions of a dataset in any dimension.

    ``quadrant="positive"`` restricts the search to the nonnegative cone;
    ``"full"`` explores all sign cells. Each region carries the ranking its
    witness induces.
    """
    positive = quadrant_is_positive(quadrant)
    _, _, normals = pair_normals(dataset.values)
    out = cell_regions(normals, dataset.d, positive_dims=range(dataset.d) if positive else ())
    _attach_rankings(dataset, out.regions)
    return out
