"""Kochen-Specker pairs built from even-order S-Hadamard matrices.

A pair (V, B) is a finite vector set V and an odd-length list B of orthogonal
bases drawn from V with every vector in an even number of bases.  Counting
marks over all bases mod 2 rules out any 0/1 marking of V with exactly one
mark per basis; :func:`noncolor_check` confirms this by exhaustive search.
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

from .cyclotomic import CycInt, cyc_root, inner_product
from .report import VerificationReport
from .shadamard import SHadamard, dephase, verify_shadamard

Vector = tuple[CycInt, ...]


@dataclass(frozen=True)
class KSVector:
    coords: Vector
    labels: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("KS vector needs at least one coordinate")
        if all(c.is_zero() for c in coords):
            raise ValueError("KS vector must be nonzero")
        labels = tuple(tuple(sorted(p)) for p in self.labels)
        for r, s in labels:
            if r == s:
                raise ValueError(f"label {{{r},{s}}} is not a pair of distinct indices")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True)
class KSPair:
    """Vectors plus bases given as index lists into ``vectors``.

    Only shape is checked here; the defining conditions (odd number of
    bases, orthogonality, even membership) are the job of :func:`verify_ks`.
    """

    n: int
    root_order: int
    vectors: tuple[KSVector, ...]
    bases: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vectors = tuple(self.vectors)
        bases = tuple(tuple(b) for b in self.bases)
        for v in vectors:
            if len(v.coords) != self.n:
                raise ValueError(f"vector of length {len(v.coords)} in dimension {self.n}")
            if any(c.order != self.root_order for c in v.coords):
                raise ValueError(f"coordinates must all have root order {self.root_order}")
        for i, b in enumerate(bases):
            for idx in b:
                if not isinstance(idx, int) or not 0 <= idx < len(vectors):
                    raise ValueError(f"basis {i} refers to missing vector {idx!r}")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "bases", bases)

    def memberships(self) -> list[int]:
        counts = [0] * len(self.vectors)
        for b in self.bases:
            for idx in b:
                counts[idx] += 1
        return counts

    def to_json(self) -> dict:
        return {
            "kind": "ks_pair",
            "n": self.n,
            "root_order": self.root_order,
            "vectors": [
                {"coords": [c.to_json() for c in v.coords], "labels": [list(p) for p in v.labels]}
                for v in self.vectors
            ],
            "bases": [list(b) for b in self.bases],
        }

    @classmethod
    def from_json(cls, data) -> KSPair:
        if not isinstance(data, dict) or data.get("kind") != "ks_pair":
            raise ValueError("not a KS pair object (expected kind 'ks_pair')")
        missing = {"n", "root_order", "vectors", "bases"} - set(data)
        if missing:
            raise ValueError(f"KS pair object missing fields: {sorted(missing)}")
        vectors = []
        for v in data["vectors"]:
            if not isinstance(v, dict) or "coords" not in v:
                raise ValueError(f"malformed KS vector: {v!r}")
            labels = v.get("labels", [])
            if not all(isinstance(p, list) and len(p) == 2 for p in labels):
                raise ValueError(f"labels must be pairs: {labels!r}")
            vectors.append(
                KSVector(tuple(CycInt.from_json(c) for c in v["coords"]), tuple(tuple(p) for p in labels))
            )
        bases = data["bases"]
        if not isinstance(bases, list) or not all(isinstance(b, list) for b in bases):
            raise ValueError("bases must be a list of index lists")
        return cls(data["n"], data["root_order"], tuple(vectors), tuple(tuple(b) for b in bases))


def hadamard_product(x: Sequence[CycInt], y: Sequence[CycInt]) -> Vector:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return tuple(a * b for a, b in zip(x, y))


def _label_exponents(H: SHadamard, r: int, s: int) -> tuple[int, ...]:
    # rows h_1..h_n are 1-based; v^{r,s} for r < s
    L = H.root_order
    hs = H.exponents[s - 2]
    if r == 1:
        return hs
    if r == 2:
        return tuple(2 * e % L for e in hs)
    hr = H.exponents[r - 2]
    return tuple((a + b) % L for a, b in zip(hr, hs))


def build_ks(H: SHadamard) -> KSPair:
    """Kochen-Specker pair in dimension n from an even-order S-Hadamard H.

    With H dephased and rows h_1 = 1, ..., h_n, the vectors are
    v{1,s} = h_{s-1}, v{2,s} = h_{s-1} o h_{s-1} and v{r,s} = h_{r-1} o h_{s-1}
    for 2 < r < s, and B_r collects every v{r,i}.  Equal vectors are merged
    and keep all their labels, so |V| <= C(n+1, 2) and |B| = n + 1.
    """
    n = H.n
    if n % 2:
        raise ValueError(f"KS construction needs even order, got n={n}")
    report = verify_shadamard(H)
    if not report.passed:
        raise ValueError(f"input is not S-Hadamard: {report.witness}")
    H = dephase(H)
    L = H.root_order

    index: dict[Vector, int] = {}
    coords_list: list[Vector] = []
    labels: list[list[tuple[int, int]]] = []
    label_index: dict[tuple[int, int], int] = {}
    for r in range(1, n + 2):
        for s in range(r + 1, n + 2):
            coords = tuple(cyc_root(L, e) for e in _label_exponents(H, r, s))
            idx = index.get(coords)
            if idx is None:
                idx = index[coords] = len(coords_list)
                coords_list.append(coords)
                labels.append([])
            labels[idx].append((r, s))
            label_index[(r, s)] = idx

    vectors = tuple(KSVector(c, tuple(lab)) for c, lab in zip(coords_list, labels))
    bases = tuple(
        tuple(label_index[(min(r, i), max(r, i))] for i in range(1, n + 2) if i != r)
        for r in range(1, n + 2)
    )
    return KSPair(n, L, vectors, bases)


def verify_ks(P: KSPair) -> VerificationReport:
    """Check every defining condition of a Kochen-Specker pair exactly.

    Checks: each basis has n distinct indices; the vectors of each basis are
    nonzero and pairwise orthogonal; the number of bases is odd; each
    vector's membership count is even and, where labels are present, equals
    twice the label count.
    """
    failures: list[dict] = []
    n = P.n
    vecs = [v.coords for v in P.vectors]

    for i, b in enumerate(P.bases):
        if len(b) != n or len(set(b)) != len(b):
            failures.append({"check": "basis_shape", "basis": i, "size": len(b), "distinct": len(set(b))})

    norms: dict[int, bool] = {}
    for i, b in enumerate(P.bases):
        for a_pos, a in enumerate(b):
            if a not in norms:
                norms[a] = not inner_product(vecs[a], vecs[a]).is_zero()
            if not norms[a]:
                failures.append({"check": "nonzero", "basis": i, "vector": a})
            for c in b[a_pos + 1:]:
                if not inner_product(vecs[a], vecs[c]).is_zero():
                    failures.append({"check": "orthogonality", "basis": i, "vectors": [a, c]})

    if len(P.bases) % 2 == 0:
        failures.append({"check": "odd_bases", "count": len(P.bases)})

    members = P.memberships()
    for idx, m in enumerate(members):
        if m % 2:
            failures.append({"check": "even_membership", "vector": idx, "count": m})
    for idx, (v, m) in enumerate(zip(P.vectors, members)):
        if v.labels and m != 2 * len(v.labels):
            failures.append(
                {"check": "label_multiplicity", "vector": idx, "count": m, "labels": len(v.labels)}
            )

    names = ["basis_shape", "nonzero", "orthogonality", "odd_bases", "even_membership", "label_multiplicity"]
    failed = {f["check"] for f in failures}
    return VerificationReport(
        kind="ks_pair",
        passed=not failures,
        witness=failures[0] if failures else None,
        failures=failures,
        checks={name: name not in failed for name in names},
    )


class ColoringStatus(enum.Enum):
    NO_VALID_COLORING = "no_valid_coloring"
    FOUND_COLORING = "found_coloring"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Coloring:
    """The marked vectors (indices into V) of a 0/1 assignment."""

    marked: frozenset[int]


@dataclass
class ColoringResult:
    status: ColoringStatus
    nodes: int
    witness: Coloring | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "nodes": self.nodes,
            "witness": sorted(self.witness.marked) if self.witness is not None else None,
        }


def noncolor_check(P: KSPair, budget: int = 10**7) -> ColoringResult:
    """Search for a marking hitting every basis exactly once.

    Vectors are assigned in order of decreasing basis degree; a branch dies
    when a basis gets a second mark or runs out of unassigned vectors with no
    mark.  ``nodes`` counts assignments tried.
    """
    nv = len(P.vectors)
    incident: list[list[int]] = [[] for _ in range(nv)]
    for bi, b in enumerate(P.bases):
        for idx in b:
            incident[idx].append(bi)
    degree = [len(x) for x in incident]
    # vectors outside every basis are unconstrained and stay unmarked
    order = sorted((v for v in range(nv) if degree[v]), key=lambda v: -degree[v])
    marked = [0] * len(P.bases)
    free = [len(b) for b in P.bases]
    value = [0] * nv
    nodes = 0

    class _Budget(Exception):
        pass

    def assign(pos: int) -> bool:
        nonlocal nodes
        if pos == len(order):
            return all(m == 1 for m in marked)
        v = order[pos]
        for bit in (1, 0):
            nodes += 1
            if nodes > budget:
                raise _Budget
            ok = True
            for bi in incident[v]:
                free[bi] -= 1
                marked[bi] += bit
            for bi in incident[v]:
                if marked[bi] > 1 or (free[bi] == 0 and marked[bi] == 0):
                    ok = False
                    break
            value[v] = bit
            if ok and assign(pos + 1):
                return True
            for bi in incident[v]:
                free[bi] += 1
                marked[bi] -= bit
        value[v] = 0
        return False

    try:
        found = assign(0)
    except _Budget:
        return ColoringResult(ColoringStatus.BUDGET_EXCEEDED, nodes)
    if found:
        witness = Coloring(frozenset(i for i in range(nv) if value[i]))
        return ColoringResult(ColoringStatus.FOUND_COLORING, nodes, witness)
    return ColoringResult(ColoringStatus.NO_VALID_COLORING, nodes)


def is_valid_coloring(P: KSPair, coloring: Coloring) -> bool:
    return all(sum(1 for idx in b if idx in coloring.marked) == 1 for b in P.bases)


def _monomial_exponents(vec: Vector) -> tuple[int, ...] | None:
    out = []
    for c in vec:
        nz = [i for i, x in enumerate(c.coeffs) if x]
        if len(nz) != 1 or c.coeffs[nz[0]] != 1:
            return None
        out.append(nz[0])
    return tuple(out)


def _parallel(x: Vector, y: Vector, ex, ey, L: int) -> bool:
    if ex is not None and ey is not None:
        return len({(a - b) % L for a, b in zip(ex, ey)}) == 1
    # Cauchy-Schwarz equality: |<x,y>|^2 = <x,x><y,y> iff x, y are dependent
    xy = inner_product(x, y)
    return (xy * xy.conj() - inner_product(x, x) * inner_product(y, y)).is_zero()


def scalar_multiple_pairs(P: KSPair) -> list[tuple[int, int]]:
    """Distinct vectors of V that are scalar multiples of each other.

    Diagnostic only; V is deduplicated by exact equality, not up to phase.
    """
    vecs = [v.coords for v in P.vectors]
    exps = [_monomial_exponents(v) for v in vecs]
    L = P.root_order
    out = []
    for a in range(len(vecs)):
        for b in range(a + 1, len(vecs)):
            if _parallel(vecs[a], vecs[b], exps[a], exps[b], L):
                out.append((a, b))
    return out


def ks_stats(P: KSPair) -> dict:
    members = P.memberships()
    label_mult = Counter(len(v.labels) for v in P.vectors)
    return {
        "n": P.n,
        "root_order": P.root_order,
        "num_vectors": len(P.vectors),
        "num_bases": len(P.bases),
        "vector_bound": math.comb(P.n + 1, 2),
        "memberships": {str(k): c for k, c in sorted(Counter(members).items())},
        "label_multiplicity": {str(k): c for k, c in sorted(label_mult.items())},
        "scalar_multiple_pairs": len(scalar_multiple_pairs(P)),
    }


def ks_export(P: KSPair, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(P.to_json())
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def ks_import(source) -> tuple[KSPair, VerificationReport]:
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = Path(source).read_text()
    data = json.loads(source) if isinstance(source, str) else source
    P = KSPair.from_json(data)
    return P, verify_ks(P)
