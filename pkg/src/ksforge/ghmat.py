"""Generalized Hadamard matrices GH(g, lambda) over the cyclic group Z_g.

A ``(g*lam) x (g*lam)`` matrix over Z_g is GH(g, lam) when, for every pair of
distinct rows, each residue occurs exactly ``lam`` times among the entrywise
differences.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Union

from .cyclotomic import divisors
from .report import VerificationReport

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
DEFAULT_MAX_SIDE = 20

# (g, lam) pairs the planner may hand to gh_search; each is found well within
# DEFAULT_BUDGET (see tests/test_ghmat.py::test_registered_searches_succeed).
SEARCHABLE: frozenset[tuple[int, int]] = frozenset({(3, 2), (3, 4), (5, 2)})


class NotFound(Exception):
    """gh_search finished without a matrix.

    ``reason`` is ``"exhausted"`` when the whole normalized tree was explored
    (no GH(g, lam) exists) and ``"budget"`` when the node limit was hit first.
    """

    def __init__(self, reason: str, g: int, lam: int, nodes: int):
        self.reason = reason
        self.g = g
        self.lam = lam
        self.nodes = nodes
        what = "no GH exists" if reason == "exhausted" else "node budget exceeded"
        super().__init__(f"GH({g},{lam}) search: {what} after {nodes} nodes")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GHMatrix:
    """Candidate GH(g, lam): side ``g*lam``, entries in ``range(g)``.

    Construction validates shape and range only; use :func:`verify_gh` for the
    difference condition.
    """

    g: int
    lam: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 2:
            raise ValueError(f"group order g must be an integer >= 2, got {self.g!r}")
        if not isinstance(self.lam, int) or self.lam < 1:
            raise ValueError(f"lambda must be a positive integer, got {self.lam!r}")
        rows = tuple(tuple(r) for r in self.entries)
        side = self.g * self.lam
        if len(rows) != side or any(len(r) != side for r in rows):
            raise ValueError(f"GH({self.g},{self.lam}) must be {side}x{side}")
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.g:
                    raise ValueError(
                        f"entry ({i},{j}) = {x!r} is not a residue mod {self.g}"
                    )
        object.__setattr__(self, "entries", rows)

    @property
    def side(self) -> int:
        return self.g * self.lam

    def to_json(self) -> dict:
        return {
            "kind": "gh",
            "g": self.g,
            "lambda": self.lam,
            "entries": [list(r) for r in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> GHMatrix:
        if not isinstance(data, dict) or data.get("kind") != "gh":
            raise ValueError("not a GH object (expected kind 'gh')")
        missing = {"g", "lambda", "entries"} - set(data)
        if missing:
            raise ValueError(f"GH object missing fields: {sorted(missing)}")
        entries = data["entries"]
        if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
            raise ValueError("GH entries must be a list of lists")
        return cls(data["g"], data["lambda"], entries)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


def difference_histogram(M: GHMatrix, k: int, l: int) -> list[int]:
    g = M.g
    hist = [0] * g
    for a, b in zip(M.entries[k], M.entries[l]):
        hist[(a - b) % g] += 1
    return hist


def verify_gh(M: GHMatrix) -> VerificationReport:
    """Check every row pair; the witness is the first failing pair (k < l)."""
    failures = []
    rows = M.entries
    g, lam = M.g, M.lam
    for k in range(M.side):
        rk = rows[k]
        for l in range(k + 1, M.side):
            hist = [0] * g
            for a, b in zip(rk, rows[l]):
                hist[(a - b) % g] += 1
            if any(c != lam for c in hist):
                failures.append({"rows": [k, l], "histogram": hist})
    return VerificationReport(
        kind="gh",
        passed=not failures,
        witness=failures[0] if failures else None,
        failures=failures,
        checks={"differences": not failures},
    )


def gh_cyclic_prime(p: int) -> GHMatrix:
    """GH(p, 1) as the multiplication table of Z_p."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not prime")
    return GHMatrix(p, 1, tuple(tuple(i * j % p for j in range(p)) for i in range(p)))


def gh_compose(A: GHMatrix, B: GHMatrix) -> GHMatrix:
    """Kronecker sum: entry ((i,j),(k,l)) = a[i][k] + b[j][l] mod g."""
    if A.g != B.g:
        raise ValueError(f"group mismatch: Z_{A.g} vs Z_{B.g}")
    g = A.g
    rows = []
    for ai in A.entries:
        for bj in B.entries:
            rows.append(tuple((a + b) % g for a in ai for b in bj))
    return GHMatrix(g, g * A.lam * B.lam, tuple(rows))


def gh_search(
    g: int,
    lam: int,
    budget: int = DEFAULT_BUDGET,
    max_side: int = DEFAULT_MAX_SIDE,
) -> GHMatrix:
    """Find the lexicographically least normalized GH(g, lam) by backtracking.

    First row and first column are fixed to zero, rows are strictly
    increasing and columns non-decreasing (lexicographically); all three are
    sound because row/column translations and permutations preserve the GH
    property.  Cells are filled in row-major order, smallest residue first,
    and a branch is cut as soon as some residue occurs more than ``lam`` times
    in the difference with an earlier row.  Raises :class:`NotFound`.
    """
    if not isinstance(g, int) or g < 2:
        raise ValueError(f"g must be an integer >= 2, got {g!r}")
    if not isinstance(lam, int) or lam < 1:
        raise ValueError(f"lambda must be a positive integer, got {lam!r}")
    n = g * lam
    if n > max_side:
        raise ValueError(f"side {n} exceeds search limit {max_side}")
    if budget < 1:
        raise ValueError("budget must be positive")

    M = [[0] * n for _ in range(n)]
    # counts[i][r][d]: occurrences of difference d between rows i and r < i
    counts: list[list[list[int]]] = [[] for _ in range(n)]
    # col_tight[i][j]: column j equals column j-1 on rows 0..i-1
    col_tight = [[True] * n for _ in range(n + 1)]
    nodes = 0

    def start_row(i):
        # column 0 is zero in every row
        counts[i] = [[1] + [0] * (g - 1) for _ in range(i)]

    def fill(i, j, row_tight):
        nonlocal nodes
        if j == n:
            if i + 1 == n:
                return True
            start_row(i + 1)
            return fill(i + 1, 1, True)
        cnt = counts[i]
        row = M[i]
        lo = M[i - 1][j] if row_tight else 0
        ct = col_tight[i][j]
        if ct and row[j - 1] > lo:
            lo = row[j - 1]
        col = [M[r][j] for r in range(i)]
        for v in range(lo, g):
            nodes += 1
            if nodes > budget:
                raise NotFound("budget", g, lam, nodes)
            ok = True
            for r in range(i):
                if cnt[r][(v - col[r]) % g] >= lam:
                    ok = False
                    break
            if not ok:
                continue
            for r in range(i):
                cnt[r][(v - col[r]) % g] += 1
            row[j] = v
            col_tight[i + 1][j] = ct and v == row[j - 1]
            if fill(i, j + 1, row_tight and v == M[i - 1][j]):
                return True
            for r in range(i):
                cnt[r][(v - col[r]) % g] -= 1
        row[j] = 0
        return False

    if n == 1:
        found = True
    else:
        start_row(1)
        found = fill(1, 1, True)
    if not found:
        raise NotFound("exhausted", g, lam, nodes)
    log.debug("GH(%d,%d) found after %d nodes", g, lam, nodes)
    return GHMatrix(g, lam, tuple(tuple(r) for r in M))


def gh_export(M: GHMatrix, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(M.to_json())
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def gh_import(source) -> tuple[GHMatrix, VerificationReport]:
    """Load a GH matrix from a JSON string, dict, or file path and verify it.

    Loading succeeds for any well-formed matrix; validity is in the report.
    """
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = Path(source).read_text()
    data = json.loads(source) if isinstance(source, str) else source
    M = GHMatrix.from_json(data)
    return M, verify_gh(M)


# --- construction plans -----------------------------------------------------


@dataclass(frozen=True)
class PrimeBase:
    p: int

    @property
    def g(self):
        return self.p

    @property
    def side(self):
        return self.p

    def to_json(self):
        return {"op": "prime", "p": self.p}


@dataclass(frozen=True)
class Search:
    g: int
    lam: int

    @property
    def side(self):
        return self.g * self.lam

    def to_json(self):
        return {"op": "search", "g": self.g, "lambda": self.lam}


@dataclass(frozen=True)
class Import:
    path: str
    g: int
    lam: int

    @property
    def side(self):
        return self.g * self.lam

    def to_json(self):
        return {"op": "import", "path": self.path, "g": self.g, "lambda": self.lam}


@dataclass(frozen=True)
class Compose:
    left: "Step"
    right: "Step"

    @property
    def g(self):
        return self.left.g

    @property
    def side(self):
        return self.left.side * self.right.side

    def to_json(self):
        return {"op": "compose", "left": self.left.to_json(), "right": self.right.to_json()}


Step = Union[PrimeBase, Search, Import, Compose]


def _step_str(step: Step) -> str:
    if isinstance(step, PrimeBase):
        return f"PrimeBase({step.p})"
    if isinstance(step, Search):
        return f"Search({step.g},{step.lam})"
    if isinstance(step, Import):
        return f"Import({step.path})"
    return f"Compose({_step_str(step.left)}, {_step_str(step.right)})"


@dataclass(frozen=True)
class Recipe:
    target: int
    root: Step

    @property
    def g(self) -> int:
        return self.root.g

    @property
    def steps(self) -> list[Step]:
        """Post-order listing: every step appears after its ingredients."""
        out: list[Step] = []

        def walk(s):
            if isinstance(s, Compose):
                walk(s.left)
                walk(s.right)
            out.append(s)

        walk(self.root)
        return out

    def to_json(self) -> dict:
        return {"target": self.target, "g": self.g, "plan": self.root.to_json()}

    def __str__(self):
        return _step_str(self.root)


def register_import(path: Union[str, Path]) -> Import:
    """Turn a GH JSON file into a planner ingredient; the file must verify."""
    M, report = gh_import(Path(path))
    if not report.passed:
        raise ValueError(f"{path}: not a valid GH({M.g},{M.lam}): {report.witness}")
    return Import(str(path), M.g, M.lam)


def plan_order(
    n: int,
    imports: Iterable[Import] = (),
    searchable: Iterable[tuple[int, int]] = SEARCHABLE,
    max_side: int = DEFAULT_MAX_SIDE,
) -> Recipe | None:
    """Greedy plan for a GH(g, n/g) over Z_g with g > 2, or None.

    Ingredients are registered imports, odd-prime bases, the registered search
    instances up to ``max_side``, and Kronecker sums of those over the same g.
    None means the built-in rules do not reach ``n``; it says nothing about
    existence.
    """
    if not isinstance(n, int) or n < 2 or n % 2:
        raise ValueError(f"order must be an even integer >= 2, got {n!r}")
    imports = tuple(imports)
    searchable = frozenset(searchable)

    @lru_cache(maxsize=None)
    def reach(g: int, side: int) -> Step | None:
        for imp in imports:
            if imp.g == g and imp.side == side:
                return imp
        if side == g and is_prime(g):
            return PrimeBase(g)
        if side <= max_side and (g, side // g) in searchable:
            return Search(g, side // g)
        for a in reversed(divisors(side)):
            b = side // a
            if a in (1, side) or a % g or b % g:
                continue
            left = reach(g, a)
            if left is None:
                continue
            right = reach(g, b)
            if right is not None:
                return Compose(left, right)
        return None

    for g in divisors(n):
        if g <= 2:
            continue
        step = reach(g, n)
        if step is not None:
            return Recipe(n, step)
    return None


def execute_step(step: Step, budget: int = DEFAULT_BUDGET, max_side: int = DEFAULT_MAX_SIDE) -> GHMatrix:
    if isinstance(step, PrimeBase):
        return gh_cyclic_prime(step.p)
    if isinstance(step, Search):
        return gh_search(step.g, step.lam, budget=budget, max_side=max_side)
    if isinstance(step, Import):
        M, report = gh_import(Path(step.path))
        if (M.g, M.lam) != (step.g, step.lam):
            raise ValueError(f"{step.path} no longer holds GH({step.g},{step.lam})")
        if not report.passed:
            raise ValueError(f"{step.path}: imported matrix fails verification")
        return M
    if isinstance(step, Compose):
        return gh_compose(
            execute_step(step.left, budget, max_side),
            execute_step(step.right, budget, max_side),
        )
    raise TypeError(f"unknown recipe step {step!r}")


def execute_recipe(recipe: Recipe, budget: int = DEFAULT_BUDGET, max_side: int = DEFAULT_MAX_SIDE) -> GHMatrix:
    M = execute_step(recipe.root, budget, max_side)
    assert M.side == recipe.target, (M.side, recipe.target)
    return M

