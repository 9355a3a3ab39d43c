"""S-Hadamard matrices with root-of-unity entries.

An n x n matrix H with unimodular entries is S-Hadamard when HH* = nI and the
entrywise squares of distinct rows are orthogonal as well.  Entries are kept
as exponents of zeta_L, so squaring a row is doubling its exponents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .cyclotomic import CycInt, exponent_inner_product, root_vector
from .ghmat import GHMatrix, verify_gh
from .report import VerificationReport


@dataclass(frozen=True)
class SHadamard:
    n: int
    root_order: int
    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"order n must be a positive integer, got {self.n!r}")
        if not isinstance(self.root_order, int) or self.root_order < 1:
            raise ValueError(f"root order must be a positive integer, got {self.root_order!r}")
        rows = tuple(tuple(r) for r in self.exponents)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError(f"exponent matrix must be {self.n}x{self.n}")
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if not isinstance(e, int) or isinstance(e, bool) or not 0 <= e < self.root_order:
                    raise ValueError(
                        f"exponent ({i},{j}) = {e!r} outside 0..{self.root_order - 1}"
                    )
        object.__setattr__(self, "exponents", rows)

    def row(self, i: int) -> tuple[CycInt, ...]:
        return root_vector(self.exponents[i], self.root_order)

    def squared_row(self, i: int) -> tuple[int, ...]:
        L = self.root_order
        return tuple(2 * e % L for e in self.exponents[i])

    def to_json(self) -> dict:
        return {
            "kind": "shadamard",
            "n": self.n,
            "root_order": self.root_order,
            "exponents": [list(r) for r in self.exponents],
        }

    @classmethod
    def from_json(cls, data) -> SHadamard:
        if not isinstance(data, dict) or data.get("kind") != "shadamard":
            raise ValueError("not an S-Hadamard object (expected kind 'shadamard')")
        missing = {"n", "root_order", "exponents"} - set(data)
        if missing:
            raise ValueError(f"S-Hadamard object missing fields: {sorted(missing)}")
        exps = data["exponents"]
        if not isinstance(exps, list) or not all(isinstance(r, list) for r in exps):
            raise ValueError("exponents must be a list of lists")
        return cls(data["n"], data["root_order"], exps)


def from_gh(M: GHMatrix) -> SHadamard:
    """Lift a GH(g, lam) over Z_g to the S-Hadamard matrix (zeta_g ** m_ij).

    Needs g > 2: for g = 2 the squared entries are all 1 and the squared rows
    cannot be orthogonal.
    """
    if M.g <= 2:
        raise ValueError(
            f"S-Hadamard lift needs g > 2 (got g={M.g}): zeta_g^2 = 1 makes "
            "squared rows identical, violating the squared-row orthogonality"
        )
    report = verify_gh(M)
    if not report.passed:
        raise ValueError(f"input is not a GH({M.g},{M.lam}): {report.witness}")
    return SHadamard(M.side, M.g, M.entries)


def verify_shadamard(H: SHadamard) -> VerificationReport:
    """Decide all three defining conditions exactly.

    Failures are tagged with the condition number and sorted by row pair;
    condition 2 holds by construction and is reported for uniformity.
    """
    n, L = H.n, H.root_order
    exps = H.exponents
    squares = [H.squared_row(i) for i in range(n)]
    failures = []
    for k in range(n):
        diag = exponent_inner_product(exps[k], exps[k], L) - n
        if not diag.is_zero():
            failures.append({"condition": 1, "rows": [k, k]})
        for l in range(k + 1, n):
            if not exponent_inner_product(exps[k], exps[l], L).is_zero():
                failures.append({"condition": 1, "rows": [k, l]})
            if not exponent_inner_product(squares[k], squares[l], L).is_zero():
                failures.append({"condition": 3, "rows": [k, l]})
    failures.sort(key=lambda f: (f["rows"], f["condition"]))
    checks = {
        "condition_1": not any(f["condition"] == 1 for f in failures),
        "condition_2": True,
        "condition_3": not any(f["condition"] == 3 for f in failures),
    }
    return VerificationReport(
        kind="shadamard",
        passed=not failures,
        witness=failures[0] if failures else None,
        failures=failures,
        checks=checks,
    )


def dephase(H: SHadamard) -> SHadamard:
    """Divide every row entrywise by the first row, making row 0 all ones."""
    L = H.root_order
    first = H.exponents[0]
    return SHadamard(
        H.n,
        L,
        tuple(tuple((e - f) % L for e, f in zip(row, first)) for row in H.exponents),
    )


def shad_export(H: SHadamard, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(H.to_json())
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def shad_import(source) -> tuple[SHadamard, VerificationReport]:
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = Path(source).read_text()
    data = json.loads(source) if isinstance(source, str) else source
    H = SHadamard.from_json(data)
    return H, verify_shadamard(H)
