"""Polynomial Fedosov structures: loading, validation and built-in fixtures."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from ..algebra.parser import poly_parse
from ..algebra.polynomial import Polynomial
from ..algebra.tensor import Tensor
from ..errors import InvalidInputError, StructureError


def pfaffian(matrix: Sequence[Sequence]):
    """Pfaffian of an antisymmetric matrix by expansion along the first row.

    Works for any entries supporting ring arithmetic (ints, Fractions,
    Polynomials); ``Pf(A)^2 = det(A)``.
    """
    n = len(matrix)
    if n % 2:
        return 0
    if n == 0:
        return 1
    total = 0
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        a = matrix[0][j]
        if a == 0:
            continue
        keep = [r for r in rest if r != j]
        minor = [[matrix[r][c] for c in keep] for r in keep]
        term = a * pfaffian(minor)
        total = total + term if pos % 2 == 0 else total - term
    return total


def default_coordinates(two_n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, two_n + 1))


@dataclass(frozen=True, eq=False)
class FedosovStructure:
    """Symplectic form and lowered Christoffel symbols Gamma_{ijk} = omega_{il} Gamma^l_{jk}.

    ``omega`` and ``gamma_lower`` hold Polynomial components over
    ``coordinates``; indices are 0-based internally.
    """

    two_n: int
    omega: Tensor
    gamma_lower: Tensor
    coordinates: tuple[str, ...]

    def omega_at(self, point: Sequence) -> Tensor:
        return self.omega.map(lambda p: _small(p.evaluate(point)))

    def gamma_at(self, point: Sequence) -> Tensor:
        return self.gamma_lower.map(lambda p: _small(p.evaluate(point)))

    def has_constant_omega(self) -> bool:
        return all(p.is_constant() for p in self.omega.flat())

    def pfaffian(self) -> Polynomial:
        w = [[self.omega[i, j] for j in range(self.two_n)] for i in range(self.two_n)]
        pf = pfaffian(w)
        return pf if isinstance(pf, Polynomial) else Polynomial.constant(pf, self.coordinates)

    def check_point(self, point: Sequence) -> list[Fraction]:
        if len(point) != self.two_n:
            raise InvalidInputError(f"point must have {self.two_n} coordinates, got {len(point)}")
        pt = [Fraction(x) for x in point]
        if self.pfaffian().evaluate(pt) == 0:
            raise InvalidInputError(f"omega is singular at {[str(x) for x in pt]}")
        return pt

    def to_document(self) -> dict:
        n = self.two_n
        entries = []
        for i, j, k in itertools.product(range(n), repeat=3):
            p = self.gamma_lower[i, j, k]
            if not p.is_zero():
                entries.append({"indices": [i + 1, j + 1, k + 1], "poly": str(p), "symmetrize": "none"})
        return {
            "dim": n,
            "omega": [[str(self.omega[i, j]) for j in range(n)] for i in range(n)],
            "gamma_lower": entries,
            "coordinates": list(self.coordinates),
        }


def _small(x: Fraction):
    return int(x) if x.denominator == 1 else x


def validation_checks(F: FedosovStructure) -> list[dict]:
    """Every structural check with its outcome; failing entries carry details."""
    n = F.two_n
    checks = []

    bad = []
    for i, j in itertools.product(range(n), repeat=2):
        if i <= j and F.omega[i, j] + F.omega[j, i] != 0:
            bad.append([i + 1, j + 1])
    checks.append(_check("omega-antisymmetric", not bad, "omega is antisymmetric", bad))

    pf0 = F.pfaffian().evaluate([0] * n)
    checks.append({
        "check": "omega-nonsingular-at-origin",
        "passed": pf0 != 0,
        "message": f"Pfaffian of omega at the origin is {pf0}",
        "pfaffian": str(F.pfaffian()),
    })

    bad = []
    for i, j, k in itertools.product(range(n), repeat=3):
        if j < k and F.gamma_lower[i, j, k] != F.gamma_lower[i, k, j]:
            bad.append({"indices": [i + 1, j + 1, k + 1], "residual": str(F.gamma_lower[i, j, k] - F.gamma_lower[i, k, j])})
    checks.append(_check("gamma-symmetric", not bad, "Gamma_{ijk} is symmetric in j, k", bad))

    checks.append(compatibility_check(F))
    return checks


def compatibility_check(F: FedosovStructure) -> dict:
    """d_k omega_{ij} = Gamma_{ikj} - Gamma_{jki} as polynomial identities."""
    n = F.two_n
    bad = []
    for i, j, k in itertools.product(range(n), repeat=3):
        residual = F.omega[i, j].diff(k) - F.gamma_lower[i, k, j] + F.gamma_lower[j, k, i]
        if not residual.is_zero():
            bad.append({"indices": [i + 1, j + 1, k + 1], "residual": str(residual)})
    return _check("compatibility", not bad, "d_k omega_ij = Gamma_ikj - Gamma_jki", bad)


def _check(name: str, passed: bool, message: str, failures: list) -> dict:
    out = {"check": name, "passed": passed, "message": message if passed else f"{message} fails ({len(failures)} cases)"}
    if failures:
        out["failures"] = failures
    return out


def validate(F: FedosovStructure) -> FedosovStructure:
    issues = []
    for c in validation_checks(F):
        if c["passed"]:
            continue
        if c["check"] in ("compatibility", "gamma-symmetric"):
            for f in c["failures"]:
                issues.append({
                    "check": c["check"],
                    "message": f"{c['check']} fails at {tuple(f['indices'])}: residual {f['residual']}",
                    "indices": f["indices"],
                    "residual": f["residual"],
                })
        else:
            issues.append({"check": c["check"], "message": c["message"]})
    if issues:
        raise StructureError(issues)
    return F


def build_structure(
    two_n: int,
    omega: Sequence[Sequence] | None,
    gamma: dict[tuple[int, int, int], Polynomial | str],
    coordinates: Sequence[str] | None = None,
    check: bool = True,
) -> FedosovStructure:
    """Structure from 0-based data; ``omega=None`` means the canonical form."""
    coords = tuple(coordinates) if coordinates else default_coordinates(two_n)
    zero = Polynomial.zero(coords)

    def as_poly(x) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, str):
            return poly_parse(x, coords)
        return Polynomial.constant(x, coords)

    if omega is None:
        omega_arr = [[zero] * two_n for _ in range(two_n)]
        for a in range(0, two_n, 2):
            omega_arr[a][a + 1] = as_poly(1)
            omega_arr[a + 1][a] = as_poly(-1)
    else:
        omega_arr = [[as_poly(x) for x in row] for row in omega]
    w = Tensor.from_function(two_n, 2, lambda i, j: omega_arr[i][j])
    g = Tensor.from_function(two_n, 3, lambda i, j, k: as_poly(gamma.get((i, j, k), zero)))
    F = FedosovStructure(two_n, w, g, coords)
    return validate(F) if check else F


def load_structure(document: dict | str, check: bool = True) -> FedosovStructure:
    """Parse a structure document (dict or JSON text) and validate it exactly."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"structure file is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise InvalidInputError("structure document must be a JSON object")
    try:
        two_n = int(document["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError("structure document needs an integer 'dim'") from exc
    if two_n < 2 or two_n % 2:
        raise InvalidInputError(f"dimension must be an even integer >= 2, got {two_n}")
    coords = tuple(document.get("coordinates") or default_coordinates(two_n))
    if len(coords) != two_n:
        raise InvalidInputError(f"expected {two_n} coordinate names, got {len(coords)}")

    raw_omega = document.get("omega", "canonical")
    if raw_omega == "canonical":
        omega = None
    elif isinstance(raw_omega, list) and len(raw_omega) == two_n and all(isinstance(r, list) and len(r) == two_n for r in raw_omega):
        omega = [[poly_parse(str(x), coords) for x in row] for row in raw_omega]
    else:
        raise InvalidInputError("'omega' must be \"canonical\" or a dim x dim matrix of polynomial strings")

    gamma: dict[tuple[int, int, int], Polynomial] = {}
    for n_entry, entry in enumerate(document.get("gamma_lower", [])):
        try:
            idx = tuple(int(i) - 1 for i in entry["indices"])
            text = str(entry["poly"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"gamma_lower entry {n_entry} needs 'indices' and 'poly'") from exc
        if len(idx) != 3 or any(not 0 <= i < two_n for i in idx):
            raise InvalidInputError(f"gamma_lower entry {n_entry}: indices must be three integers in 1..{two_n}")
        mode = entry.get("symmetrize", "none")
        if mode not in ("full", "none"):
            raise InvalidInputError(f"gamma_lower entry {n_entry}: symmetrize must be 'full' or 'none'")
        poly = poly_parse(text, coords)
        targets = set(itertools.permutations(idx)) if mode == "full" else {idx}
        for t in targets:
            if t in gamma and gamma[t] != poly:
                raise InvalidInputError(f"gamma_lower entry {n_entry} conflicts with an earlier value at {tuple(i + 1 for i in t)}")
            gamma[t] = poly
    return build_structure(two_n, omega, gamma, coords, check=check)


def load_structure_file(path: str, check: bool = True) -> FedosovStructure:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read structure file {path}: {exc}") from exc
    return load_structure(text, check=check)


FIXTURES = ("reference", "flat")


def fixture_document(name: str) -> dict:
    if name not in FIXTURES:
        raise InvalidInputError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files("fedinv.data").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def reference_structure() -> FedosovStructure:
    """R^4 with omega = dx1^dx2 + dx3^dx4, Gamma = 1 on permutations of (1,1,2)
    and x1*x3*x4 on permutations of (2,3,4) (1-based), zero otherwise."""
    return load_structure(fixture_document("reference"))


def flat_structure(two_n: int = 4) -> FedosovStructure:
    return build_structure(two_n, None, {})
