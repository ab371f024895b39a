"""The self-contained JSON input format and its validation.

One document can carry a group with twist data (sigma, phi), fine-subgroup
data, cocycles, an ordinary graded algebra, an explicit conformal structure
table, matrix-model degree labels, and a matrix subalgebra of End V.  All
rational values are strings or integers in the polynomial text grammar;
pair-valued maps use "a,b" keys.  Parsing performs full structural and
invariant validation before any computation runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cend import CendMatrix
from .cohomology import MultCocycleZ, check_mult_cocycle_Z, find_cocycle_violation, OneCochain
from .conformal import GradedAlgebraFD, GradedConformalAlgebra
from .errors import NotHomogeneous, ParseError, SchemaError
from .groups import (
    FiniteGroup,
    FineSubgroupData,
    GradingContext,
    check_sigma,
    coset_decomposition,
    group_validate,
    make_trivial,
)
from .poly import MPoly, parse_poly, parse_rational


@dataclass
class Document:
    group: FiniteGroup
    ctx: GradingContext
    fine: FineSubgroupData | None = None
    theta: dict[tuple[int, int], Fraction] | None = None
    chi: MultCocycleZ | None = None
    tau: OneCochain | None = None
    algebra: GradedAlgebraFD | None = None
    conformal: GradedConformalAlgebra | None = None
    cend_degrees: tuple[str, ...] | None = None
    cend_matrices: list[CendMatrix] = field(default_factory=list)
    endv_degrees: tuple[str, ...] | None = None
    endv_basis: list[list[list[Fraction]]] | None = None
    options: dict = field(default_factory=dict)
    validation_notes: list[str] = field(default_factory=list)


def _expect(cond: bool, message: str, location: str):
    if not cond:
        raise SchemaError(message, location=location)


def _rational(value, location: str) -> Fraction:
    try:
        if isinstance(value, int):
            return Fraction(value)
        return parse_rational(str(value))
    except ParseError as exc:
        raise SchemaError(f"bad rational {value!r}: {exc}", location=location) from exc


def _poly(value, location: str) -> MPoly:
    try:
        if isinstance(value, int):
            return MPoly.const(value)
        return parse_poly(str(value))
    except ParseError as exc:
        raise SchemaError(f"bad polynomial {value!r}: {exc}", location=location) from exc


def _pair_key(key: str, group: FiniteGroup, location: str) -> tuple[int, int]:
    parts = key.split(",")
    _expect(len(parts) == 2, f"pair key {key!r} must be 'a,b'", location)
    try:
        return group.index_of(parts[0].strip()), group.index_of(parts[1].strip())
    except KeyError as exc:
        raise SchemaError(str(exc), location=location) from exc


def parse_document(raw: dict) -> Document:
    if not isinstance(raw, dict):
        raise SchemaError("document must be a JSON object", location="$")
    notes: list[str] = []

    if "group" in raw:
        g = raw["group"]
        _expect(isinstance(g, dict), "group must be an object", "group")
        _expect("elements" in g and "table" in g, "group needs elements and table", "group")
        group = group_validate(g["elements"], g["table"])
        notes.append(f"group: valid, order {group.order}")
    else:
        group = make_trivial()
        notes.append("group: defaulted to the trivial group")

    sigma = {}
    for label, value in (raw.get("sigma") or {}).items():
        _expect(label in group.elements, f"unknown element {label!r}", f"sigma.{label}")
        sigma[label] = _rational(value, f"sigma.{label}")
    phi = {}
    for key, value in (raw.get("phi") or {}).items():
        i, j = _pair_key(key, group, f"phi.{key}")
        phi[(group.elements[i], group.elements[j])] = _rational(value, f"phi.{key}")
    gamma0 = raw.get("gamma0") or []
    for label in gamma0:
        _expect(label in group.elements, f"unknown element {label!r}", "gamma0")
    ctx = GradingContext.build(group, sigma=sigma, phi=phi, gamma0=gamma0)
    _expect(check_sigma(ctx), "sigma is not a homomorphism into Q*", "sigma")
    notes.append("sigma: group homomorphism into Q*")
    violation = find_cocycle_violation(ctx)
    if violation is not None:
        a, b, c = violation
        raise SchemaError(
            "phi violates the twisted 2-cocycle condition at "
            f"({group.elements[a]}, {group.elements[b]}, {group.elements[c]})",
            location="phi",
        )
    notes.append("phi: twisted additive 2-cocycle")

    doc = Document(group=group, ctx=ctx, options=dict(raw.get("options") or {}))
    doc.validation_notes = notes

    if raw.get("gamma1"):
        for label in raw["gamma1"]:
            _expect(label in group.elements, f"unknown element {label!r}", "gamma1")
        doc.fine = coset_decomposition(group, raw["gamma1"], gamma0)
        notes.append(
            f"gamma1: fine subgroup with {doc.fine.p} coset(s) on the support"
        )

    if raw.get("theta"):
        _expect(doc.fine is not None, "theta requires gamma1", "theta")
        theta = {}
        for key, value in raw["theta"].items():
            i, j = _pair_key(key, group, f"theta.{key}")
            _expect(
                i in doc.fine.gamma1 and j in doc.fine.gamma1,
                f"theta key {key!r} must lie in gamma1",
                f"theta.{key}",
            )
            v = _rational(value, f"theta.{key}")
            _expect(v != 0, "theta values must be nonzero", f"theta.{key}")
            theta[(i, j)] = v
        doc.theta = theta

    if raw.get("chi"):
        _expect(doc.fine is not None, "chi requires gamma1", "chi")
        fine = doc.fine
        n = group.order
        chi = [
            [
                Fraction(0)
                if (b in fine.gamma0 or group.mul(a, b) in fine.gamma0)
                else Fraction(1)
                for b in range(n)
            ]
            for a in range(n)
        ]
        for key, value in raw["chi"].items():
            i, j = _pair_key(key, group, f"chi.{key}")
            chi[i][j] = _rational(value, f"chi.{key}")
        doc.chi = MultCocycleZ(fine, tuple(tuple(row) for row in chi))
        _expect(
            check_mult_cocycle_Z(doc.chi),
            "chi fails the partial multiplicative cocycle conditions",
            "chi",
        )
        notes.append("chi: partially supported multiplicative cocycle")

    if raw.get("tau"):
        tau = {}
        for label, value in raw["tau"].items():
            _expect(label in group.elements, f"unknown element {label!r}", f"tau.{label}")
            tau[label] = _rational(value, f"tau.{label}")
        doc.tau = OneCochain.build(ctx, tau)

    if raw.get("algebra"):
        a = raw["algebra"]
        _expect(isinstance(a, dict), "algebra must be an object", "algebra")
        basis = list(a.get("basis") or [])
        degrees = list(a.get("degrees") or [])
        _expect(basis, "algebra.basis must be nonempty", "algebra.basis")
        _expect(
            len(degrees) == len(basis),
            "algebra.degrees must match algebra.basis in length",
            "algebra.degrees",
        )
        for d in degrees:
            _expect(d in group.elements, f"unknown degree {d!r}", "algebra.degrees")
        dim = len(basis)
        mult = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for key, row in (a.get("products") or {}).items():
            parts = key.split(",")
            _expect(len(parts) == 2, f"product key {key!r} must be 'i,j'", f"algebra.products.{key}")
            try:
                i, j = int(parts[0]) - 1, int(parts[1]) - 1
            except ValueError:
                raise SchemaError(
                    f"product key {key!r} must hold 1-based indices",
                    location=f"algebra.products.{key}",
                )
            _expect(0 <= i < dim and 0 <= j < dim, f"index out of range in {key!r}", f"algebra.products.{key}")
            for k_str, value in row.items():
                try:
                    k = int(k_str) - 1
                except ValueError:
                    raise SchemaError(
                        f"component key {k_str!r} must be a 1-based index",
                        location=f"algebra.products.{key}.{k_str}",
                    )
                _expect(0 <= k < dim, f"component {k_str} out of range", f"algebra.products.{key}")
                mult[i][j][k] = _rational(value, f"algebra.products.{key}.{k_str}")
        doc.algebra = GradedAlgebraFD(group, degrees, mult, basis)
        _expect(
            doc.algebra.grading_compatible(),
            "algebra structure constants violate the grading",
            "algebra.products",
        )
        notes.append(f"algebra: dimension {dim}, grading compatible")

    if raw.get("conformal"):
        c = raw["conformal"]
        degrees = list(c.get("degrees") or [])
        _expect(degrees, "conformal.degrees must be nonempty", "conformal.degrees")
        for d in degrees:
            _expect(d in group.elements, f"unknown degree {d!r}", "conformal.degrees")
        dim = len(degrees)
        structure = [
            [[MPoly.zero() for _ in range(dim)] for _ in range(dim)] for _ in range(dim)
        ]
        for key, entries in (c.get("structure") or {}).items():
            parts = key.split(",")
            _expect(len(parts) == 2, f"structure key {key!r} must be 'i,j'", f"conformal.structure.{key}")
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            _expect(0 <= i < dim and 0 <= j < dim, "index out of range", f"conformal.structure.{key}")
            _expect(
                isinstance(entries, list) and len(entries) == dim,
                f"structure row for {key!r} must list {dim} polynomials",
                f"conformal.structure.{key}",
            )
            for k, value in enumerate(entries):
                p = _poly(value, f"conformal.structure.{key}[{k}]")
                _expect(
                    p.uses_only({"T", "lambda"}),
                    "structure polynomials may use T and lambda only",
                    f"conformal.structure.{key}[{k}]",
                )
                structure[i][j][k] = p
        doc.conformal = GradedConformalAlgebra(ctx, degrees, structure, c.get("basis"))
        notes.append(f"conformal: {dim} basis elements")

    if raw.get("cend"):
        degrees = list(raw["cend"].get("degrees") or [])
        _expect(degrees, "cend.degrees must be nonempty", "cend.degrees")
        for d in degrees:
            _expect(d in group.elements, f"unknown degree {d!r}", "cend.degrees")
        doc.cend_degrees = tuple(degrees)
        n = len(degrees)
        for m_idx, mat in enumerate(raw["cend"].get("matrices") or []):
            entries = mat.get("entries") if isinstance(mat, dict) else mat
            _expect(
                isinstance(entries, list) and len(entries) == n
                and all(len(r) == n for r in entries),
                f"cend.matrices[{m_idx}] must be {n}x{n}",
                f"cend.matrices[{m_idx}]",
            )
            rows = [
                [_poly(x, f"cend.matrices[{m_idx}][{r}][{c}]") for c, x in enumerate(row)]
                for r, row in enumerate(entries)
            ]
            for r, row in enumerate(rows):
                for c, p in enumerate(row):
                    _expect(
                        p.uses_only({"T", "x"}),
                        "matrix entries must be polynomials in T and x",
                        f"cend.matrices[{m_idx}][{r}][{c}]",
                    )
            matrix = CendMatrix.build(ctx, degrees, rows)
            if not matrix.is_zero():
                try:
                    matrix.degree()
                except NotHomogeneous as exc:
                    raise SchemaError(str(exc), location=f"cend.matrices[{m_idx}]") from exc
            doc.cend_matrices.append(matrix)
        if doc.cend_matrices:
            notes.append(f"cend: {len(doc.cend_matrices)} homogeneous matrices over Q[T,x]")

    if raw.get("endv"):
        ev = raw["endv"]
        v_degrees = list(ev.get("v_degrees") or [])
        _expect(v_degrees, "endv.v_degrees must be nonempty", "endv.v_degrees")
        for d in v_degrees:
            _expect(d in group.elements, f"unknown degree {d!r}", "endv.v_degrees")
        n = len(v_degrees)
        mats = []
        for m_idx, mat in enumerate(ev.get("basis") or []):
            _expect(
                isinstance(mat, list) and len(mat) == n and all(len(r) == n for r in mat),
                f"endv.basis[{m_idx}] must be {n}x{n}",
                f"endv.basis[{m_idx}]",
            )
            mats.append(
                [
                    [_rational(x, f"endv.basis[{m_idx}][{r}][{c}]") for c, x in enumerate(row)]
                    for r, row in enumerate(mat)
                ]
            )
        _expect(bool(mats), "endv.basis must be nonempty", "endv.basis")
        doc.endv_degrees = tuple(v_degrees)
        doc.endv_basis = mats
        notes.append(f"endv: {len(mats)} matrices on a space of dimension {n}")

    return doc


def load_document(path: str | Path) -> Document:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"input file {path} does not exist")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", position=exc.pos, location=f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    return parse_document(raw)


def validate_file(path: str | Path) -> Document:
    """Parse and fully validate an input file; raises ParseError/SchemaError."""
    return load_document(path)
