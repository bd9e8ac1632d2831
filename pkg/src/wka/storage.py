"""Text serialization for weak Kac algebras and groupoid tables.

Structure files are JSON with sparse coefficient lists: every tensor
entry is a row [indices..., re, im] with explicit real and imaginary
parts, entries in lexicographic index order and exact zeros omitted, so
files are diffable and round-trip bit-identically.  The multiplication
and star tables of the canonical block algebra are included for
readability and validated against the block shape on load; loading
performs structural validation only (shapes, index ranges, canonical
tables) and never checks the weak Kac axioms, which is `verify`'s job.

Groupoid tables use a line-oriented format:

    morphisms: f g h
    units: f
    compose: f f -> f
    compose: g h -> f
    inverse: g -> h

Unlisted compositions are undefined; inverse lines are optional and
validated against the derived inverses when present.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import make_algebra
from .constructors import Groupoid
from .errors import IndexOutOfRange, ParseError
from .weakkac import WeakKac

__all__ = [
    "WkaFile",
    "serialize",
    "deserialize",
    "save_wka",
    "load_wka",
    "format_groupoid",
    "parse_groupoid",
]

FORMAT_VERSION = 1

_JSON_SAFE = (str, int, float, bool)


def _sparse(arr: np.ndarray) -> list:
    """Rows [indices..., re, im] of the nonzero entries, index-sorted."""
    arr = np.asarray(arr, dtype=complex)
    rows = []
    for idx in np.argwhere(arr != 0):
        v = arr[tuple(idx)]
        rows.append([int(i) for i in idx] + [float(v.real), float(v.imag)])
    rows.sort(key=lambda r: r[:-2])
    return rows


def _dense(rows, shape, what: str) -> np.ndarray:
    ndim = len(shape)
    out = np.zeros(shape, dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ndim + 2:
            raise ParseError(
                f"{what} entry {r}: expected {ndim} indices plus re, im, got {row!r}"
            )
        idx, (re, im) = row[:ndim], row[ndim:]
        for axis, i in enumerate(idx):
            if not isinstance(i, int) or not 0 <= i < shape[axis]:
                raise IndexOutOfRange(
                    f"{what} entry {r}: index {i} out of range [0, {shape[axis]})"
                )
        if not all(isinstance(x, (int, float)) for x in (re, im)):
            raise ParseError(f"{what} entry {r}: re/im must be numbers")
        out[tuple(idx)] = complex(re, im)
    return out


@dataclass
class WkaFile:
    """Parsed structure file: canonical block data plus sparse tensors."""

    block_shape: tuple
    basis: list
    mult: list
    coproduct: list
    antipode: list
    counit: object  # list of rows, or None for generalized data
    star: list
    metadata: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def to_text(self) -> str:
        obj = {
            "format_version": self.format_version,
            "block_shape": list(self.block_shape),
            "basis": list(self.basis),
            "mult": self.mult,
            "coproduct": self.coproduct,
            "antipode": self.antipode,
            "counit": self.counit,
            "star": self.star,
            "metadata": self.metadata,
        }
        return json.dumps(obj, indent=1) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "WkaFile":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise ParseError("top level must be an object")
        missing = [
            k
            for k in ("format_version", "block_shape", "mult", "coproduct", "antipode", "star")
            if k not in obj
        ]
        if missing:
            raise ParseError(f"missing fields: {', '.join(missing)}")
        if obj["format_version"] != FORMAT_VERSION:
            raise ParseError(f"unsupported format_version {obj['format_version']!r}")
        shape = obj["block_shape"]
        if (
            not isinstance(shape, list)
            or not shape
            or not all(isinstance(d, int) and d >= 1 for d in shape)
        ):
            raise ParseError("block_shape must be a nonempty list of positive integers")
        return cls(
            block_shape=tuple(shape),
            basis=obj.get("basis", []),
            mult=obj["mult"],
            coproduct=obj["coproduct"],
            antipode=obj["antipode"],
            counit=obj.get("counit"),
            star=obj["star"],
            metadata=obj.get("metadata", {}) or {},
            format_version=obj["format_version"],
        )


def serialize(w: WeakKac) -> WkaFile:
    """Sparse text form of a weak Kac algebra (or generalized: counit None)."""
    alg = w.algebra
    meta = {
        k: v
        for k, v in w.meta.items()
        if isinstance(v, _JSON_SAFE)
        or (isinstance(v, (list, tuple)) and all(isinstance(x, _JSON_SAFE) for x in v))
    }
    return WkaFile(
        block_shape=tuple(int(d) for d in alg.block_shape),
        basis=list(alg.labels),
        mult=_sparse(alg.mult_tensor()),
        coproduct=_sparse(w.coproduct),
        antipode=_sparse(w.antipode),
        counit=None if w.counit is None else _sparse(w.counit),
        star=_sparse(alg.star_matrix),
        metadata=meta,
    )


def deserialize(f: WkaFile) -> WeakKac:
    """Rebuild the WeakKac from a parsed file, with structural validation.

    Checks shapes and index ranges, and that the stored mult and star
    tables equal those of the canonical block algebra; does not verify
    the weak Kac axioms.
    """
    alg = make_algebra(f.block_shape)
    dim = alg.dim
    mult = _dense(f.mult, (dim, dim, dim), "mult")
    if np.any(mult != alg.mult_tensor()):
        raise ParseError("mult does not match the canonical algebra of block_shape")
    star = _dense(f.star, (dim, dim), "star")
    if np.any(star != alg.star_matrix):
        raise ParseError("star does not match the canonical algebra of block_shape")
    if f.basis and (len(f.basis) != dim or not all(isinstance(x, str) for x in f.basis)):
        raise ParseError(f"basis must list {dim} labels")
    coproduct = _dense(f.coproduct, (dim, dim, dim), "coproduct")
    antipode = _dense(f.antipode, (dim, dim), "antipode")
    counit = None if f.counit is None else _dense(f.counit, (dim,), "counit")
    meta = dict(f.metadata)
    return WeakKac(alg, coproduct, antipode, counit, meta)


def save_wka(w: WeakKac, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(w).to_text())


def load_wka(path) -> WeakKac:
    with open(path) as fh:
        return deserialize(WkaFile.from_text(fh.read()))


# ---------------------------------------------------------------------------
# groupoid tables
# ---------------------------------------------------------------------------


def format_groupoid(gpd: Groupoid) -> str:
    lines = [
        "morphisms: " + " ".join(gpd.labels),
        "units: " + " ".join(gpd.labels[u] for u in gpd.units),
    ]
    for g in range(gpd.size):
        for h in range(gpd.size):
            k = gpd.compose[g, h]
            if k >= 0:
                lines.append(f"compose: {gpd.labels[g]} {gpd.labels[h]} -> {gpd.labels[k]}")
    for g in range(gpd.size):
        lines.append(f"inverse: {gpd.labels[g]} -> {gpd.labels[gpd.inverse[g]]}")
    return "\n".join(lines) + "\n"


def parse_groupoid(text: str) -> Groupoid:
    """Parse the line-oriented groupoid table format (see module docstring)."""
    labels = None
    units = None
    compose_lines = []
    inverse_lines = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {ln}: expected 'keyword: ...', got {raw!r}")
        key, rest = (part.strip() for part in line.split(":", 1))
        if key == "morphisms":
            labels = rest.split()
            if len(set(labels)) != len(labels) or not labels:
                raise ParseError(f"line {ln}: morphism labels must be distinct and nonempty")
        elif key == "units":
            units = rest.split()
        elif key == "compose":
            parts = rest.split("->")
            lhs = parts[0].split() if parts else []
            if len(parts) != 2 or len(lhs) != 2 or len(parts[1].split()) != 1:
                raise ParseError(f"line {ln}: expected 'compose: x y -> z'")
            compose_lines.append((ln, lhs[0], lhs[1], parts[1].split()[0]))
        elif key == "inverse":
            parts = rest.split("->")
            if len(parts) != 2 or len(parts[0].split()) != 1 or len(parts[1].split()) != 1:
                raise ParseError(f"line {ln}: expected 'inverse: x -> y'")
            inverse_lines.append((ln, parts[0].split()[0], parts[1].split()[0]))
        else:
            raise ParseError(f"line {ln}: unknown keyword {key!r}")
    if labels is None:
        raise ParseError("missing 'morphisms:' header")
    if units is None:
        raise ParseError("missing 'units:' header")
    index = {lab: i for i, lab in enumerate(labels)}

    def look(ln, lab):
        if lab not in index:
            raise ParseError(f"line {ln}: unknown morphism {lab!r}")
        return index[lab]

    for u in units:
        if u not in index:
            raise ParseError(f"unknown unit {u!r}")
    n = len(labels)
    comp = np.full((n, n), -1, dtype=int)
    for ln, x, y, z in compose_lines:
        g, h, k = look(ln, x), look(ln, y), look(ln, z)
        if comp[g, h] not in (-1, k):
            raise ParseError(f"line {ln}: conflicting composition for {x} {y}")
        comp[g, h] = k
    gpd = Groupoid(comp, [index[u] for u in units], labels=labels)
    for ln, x, y in inverse_lines:
        g, h = look(ln, x), look(ln, y)
        if gpd.inverse[g] != h:
            raise ParseError(
                f"line {ln}: inverse of {x} is {labels[gpd.inverse[g]]}, not {y}"
            )
    return gpd
