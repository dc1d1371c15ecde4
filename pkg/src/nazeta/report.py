"""Check rows and their CSV / JSON emission."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .exact import Poly

COLUMNS = ("check_name", "status", "lhs", "rhs", "abs_delta", "tolerance")


def fmt(x) -> str:
    """Deterministic text form: rationals as num/den, floats with 17 digits."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, float):
        return f"{x:.17g}"
    if isinstance(x, Poly):
        return "[" + " ".join(fmt(c) for c in x.coeffs) + "]"
    return str(x)


def _delta(lhs, rhs):
    if isinstance(lhs, Poly) and isinstance(rhs, Poly):
        return max((abs(lhs[i] - rhs[i]) for i in range(max(len(lhs), len(rhs)))), default=Fraction(0))
    try:
        if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
            return abs(Fraction(lhs) - Fraction(rhs))
        return abs(complex(lhs) - complex(rhs))
    except (TypeError, ValueError):
        return None


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: object = None
    rhs: object = None
    tolerance: object = 0
    status_override: str | None = None

    @property
    def status(self) -> str:
        if self.status_override:
            return self.status_override
        return "pass" if self.passed else "fail"

    @property
    def abs_delta(self):
        return _delta(self.lhs, self.rhs)

    def row(self) -> dict[str, str]:
        vals = (self.name, self.status, self.lhs, self.rhs, self.abs_delta, self.tolerance)
        return {k: fmt(v) for k, v in zip(COLUMNS, vals)}


def compare(name: str, lhs, rhs, tol=0) -> Check:
    """Pass iff |lhs - rhs| <= tol (exact comparison when tol == 0 and both are rational)."""
    d = _delta(lhs, rhs)
    return Check(name, d is not None and d <= tol, lhs, rhs, tol)


def bound(name: str, lhs, rhs, strict: bool = False) -> Check:
    """Pass iff lhs <= rhs (or < when strict)."""
    ok = lhs < rhs if strict else lhs <= rhs
    return Check(name, bool(ok), lhs, rhs, "strict" if strict else "<=")


class Report:
    def __init__(self, checks=()):
        self._checks: list[Check] = []
        self._names: set[str] = set()
        for c in checks:
            self.add(c)

    def add(self, check: Check) -> Check:
        if check.name in self._names:
            raise InputError(f"duplicate check name {check.name!r}")
        self._names.add(check.name)
        self._checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    def __iter__(self):
        return iter(self._checks)

    def __len__(self):
        return len(self._checks)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self._checks)

    def failures(self) -> list[Check]:
        return [c for c in self._checks if c.status == "fail"]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for c in self._checks:
            w.writerow(c.row())
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps([c.row() for c in self._checks], indent=2) + "\n"

    def write(self, path: str | os.PathLike):
        path = Path(path)
        text = self.json_text() if path.suffix == ".json" else self.csv_text()
        atomic_write(path, text)


def atomic_write(path: str | os.PathLike, text: str):
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    """Stable JSON: sorted keys, floats at 17 significant digits."""
    return json.dumps(_encode(obj), indent=2, sort_keys=True) + "\n"


def _encode(obj):
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (Fraction, float, complex)):
        return fmt(obj)
    return obj
