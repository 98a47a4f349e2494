from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    """Outcome of an identity check; truthy iff it passed.

    On failure ``witness`` carries the first offending entry together with
    the values found on both sides.
    """

    name: str
    ok: bool
    witness: dict[str, Any] | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict[str, Any]:
        from .qseries import format_rational

        def enc(v):
            if isinstance(v, (tuple, list)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {str(k): enc(x) for k, x in v.items()}
            if isinstance(v, (int, float)) or v is None or isinstance(v, str):
                return v
            try:
                return format_rational(v)
            except (TypeError, ValueError):
                return str(v)

        return {"name": self.name, "ok": self.ok, "witness": enc(self.witness), "detail": enc(self.detail)}


def compare_sparse(name: str, lhs: dict, rhs: dict, key=None, tol: float = 0.0, **detail) -> Check:
    """Entrywise comparison of two sparse maps; exact when ``tol == 0``."""
    for k in set(lhs) | set(rhs):
        a = lhs.get(k, 0)
        b = rhs.get(k, 0)
        if (a != b) if tol == 0 else abs(a - b) > tol * max(1.0, abs(a), abs(b)):
            w = {"entry": k if key is None else key(k), "lhs": a, "rhs": b}
            return Check(name, False, w, detail)
    return Check(name, True, None, detail)


def all_ok(name: str, checks) -> Check:
    checks = list(checks)
    for c in checks:
        if not c:
            return Check(name, False, {"failed": c.name, **(c.witness or {})}, {"count": len(checks)})
    return Check(name, True, None, {"count": len(checks)})
