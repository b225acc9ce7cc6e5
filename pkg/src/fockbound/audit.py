"""Two-sided inequality reports shared by every audit."""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class AuditReport:
    """``lhs <= rhs + tolerance``, with the numbers that went into it."""

    context: str
    lhs: float
    rhs: float
    tolerance: float = 0.0
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs + self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["slack"] = self.slack
        d["holds"] = self.holds
        if d["seed"] is None:
            del d["seed"]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=_jsonable, **kw)

    def __str__(self):
        mark = "ok" if self.holds else "FAIL"
        return f"[{mark}] {self.context}: lhs={self.lhs:.15g} rhs={self.rhs:.15g} slack={self.slack:.3g}"


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")
