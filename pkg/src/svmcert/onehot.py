"""Constant-propagation and One-Hot abstract domains.

The CP domain is the flat lattice bottom <= z <= top over the reals.  The
One-Hot domain OH_k tracks, for the k binary features of one encoded
categorical attribute (its "tier"), the pair of CP values each position
takes when the position is off respectively on.  On sets of legal one-hot
vectors this representation is exact, and scalar maps applied componentwise
stay exact as long as no component is top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import InputError

_BOTTOM = "bottom"
_CONST = "const"
_TOP = "top"


@dataclass(frozen=True)
class CpValue:
    tag: str
    value: float | None = None

    def __post_init__(self):
        if self.tag not in (_BOTTOM, _CONST, _TOP):
            raise InputError(f"bad CP tag: {self.tag!r}")
        if self.tag == _CONST:
            if self.value is None:
                raise InputError("constant CP value requires a value")
            # canonicalize -0.0 so equality is plain float equality
            object.__setattr__(self, "value", self.value + 0.0)
        elif self.value is not None:
            raise InputError(f"{self.tag} CP value carries no payload")

    @classmethod
    def bottom(cls) -> "CpValue":
        return cls(_BOTTOM)

    @classmethod
    def top(cls) -> "CpValue":
        return cls(_TOP)

    @classmethod
    def const(cls, z: float) -> "CpValue":
        return cls(_CONST, float(z))

    @property
    def is_bottom(self) -> bool:
        return self.tag == _BOTTOM

    @property
    def is_top(self) -> bool:
        return self.tag == _TOP

    @property
    def is_const(self) -> bool:
        return self.tag == _CONST


def cp_abstract(values: Iterable[float]) -> CpValue:
    """Best CP abstraction of a set of reals."""
    seen = set(float(v) + 0.0 for v in values)
    if not seen:
        return CpValue.bottom()
    if len(seen) == 1:
        return CpValue.const(seen.pop())
    return CpValue.top()


def cp_apply(f: Callable[[float], float], a: CpValue) -> CpValue:
    """Strict transfer: constants map through f, bottom and top are fixed."""
    if a.is_const:
        return CpValue.const(f(a.value))
    return a


@dataclass(frozen=True)
class OneHotValue:
    """k pairs (off, on) of CP values, k >= 2."""

    pairs: tuple[tuple[CpValue, CpValue], ...]

    def __post_init__(self):
        if len(self.pairs) < 2:
            raise InputError("one-hot width must be >= 2")

    @property
    def width(self) -> int:
        return len(self.pairs)

    def is_topless(self) -> bool:
        return not any(off.is_top or on.is_top for off, on in self.pairs)


def _check_tier(vec: Sequence[float], width: int) -> tuple[float, ...]:
    v = tuple(float(x) for x in vec)
    if len(v) != width:
        raise InputError(f"tier has width {len(v)}, expected {width}")
    ones = sum(1 for x in v if x == 1.0)
    if ones != 1 or any(x not in (0.0, 1.0) for x in v):
        raise InputError(f"malformed one-hot tier: {v}")
    return v


def oh_abstract(tiers: Iterable[Sequence[float]], width: int) -> OneHotValue:
    """Exact abstraction of a set of legal one-hot vectors.

    Component i collects the values seen at position i split by whether the
    position was off (0) or on (1); each side abstracts through CP.  The
    result concretizes back to exactly the input set and is always topless.
    """
    vecs = [_check_tier(v, width) for v in tiers]
    pairs = []
    for i in range(width):
        off = cp_abstract(v[i] for v in vecs if v[i] == 0.0)
        on = cp_abstract(v[i] for v in vecs if v[i] == 1.0)
        pairs.append((off, on))
    return OneHotValue(tuple(pairs))


def oh_concretize(a: OneHotValue) -> frozenset[tuple[float, ...]]:
    """Union over activation positions of the induced concrete vectors.

    Requires a topless value; a top component denotes an unbounded set that
    cannot be enumerated.
    """
    if not a.is_topless():
        raise InputError("cannot concretize a one-hot value with top components")
    out = set()
    k = a.width
    for i in range(k):
        _, on = a.pairs[i]
        if on.is_bottom:
            continue
        if any(a.pairs[j][0].is_bottom for j in range(k) if j != i):
            continue
        vec = tuple(
            on.value if j == i else a.pairs[j][0].value for j in range(k)
        )
        out.add(vec)
    return frozenset(out)


def oh_map(f: Callable[[float], float], a: OneHotValue) -> OneHotValue:
    """Componentwise CP transfer of f.

    Sound for any a; exact (and composable without precision loss) whenever
    a is topless.
    """
    return OneHotValue(
        tuple((cp_apply(f, off), cp_apply(f, on)) for off, on in a.pairs)
    )
