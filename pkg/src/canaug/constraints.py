"""Predicates on codes, tagged by the operations under which they are inherited.

Column-mode parents are punctured codes and row-mode parents are shortened
codes, so a predicate is enforced at every step of a mode exactly when it is
inherited by that mode's parent operation.  Predicates that are only
inherited with a relaxed threshold carry that relaxation; everything else
is checked at the final length only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .code import LinearCode, dual_distance_at_least, is_divisible, is_self_orthogonal

log = logging.getLogger(__name__)

PUNCTURE = "puncture-hereditary"
SHORTEN = "shorten-hereditary"
FINAL = "final-only"
MODE_TAG = {"column": PUNCTURE, "row": SHORTEN}
SO_FORMS = ("none", "euclidean", "hermitian")


class ValidationError(ValueError):
    """A run configuration that cannot be executed."""


@dataclass(frozen=True)
class Predicate:
    name: str
    test: Callable[[LinearCode], bool]
    tags: frozenset
    # weaker test that intermediate codes of either mode must satisfy
    relaxed: Callable[[LinearCode], bool] | None = None

    def applies_at_step(self, mode: str) -> bool:
        return MODE_TAG[mode] in self.tags or self.relaxed is not None

    def step_test(self, mode: str) -> Callable[[LinearCode], bool] | None:
        if MODE_TAG[mode] in self.tags:
            return self.test
        return self.relaxed


def distance_schedule(n: int, k: int, d: int, i: int) -> int:
    """Minimum distance required of the length-(k+i) codes in a column run."""
    if not 0 <= i <= n - k:
        raise ValueError(f"step {i} outside 0..{n - k}")
    return max(1, d - (n - k) + i)


def dual_schedule(k: int, d_dual: int, s: int) -> int:
    """Dual distance required of the dimension-s codes in a row run."""
    if not 1 <= s <= k:
        raise ValueError(f"dimension {s} outside 1..{k}")
    return max(1, d_dual - (k - s))


def implied_self_orthogonality(q: int, divisor: int | None) -> str | None:
    """Form for which every Δ-divisible code is self-orthogonal, if any."""
    if not divisor:
        return None
    if q == 2 and divisor % 4 == 0:
        return "euclidean"
    if q == 3 and divisor % 3 == 0:
        return "euclidean"
    if q == 4 and divisor % 2 == 0:
        return "hermitian"
    return None


def _min_distance_at_least(t: int) -> Callable[[LinearCode], bool]:
    return lambda C: C.k == 0 or C.min_distance >= t


@dataclass(frozen=True)
class ConstraintSet:
    q: int
    n: int
    k: int
    d: int = 1
    d_dual: int = 1
    so: str = "none"
    divisor: int | None = None
    predicates: tuple[Predicate, ...] = ()

    @property
    def d_eff(self) -> int:
        """Distance target including the bound every divisible code meets."""
        return max(self.d, self.divisor or 1)

    @property
    def so_form(self) -> str | None:
        """Self-orthogonality every output code has, requested or implied."""
        if self.so != "none":
            return self.so
        return implied_self_orthogonality(self.q, self.divisor)

    def final_only(self, mode: str) -> list[str]:
        return [p.name for p in self.predicates if not p.applies_at_step(mode)]

    def check_step(self, C: LinearCode, mode: str, skip=()) -> bool:
        for p in self.predicates:
            if p.name in skip:
                continue
            test = p.step_test(mode)
            if test is not None and not test(C):
                return False
        return True

    def check_final(self, C: LinearCode, skip=()) -> bool:
        return all(p.test(C) for p in self.predicates if p.name not in skip)

    def failures(self, C: LinearCode) -> list[str]:
        return [p.name for p in self.predicates if not p.test(C)]


def build_constraints(q: int, n: int, k: int, d: int = 1, d_dual: int = 1,
                      so: str = "none", divisor: int | None = None) -> ConstraintSet:
    if q not in (2, 3, 4):
        raise ValidationError(f"unsupported field order {q}")
    if not 0 <= k <= n:
        raise ValidationError(f"need 0 <= k <= n, got n={n}, k={k}")
    if d < 1:
        raise ValidationError("minimum distance target must be at least 1")
    if d_dual < 1:
        raise ValidationError("dual distance target must be at least 1")
    if so not in SO_FORMS:
        raise ValidationError(f"self-orthogonality must be one of {SO_FORMS}, not {so!r}")
    if so == "hermitian" and q != 4:
        raise ValidationError("hermitian self-orthogonality requires q=4")
    if so == "euclidean" and q == 4:
        raise ValidationError("euclidean self-orthogonality over GF(4) is not preserved by "
                              "scaling coordinates; use --so hermitian")
    if divisor is not None and divisor < 2:
        raise ValidationError("divisor must be at least 2")
    if k and d > n - k + 1:
        raise ValidationError(f"no [{n},{k},{d}] code exists: d exceeds n-k+1={n - k + 1}")

    # nonzero weights of a divisible code are multiples of the divisor
    d_eff = max(d, divisor or 1)
    preds = [
        Predicate("min_distance", _min_distance_at_least(d_eff), frozenset({SHORTEN}),
                  lambda C: C.k == 0 or C.min_distance >= max(1, d_eff - (n - C.n))),
        Predicate("dual_distance", lambda C: dual_distance_at_least(C, d_dual),
                  frozenset({PUNCTURE}),
                  lambda C: dual_distance_at_least(C, max(1, d_dual - (k - C.k)))),
    ]
    if so != "none":
        preds.append(Predicate(f"self_orthogonal_{so}", lambda C: is_self_orthogonal(C, so),
                               frozenset({SHORTEN})))
    if divisor:
        preds.append(Predicate(f"divisible_{divisor}", lambda C: is_divisible(C, divisor),
                               frozenset({SHORTEN})))
    return ConstraintSet(q, n, k, d, d_dual, so, divisor, tuple(preds))


@dataclass
class ValidationReport:
    constraints: ConstraintSet
    warnings: list[str] = dc_field(default_factory=list)


def certify_seed(C: LinearCode, cs: ConstraintSet, mode: str) -> None:
    """Raise unless C is a legitimate intermediate code of a run in ``mode``."""
    if C.q != cs.q:
        raise ValidationError(f"seed over GF({C.q}) in a GF({cs.q}) run")
    if len(C.pivots) != C.k:
        raise ValidationError("seed generator rows are dependent")
    if mode == "column":
        if C.k != cs.k or not cs.k <= C.n <= cs.n:
            raise ValidationError(f"column-mode seed must be [n', {cs.k}] with "
                                  f"{cs.k} <= n' <= {cs.n}; got [{C.n},{C.k}]")
    else:
        if C.n - C.k != cs.n - cs.k or C.k > cs.k:
            raise ValidationError(f"row-mode seed must have redundancy {cs.n - cs.k} and "
                                  f"dimension <= {cs.k}; got [{C.n},{C.k}]")
    if not cs.check_step(C, mode):
        raise ValidationError(f"seed [{C.n},{C.k}] fails the step constraints")


def validate(ctx) -> ValidationReport:
    """Check a run context; SO/divisibility in column mode become final-only."""
    mode = getattr(ctx, "mode", "column")
    if mode not in MODE_TAG:
        raise ValidationError(f"mode must be 'column' or 'row', not {mode!r}")
    q = ctx.field.q if hasattr(ctx, "field") else ctx.q
    cs = build_constraints(q, ctx.n, ctx.k, ctx.d, ctx.d_dual,
                           getattr(ctx, "so", "none") or "none", getattr(ctx, "divisor", None))
    warnings = []
    for name in cs.final_only(mode):
        msg = f"{name} is not inherited by {mode}-mode parents; enforced at final length only"
        log.warning(msg)
        warnings.append(msg)
    for S in getattr(ctx, "seeds", None) or ():
        certify_seed(S, cs, mode)
    return ValidationReport(cs, warnings)
