"""Finite checks of congruences, internal congruences and dissections.

Every check scans a finite range and says so in its report; none of them
prove anything about the infinite tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .expr import EtaExpr, evaluate, parse_expr
from .eta import EtaQuotient, eta_quotient
from .oracle import BUILTINS, ConstraintSpec, counts_series
from .report import Timer, VerificationReport, compare_series
from .series import Series, component, reduce_mod

DEFAULT_MAX_ORDER = 20000
ORACLE_CROSSCHECK = 200

# Generating functions of the builtin partition families as eta quotients.
GENERATING_FUNCTIONS = {
    "partitions": "1/f1",
    "overpartitions": "f2/f1^2",
    "pond": "f4*f6^2/(f2^2*f3*f12)",
    "pend": "f2*f12/(f1*f4*f6)",
    "pod": "f2/(f1*f4)",
    "ped": "f4/f1",
    "mult4-repeat": "f4*f24/(f1*f8*f12)",
}

Source = Union[str, EtaExpr, ConstraintSpec]
Expander = Callable[[EtaExpr, int, "int | None"], Series]


class BudgetExceeded(ValueError):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"expansion-order budget exceeded: need order {required}, "
            f"budget is {budget} (raise it with --max-order)")


@dataclass(frozen=True)
class CongruenceClaim:
    """``a(A*n + B) == 0 (mod M)`` for every ``n >= 0`` with ``A*n + B >= 0``."""

    source: Source
    A: int
    B: int
    M: int

    def __post_init__(self):
        if self.A < 1 or self.M < 2:
            raise ValueError(f"need A >= 1 and M >= 2, got A={self.A}, M={self.M}")

    def __str__(self):
        return f"{source_name(self.source)}({self.A}n+{self.B}) == 0 (mod {self.M})"


@dataclass(frozen=True)
class InternalClaim:
    """``a(A*n + B) == a(C*n + D) (mod M)``."""

    source: Source
    A: int
    B: int
    C: int
    D: int
    M: int

    def __post_init__(self):
        if self.A < 1 or self.C < 1 or self.M < 2:
            raise ValueError("need A >= 1, C >= 1 and M >= 2")

    def __str__(self):
        name = source_name(self.source)
        return (f"{name}({self.A}n+{self.B}) == {name}({self.C}n+{self.D}) "
                f"(mod {self.M})")


FAMILIES = {
    # name: (series, numerator multiplier, numerator offset)
    "pond-family": ("pond", 23, 1),
    "pend-family": ("pend", 17, -1),
}


@dataclass(frozen=True)
class FamilyClaim:
    family: str
    alpha: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")


def source_name(source: Source) -> str:
    return source if isinstance(source, str) else f"[{source}]"


def source_series(source: Source, order: int, modulus: int | None = None,
                  expand: Expander = evaluate) -> Series:
    """Coefficients of ``source`` up to ``order``, optionally reduced.

    Builtin names go through their eta-quotient generating function, and the
    first ``ORACLE_CROSSCHECK + 1`` coefficients are compared against the
    combinatorial counts.
    """
    if isinstance(source, ConstraintSpec):
        s = counts_series(source, order)
        return s if modulus is None else reduce_mod(s, modulus)
    if isinstance(source, str):
        if source not in GENERATING_FUNCTIONS:
            raise KeyError(f"unknown series {source!r}; known: "
                           f"{', '.join(GENERATING_FUNCTIONS)}")
        s = expand(parse_expr(GENERATING_FUNCTIONS[source]), order, modulus)
        check = min(order, ORACLE_CROSSCHECK + 1)
        oracle = counts_series(BUILTINS[source], check)
        if modulus is not None:
            oracle = reduce_mod(oracle, modulus)
        if s.truncate(check) != oracle:
            raise AssertionError(
                f"{source}: eta-quotient expansion disagrees with the "
                "partition oracle")
        return s
    return expand(source, order, modulus)


def _scan_start(A: int, B: int) -> int:
    return max(0, -(B // A)) if B < 0 else 0


def _required_order(A: int, B: int, limit: int) -> int:
    return A * limit + B + 1


def _check_budget(required: int, max_order: int):
    if required > max_order:
        raise BudgetExceeded(required, max_order)


def verify_congruence(c: CongruenceClaim, n_limit: int,
                      max_order: int = DEFAULT_MAX_ORDER,
                      expand: Expander = evaluate,
                      label: str = "") -> VerificationReport:
    report = VerificationReport(
        label=label or str(c), kind="congruence",
        params={"series": source_name(c.source), "A": c.A, "B": c.B,
                "M": c.M, "limit": n_limit},
        modulus=c.M)
    with Timer() as timer:
        try:
            if n_limit < 1:
                raise ValueError(f"limit must be >= 1, got {n_limit}")
            order = _required_order(c.A, c.B, n_limit)
            report.order = order
            _check_budget(order, max_order)
            coeffs = source_series(c.source, order, c.M, expand)
            start = _scan_start(c.A, c.B)
            for n in range(start, n_limit + 1):
                value = coeffs[c.A * n + c.B]
                if value:
                    report.outcome = "fail"
                    report.witness = n
                    report.witness_value = value
                    break
            else:
                report.message = f"verified for {start} <= n <= {n_limit}"
        except (ValueError, KeyError, AssertionError) as exc:
            report.outcome = "error"
            report.message = str(exc)
    report.elapsed_ms = timer.ms
    return report


def verify_internal(c: InternalClaim, n_limit: int,
                    max_order: int = DEFAULT_MAX_ORDER,
                    expand: Expander = evaluate,
                    label: str = "") -> VerificationReport:
    """Check the difference of the two progressions vanishes mod ``M``.

    On failure ``witness_value`` and ``witness_other`` hold the two residues.
    """
    report = VerificationReport(
        label=label or str(c), kind="internal",
        params={"series": source_name(c.source), "A": c.A, "B": c.B,
                "C": c.C, "D": c.D, "M": c.M, "limit": n_limit},
        modulus=c.M)
    with Timer() as timer:
        try:
            if n_limit < 1:
                raise ValueError(f"limit must be >= 1, got {n_limit}")
            order = max(_required_order(c.A, c.B, n_limit),
                        _required_order(c.C, c.D, n_limit))
            report.order = order
            _check_budget(order, max_order)
            coeffs = source_series(c.source, order, c.M, expand)
            start = max(_scan_start(c.A, c.B), _scan_start(c.C, c.D))
            for n in range(start, n_limit + 1):
                left, right = coeffs[c.A * n + c.B], coeffs[c.C * n + c.D]
                if left != right:
                    report.outcome = "fail"
                    report.witness = n
                    report.witness_value = left
                    report.witness_other = right
                    break
            else:
                report.message = f"verified for {start} <= n <= {n_limit}"
        except (ValueError, KeyError, AssertionError) as exc:
            report.outcome = "error"
            report.message = str(exc)
    report.elapsed_ms = timer.ms
    return report


def family_progression(f: FamilyClaim) -> tuple[int, int]:
    """``(3^(2a+1), (c*3^(2a) + d)/8)`` for the family's constants ``c, d``."""
    _, mult, offset = FAMILIES[f.family]
    numerator = mult * 3 ** (2 * f.alpha) + offset
    if numerator % 8:
        raise ArithmeticError(
            f"{f.family}: offset {numerator}/8 is not an integer at "
            f"alpha={f.alpha}")
    return 3 ** (2 * f.alpha + 1), numerator // 8


def induction_step_offset(f: FamilyClaim) -> int:
    """Integer ``k`` with ``B(alpha) = 3*(k + 3^(2a)*n) + r`` as used to step
    from ``alpha`` to ``alpha + 1`` via the internal congruence.

    ``r`` is 2 for the pond family and 1 for the pend family.
    """
    numerators = {"pond-family": (23, -5), "pend-family": (17, -3)}
    mult, offset = numerators[f.family]
    value = mult * 3 ** (2 * f.alpha - 1) + offset
    if value % 8:
        raise ArithmeticError(
            f"{f.family}: induction offset {value}/8 is not an integer at "
            f"alpha={f.alpha}")
    return value // 8


def verify_family(f: FamilyClaim, n_limit: int,
                  max_order: int = DEFAULT_MAX_ORDER,
                  expand: Expander = evaluate) -> VerificationReport:
    A, B = family_progression(f)
    series = FAMILIES[f.family][0]
    report = verify_congruence(
        CongruenceClaim(series, A, B, 3), n_limit, max_order, expand,
        label=f"{f.family} alpha={f.alpha}: {series}({A}n+{B}) == 0 (mod 3)")
    report.kind = "family"
    report.params = {"family": f.family, "alpha": f.alpha, **report.params}
    return report


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def verify_binomial(p: int, j: int, k: int, m: int, order: int,
                    reduce: bool = True) -> VerificationReport:
    """Check ``f_m^(p^j*k) == f_(pm)^(p^(j-1)*k) (mod p^j)`` to ``order``.

    With ``reduce=False`` the two sides are compared as exact series.
    """
    modulus = p ** j if reduce else None
    report = VerificationReport(
        label=f"f{m}^{p ** j * k} == f{p * m}^{p ** (j - 1) * k} (mod {p ** j})"
        if j >= 1 else "binomial", kind="binomial",
        params={"p": p, "j": j, "k": k, "m": m, "reduced": reduce},
        order=order, modulus=modulus)
    with Timer() as timer:
        if not is_prime(p):
            report.outcome = "error"
            report.message = f"p={p} is not prime"
        elif min(j, k, m) < 1:
            report.outcome = "error"
            report.message = "j, k and m must all be >= 1"
        else:
            lhs = eta_quotient(EtaQuotient.of({m: p ** j * k}), order, modulus)
            rhs = eta_quotient(EtaQuotient.of({p * m: p ** (j - 1) * k}),
                               order, modulus)
            compare_series(report, lhs, rhs)
    report.elapsed_ms = timer.ms
    return report


def dissect_and_match(gf: EtaExpr, m: int, r: int, claimed: EtaExpr | None,
                      order: int, modulus: int | None = None,
                      label: str = "",
                      expand: Expander = evaluate) -> VerificationReport:
    """Compare component ``r`` of the ``m``-dissection of ``gf`` with ``claimed``.

    ``claimed`` is in the reindexed variable, so ``gf`` is expanded to
    ``m * order`` coefficients and the component has ``order`` of them.
    ``claimed=None`` asserts that the component vanishes.
    """
    text = f"{gf} @ {m}:{r} = {'0' if claimed is None else claimed}"
    if modulus is not None:
        text += f" (mod {modulus})"
    report = VerificationReport(
        label=label or text, kind="dissection",
        params={"gf": str(gf), "m": m, "r": r,
                "claimed": "0" if claimed is None else str(claimed)},
        order=order, modulus=modulus)
    with Timer() as timer:
        try:
            if order < 1:
                raise ValueError(f"order must be >= 1, got {order}")
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for m={m}")
            part = component(expand(gf, m * order, modulus), m, r)
            if claimed is None:
                rhs = Series.zero(order, modulus)
            else:
                rhs = expand(claimed, order, modulus)
            compare_series(report, part, rhs)
        except ValueError as exc:
            report.outcome = "error"
            report.message = str(exc)
    report.elapsed_ms = timer.ms
    return report
