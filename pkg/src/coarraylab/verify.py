"""Brute-force verification of the closed-form co-array claims.

Each geometry family ships with closed-form expressions for its contiguous
lag range, total usable DOFs, hole layout and small-lag weights.  The
checkers here recompute everything by raw pair enumeration (difference_set /
sum_set) and compare; the closed forms under test are never used to produce
the reference side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .coarray import (
    CoarrayReport,
    coarray_report,
    contiguous_stats,
    difference_set,
    holes,
    sum_difference_coarray,
    sum_set,
    weight_table,
)
from .geometry import (
    AulasParams,
    SensorArray,
    design_aulas,
    design_cotsaulas,
    design_saulas,
    design_tsaulas,
)


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one closed-form-vs-brute-force comparison."""

    check: str
    family: str
    n: int
    claims: dict[str, bool]
    details: dict

    @property
    def passed(self) -> bool:
        return all(self.claims.values())

    def failures(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.claims.items() if not ok)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "family": self.family,
            "n": self.n,
            "passed": self.passed,
            "claims": dict(self.claims),
            "details": {k: _plain(v) for k, v in self.details.items()},
        }


def _plain(value):
    if isinstance(value, np.ndarray):
        return [int(x) for x in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def _interval_covered(lags: np.ndarray, lo: int, hi: int) -> bool:
    present = set(int(x) for x in lags)
    return all(f in present for f in range(lo, hi + 1))


def check_lemma1(n: int) -> LemmaReport:
    """Difference/sum structure of the base augmented ULA.

    Claims: the positive difference set is contiguous up to the aperture with
    a single hole at n1*m; the sum set is contiguous from n1*m - m/2 through
    twice the aperture and supplies the lag n1*m that plugs the difference
    hole; together the sum-difference co-array is hole-free with
    4*n1*m + 2*m - 3 usable DOFs.
    """
    p = AulasParams.for_aulas(n)
    array = design_aulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    dc = difference_set(array)
    sc = sum_set(array)
    sdc = sum_difference_coarray(array)
    udofs, _ = contiguous_stats(sdc)

    top = n1m + half - 1
    expected_dc_pos = np.setdiff1d(
        np.arange(0, top + 1, dtype=np.int64), [n1m], assume_unique=True
    )
    dc_pos = dc[dc >= 0]
    closed_udofs = 4 * n1m + 2 * p.m - 3
    claims = {
        "dc_contiguous_single_hole": bool(np.array_equal(dc_pos, expected_dc_pos)),
        "sc_band_contiguous": _interval_covered(sc, n1m - half, 2 * n1m + p.m - 2),
        "sc_max_is_twice_aperture": int(sc[-1]) == 2 * n1m + p.m - 2,
        "sum_lag_fills_dc_hole": n1m in set(int(x) for x in sc),
        "sdc_hole_free": holes(sdc).size == 0,
        "udofs_matches_closed_form": udofs == closed_udofs,
    }
    details = {
        "udofs_brute": udofs,
        "udofs_closed": closed_udofs,
        "dc_hole": n1m,
        "sc_band": (n1m - half, 2 * n1m + p.m - 2),
    }
    return LemmaReport("lemma1", array.name, n, claims, details)


def check_lemma2(n: int) -> LemmaReport:
    """Same structure for the shifted variant, where the roles invert: now
    the difference set plugs the two holes just above n1*m that the shifted
    sum set leaves behind, and the co-array keeps 4*n1*m + 4*m - 3 DOFs."""
    p = AulasParams.for_saulas(n)
    array = design_saulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    dc = difference_set(array)
    sc = sum_set(array)
    sdc = sum_difference_coarray(array)
    udofs, _ = contiguous_stats(sdc)

    top = n1m + half - 1
    expected_dc_pos = np.setdiff1d(
        np.arange(0, top + 1, dtype=np.int64), [n1m], assume_unique=True
    )
    sc_set = set(int(x) for x in sc)
    dc_set = set(int(x) for x in dc)
    closed_udofs = 4 * n1m + 4 * p.m - 3
    claims = {
        "dc_contiguous_single_hole": bool(
            np.array_equal(dc[dc >= 0], expected_dc_pos)
        ),
        "sc_band_contiguous": _interval_covered(sc, n1m + half, 2 * n1m + 2 * p.m - 2),
        "sc_max_is_twice_aperture": int(sc[-1]) == 2 * n1m + 2 * p.m - 2,
        "sum_lag_fills_dc_hole": n1m in sc_set,
        "dc_fills_sc_holes": (
            {n1m + 1, n1m + 2} <= dc_set and not ({n1m + 1, n1m + 2} & sc_set)
        ),
        "sdc_hole_free": holes(sdc).size == 0,
        "udofs_matches_closed_form": udofs == closed_udofs,
    }
    details = {
        "udofs_brute": udofs,
        "udofs_closed": closed_udofs,
        "dc_hole": n1m,
        "sc_band": (n1m + half, 2 * n1m + 2 * p.m - 2),
    }
    return LemmaReport("lemma2", array.name, n, claims, details)


def check_lemma3(n: int) -> LemmaReport:
    """Transformed-shifted variant: contiguous through 2*n1*m + 2*m - 4 on
    each side (4*n1*m + 4*m - 7 DOFs) and every remaining hole lies strictly
    outside that segment, m - 2 of them in total."""
    p = AulasParams.for_tsaulas(n)
    array = design_tsaulas(n)
    n1m = p.n1 * p.m
    sdc = sum_difference_coarray(array)
    udofs, _ = contiguous_stats(sdc)
    hole_set = holes(sdc)

    l_t1 = 2 * n1m + 2 * p.m - 4
    closed_udofs = 4 * n1m + 4 * p.m - 7
    claims = {
        "contiguous_through_l_t1": (udofs - 1) // 2 == l_t1,
        "udofs_matches_closed_form": udofs == closed_udofs,
        "holes_outside_segment": bool(np.all(np.abs(hole_set) > l_t1)),
        "hole_count_matches": hole_set.size == p.m - 2,
        "span_matches": int(sdc[-1]) == 2 * n1m + 3 * p.m - 6,
    }
    details = {
        "udofs_brute": udofs,
        "udofs_closed": closed_udofs,
        "l_t1": l_t1,
        "holes": hole_set,
    }
    return LemmaReport("lemma3", array.name, n, claims, details)


def check_lemma4(n: int) -> LemmaReport:
    """Compressed variant: the sum-difference co-array is hole-free over its
    whole span, 4*n1*m + 6*m - 7 DOFs with n1 = n - m."""
    p = AulasParams.for_cotsaulas(n)
    array = design_cotsaulas(n)
    n1m = p.n1 * p.m
    sdc = sum_difference_coarray(array)
    udofs, _ = contiguous_stats(sdc)
    hole_set = holes(sdc)

    closed_udofs = 4 * n1m + 6 * p.m - 7
    span = 2 * n1m + 3 * p.m - 4
    claims = {
        "sdc_hole_free": hole_set.size == 0,
        "udofs_matches_closed_form": udofs == closed_udofs,
        "span_matches": int(sdc[-1]) == span and udofs == 2 * span + 1,
    }
    details = {"udofs_brute": udofs, "udofs_closed": closed_udofs, "span": span}
    return LemmaReport("lemma4", array.name, n, claims, details)


_PARAM_BUILDERS = {
    "aulas": AulasParams.for_aulas,
    "saulas": AulasParams.for_saulas,
    "tsaulas": AulasParams.for_tsaulas,
    "cotsaulas": AulasParams.for_cotsaulas,
}


def closed_form_weights(family: str, n: int) -> dict[int, int]:
    """Predicted pair counts at lags 1..3 for each generated family."""
    family = family.lower()
    if family not in _PARAM_BUILDERS:
        raise ValueError(f"no closed-form weights for family {family!r}")
    m = _PARAM_BUILDERS[family](n).m
    if family in ("aulas", "saulas"):
        return {1: m - 3, 2: m - 4, 3: (m - 5 if m > 6 else m // 2)}
    if family == "tsaulas":
        return {1: 0, 2: m - 3, 3: 1}
    return {1: 1, 2: m - 3, 3: 2}


_DESIGNERS = {
    "aulas": design_aulas,
    "saulas": design_saulas,
    "tsaulas": design_tsaulas,
    "cotsaulas": design_cotsaulas,
}


def check_weights(family: str, n: int) -> LemmaReport:
    """Compare closed-form w(1..3) against direct pair counting."""
    predicted = closed_form_weights(family, n)
    array = _DESIGNERS[family.lower()](n)
    counted = weight_table(array, (1, 2, 3))
    claims = {f"w{f}_matches": counted[f] == predicted[f] for f in (1, 2, 3)}
    details = {"counted": counted, "closed_form": predicted}
    return LemmaReport("weights", array.name, n, claims, details)


LEMMA_RANGES: dict[str, tuple[int, int]] = {
    "lemma1": (9, 64),
    "lemma2": (9, 64),
    "lemma3": (5, 64),
    "lemma4": (9, 64),
}

_CHECKERS = {
    "lemma1": check_lemma1,
    "lemma2": check_lemma2,
    "lemma3": check_lemma3,
    "lemma4": check_lemma4,
}


def run_lemma_sweep(
    check: str, n_values: Iterable[int] | None = None
) -> list[LemmaReport]:
    checker = _CHECKERS[check]
    if n_values is None:
        lo, hi = LEMMA_RANGES[check]
        n_values = range(lo, hi + 1)
    return [checker(n) for n in n_values]


def run_all(n_max: int = 64) -> list[LemmaReport]:
    """Every lemma at every admissible sensor count up to n_max, plus the
    closed-form weight checks."""
    reports: list[LemmaReport] = []
    for check, (lo, hi) in LEMMA_RANGES.items():
        reports.extend(run_lemma_sweep(check, range(lo, min(hi, n_max) + 1)))
    for family in _DESIGNERS:
        lo = 5 if family == "tsaulas" else 9
        for n in range(lo, n_max + 1):
            reports.append(check_weights(family, n))
    return reports


def shift_study(n: int, shift: int) -> CoarrayReport:
    """Co-array consequences of sliding the whole base geometry by ``shift``
    grid units (keeping every inter-subarray offset fixed): the difference
    set never moves, but the sum set translates by 2*shift, so the splice
    between the two survives only for particular shifts.
    """
    array = design_aulas(n).translated(int(shift), name=f"AULAs+{int(shift)}")
    return coarray_report(array)
