"""Watkins-style verdicts: rank bounds against the omega(N) - 2 surrogate
for the 2-adic valuation of the modular degree, plus exact checks against
externally supplied (rank, modular degree) data.

The surrogate chain only ever proves the inequality rank + M <= nu_2(m_E);
absence of a proof is reported as Inconclusive, never as a counterexample.
"""

import csv
from dataclasses import dataclass
from typing import Optional

from . import curves, descent2, families
from .arith import valuation
from .curves import ShortWeierstrass, Z2
from .errors import DatasetFormatError, PreconditionError
from .families import COND_I, COND_II, LARGE_OMEGA, E2Param

PROVEN = "Proven"
INCONCLUSIVE = "Inconclusive"

PROVEN_COND_I = "ProvenCondI"
PROVEN_COND_II = "ProvenCondII"
PROVEN_LARGE_OMEGA = "ProvenLargeOmega"

DATASET_HEADER = ["label", "A", "B", "rank", "modular_degree"]


@dataclass(frozen=True)
class DatasetRecord:
    label: str
    A: int
    B: int
    rank: int
    modular_degree: int


@dataclass(frozen=True)
class ExactCheck:
    rank: int
    modular_degree: int
    verdict: bool


@dataclass(frozen=True)
class WatkinsReport:
    curve: ShortWeierstrass
    family: str
    rank_upper: Optional[int]
    omega_N: int
    surrogate_nu2_lower: Optional[int]
    max_M_proven: Optional[int]
    method_notes: str
    exact_check: Optional[ExactCheck] = None


def surrogate_nu2_lower(E, policy="include-small"):
    """omega(N) - 2, a lower bound for nu_2(m_E) when E(Q)[2] = Z/2Z.

    The hypothesis is checked; full or trivial rational 2-torsion raises
    PreconditionError because the bound's assumption fails.
    """
    shape = curves.two_torsion_shape(E)
    if shape != Z2:
        raise PreconditionError(f"two-torsion shape is {shape}, bound needs Z2")
    omega_n, _ = curves.conductor_support(E, policy)
    return omega_n - 2


def m_watkins_surrogate(param, M, real_place=True, depth_margin=descent2.DEFAULT_DEPTH_MARGIN,
                        policy="include-small"):
    """Proven iff rank_upper(a, b) + M <= omega(N) - 2 on the corresponding curve.

    Never asserts a counterexample: the rank is only bounded above and
    nu_2(m_E) only below, so failure to prove is Inconclusive.
    """
    model, _ = families.e2_curve(param)
    lower = surrogate_nu2_lower(model, policy)
    est = descent2.rank_upper(param, real_place, depth_margin)
    return PROVEN if est.rank_upper + M <= lower else INCONCLUSIVE


def m_watkins_exact(rec, M):
    """rank + M <= nu_2(modular_degree) for an externally supplied record."""
    return rec.rank + M <= valuation(rec.modular_degree, 2)


def twist_watkins(D, nu2_manin=0, single_prime_cond2=True):
    """Verdict for the twist y^2 = x^3 - D^3 of y^2 = x^3 - 1.

    CondI / CondII twists have rank at most 1 and the conjecture holds for
    rank <= 1; large prime support (omega(D) >= 10 + 2 nu2_manin) gives the
    twist-support criterion.  Everything else is Inconclusive.
    """
    _, cls = families.twist_e0(D, nu2_manin, single_prime_cond2)
    return {
        COND_I: PROVEN_COND_I,
        COND_II: PROVEN_COND_II,
        LARGE_OMEGA: PROVEN_LARGE_OMEGA,
    }.get(cls, INCONCLUSIVE)


def report(target, family="e2", policy="include-small", real_place=True,
           depth_margin=descent2.DEFAULT_DEPTH_MARGIN, record=None):
    """Bundle every applicable computation for a curve or parameter pair.

    target may be an E2Param (full descent applies) or a ShortWeierstrass
    (descent applies when a rational 2-torsion point lets it be written as
    y^2 = x^3 + ax^2 + bx).  A DatasetRecord adds the exact verdict.
    """
    notes = []
    if isinstance(target, E2Param):
        param = target
        model, _ = families.e2_curve(param)
    else:
        model = curves.minimize(target)
        ab = curves.e2_param_of(model)
        param = E2Param(*ab) if ab is not None else None
        if param is None:
            notes.append("no rational 2-torsion: descent via 2-isogeny inapplicable")
    omega_n, _ = curves.conductor_support(model, policy)
    shape = curves.two_torsion_shape(model)
    if shape == Z2:
        surrogate = omega_n - 2
    else:
        surrogate = None
        notes.append("full 2-torsion" if shape == "Z2xZ2" else "trivial 2-torsion")
    est = descent2.rank_upper(param, real_place, depth_margin) if param else None
    rank_bound = est.rank_upper if est else None
    max_m = None
    if surrogate is not None and rank_bound is not None:
        gap = surrogate - rank_bound
        max_m = gap if gap >= 0 else None
    exact = None
    if record is not None:
        exact = ExactCheck(record.rank, record.modular_degree,
                           m_watkins_exact(record, 0))
    return WatkinsReport(model, family, rank_bound, omega_n, surrogate, max_m,
                         "; ".join(notes), exact)


def report_as_dict(rep):
    """JSON-ready dict with exactly the WatkinsReport field names as keys."""
    return {
        "curve": {"A": rep.curve.A, "B": rep.curve.B},
        "family": rep.family,
        "rank_upper": rep.rank_upper,
        "omega_N": rep.omega_N,
        "surrogate_nu2_lower": rep.surrogate_nu2_lower,
        "max_M_proven": rep.max_M_proven,
        "method_notes": rep.method_notes,
        "exact_check": None if rep.exact_check is None else {
            "rank": rep.exact_check.rank,
            "modular_degree": rep.exact_check.modular_degree,
            "verdict": rep.exact_check.verdict,
        },
    }


def load_dataset(path):
    """Parse a dataset CSV with header exactly label,A,B,rank,modular_degree."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError("empty dataset", line=1)
        if header != DATASET_HEADER:
            raise DatasetFormatError(f"bad header {header!r}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise DatasetFormatError(f"expected 5 fields, got {len(row)}", line=lineno)
            label = row[0]
            try:
                A, B, rank, degree = (int(x) for x in row[1:])
            except ValueError:
                raise DatasetFormatError(f"non-integer field in {row!r}", line=lineno)
            if rank < 0 or degree < 1:
                raise DatasetFormatError("rank must be >= 0 and modular_degree >= 1",
                                         line=lineno)
            records.append(DatasetRecord(label, A, B, rank, degree))
    if not records:
        raise DatasetFormatError("dataset has no records", line=1)
    return records


def verify_record(rec, M=0, policy="include-small", real_place=True,
                  depth_margin=descent2.DEFAULT_DEPTH_MARGIN):
    """All consistency checks for one dataset record.

    surrogate_ok: omega(N) - 2 <= nu_2(m) whenever the curve has shape Z2.
    rank_ok: the descent bound is >= the recorded rank whenever the curve
    has a rational 2-torsion point.  Both default to True when inapplicable.
    """
    E = curves.minimize(ShortWeierstrass(rec.A, rec.B))
    nu2 = valuation(rec.modular_degree, 2)
    shape = curves.two_torsion_shape(E)
    out = {
        "label": rec.label,
        "shape": shape,
        "nu2_modular_degree": nu2,
        "surrogate_nu2_lower": None,
        "surrogate_ok": True,
        "rank_upper": None,
        "rank_ok": True,
        "m_watkins": m_watkins_exact(rec, M),
    }
    if shape == Z2:
        lower = surrogate_nu2_lower(E, policy)
        out["surrogate_nu2_lower"] = lower
        out["surrogate_ok"] = lower <= nu2
    ab = curves.e2_param_of(E)
    if ab is not None:
        est = descent2.rank_upper(E2Param(*ab), real_place, depth_margin)
        out["rank_upper"] = est.rank_upper
        out["rank_ok"] = est.rank_upper >= rec.rank
    out["ok"] = out["surrogate_ok"] and out["rank_ok"]
    return out
