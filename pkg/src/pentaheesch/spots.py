"""Corner concentrations: which corner multisets fill 360 degrees.

A spot is a multiset of corners whose angles sum to a full turn within
SPOT_TOL degrees.  Classification asks whether the wedges admit a
cyclic arrangement in which every adjacent pair shares a full edge:
each corner contributes its two flank edges, reflection swaps them,
and adjacent flanks must lie in the same length class.  The rule is
purely local; it does not certify that the arrangement extends to a
tiling, only that no T-junction is forced at the point itself.

Sums of 180 degrees are enumerated separately for the collinear
placement model; they are not classified.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import catalog, solver
from .catalog import EDGE_NAMES, LETTERS

SPOT_TOL = 1e-7   # degrees


@dataclass(frozen=True)
class Spot:
    counts: tuple          # multiplicity per corner, order A..E
    sum_deg: float
    kind: str              # "EEC" or "NEEC"
    witness: Optional[tuple]   # CCW cycle of (letter, reflected), EEC only

    @property
    def label(self) -> str:
        return catalog.combo_str({L: k for L, k in zip(LETTERS, self.counts)})

    def witness_str(self) -> str:
        if not self.witness:
            return ""
        return ",".join(L + ("'" if r else "") for L, r in self.witness)


@dataclass(frozen=True)
class StraightSpot:
    counts: tuple
    sum_deg: float

    @property
    def label(self) -> str:
        return catalog.combo_str({L: k for L, k in zip(LETTERS, self.counts)})


def counts_tuple(combo: dict) -> tuple:
    return tuple(combo.get(L, 0) for L in LETTERS)


def _sum_combinations(angles_deg: Sequence[float], target: float,
                      max_corners: int, tol: float) -> list[tuple]:
    """All multiplicity vectors with sum(k_i * angle_i) = target +- tol."""
    out = []
    counts = [0] * 5

    def rec(i, total, used):
        if abs(total - target) <= tol:
            out.append(tuple(counts))
            # angles exceed tol, so no extension of an exact hit also hits
        if i == 5 or used == max_corners or total >= target + tol:
            return
        # skip letter i entirely
        rec(i + 1, total, used)
        t, u = total, used
        while True:
            t += angles_deg[i]
            u += 1
            if t > target + tol or u > max_corners:
                break
            counts[i] += 1
            rec(i + 1, t, u)
        counts[i] = 0

    rec(0, 0.0, 0)
    return sorted(set(out), reverse=True)


def default_max_corners(p: solver.Pentagon) -> int:
    return math.ceil(360.0 / p.min_angle_deg())


def enumerate_spots(p: solver.Pentagon, max_corners: Optional[int] = None,
                    tol: float = SPOT_TOL) -> list[Spot]:
    """Full-turn spots in canonical order (descending multiplicity
    vector), each classified EEC or NEEC."""
    if max_corners is None:
        max_corners = default_max_corners(p)
    spots = []
    for counts in _sum_combinations(p.angles_deg, 360.0, max_corners, tol):
        kind, witness = classify_spot(p, counts)
        spots.append(Spot(counts=counts, sum_deg=float(
            sum(k * a for k, a in zip(counts, p.angles_deg))),
            kind=kind, witness=witness))
    return spots


def enumerate_straight_spots(p: solver.Pentagon,
                             max_corners: Optional[int] = None,
                             tol: float = SPOT_TOL) -> list[StraightSpot]:
    """Half-turn corner sums, used by the collinear placement model."""
    if max_corners is None:
        max_corners = default_max_corners(p)
    return [StraightSpot(counts=c, sum_deg=float(
        sum(k * a for k, a in zip(c, p.angles_deg))))
        for c in _sum_combinations(p.angles_deg, 180.0, max_corners, tol)]


def _flank_classes(spec: catalog.Category) -> list[tuple]:
    """Per corner: (leading, trailing) flank edge-class indices for an
    unreflected wedge; reflection swaps the pair.  Leading is the flank
    a CCW sweep through the wedge meets first: edge (i+1) % 5 toward the
    next vertex.  Trailing is edge i toward the previous vertex."""
    out = []
    for i in range(5):
        e_prev, e_next = catalog.corner_flank_edges(i)
        out.append((spec.edge_class_index(EDGE_NAMES[e_next]),
                    spec.edge_class_index(EDGE_NAMES[e_prev])))
    return out


def _wedge(flanks, letter_idx: int, reflected: bool) -> tuple:
    lead, trail = flanks[letter_idx]
    return (trail, lead) if reflected else (lead, trail)


def _eec_witness(flanks, counts) -> Optional[tuple]:
    """Search for a CCW wedge cycle whose adjacent flanks match in
    length class.  Returns ((letter, reflected), ...) or None."""
    total = sum(counts)
    first_letter = next(i for i in range(5) if counts[i] > 0)
    remaining = list(counts)
    dead = set()   # (remaining, prev_trail, first_lead) with no completion

    def rec(seq, first_lead, prev_trail):
        if len(seq) == total:
            return seq if prev_trail == first_lead else None
        key = (tuple(remaining), prev_trail, first_lead)
        if key in dead:
            return None
        for i in range(5):
            if remaining[i] == 0:
                continue
            for refl in (False, True):
                lead, trail = _wedge(flanks, i, refl)
                if lead != prev_trail:
                    continue
                remaining[i] -= 1
                got = rec(seq + [(LETTERS[i], refl)], first_lead, trail)
                remaining[i] += 1
                if got:
                    return got
        dead.add(key)
        return None

    for refl in (False, True):
        lead, trail = _wedge(flanks, first_letter, refl)
        remaining[first_letter] -= 1
        got = rec([(LETTERS[first_letter], refl)], lead, trail)
        remaining[first_letter] += 1
        if got:
            return tuple(got)
    return None


def classify_spot(p: solver.Pentagon, spot) -> tuple:
    """Returns (kind, witness): "EEC" with a wedge cycle, or ("NEEC",
    None) when no edge-to-edge arrangement exists."""
    counts = spot.counts if isinstance(spot, Spot) else counts_tuple(
        spot if isinstance(spot, dict) else
        {L: k for L, k in zip(LETTERS, spot)})
    spec = catalog.get_category(p.category, p.params, unchecked=True)
    witness = _eec_witness(_flank_classes(spec), counts)
    return ("EEC", witness) if witness else ("NEEC", None)


def arrangement_realizable(p: solver.Pentagon, arrangement: str) -> bool:
    """Can the printed corner cycle be realized edge-to-edge?  The
    string is taken as a cyclic sequence, orientation unknown, so all
    rotations of both readings are tried; chirality per wedge is free."""
    spec = catalog.get_category(p.category, p.params, unchecked=True)
    flanks = _flank_classes(spec)
    letters = [LETTERS.index(ch) for ch in arrangement]
    seqs = []
    for base in (letters, letters[::-1]):
        for r in range(len(base)):
            seqs.append(base[r:] + base[:r])

    def chir_ok(seq):
        def rec(j, first_lead, prev_trail):
            if j == len(seq):
                return prev_trail == first_lead
            for refl in (False, True):
                lead, trail = _wedge(flanks, seq[j], refl)
                if lead == prev_trail and rec(j + 1, first_lead, trail):
                    return True
            return False
        for refl in (False, True):
            lead, trail = _wedge(flanks, seq[0], refl)
            if rec(1, lead, trail):
                return True
        return False

    return any(chir_ok(s) for s in seqs)


def angle_combination_feasible(angles_deg: Sequence[float], gap_deg: float,
                               tol: float = 1e-6) -> bool:
    """Is the gap a nonnegative integer combination of the corner
    angles within tol degrees?  Zero counts as feasible (sealed)."""
    if abs(gap_deg) <= tol:
        return True
    if gap_deg < -tol:
        return False

    angles = sorted(angles_deg)

    def rec(i, rest):
        if abs(rest) <= tol:
            return True
        if i == 5 or rest < -tol:
            return False
        if rec(i + 1, rest):
            return True
        r = rest
        while r > -tol:
            r -= angles[i]
            if abs(r) <= tol:
                return True
            if r > tol and rec(i + 1, r):
                return True
        return False

    return rec(0, gap_deg)


class AchievableSums:
    """Precomputed nonnegative integer combinations of the corner
    angles up to a limit; answers gap-feasibility queries by bisection.
    A gap no combination can fill is dead: no further tile can ever
    seal the vertex."""

    def __init__(self, angles_deg: Sequence[float], limit: float = 360.0,
                 tol: float = 1e-6):
        self.tol = tol
        vals = {0.0}
        for a in sorted(angles_deg, reverse=True):
            added = set()
            for v in vals:
                t = v + a
                while t <= limit + tol:
                    added.add(t)
                    t += a
            vals |= added
        self.sums = sorted(vals)

    def feasible(self, gap_deg: float) -> bool:
        i = bisect.bisect_left(self.sums, gap_deg - self.tol)
        return i < len(self.sums) and self.sums[i] <= gap_deg + self.tol


def verify_remarks(cat_id: int, params: Optional[dict] = None) -> dict:
    """Check every recorded spot label against the enumeration and the
    classifier.  A recorded spot that fails to sum to 360 or whose kind
    disagrees with the classifier lands in "contradicting"; enumerated
    spots nobody recorded land in "missing_from_remarks"."""
    spec = catalog.get_category(cat_id, params)
    pent, _ = solver.solve(spec)
    spots = enumerate_spots(pent)
    by_counts = {s.counts: s for s in spots}
    matched, contradicting = [], []
    claimed = set()
    for kind, labels in (("EEC", spec.eec_spots), ("NEEC", spec.neec_spots)):
        for label in labels:
            counts = counts_tuple(catalog.parse_combo(label))
            claimed.add(counts)
            got = by_counts.get(counts)
            if got is None:
                s = float(sum(k * a for k, a in zip(counts, pent.angles_deg)))
                contradicting.append({
                    "label": label, "recorded": kind,
                    "problem": f"sums to {s:.6f}, not 360"})
            elif got.kind != kind:
                contradicting.append({
                    "label": label, "recorded": kind,
                    "problem": f"classifier says {got.kind}"})
            else:
                matched.append({"label": label, "kind": kind,
                                "witness": got.witness_str()})
    extra = [s.label for s in spots if s.counts not in claimed]
    return {
        "category": cat_id,
        "params": dict(spec.params),
        "matched": matched,
        "contradicting": contradicting,
        "missing_from_remarks": extra,
        "ok": not contradicting,
    }


def spots_table(p: solver.Pentagon, max_corners: Optional[int] = None) -> list[dict]:
    """Rows for CSV/JSON output: multiset, sum, class, witness cycle."""
    return [{"multiset": s.label,
             "sum_deg": round(s.sum_deg, 7),
             "class": s.kind,
             "witness": s.witness_str()} for s in enumerate_spots(p, max_corners)]


def brute_force_spots(p: solver.Pentagon, max_corners: Optional[int] = None,
                      tol: float = SPOT_TOL) -> set:
    """Independent oracle: dumb nested loops over multiplicities."""
    if max_corners is None:
        max_corners = default_max_corners(p)
    a = p.angles_deg
    hits = set()
    ka_max = int(360.0 // a[0]) + 2
    kb_max = int(360.0 // a[1]) + 2
    kc_max = int(360.0 // a[2]) + 2
    kd_max = int(360.0 // a[3]) + 2
    ke_max = int(360.0 // a[4]) + 2
    for ka in range(ka_max):
        for kb in range(kb_max):
            for kc in range(kc_max):
                for kd in range(kd_max):
                    for ke in range(ke_max):
                        if ka + kb + kc + kd + ke > max_corners:
                            continue
                        s = (ka * a[0] + kb * a[1] + kc * a[2]
                             + kd * a[3] + ke * a[4])
                        if abs(s - 360.0) <= tol:
                            hits.add((ka, kb, kc, kd, ke))
    return hits
