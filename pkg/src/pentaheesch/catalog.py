"""The seventeen pentagon families and their published reference data.

Each family ("category") is defined by a set of vertex concentrations,
linear relations over the interior angles A..E that must equal 360
degrees, together with an equality partition of the edges a..e.  Some
families carry one or two integer parameters (m, n) appearing in the
relation coefficients.

Conventions used across the package:

  corners   A, B, C, D, E are indices 0..4, counterclockwise.
  edges     a=EA, b=AB, c=BC, d=CD, e=DE; edge k joins corners
            (k-1) % 5 and k.  Polygon side i, from vertex i to vertex
            i+1, therefore carries edge index (i+1) % 5.
  spots     a multiset of corners concentrated at a point, written as
            e.g. "2D+A"; coefficients may be parameter expressions like
            "(2n+1)D+2E".

REFERENCE_ROWS records the expected angles to two decimals along with
each row's arrangement strings; the solver must re-derive all of them
independently.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

LETTERS = "ABCDE"
EDGE_NAMES = "abcde"


class UnknownCategory(Exception):
    pass


class ParamOutOfDomain(Exception):
    pass


def side_edge_index(side: int) -> int:
    """Edge index carried by polygon side (vertex side -> side+1)."""
    return (side + 1) % 5


def corner_flank_edges(corner: int) -> tuple[int, int]:
    """(incoming, outgoing) edge indices at a corner: corner i sits
    between edge i and edge (i+1) % 5."""
    return corner % 5, (corner + 1) % 5


_IMPLICIT_MUL = re.compile(r"(?<=[0-9)])(?=[(mn])")


def parse_combo(expr: str, params: Optional[dict] = None) -> dict[str, int]:
    """Parse a spot/relation string into {corner letter: multiplicity}.

    Accepts parameter expressions in the coefficients: "2A+B",
    "(n+1)D+C+E", "mB+nE+A", "2nD+2A".  Zero coefficients drop out.
    """
    params = params or {}
    s = expr.replace("−", "-").replace("×", "").replace("*", "")
    s = s.replace(" ", "")
    terms = []
    depth, start = 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0:
            terms.append(s[start:i])
            start = i + 1
    terms.append(s[start:])
    combo: dict[str, int] = {}
    for term in terms:
        if not term or term[-1] not in LETTERS:
            raise ValueError(f"bad spot term {term!r} in {expr!r}")
        letter, coef = term[-1], term[:-1]
        if not coef:
            k = 1
        else:
            py = _IMPLICIT_MUL.sub("*", coef)
            try:
                k = eval(py, {"__builtins__": {}}, dict(params))  # catalog-internal strings only
            except NameError as exc:
                raise ValueError(f"unresolved parameter in {expr!r}: {exc}") from None
        if k != int(k) or k < 0:
            raise ValueError(f"coefficient {coef!r} = {k} invalid in {expr!r}")
        if k:
            combo[letter] = combo.get(letter, 0) + int(k)
    if not combo:
        raise ValueError(f"empty spot {expr!r}")
    return combo


def combo_str(combo: dict[str, int]) -> str:
    """Canonical rendering: descending multiplicity, then letter."""
    items = sorted(((L, k) for L, k in combo.items() if k > 0),
                   key=lambda kv: (-kv[1], kv[0]))
    return "+".join(f"{k}{L}" if k > 1 else L for L, k in items)


def _eval_guard(guard: str, params: dict) -> bool:
    return bool(eval(guard, {"__builtins__": {}}, dict(params)))


@dataclass(frozen=True)
class SpotRemark:
    guard: str       # predicate over the family parameters, e.g. "n >= 2"
    kind: str        # "EEC" or "NEEC"
    combo: str       # template, e.g. "(2n+1)D+2E"


@dataclass(frozen=True)
class CategorySpec:
    id: int
    relations: tuple[str, ...]
    edge_classes: tuple[tuple[str, ...], ...]   # largest class first
    param_names: tuple[str, ...] = ()
    domain_text: str = "no parameters"
    domain_check: Callable[[dict], bool] = lambda p: True
    remarks: tuple[SpotRemark, ...] = ()
    inf_guard: str = "False"                    # params giving H(T) = infinity
    embedded_types: tuple[str, ...] = ()
    membership_relation: str = ""               # extra relation satisfied at inf_guard
    notes: str = ""


@dataclass(frozen=True)
class Category:
    """A category spec resolved at concrete parameter values."""

    id: int
    params: dict
    relations: tuple[dict[str, int], ...]
    relation_strs: tuple[str, ...]
    edge_classes: tuple[tuple[str, ...], ...]
    eec_spots: tuple[str, ...]
    neec_spots: tuple[str, ...]
    expected_heesch: float
    embedded_types: tuple[str, ...]
    membership_relation: str
    notes: str

    @property
    def normalization_edge(self) -> str:
        return self.edge_classes[0][0]

    def edge_class_index(self, edge: str) -> int:
        for i, cls in enumerate(self.edge_classes):
            if edge in cls:
                return i
        raise ValueError(edge)

    def edge_class_of_side(self, side: int) -> int:
        return self.edge_class_index(EDGE_NAMES[side_edge_index(side)])


def _classes(spec: str) -> tuple[tuple[str, ...], ...]:
    groups = [tuple(g) for g in spec.split("|")]
    groups.sort(key=lambda g: (-len(g), g[0]))
    return tuple(groups)


_SPECS: dict[int, CategorySpec] = {}


def _add(spec: CategorySpec):
    _SPECS[spec.id] = spec


_add(CategorySpec(
    1, ("2A+B", "2B+E", "2D+A", "2C+A+E"), _classes("abce|d"),
    notes="vertex D admits only 2D+A, so the central tile meets its "
          "D-neighbours edge-to-edge; every first corona carries a 2E pocket",
))
_add(CategorySpec(
    2, ("2A+B", "2C+D", "2B+C+E", "2E+B+D"), _classes("abc|de"),
))
_add(CategorySpec(
    3, ("2A+B", "2C+D", "2E+B+D", "(n+1)D+C+E"), _classes("abc|de"),
    param_names=("n",), domain_text="n >= 1",
    domain_check=lambda p: p["n"] >= 1,
    remarks=(
        SpotRemark("n == 1", "EEC", "B+C+E"),
        SpotRemark("n == 1", "EEC", "3D+2E"),
        SpotRemark("n == 1", "NEEC", "2A+2D"),
        SpotRemark("n >= 2", "EEC", "(2n+1)D+2E"),
        SpotRemark("n >= 2", "NEEC", "2nD+2A"),
    ),
    inf_guard="n == 1", embedded_types=("Type 6",),
))
_add(CategorySpec(
    4, ("2A+B", "2D+E", "2C+B+E", "mB+nE+A"), _classes("abce|d"),
    param_names=("m", "n"), domain_text="m >= 0, n >= 1, m + n >= 3",
    domain_check=lambda p: p["m"] >= 0 and p["n"] >= 1 and p["m"] + p["n"] >= 3,
    remarks=(
        SpotRemark("m == 2 and n == 1", "EEC", "3B+2E"),
        SpotRemark("m != 0", "EEC", "(2m-1)B+2nE"),
    ),
    inf_guard="m == 2 and n == 1", embedded_types=("Type 9",),
    membership_relation="2B+E+A",
))
_add(CategorySpec(
    5, ("2A+C", "2D+B", "2E+B+C", "(n+2)B"), _classes("abcd|e"),
    param_names=("n",), domain_text="n in {1, 2, 3}",
    domain_check=lambda p: p["n"] in (1, 2, 3),
    remarks=(
        SpotRemark("n == 1", "NEEC", "2B+D"),
        SpotRemark("n == 1", "NEEC", "3D"),
        SpotRemark("n == 1", "NEEC", "2E+C+D"),
        SpotRemark("n == 3", "NEEC", "3B+D"),
    ),
))
_add(CategorySpec(
    6, ("2A+C", "2D+B", "3B+A", "2E+B+C"), _classes("abcd|e"),
))
_add(CategorySpec(
    7, ("2A+C", "2D+B", "3B+C", "2E+B+C"), _classes("abcd|e"),
    remarks=(
        SpotRemark("True", "NEEC", "2D+E"),
        SpotRemark("True", "NEEC", "2B+C+E"),
        SpotRemark("True", "NEEC", "3E+C"),
    ),
))
_add(CategorySpec(
    8, ("2A+B", "3D", "(n+1)B+C+E"), _classes("abc|de"),
    param_names=("n",), domain_text="n in {1, .., 5}",
    domain_check=lambda p: p["n"] in (1, 2, 3, 4, 5),
    remarks=(SpotRemark("True", "NEEC", "(2n+1)B+D"),),
))
_add(CategorySpec(
    9, ("2A+B", "3D", "2B+A", "2C+2E"), _classes("abc|de"),
    remarks=(
        SpotRemark("True", "EEC", "3A"),
        SpotRemark("True", "EEC", "3B"),
        SpotRemark("True", "EEC", "4C"),
        SpotRemark("True", "EEC", "3C+E"),
        SpotRemark("True", "EEC", "3E+C"),
        SpotRemark("True", "EEC", "4E"),
        SpotRemark("True", "NEEC", "A+B+D"),
        SpotRemark("True", "NEEC", "2A+D"),
        SpotRemark("True", "NEEC", "2D+A"),
        SpotRemark("True", "NEEC", "2B+D"),
        SpotRemark("True", "NEEC", "2D+B"),
    ),
    notes="mirror symmetric about the line through D and the midpoint of b",
))
_add(CategorySpec(
    10, ("2A+B", "3D", "3E+B+C"), _classes("abc|de"),
    remarks=(SpotRemark("True", "EEC", "4E+B+D"),),
))
_add(CategorySpec(
    11, ("2A+B", "3D", "nB+2E+C"), _classes("bcde|a"),
    param_names=("n",), domain_text="n in {1, 2, 3}",
    domain_check=lambda p: p["n"] in (1, 2, 3),
    remarks=(
        SpotRemark("n == 1", "EEC", "3C"),
        SpotRemark("n == 1", "EEC", "2C+D"),
        SpotRemark("n == 1", "EEC", "2D+C"),
        SpotRemark("n == 1", "EEC", "2E+B+D"),
        SpotRemark("True", "EEC", "(2n-1)B+2E+D"),
    ),
    inf_guard="n == 1", embedded_types=("Type 8",),
    membership_relation="2E+B+C",
))
_add(CategorySpec(
    12, ("2A+B", "3E", "nB+2D+C"), _classes("bcd|ae"),
    param_names=("n",), domain_text="n in {1, 2, 3}",
    domain_check=lambda p: p["n"] in (1, 2, 3),
    remarks=(
        SpotRemark("n == 1", "EEC", "A+C+D"),
        SpotRemark("n == 1", "EEC", "A+D+E"),
        SpotRemark("n == 1", "EEC", "3C"),
        SpotRemark("n == 1", "EEC", "2B+A+D"),
        SpotRemark("n == 1", "EEC", "2B+2C"),
        SpotRemark("n == 1", "EEC", "2D+B+E"),
        SpotRemark("n == 1", "EEC", "4D"),
        SpotRemark("n == 1", "EEC", "4B+C"),
        SpotRemark("n == 1", "EEC", "3B+2D"),
        SpotRemark("n == 1", "EEC", "6B"),
        SpotRemark("n == 1", "NEEC", "2C+E"),
        SpotRemark("n == 1", "NEEC", "2B+C+E"),
        SpotRemark("n == 1", "NEEC", "2B+2E"),
        SpotRemark("n == 1", "NEEC", "4B+E"),
        SpotRemark("True", "EEC", "(2n-1)B+2D+E"),
    ),
    inf_guard="n == 1", embedded_types=("Type 1", "Type 5"),
    membership_relation="2D+B+C",
    notes="the n = 1 pentagon is the TH-pentagon",
))
_add(CategorySpec(
    13, ("2A+C", "3B", "5E+D"), _classes("abcd|e"),
))
_add(CategorySpec(
    # 4D+2A is recorded EEC: the cycle D',D,A,D',D,A (two reflected D
    # wedges) concentrates it edge-to-edge, since d shares its length
    # class with a and b here.  The printed NEEC label fails its own
    # definition; see the decisions ledger.
    14, ("2A+C", "3B", "3D+B+E"), _classes("abcd|e"),
    remarks=(SpotRemark("True", "EEC", "4D+2A"),),
))
_add(CategorySpec(
    # The three printed concentrations leave a one-parameter angle
    # family; the 10D spot pins D = 36 and is included as defining.
    15, ("2A+B", "2E+A", "3D+C+E", "10D"), _classes("abc|d|e"),
    remarks=(
        SpotRemark("True", "EEC", "2C+A"),
        SpotRemark("True", "EEC", "10D"),
        SpotRemark("True", "NEEC", "A+C+E"),
        SpotRemark("True", "NEEC", "3A+D"),
        SpotRemark("True", "NEEC", "2B+2D"),
        SpotRemark("True", "NEEC", "3D+A+B"),
        SpotRemark("True", "NEEC", "3D+2C"),
        SpotRemark("True", "NEEC", "3D+2E"),
        SpotRemark("True", "NEEC", "4D+2A"),
        SpotRemark("True", "NEEC", "6D+B"),
        SpotRemark("True", "NEEC", "7D+A"),
    ),
))
_add(CategorySpec(
    16, ("2A+B", "2D+B", "4C", "4E", "(n+1)B+nC"), _classes("bcd|a|e"),
    param_names=("n",), domain_text="n in {1, 2}",
    domain_check=lambda p: p["n"] in (1, 2),
    remarks=(
        SpotRemark("n == 1", "NEEC", "A+B+D"),
        SpotRemark("n == 1", "NEEC", "2B+E"),
        SpotRemark("n == 1", "NEEC", "3C+E"),
        SpotRemark("n == 1", "NEEC", "2C+2E"),
        SpotRemark("n == 1", "NEEC", "3E+C"),
        SpotRemark("n == 2", "EEC", "6B"),
        SpotRemark("n == 2", "NEEC", "A+B+D"),
        SpotRemark("n == 2", "NEEC", "2B+A+C"),
        SpotRemark("n == 2", "NEEC", "2B+A+E"),
        SpotRemark("n == 2", "NEEC", "2B+C+D"),
        SpotRemark("n == 2", "NEEC", "2B+D+E"),
        SpotRemark("n == 2", "NEEC", "3C+E"),
        SpotRemark("n == 2", "NEEC", "2C+2E"),
        SpotRemark("n == 2", "NEEC", "3E+C"),
        SpotRemark("n == 2", "NEEC", "3B+C+E"),
        SpotRemark("n == 2", "NEEC", "3B+2E"),
    ),
))
_add(CategorySpec(
    17, ("2A+B", "2D+B", "3C", "6E", "nC+3B"), _classes("bcd|a|e"),
    param_names=("n",), domain_text="n in {1, 2}",
    domain_check=lambda p: p["n"] in (1, 2),
    remarks=(
        SpotRemark("n == 1", "NEEC", "A+B+D"),
        SpotRemark("n == 1", "NEEC", "2B+A+E"),
        SpotRemark("n == 1", "NEEC", "2B+D+E"),
        SpotRemark("n == 1", "NEEC", "2C+2E"),
        SpotRemark("n == 1", "NEEC", "3B+2E"),
        SpotRemark("n == 1", "NEEC", "4E+C"),
        SpotRemark("n == 2", "EEC", "6B+C"),
        SpotRemark("n == 2", "EEC", "9B"),
        SpotRemark("n == 2", "NEEC", "A+B+D"),
        SpotRemark("n == 2", "NEEC", "2B+A+C"),
        SpotRemark("n == 2", "NEEC", "2B+C+D"),
        SpotRemark("n == 2", "NEEC", "2C+2E"),
        SpotRemark("n == 2", "NEEC", "2B+2E+A"),
        SpotRemark("n == 2", "NEEC", "2B+2E+D"),
        SpotRemark("n == 2", "NEEC", "4E+C"),
        SpotRemark("n == 2", "NEEC", "5B+A"),
        SpotRemark("n == 2", "NEEC", "5B+D"),
        SpotRemark("n == 2", "NEEC", "3B+2E+C"),
        SpotRemark("n == 2", "NEEC", "6B+2E"),
    ),
))

CATEGORY_IDS = tuple(sorted(_SPECS))


def get_category(cat_id: int, params: Optional[dict] = None, *,
                 unchecked: bool = False) -> Category:
    """Resolve a category at concrete parameter values.

    Raises UnknownCategory for ids outside 1..17 and ParamOutOfDomain
    for missing/extra/invalid parameters.  unchecked=True skips only
    the domain predicate (still requires well-formed integers), which
    lets callers probe values that are claimed not to exist.
    """
    if cat_id not in _SPECS:
        raise UnknownCategory(f"category {cat_id}; valid ids are 1..17")
    spec = _SPECS[cat_id]
    params = dict(params or {})
    for name in spec.param_names:
        if name not in params:
            raise ParamOutOfDomain(
                f"category {cat_id} needs parameter {name} ({spec.domain_text})")
        v = params[name]
        if v != int(v):
            raise ParamOutOfDomain(f"parameter {name} must be an integer, got {v!r}")
        params[name] = int(v)
    extra = set(params) - set(spec.param_names)
    if extra:
        raise ParamOutOfDomain(
            f"category {cat_id} takes {spec.param_names or 'no parameters'}, "
            f"got extra {sorted(extra)}")
    if not unchecked and not spec.domain_check(params):
        raise ParamOutOfDomain(
            f"category {cat_id} parameters {params} outside domain: {spec.domain_text}")

    relations = tuple(parse_combo(r, params) for r in spec.relations)
    eec, neec = [], []
    for rem in spec.remarks:
        if _eval_guard(rem.guard, params):
            s = combo_str(parse_combo(rem.combo, params))
            (eec if rem.kind == "EEC" else neec).append(s)
    is_inf = _eval_guard(spec.inf_guard, params)
    return Category(
        id=cat_id,
        params=params,
        relations=relations,
        relation_strs=tuple(combo_str(r) for r in relations),
        edge_classes=spec.edge_classes,
        eec_spots=tuple(eec),
        neec_spots=tuple(neec),
        expected_heesch=math.inf if is_inf else 1.0,
        embedded_types=spec.embedded_types if is_inf else (),
        membership_relation=spec.membership_relation if is_inf else "",
        notes=spec.notes,
    )


@dataclass(frozen=True)
class ReferenceRow:
    category: int
    params: dict
    angles_deg: tuple[float, float, float, float, float]
    arrangements: Optional[dict[str, str]]   # None on the H = infinity rows
    heesch: float


def _arr(a, b, c, d, e) -> dict[str, str]:
    return {"A": a, "B": b, "C": c, "D": d, "E": e}


_ROWS: tuple[ReferenceRow, ...] = (
    ReferenceRow(1, {}, (113.64, 132.72, 75.90, 123.18, 94.56),
                 _arr("AAB", "BAA", "CEAC", "DDA", "EBB"), 1),
    ReferenceRow(2, {}, (141.33, 77.34, 122.00, 116.00, 83.33),
                 _arr("AAB", "BCEB", "CCD", "DEBE", "EDEB"), 1),
    ReferenceRow(3, {"n": 1}, (141.33, 77.34, 160.67, 38.67, 122.00), None, math.inf),
    ReferenceRow(3, {"n": 2}, (141.33, 77.34, 170.33, 19.33, 131.66),
                 _arr("AAB", "BAA", "CEDDD", "DCC", "EDEB"), 1),
    ReferenceRow(3, {"n": 3}, (141.33, 77.34, 173.56, 12.89, 134.89),
                 _arr("AAB", "BAA", "CEDDDD", "DCC", "EDEB"), 1),
    ReferenceRow(3, {"n": 4}, (141.33, 77.34, 175.17, 9.67, 136.50),
                 _arr("AAB", "BAA", "CEDDDDD", "DCC", "EDEB"), 1),
    ReferenceRow(4, {"m": 0, "n": 3}, (125.86, 108.28, 86.83, 140.98, 78.05),
                 _arr("AEEE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 1, "n": 2}, (137.06, 85.88, 102.79, 145.74, 68.53),
                 _arr("AEEB", "BAA", "CEBC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 2, "n": 1}, (141.33, 77.34, 109.33, 148.00, 64.00),
                 None, math.inf),
    ReferenceRow(4, {"m": 0, "n": 4}, (150.55, 58.90, 124.37, 153.82, 52.36),
                 _arr("AEEEE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 1, "n": 3}, (151.79, 56.42, 126.49, 154.70, 50.60),
                 _arr("AEEBE", "BAA", "CEBC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 2, "n": 2}, (152.78, 54.45, 128.19, 155.42, 49.16),
                 _arr("AEBBE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 3, "n": 1}, (153.59, 52.82, 129.61, 156.02, 47.96),
                 _arr("AEBBB", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 0, "n": 5}, (158.47, 43.06, 138.32, 159.85, 40.31),
                 _arr("AEEEEE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 1, "n": 4}, (158.83, 42.33, 138.98, 160.15, 39.71),
                 _arr("AEBEEE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 2, "n": 3}, (159.16, 41.67, 139.58, 160.42, 39.16),
                 _arr("AEBBEE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 3, "n": 2}, (159.46, 41.07, 140.13, 160.67, 38.66),
                 _arr("AEBBBE", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(4, {"m": 4, "n": 1}, (159.74, 40.52, 140.64, 160.90, 38.20),
                 _arr("AEBBBB", "BAA", "CBEC", "DDE", "EDD"), 1),
    ReferenceRow(5, {"n": 1}, (133.47, 120.0, 93.07, 120.0, 73.47),
                 _arr("ACA", "BBB", "CAA", "DBD", "EECB"), 1),
    ReferenceRow(5, {"n": 2}, (129.13, 90.0, 101.74, 135.0, 84.13),
                 _arr("ACA", "BBBB", "CAA", "DBD", "EECB"), 1),
    ReferenceRow(5, {"n": 3}, (124.74, 72.0, 110.51, 144.0, 88.74),
                 _arr("ACA", "BBBBB", "CAA", "DBD", "EECB"), 1),
    ReferenceRow(6, {}, (126.42, 77.86, 107.15, 141.07, 87.49),
                 _arr("ACA", "BBAB", "CAA", "DBD", "EECB"), 1),
    ReferenceRow(7, {}, (128.22, 85.48, 103.56, 137.26, 85.48),
                 _arr("ACA", "BBCB", "CAA", "DBD", "EECB"), 1),
    ReferenceRow(8, {"n": 1}, (140.0, 80.0, 117.88, 120.0, 82.12),
                 _arr("AAB", "BAA", "CBBE", "DDD", "ECBB"), 1),
    ReferenceRow(8, {"n": 2}, (156.0, 48.0, 146.87, 120.0, 69.13),
                 _arr("AAB", "BAA", "CBBBE", "DDD", "ECBBB"), 1),
    ReferenceRow(8, {"n": 3}, (162.86, 34.29, 162.34, 120.0, 60.52),
                 _arr("AAB", "BAA", "CBBBBE", "DDD", "ECBBBB"), 1),
    ReferenceRow(8, {"n": 4}, (166.67, 26.67, 171.91, 120.0, 54.76),
                 _arr("AAB", "BAA", "CBBBBBE", "DDD", "ECBBBBB"), 1),
    ReferenceRow(8, {"n": 5}, (169.09, 21.82, 178.36, 120.0, 50.73),
                 _arr("AAB", "BAA", "CBBBBBBE", "DDD", "ECBBBBBB"), 1),
    ReferenceRow(9, {}, (120.0, 120.0, 90.0, 120.0, 90.0),
                 _arr("ABB", "BAA", "CECE", "DDD", "ECEC"), 1),
    ReferenceRow(10, {}, (167.34, 25.32, 173.67, 120.0, 53.67),
                 _arr("AAB", "BAA", "CBEEE", "DDD", "ECEEB"), 1),
    ReferenceRow(11, {"n": 1}, (139.11, 81.78, 120.0, 120.0, 79.11), None, math.inf),
    ReferenceRow(11, {"n": 2}, (158.39, 43.22, 163.22, 120.0, 55.17),
                 _arr("AAB", "BAA", "CBBEE", "DDD", "ECBBE"), 1),
    ReferenceRow(11, {"n": 3}, (165.39, 29.23, 178.45, 120.0, 46.94),
                 _arr("AAB", "BAA", "CBBBEE", "DDD", "ECBBBE"), 1),
    ReferenceRow(12, {"n": 1}, (150.0, 60.0, 120.0, 90.0, 120.0), None, math.inf),
    ReferenceRow(12, {"n": 2}, (161.27, 37.47, 157.47, 63.80, 120.0),
                 _arr("AAB", "BAA", "CBDDB", "DCBBD", "EEE"), 1),
    ReferenceRow(12, {"n": 3}, (166.70, 26.61, 173.21, 53.49, 120.0),
                 _arr("AAB", "BAA", "CBBDDB", "DCBBBD", "EEE"), 1),
    ReferenceRow(13, {}, (154.68, 120.0, 50.64, 178.35, 36.33),
                 _arr("AAC", "BBB", "CAA", "DEEEEE", "EDEEEE"), 1),
    ReferenceRow(14, {}, (92.61, 120.0, 174.78, 43.69, 108.92),
                 _arr("ACA", "BBB", "CAA", "DBDDE", "EDDDB"), 1),
    ReferenceRow(15, {}, (108.0, 144.0, 126.0, 36.0, 126.0),
                 _arr("AEE", "BAA", "CEDDD", "DCEDD", "EEA"), 1),
    ReferenceRow(16, {"n": 1}, (112.5, 135.0, 90.0, 112.5, 90.0),
                 _arr("AAB", "BCB", "CCCC", "DBD", "EEEE"), 1),
    ReferenceRow(16, {"n": 2}, (150.0, 60.0, 90.0, 150.0, 90.0),
                 _arr("AAB", "BCCBB", "CCCC", "DBD", "EEEE"), 1),
    ReferenceRow(17, {"n": 1}, (140.0, 80.0, 120.0, 140.0, 60.0),
                 _arr("AAB", "BCBB", "CCC", "DBD", "EEEEEE"), 1),
    ReferenceRow(17, {"n": 2}, (160.0, 40.0, 120.0, 160.0, 60.0),
                 _arr("AAB", "BCCBB", "CCC", "DBD", "EEEEEE"), 1),
)


def reference_rows() -> tuple[ReferenceRow, ...]:
    """All 43 worked examples: angles to 0.01 degrees, vertex
    arrangements where the family has Heesch number 1."""
    return _ROWS


def catalog_json() -> dict:
    """Whole catalog as plain data.

    Schema: {"edge_convention": str, "categories": [{"id", "relations",
    "edge_classes", "params", "domain", "inf_guard", "embedded_types",
    "membership_relation", "remarks": [{"guard", "kind", "spot"}],
    "reference_rows": [{"params", "angles_deg", "arrangements",
    "heesch"}]}]}.  Heesch infinity is encoded as the string "inf".
    """
    cats = []
    for cid in CATEGORY_IDS:
        spec = _SPECS[cid]
        rows = []
        for row in _ROWS:
            if row.category != cid:
                continue
            rows.append({
                "params": row.params,
                "angles_deg": list(row.angles_deg),
                "arrangements": row.arrangements,
                "heesch": "inf" if math.isinf(row.heesch) else row.heesch,
            })
        cats.append({
            "id": cid,
            "relations": list(spec.relations),
            "edge_classes": ["".join(c) for c in spec.edge_classes],
            "params": list(spec.param_names),
            "domain": spec.domain_text,
            "inf_guard": spec.inf_guard,
            "embedded_types": list(spec.embedded_types),
            "membership_relation": spec.membership_relation,
            "remarks": [{"guard": r.guard, "kind": r.kind, "spot": r.combo}
                        for r in spec.remarks],
            "reference_rows": rows,
        })
    return {
        "edge_convention": "a=EA b=AB c=BC d=CD e=DE; corners A..E counterclockwise",
        "categories": cats,
    }
