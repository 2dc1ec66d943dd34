"""Integer-program formulation of the payout problem, LP-file export and solution import.

Variables (all binary, 1-based indices):

* ``x_i_j_k`` -- place ``i`` sits in bucket ``j`` and is paid ladder prize ``k``;
* ``y_j_k``   -- bucket ``j`` pays ladder prize ``k``.

Ladder prizes are ordered from largest (``k = 1``) to smallest, and buckets
from the top of the table (``j = 1``).  Unused buckets are the lowest-numbered
ones.  Nothing in the model forces a bucket's places to be contiguous; an
exchange argument shows an optimal solution can always be made contiguous, and
:func:`import_solution` reads bucket sizes only.

No solver is bundled: :func:`export_lp` writes the standard LP text format that
off-the-shelf MILP solvers read, and :func:`import_solution` /
:func:`read_solution` bring an assignment back.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .core import ContestSpec, PayoutStructure
from .nice import enumerate_nice, is_nice

__all__ = [
    "FAMILIES",
    "PrizeLadder",
    "Row",
    "IlpModel",
    "ModelTooLarge",
    "InvalidAssignment",
    "build",
    "export_lp",
    "parse_lp",
    "ParsedLp",
    "import_solution",
    "structure_to_assignment",
    "read_solution",
    "write_solution",
    "contiguity_exchange_delta",
]

MAX_VARIABLES = 5 * 10**6

# constraint families, in the order rows are emitted
FAMILIES = (
    "Monotonicity",
    "Prize Pool",
    "Bucket Size Monotonicity",
    "One Bucket Per Winner",
    "One Prize Per Bucket",
    "Prize Consistency",
)


_CHECK_ORDER = ("One Prize Per Bucket", "Prize Consistency", "One Bucket Per Winner",
                "Prize Pool", "Monotonicity", "Bucket Size Monotonicity")


class ModelTooLarge(ValueError):
    pass


class InvalidAssignment(ValueError):
    """An assignment that breaks the model; ``constraint`` names the family."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}" if detail else constraint)


@dataclass(frozen=True)
class PrizeLadder:
    """Admissible prizes p_1 > p_2 > ... > p_m."""

    prizes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.prizes)
        object.__setattr__(self, "prizes", ps)
        if not ps:
            raise ValueError("prize ladder is empty")
        if any(a <= b for a, b in zip(ps, ps[1:])):
            raise ValueError("ladder prizes must be strictly decreasing")
        bad = [p for p in ps if p < 1 or not is_nice(p)]
        if bad:
            raise ValueError(f"ladder prizes must be nice: {bad}")

    @classmethod
    def for_spec(cls, spec: ContestSpec) -> "PrizeLadder":
        """Every nice number from E up to the top prize, largest first."""
        return cls(tuple(reversed(enumerate_nice(max(1, spec.min_payout), spec.top_prize))))

    @property
    def m(self) -> int:
        return len(self.prizes)

    def index(self, prize: int) -> int:
        """1-based ladder position of ``prize``."""
        try:
            return self.prizes.index(prize) + 1
        except ValueError:
            raise ValueError(f"prize {prize} is not on the ladder") from None

    def __len__(self):
        return len(self.prizes)


def xname(i, j, k) -> str:
    return f"x_{i}_{j}_{k}"


def yname(j, k) -> str:
    return f"y_{j}_{k}"


@dataclass(frozen=True)
class Row:
    name: str
    family: str
    terms: tuple[tuple[str, float], ...]
    sense: str  # "<=", "=", ">="
    rhs: float

    def lhs(self, values: Mapping[str, float]) -> float:
        return sum(c * values.get(v, 0) for v, c in self.terms)

    def holds(self, values: Mapping[str, float], tol: float = 1e-9) -> bool:
        a = self.lhs(values)
        if self.sense == "<=":
            return a <= self.rhs + tol
        if self.sense == ">=":
            return a >= self.rhs - tol
        return abs(a - self.rhs) <= tol


@dataclass
class IlpModel:
    spec: ContestSpec
    ladder: PrizeLadder
    payouts: np.ndarray
    objective: dict[str, float] = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.spec.winners

    @property
    def r(self) -> int:
        return self.spec.max_buckets

    @property
    def m(self) -> int:
        return self.ladder.m

    def contestant_vars(self) -> list[str]:
        return [xname(i, j, k) for i in range(1, self.n + 1)
                for j in range(1, self.r + 1) for k in range(1, self.m + 1)]

    def auxiliary_vars(self) -> list[str]:
        return [yname(j, k) for j in range(1, self.r + 1) for k in range(1, self.m + 1)]

    def variables(self) -> list[str]:
        return self.contestant_vars() + self.auxiliary_vars()

    def family_counts(self) -> dict[str, int]:
        counts = dict.fromkeys(FAMILIES, 0)
        for row in self.rows:
            counts[row.family] += 1
        return counts

    def violated(self, values: Mapping[str, float]) -> list[Row]:
        return [row for row in self.rows if not row.holds(values)]

    def objective_value(self, values: Mapping[str, float]) -> float:
        return float(sum(c * values.get(v, 0) for v, c in self.objective.items()))


def build(spec: ContestSpec, curve, ladder: PrizeLadder | None = None,
          max_variables: int = MAX_VARIABLES) -> IlpModel:
    """Assemble the variables, objective and all six constraint families."""
    pi = np.asarray(getattr(curve, "payouts", curve), dtype=np.float64)
    if ladder is None:
        ladder = PrizeLadder.for_spec(spec)
    n, r, m = spec.winners, spec.max_buckets, ladder.m
    if len(pi) != n:
        raise ValueError(f"curve has {len(pi)} places but the contest has {n} winners")
    if n * r * m + r * m > max_variables:
        raise ModelTooLarge(f"{n * r * m + r * m} variables exceeds the cap of {max_variables}")
    p = ladder.prizes
    J, K = range(1, r + 1), range(1, m + 1)
    model = IlpModel(spec, ladder, pi)

    # squared error of paying place i prize k; the same for every bucket j
    for i in range(1, n + 1):
        for j in J:
            for k in K:
                model.objective[xname(i, j, k)] = float((pi[i - 1] - p[k - 1]) ** 2)

    rows = model.rows
    # the 1/2 offset makes "prize of j above prize of j+1" strict, and lets an
    # empty bucket j (all y_j_k = 0) sit above any bucket
    for j in range(1, r):
        terms = [(yname(j, k), k + 0.5) for k in K] + [(yname(j + 1, k), -float(k)) for k in K]
        rows.append(Row(f"mono_{j}", "Monotonicity", tuple(terms), "<=", 0.0))
    rows.append(Row("pool", "Prize Pool",
                    tuple((xname(i, j, k), float(p[k - 1]))
                          for i in range(1, n + 1) for j in J for k in K),
                    "=", float(spec.prize_pool)))
    for j in range(1, r):
        terms = ([(xname(i, j, k), 1.0) for i in range(1, n + 1) for k in K]
                 + [(xname(i, j + 1, k), -1.0) for i in range(1, n + 1) for k in K])
        rows.append(Row(f"size_{j}", "Bucket Size Monotonicity", tuple(terms), "<=", 0.0))
    for i in range(1, n + 1):
        rows.append(Row(f"winner_{i}", "One Bucket Per Winner",
                        tuple((xname(i, j, k), 1.0) for j in J for k in K), "=", 1.0))
    for j in J:
        rows.append(Row(f"prize_{j}", "One Prize Per Bucket",
                        tuple((yname(j, k), 1.0) for k in K), "<=", 1.0))
    for i in range(1, n + 1):
        for j in J:
            for k in K:
                rows.append(Row(f"cons_{i}_{j}_{k}", "Prize Consistency",
                                ((xname(i, j, k), 1.0), (yname(j, k), -1.0)), "<=", 0.0))
    return model


# ---------------------------------------------------------------- LP text

def _num(c: float) -> str:
    c = float(c)
    if c.is_integer() and abs(c) < 1e15:
        return str(int(c))
    return repr(c)


def _expr(terms: Iterable[tuple[str, float]], per_line: int = 6) -> list[str]:
    chunks, line = [], []
    for n_terms, (v, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        if n_terms == 0:
            piece = f"{'-' if c < 0 else ''}{_num(abs(c))} {v}"
        else:
            piece = f"{sign} {_num(abs(c))} {v}"
        line.append(piece)
        if len(line) == per_line:
            chunks.append(" ".join(line))
            line = []
    if line:
        chunks.append(" ".join(line))
    return chunks or ["0"]


def export_lp(model: IlpModel) -> str:
    """The model in LP file syntax; byte-identical for identical input."""
    out = [
        f"\\ payout structure model: N={model.n} r={model.r} m={model.m} B={model.spec.prize_pool}",
        "Minimize",
    ]
    obj = _expr(model.objective.items())
    out.append(" obj: " + obj[0])
    out += ["   " + c for c in obj[1:]]
    out.append("Subject To")
    for row in model.rows:
        expr = _expr(row.terms)
        sense = "=" if row.sense == "=" else row.sense
        if len(expr) == 1:
            out.append(f" {row.name}: {expr[0]} {sense} {_num(row.rhs)}")
        else:
            out.append(f" {row.name}: {expr[0]}")
            out += ["   " + c for c in expr[1:-1]]
            out.append(f"   {expr[-1]} {sense} {_num(row.rhs)}")
    out.append("Binary")
    out += [" " + v for v in model.variables()]
    out.append("End")
    return "\n".join(out) + "\n"


@dataclass
class ParsedLp:
    sense: str
    objective: dict[str, float]
    rows: list[tuple[str, dict[str, float], str, float]]
    binaries: list[str]


_TERM = re.compile(r"([+-]?)\s*([0-9.eE+-]*)\s*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_expr(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    text = text.strip()
    if text == "0":
        return out
    # split on signs that start a new term (not those inside exponents)
    pieces = re.split(r"(?<![eE])\s*(?=[+-])", text)
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            continue
        m = _TERM.fullmatch(piece.replace(" ", "")) or _TERM.fullmatch(piece)
        if m is None:
            raise ValueError(f"cannot parse LP term {piece!r}")
        sign, coef, var = m.groups()
        c = float(coef) if coef else 1.0
        if sign == "-":
            c = -c
        out[var] = out.get(var, 0.0) + c
    return out


def parse_lp(text: str) -> ParsedLp:
    """Read back the LP subset written by :func:`export_lp`."""
    section = None
    sense = None
    buf: list[str] = []
    objective: dict[str, float] = {}
    rows = []
    binaries: list[str] = []

    def flush():
        if not buf:
            return
        stmt = " ".join(buf)
        buf.clear()
        name, _, body = stmt.partition(":")
        if section == "objective":
            objective.update(_parse_expr(body))
            return
        m = re.match(r"(.*?)(<=|>=|=)\s*([-+0-9.eE]+)\s*$", body)
        if m is None:
            raise ValueError(f"malformed constraint {stmt!r}")
        rows.append((name.strip(), _parse_expr(m.group(1)), m.group(2), float(m.group(3))))

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "maximize", "subject to", "binary", "binaries", "end"):
            flush()
            if low in ("minimize", "maximize"):
                section, sense = "objective", low
            elif low == "subject to":
                section = "rows"
            elif low.startswith("binar"):
                section = "binary"
            else:
                section = "end"
            continue
        if section == "binary":
            binaries += line.split()
        elif section in ("objective", "rows"):
            if ":" in line and buf:
                flush()
            buf.append(line)
    flush()
    return ParsedLp(sense or "minimize", objective, rows, binaries)


# ---------------------------------------------------------------- solutions

def structure_to_assignment(model: IlpModel, structure: PayoutStructure) -> dict[str, int]:
    """Encode a structure as a full 0/1 assignment, packing buckets at the bottom."""
    if len(structure) > model.r:
        raise ValueError(f"{len(structure)} buckets do not fit in {model.r}")
    if structure.winners != model.n:
        raise ValueError(f"structure pays {structure.winners} places, model has {model.n}")
    values = dict.fromkeys(model.variables(), 0)
    offset = model.r - len(structure)
    place = 1
    for j0, b in enumerate(structure.buckets):
        j = offset + j0 + 1
        k = model.ladder.index(b.prize)
        values[yname(j, k)] = 1
        for i in range(place, place + b.size):
            values[xname(i, j, k)] = 1
        place += b.size
    return values


def import_solution(model: IlpModel, assignment: Mapping[str, float]) -> PayoutStructure:
    """Turn a 0/1 assignment back into a payout structure.

    Raises :class:`InvalidAssignment` naming a broken constraint family, for
    missing or non-binary values, or when a used bucket sits above an unused
    one.
    """
    names = model.variables()
    missing = [v for v in names if v not in assignment]
    if missing:
        raise InvalidAssignment("Coverage", f"{len(missing)} variables unassigned, e.g. {missing[0]}")
    values = {}
    for v in names:
        a = assignment[v]
        if a not in (0, 1):
            raise InvalidAssignment("Binary", f"{v} = {a!r}")
        values[v] = int(a)
    # local families first: they pinpoint the offending bucket or winner
    for family in _CHECK_ORDER:
        bad = [row for row in model.rows if row.family == family and not row.holds(values)]
        if bad:
            raise InvalidAssignment(family, f"row {bad[0].name} violated")

    r, m, n = model.r, model.m, model.n
    sizes, prizes = [], []
    for j in range(1, r + 1):
        ks = [k for k in range(1, m + 1) if values[yname(j, k)]]
        size = sum(values[xname(i, j, k)] for i in range(1, n + 1) for k in range(1, m + 1))
        sizes.append(size)
        prizes.append(model.ladder.prizes[ks[0] - 1] if ks else None)
    used = [s > 0 for s in sizes]
    if any(u and not later for u, later in zip(used, used[1:])):
        raise InvalidAssignment("Empty Bucket Order", "unused buckets must be the lowest-numbered")
    return PayoutStructure.from_pairs((s, p) for s, p in zip(sizes, prizes) if s > 0)


def read_solution(text: str) -> dict[str, int]:
    """Parse ``name value`` lines; values must be integers 0 or 1."""
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'name value', got {raw!r}")
        name, val = parts
        try:
            num = float(val)
        except ValueError:
            raise ValueError(f"line {lineno}: value {val!r} is not a number") from None
        if num not in (0.0, 1.0):
            raise InvalidAssignment("Binary", f"line {lineno}: {name} = {val}")
        out[name] = int(num)
    return out


def write_solution(assignment: Mapping[str, int]) -> str:
    return "".join(f"{k} {int(v)}\n" for k, v in assignment.items())


def contiguity_exchange_delta(pi_i: float, pi_j: float, p_high: int, p_low: int) -> float:
    """Cost change from giving the larger prize to the place with the larger ideal payout.

    Starting from place i on ``p_low`` and place j on ``p_high`` (with
    ``pi_i >= pi_j``), swapping the two prizes changes the squared error by
    ``-2 (pi_i - pi_j)(p_high - p_low)``, which is never positive.
    """
    if pi_i < pi_j:
        raise ValueError("expected pi_i >= pi_j")
    if p_high <= p_low:
        raise ValueError("expected p_high > p_low")
    return -2.0 * (pi_i - pi_j) * (p_high - p_low)
