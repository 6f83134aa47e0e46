"""Randomized local search for 2-CNF formulas.

The solver keeps a current assignment and, while any clause is violated,
picks the lowest-index unsatisfied clause and flips the variable of one of
its two literals, chosen uniformly.  Against any fixed satisfying
assignment the agreement count rises with probability at least 1/2 per
step, which is what makes the quadratic-time guarantee work; passing that
witness as ``reference`` records the agreement trajectory.

Literals are (variable, negated) pairs with 0-based variables; assignments
are bytearrays of 0/1.  DIMACS-style text I/O lives at the bottom.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from driftlab.errors import FormatError
from driftlab.rng import RngStream
from driftlab.trajectory import Trajectory

Literal = tuple[int, bool]
Clause = tuple[Literal, Literal]


@dataclass(frozen=True)
class TwoCnfFormula:
    """A 2-CNF formula: n variables, clauses of exactly two literals."""

    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("formula needs at least one variable")
        for idx, clause in enumerate(self.clauses):
            if len(clause) != 2:
                raise ValueError(f"clause {idx} must have exactly two literals")
            for var, neg in clause:
                if not 0 <= var < self.n:
                    raise ValueError(f"clause {idx}: variable {var} out of range")
                if not isinstance(neg, bool):
                    raise ValueError(f"clause {idx}: negation flag must be bool")

    @property
    def m(self) -> int:
        return len(self.clauses)


def literal_true(lit: Literal, assignment) -> bool:
    var, neg = lit
    return bool(assignment[var]) != neg


def clause_satisfied(clause: Clause, assignment) -> bool:
    return literal_true(clause[0], assignment) or literal_true(clause[1], assignment)


def satisfies(formula: TwoCnfFormula, assignment) -> bool:
    if len(assignment) != formula.n:
        raise ValueError("assignment length must equal variable count")
    return all(clause_satisfied(c, assignment) for c in formula.clauses)


def agreement_count(a, b) -> int:
    """Number of positions where two assignments agree."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if bool(x) == bool(y))


def random_assignment(stream: RngStream, n: int) -> bytearray:
    return bytearray(1 if stream.next_bernoulli(0.5) else 0 for _ in range(n))


@dataclass(frozen=True)
class PlantedInstance:
    formula: TwoCnfFormula
    witness: bytes


def generate_planted(stream: RngStream, n: int, m: int) -> PlantedInstance:
    """Random satisfiable instance: uniform witness, clauses it satisfies.

    Each clause draws two distinct variables and uniform polarities,
    redrawing until the witness satisfies it (acceptance chance 3/4 per
    draw, so this terminates quickly).
    """
    if n < 2:
        raise ValueError("planted generation needs n >= 2 (distinct variables per clause)")
    if m < 1:
        raise ValueError("need at least one clause")
    witness = bytes(random_assignment(stream, n))
    clauses = []
    for _ in range(m):
        while True:
            u = stream.next_index(n)
            v = stream.next_index(n)
            if u == v:
                continue
            lit_u = (u, bool(stream.next_index(2)))
            lit_v = (v, bool(stream.next_index(2)))
            clause = (lit_u, lit_v)
            if clause_satisfied(clause, witness):
                clauses.append(clause)
                break
    return PlantedInstance(formula=TwoCnfFormula(n=n, clauses=tuple(clauses)), witness=witness)


@dataclass
class WalkResult:
    assignment: bytearray
    iterations: int
    censored: bool
    trajectory: Trajectory | None


def run_walk(
    formula: TwoCnfFormula,
    init,
    stream: RngStream,
    cap: int,
    reference=None,
) -> WalkResult:
    """Run the clause-repair walk from ``init`` until satisfied or capped.

    The unsatisfied-clause bookkeeping is incremental: a min-heap of
    (possibly stale) unsatisfied clause indices gives the lowest-index
    violated clause without rescanning the formula, and a flip only
    re-evaluates the clauses containing the flipped variable.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    n = formula.n
    assignment = bytearray(init)
    if len(assignment) != n:
        raise ValueError("init length must equal variable count")
    if reference is not None and len(reference) != n:
        raise ValueError("reference length must equal variable count")

    clauses = formula.clauses
    occ: list[list[int]] = [[] for _ in range(n)]
    for idx, clause in enumerate(clauses):
        occ[clause[0][0]].append(idx)
        if clause[1][0] != clause[0][0]:
            occ[clause[1][0]].append(idx)

    unsat = bytearray(formula.m)
    heap: list[int] = []
    unsat_count = 0
    for idx, clause in enumerate(clauses):
        if not clause_satisfied(clause, assignment):
            unsat[idx] = 1
            unsat_count += 1
            heap.append(idx)
    heapq.heapify(heap)

    record = reference is not None
    if record:
        agree = agreement_count(assignment, reference)
        values: list[float] = [agree]

    t = 0
    while unsat_count > 0 and t < cap:
        while not unsat[heap[0]]:
            heapq.heappop(heap)  # stale entry: clause got satisfied meanwhile
        chosen = clauses[heap[0]]
        var = chosen[stream.next_index(2)][0]
        assignment[var] ^= 1
        for idx in occ[var]:
            now_sat = clause_satisfied(clauses[idx], assignment)
            if now_sat and unsat[idx]:
                unsat[idx] = 0
                unsat_count -= 1
            elif not now_sat and not unsat[idx]:
                unsat[idx] = 1
                unsat_count += 1
                heapq.heappush(heap, idx)
        t += 1
        if record:
            agree += 1 if bool(assignment[var]) == bool(reference[var]) else -1
            values.append(agree)

    censored = unsat_count > 0
    traj = None
    if record:
        traj = Trajectory(values=values, censored=censored, cap=cap if censored else None)
    return WalkResult(assignment=assignment, iterations=t, censored=censored, trajectory=traj)


# ---------------------------------------------------------------------------
# DIMACS-style text format: header "p cnf <n> <m>", one zero-terminated
# two-literal clause per line, "c" comment lines anywhere.


def emit_dimacs(formula: TwoCnfFormula) -> str:
    lines = [f"p cnf {formula.n} {formula.m}"]
    for (u, nu), (v, nv) in formula.clauses:
        a = -(u + 1) if nu else u + 1
        b = -(v + 1) if nv else v + 1
        lines.append(f"{a} {b} 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> TwoCnfFormula:
    n = m = None
    clauses: list[Clause] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise FormatError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"malformed problem line {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"non-integer counts in {line!r}", lineno) from None
            if n < 1 or m < 0:
                raise FormatError(f"impossible counts in {line!r}", lineno)
            continue
        if n is None:
            raise FormatError("clause before problem line", lineno)
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormatError(f"non-integer literal in {line!r}", lineno) from None
        if not nums or nums[-1] != 0:
            raise FormatError("clause line must end with 0", lineno)
        lits = nums[:-1]
        if len(lits) != 2:
            raise FormatError(
                f"expected exactly two literals per clause, got {len(lits)}", lineno
            )
        clause = []
        for lit in lits:
            if lit == 0 or abs(lit) > n:
                raise FormatError(f"literal {lit} out of range for n={n}", lineno)
            clause.append((abs(lit) - 1, lit < 0))
        clauses.append((clause[0], clause[1]))
    if n is None:
        raise FormatError("missing problem line")
    if len(clauses) != m:
        raise FormatError(f"problem line promises {m} clauses, found {len(clauses)}")
    return TwoCnfFormula(n=n, clauses=tuple(clauses))
