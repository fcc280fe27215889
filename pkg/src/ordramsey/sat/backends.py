"""Solver backends behind one contract, plus the soundness gate on models."""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..colorings import TwoColoring, is_symmetric, verify_avoiding
from .cdcl import SAT, UNKNOWN, UNSAT, CDCLSolver
from .encode import CnfInstance, decode_model

SOLVER_ENV = "ORDRAMSEY_SOLVER"
DEFAULT_SECONDS = 60.0
DEFAULT_CONFLICTS = 10**7


@dataclass(frozen=True)
class Budget:
    seconds: Optional[float] = DEFAULT_SECONDS
    conflicts: Optional[int] = DEFAULT_CONFLICTS

    @property
    def exhausted(self) -> bool:
        return self.conflicts is not None and self.conflicts <= 0 or (
            self.seconds is not None and self.seconds <= 0
        )


UNLIMITED = Budget(None, None)


@dataclass
class SolverVerdict:
    status: str
    model: Optional[list[int]] = None
    stats: dict = field(default_factory=dict)
    diagnostic: str = ""

    @property
    def satisfiable(self) -> bool:
        return self.status == SAT

    @property
    def unsatisfiable(self) -> bool:
        return self.status == UNSAT

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN


class SoundnessError(AssertionError):
    """A backend reported a model that is not an avoiding coloring."""


class BuiltinBackend:
    name = "builtin"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def solve(self, inst: CnfInstance, budget: Budget = Budget()) -> SolverVerdict:
        if budget.exhausted:
            return SolverVerdict(UNKNOWN, diagnostic="budget exhausted before start")
        solver = CDCLSolver(inst.variable_count, inst.clauses, seed=self.seed)
        status = solver.solve(budget.conflicts, budget.seconds)
        return SolverVerdict(status, solver.model, solver.stats.as_dict())

    def models(self, inst: CnfInstance, budget: Budget = Budget()) -> Iterator[SolverVerdict]:
        """Successive models, each blocked over the edge variables before the next call."""
        solver = CDCLSolver(inst.variable_count, inst.clauses, seed=self.seed)
        deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
        while True:
            remaining = None if deadline is None else deadline - time.monotonic()
            if remaining is not None and remaining <= 0:
                yield SolverVerdict(UNKNOWN, stats=solver.stats.as_dict(), diagnostic="time budget exhausted")
                return
            left = None if budget.conflicts is None else budget.conflicts - solver.stats.conflicts
            status = solver.solve(left, remaining)
            verdict = SolverVerdict(status, solver.model, solver.stats.as_dict())
            yield verdict
            if status != SAT:
                return
            solver.add_clause([-lit for lit in solver.model[: inst.edge_variable_count]])


class ExternalBackend:
    """Runs a DIMACS solver as a child process.

    The command is a shell-style string; ``{cnf}`` is replaced by the instance
    path, otherwise the path is appended.  Output follows the usual
    ``s SATISFIABLE`` / ``s UNSATISFIABLE`` plus ``v`` line convention.
    """

    def __init__(self, command: Optional[str] = None):
        self.command = command or os.environ.get(SOLVER_ENV) or bundled_runner_command()
        self.name = "external:" + shlex.split(self.command)[0]

    def _argv(self, path: str) -> list[str]:
        parts = shlex.split(self.command)
        if any("{cnf}" in p for p in parts):
            return [p.replace("{cnf}", path) for p in parts]
        return parts + [path]

    def solve(self, inst: CnfInstance, budget: Budget = Budget()) -> SolverVerdict:
        return self.solve_dimacs(inst.to_dimacs(), inst.variable_count, budget)

    def solve_dimacs(self, text: str, nvars: int, budget: Budget = Budget()) -> SolverVerdict:
        if budget.exhausted:
            return SolverVerdict(UNKNOWN, diagnostic="budget exhausted before start")
        with tempfile.TemporaryDirectory(prefix="ordramsey-") as tmp:
            path = os.path.join(tmp, "instance.cnf")
            with open(path, "w", encoding="ascii") as fh:
                fh.write(text)
            start = time.monotonic()
            try:
                proc = subprocess.run(
                    self._argv(path),
                    capture_output=True,
                    text=True,
                    timeout=budget.seconds,
                    cwd=tmp,
                )
            except subprocess.TimeoutExpired:
                return SolverVerdict(UNKNOWN, diagnostic="external solver timed out")
            except OSError as exc:
                return SolverVerdict(UNKNOWN, diagnostic=f"cannot run external solver: {exc}")
            elapsed = time.monotonic() - start
        verdict = parse_solver_output(proc.stdout, nvars)
        verdict.stats = {"seconds": round(elapsed, 3), "returncode": proc.returncode}
        if verdict.unknown and not verdict.diagnostic:
            verdict.diagnostic = (proc.stderr or proc.stdout).strip()[-500:] or "no status line"
        return verdict

    def models(self, inst: CnfInstance, budget: Budget = Budget()) -> Iterator[SolverVerdict]:
        clauses = list(inst.clauses)
        deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
        header = f"p cnf {inst.variable_count} "
        while True:
            remaining = None if deadline is None else deadline - time.monotonic()
            text = header + f"{len(clauses)}\n" + "".join(" ".join(map(str, c)) + " 0\n" for c in clauses)
            verdict = self.solve_dimacs(text, inst.variable_count, Budget(remaining, budget.conflicts))
            yield verdict
            if not verdict.satisfiable:
                return
            clauses.append([-lit for lit in verdict.model[: inst.edge_variable_count]])


Backend = Union[BuiltinBackend, ExternalBackend]


def bundled_runner_command() -> str:
    return f"{shlex.quote(sys.executable)} -m ordramsey.sat.dimacs_runner"


def get_backend(name: Optional[str] = None, seed: int = 0) -> Backend:
    """``builtin`` (default), ``external`` or ``external:<command>``."""
    if name is None or name == "builtin":
        return BuiltinBackend(seed)
    if name == "external":
        return ExternalBackend()
    if name.startswith("external:"):
        return ExternalBackend(name[len("external:"):])
    raise ValueError(f"unknown backend {name!r}")


def parse_solver_output(text: str, nvars: int) -> SolverVerdict:
    status = None
    lits: list[int] = []
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip().split(":")[0].strip()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            elif status is None:
                status = UNKNOWN
        elif line.startswith("v "):
            lits.extend(int(tok) for tok in line[2:].split())
    if status == SAT:
        values = {abs(l): l for l in lits if l != 0}
        # variables a solver leaves out are unconstrained; pick false
        model = [values.get(v, -v) for v in range(1, nvars + 1)]
        return SolverVerdict(SAT, model)
    if status == UNSAT:
        return SolverVerdict(UNSAT)
    return SolverVerdict(UNKNOWN)


# -- soundness gate ---------------------------------------------------------


def check_model(inst: CnfInstance, model: list[int]) -> TwoColoring:
    """Decode a model and re-verify it independently of the solver."""
    assigned = {abs(l): l > 0 for l in model}
    for clause in inst.clauses:
        if not any(assigned.get(abs(l)) == (l > 0) for l in clause):
            raise SoundnessError(f"model violates clause {clause}")
    coloring = decode_model(model, inst.N)
    if inst.red_pattern is not None and inst.blue_pattern is not None:
        verdict = verify_avoiding(coloring, inst.red_pattern, inst.blue_pattern)
        if not verdict.avoiding:
            raise SoundnessError(f"decoded coloring has a {verdict}")
    if inst.options.symmetric and not is_symmetric(coloring):
        raise SoundnessError("symmetric instance produced an asymmetric coloring")
    for (i, j), red in inst.options.fixed.items():
        if coloring.is_red(i, j) != red:
            raise SoundnessError(f"fixed edge {(i, j)} has the wrong color")
    return coloring


def solve(inst: CnfInstance, backend: Optional[Backend] = None, budget: Budget = Budget()) -> SolverVerdict:
    backend = backend or BuiltinBackend()
    try:
        verdict = backend.solve(inst, budget)
    except Exception as exc:  # a broken backend must not look like a verdict
        return SolverVerdict(UNKNOWN, diagnostic=f"backend failure: {exc!r}")
    if verdict.satisfiable:
        check_model(inst, verdict.model)
    return verdict


@dataclass
class Enumeration:
    colorings: list[TwoColoring]
    complete: bool
    status: str  # "complete", "limit" or "budget"

    def __iter__(self):
        return iter(self.colorings)

    def __len__(self) -> int:
        return len(self.colorings)


def enumerate_models(
    inst: CnfInstance,
    backend: Optional[Backend] = None,
    limit: Optional[int] = None,
    budget: Budget = UNLIMITED,
) -> Enumeration:
    """All avoiding colorings, sorted with the lexicographically smallest model first.

    Red is the larger value, so the all-blue-leading colorings come first.
    """
    backend = backend or BuiltinBackend()
    found: list[TwoColoring] = []
    status = "complete"
    for verdict in backend.models(inst, budget):
        if verdict.unknown:
            status = "budget"
            break
        if not verdict.satisfiable:
            break
        found.append(check_model(inst, verdict.model))
        if limit is not None and len(found) >= limit:
            status = "limit"
            break
    found.sort(key=lambda c: c.bits())
    return Enumeration(found, status == "complete", status)
