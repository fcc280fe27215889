"""Minimal DIMACS solver process: ``python -m ordramsey.sat.dimacs_runner FILE``.

Prints ``s SATISFIABLE`` with ``v`` lines or ``s UNSATISFIABLE`` and exits
with the conventional codes 10 / 20.  Uses CaDiCaL through python-sat when it
is installed, the built-in solver otherwise.
"""

import argparse
import sys

from .cdcl import SAT, UNSAT, CDCLSolver
from .encode import parse_dimacs


def _solve_cadical(nvars, clauses):
    from pysat.solvers import Cadical195

    with Cadical195(bootstrap_with=clauses) as solver:
        if solver.solve():
            model = solver.get_model() or []
            values = {abs(l): l for l in model}
            return SAT, [values.get(v, -v) for v in range(1, nvars + 1)]
        return UNSAT, None


def _solve_builtin(nvars, clauses):
    solver = CDCLSolver(nvars, clauses)
    status = solver.solve()
    return status, solver.model


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dimacs_runner")
    parser.add_argument("cnf")
    parser.add_argument("--engine", choices=["auto", "cadical", "builtin"], default="auto")
    args = parser.parse_args(argv)
    with open(args.cnf, encoding="ascii") as fh:
        nvars, clauses = parse_dimacs(fh.read())
    engine = args.engine
    if engine == "auto":
        try:
            import pysat.solvers  # noqa: F401

            engine = "cadical"
        except ImportError:
            engine = "builtin"
    print(f"c engine {engine}")
    status, model = (_solve_cadical if engine == "cadical" else _solve_builtin)(nvars, clauses)
    if status == SAT:
        print("s SATISFIABLE")
        for start in range(0, len(model), 20):
            print("v " + " ".join(map(str, model[start : start + 20])))
        print("v 0")
        return 10
    if status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
