"""The backend contract shared by all trace calculi, plus the law harness.

A backend supplies graded elements with a left/right symmetric-group
action, a horizontal concatenation with unit, and partial trace maps.
From those this module derives vertical concatenation and the generalised
trace, and provides randomized checkers for the defining laws and for
structure-preserving maps between backends.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Protocol, runtime_checkable

from . import graph as graphmod
from . import perm
from .perm import Perm


@runtime_checkable
class TrapContract(Protocol):
    name: str
    tolerance: float

    def arity(self, p) -> tuple[int, int]: ...

    def act(self, sigma: Perm, p, tau: Perm): ...

    def hconcat(self, p, q): ...

    def partial_trace(self, p, i: int, j: int): ...

    def unit0(self): ...

    def eq(self, p, q) -> bool: ...

    def random_element(self, rng: random.Random, k: int, l: int): ...


def is_unitary(backend) -> bool:
    return getattr(backend, "unit1", None) is not None


def vconcat(backend, q, p):
    """q after p: trace every output of p against the matching input of q."""
    k, l = backend.arity(p)
    l2, _ = backend.arity(q)
    if l != l2:
        raise ValueError(f"arities do not compose: {backend.arity(p)} then {backend.arity(q)}")
    out = backend.hconcat(p, q)
    for m in range(l, 0, -1):
        out = backend.partial_trace(out, k + m, m)
    return out


def gtrace(backend, p):
    k, l = backend.arity(p)
    if k != l:
        raise ValueError(f"generalised trace needs k = l, got {(k, l)}")
    out = p
    for m in range(k, 0, -1):
        out = backend.partial_trace(out, m, m)
    return out


def unit_power(backend, n: int):
    out = backend.unit0()
    for _ in range(n):
        out = backend.hconcat(out, backend.unit1())
    return out


# -- the graph backend ---------------------------------------------------


class GraphTrap:
    """Label-decorated corolla-ordered graphs; equality is isomorphism."""

    name = "graph"
    tolerance = 0.0

    def __init__(self, labels: str = "xyz", max_vertices: int = 2, max_arity: int = 3):
        self.labels = labels
        self.max_vertices = max_vertices
        self.max_arity = max_arity

    def arity(self, p: graphmod.Graph) -> tuple[int, int]:
        return p.arity

    def act(self, sigma, p, tau):
        return graphmod.act(sigma, p, tau)

    def hconcat(self, p, q):
        return graphmod.hconcat(p, q)

    def partial_trace(self, p, i, j):
        return graphmod.partial_trace(p, i, j)

    def unit0(self):
        return graphmod.empty_graph()

    def unit1(self):
        return graphmod.unit_graph()

    def eq(self, p, q):
        return graphmod.iso_eq(p, q)

    def random_element(self, rng, k=None, l=None):
        if k is None:
            return graphmod.random_graph(
                rng, max_vertices=self.max_vertices, max_arity=self.max_arity,
                labels=self.labels,
            )
        for _ in range(3000):
            g = graphmod.random_graph(
                rng, max_vertices=self.max_vertices, max_arity=self.max_arity,
                labels=self.labels,
            )
            if g.arity == (k, l):
                return g
        return graphmod.corolla(self.labels[0] + f"{k}{l}", k, l)


# -- axiom harness -------------------------------------------------------


@dataclass
class LawReport:
    law: str
    trials: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class Report:
    backend: str
    seed: int
    laws: dict[str, LawReport] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.laws.values())

    def to_json(self) -> str:
        payload = {
            "backend": self.backend,
            "seed": self.seed,
            "passed": self.passed,
            "laws": {
                name: {
                    "trials": r.trials,
                    "passed": r.passed,
                    "failures": r.failures[:3],
                }
                for name, r in sorted(self.laws.items())
            },
        }
        return json.dumps(payload, sort_keys=True, default=repr)


def _describe(backend, p) -> str:
    return f"{backend.arity(p)}:{p!r}"


class _Harness:
    def __init__(self, backend, report: Report):
        self.backend = backend
        self.report = report

    def check(self, law: str, lhs, rhs, context: dict | None = None):
        r = self.report.laws.setdefault(law, LawReport(law))
        r.trials += 1
        if not self.backend.eq(lhs, rhs):
            entry = {"lhs": repr(lhs), "rhs": repr(rhs)}
            entry.update(context or {})
            r.failures.append(entry)


def check_axioms(backend, gen: Callable | None = None, trials: int = 100,
                 seed: int = 0) -> Report:
    """Run the defining-law suite on randomized elements.

    ``gen(rng)`` must return backend elements of varied arities.  Unitary
    relations are exercised whenever the backend declares a ``unit1``.
    """
    rng = random.Random(seed)
    gen = gen or backend.random_element
    report = Report(backend=backend.name, seed=seed)
    h = _Harness(backend, report)
    B = backend

    def rand_perms(k, l):
        return perm.random_perm(rng, l), perm.random_perm(rng, k)

    for _ in range(trials):
        p = gen(rng)
        k, l = B.arity(p)
        sigma, tau = rand_perms(k, l)
        sigma2, tau2 = rand_perms(k, l)

        h.check("1.identity", B.act(perm.identity(l), p, perm.identity(k)), p)
        h.check(
            "1.left-composition",
            B.act(sigma, B.act(sigma2, p, perm.identity(k)), perm.identity(k)),
            B.act(perm.compose(sigma, sigma2), p, perm.identity(k)),
        )
        h.check(
            "1.right-composition",
            B.act(perm.identity(l), B.act(perm.identity(l), p, tau2), tau),
            B.act(perm.identity(l), p, perm.compose(tau2, tau)),
        )
        h.check(
            "1.two-sided",
            B.act(sigma, B.act(perm.identity(l), p, tau), perm.identity(k)),
            B.act(perm.identity(l), B.act(sigma, p, perm.identity(k)), tau),
        )

        q = gen(rng)
        kq, lq = B.arity(q)
        r = gen(rng)
        h.check(
            "2a.associativity",
            B.hconcat(B.hconcat(p, q), r),
            B.hconcat(p, B.hconcat(q, r)),
        )
        h.check("2b.unit-left", B.hconcat(B.unit0(), p), p)
        h.check("2b.unit-right", B.hconcat(p, B.unit0()), p)
        sq, tq = rand_perms(kq, lq)
        h.check(
            "2c.action-compatibility",
            B.hconcat(B.act(sigma, p, tau), B.act(sq, q, tq)),
            B.act(
                perm.tensor_sum(sigma, sq),
                B.hconcat(p, q),
                perm.tensor_sum(tau, tq),
            ),
        )
        h.check(
            "2d.commutativity",
            B.act(perm.block_shuffle(l, lq), B.hconcat(p, q), perm.identity(k + kq)),
            B.act(perm.identity(lq + l), B.hconcat(q, p), perm.block_shuffle(k, kq)),
        )

        if k >= 1 and l >= 1:
            i, j = rng.randint(1, k), rng.randint(1, l)
            # the right factor deletes the letter tau(i): the traced input
            # carries label tau(i) before the action, i after it
            h.check(
                "3b.action-compatibility",
                B.partial_trace(B.act(sigma, p, tau), i, j),
                B.act(
                    perm.delete_index(sigma, j),
                    B.partial_trace(p, tau[i - 1], perm.inverse(sigma)[j - 1]),
                    perm.delete_index(tau, tau[i - 1]),
                ),
                {"i": i, "j": j, "sigma": sigma, "tau": tau},
            )
            if kq >= 1 and lq >= 1:
                h.check(
                    "3c.reduced",
                    B.partial_trace(B.hconcat(p, q), 1, 1),
                    B.hconcat(B.partial_trace(p, 1, 1), q),
                )
                i2, j2 = rng.randint(1, kq), rng.randint(1, lq)
                h.check(
                    "3c.full-right",
                    B.partial_trace(B.hconcat(p, q), k + i2, l + j2),
                    B.hconcat(p, B.partial_trace(q, i2, j2)),
                    {"i": i2, "j": j2},
                )
                h.check(
                    "3c.full-left",
                    B.partial_trace(B.hconcat(p, q), i, j),
                    B.hconcat(B.partial_trace(p, i, j), q),
                    {"i": i, "j": j},
                )

        if k >= 2 and l >= 2:
            i, j = rng.randint(1, k), rng.randint(1, l)
            for i2, j2 in [
                (rng.randint(1, k - 1), rng.randint(1, l - 1)) for _ in range(2)
            ]:
                if i2 < i and j2 < j:
                    law, rhs = "3a.lt-lt", B.partial_trace(
                        B.partial_trace(p, i2, j2), i - 1, j - 1
                    )
                elif i2 >= i and j2 < j:
                    law, rhs = "3a.ge-lt", B.partial_trace(
                        B.partial_trace(p, i2 + 1, j2), i, j - 1
                    )
                elif i2 < i and j2 >= j:
                    law, rhs = "3a.lt-ge", B.partial_trace(
                        B.partial_trace(p, i2, j2 + 1), i - 1, j
                    )
                else:
                    law, rhs = "3a.ge-ge", B.partial_trace(
                        B.partial_trace(p, i2 + 1, j2 + 1), i, j
                    )
                h.check(
                    law,
                    B.partial_trace(B.partial_trace(p, i, j), i2, j2),
                    rhs,
                    {"i": i, "j": j, "i2": i2, "j2": j2},
                )

        if is_unitary(B):
            unit = B.unit1()
            if l >= 1:
                h.check("u.reduced", B.partial_trace(B.hconcat(unit, p), 1, 2), p)
            for j in range(2, l + 2):
                h.check(
                    "u.left-out",
                    B.partial_trace(B.hconcat(unit, p), 1, j),
                    B.act(perm.cycle(tuple(range(1, j)), l), p, perm.identity(k)),
                    {"j": j},
                )
            for i in range(2, k + 2):
                h.check(
                    "u.left-in",
                    B.partial_trace(B.hconcat(unit, p), i, 1),
                    B.act(
                        perm.identity(l),
                        p,
                        perm.inverse(perm.cycle(tuple(range(1, i)), k)),
                    ),
                    {"i": i},
                )
            for j in range(1, l + 1):
                h.check(
                    "u.right-out",
                    B.partial_trace(B.hconcat(p, unit), k + 1, j),
                    B.act(
                        perm.inverse(perm.cycle(tuple(range(j, l + 1)), l)),
                        p,
                        perm.identity(k),
                    ),
                    {"j": j},
                )
            for i in range(1, k + 1):
                h.check(
                    "u.right-in",
                    B.partial_trace(B.hconcat(p, unit), i, l + 1),
                    B.act(perm.identity(l), p, perm.cycle(tuple(range(i, k + 1)), k)),
                    {"i": i},
                )
    return report


def check_morphism(phi: Callable, src, dst, gen: Callable | None = None,
                   trials: int = 100, seed: int = 0, name: str = "phi") -> Report:
    """Check that ``phi`` intertwines the two backends' structure.

    Uses the reduced sufficient conditions (equivariance and commutation
    with the (1,1)-trace) plus horizontal concatenation and unit
    preservation.
    """
    rng = random.Random(seed)
    gen = gen or src.random_element
    report = Report(backend=f"{name}:{src.name}->{dst.name}", seed=seed)
    h = _Harness(dst, report)
    for _ in range(trials):
        p = gen(rng)
        k, l = src.arity(p)
        sigma, tau = perm.random_perm(rng, l), perm.random_perm(rng, k)
        h.check(
            "m.equivariance",
            phi(src.act(sigma, p, tau)),
            dst.act(sigma, phi(p), tau),
        )
        q = gen(rng)
        h.check("m.hconcat", phi(src.hconcat(p, q)), dst.hconcat(phi(p), phi(q)))
        if k >= 1 and l >= 1:
            h.check(
                "m.trace11",
                phi(src.partial_trace(p, 1, 1)),
                dst.partial_trace(phi(p), 1, 1),
            )
            i, j = rng.randint(1, k), rng.randint(1, l)
            h.check(
                "m.trace-general",
                phi(src.partial_trace(p, i, j)),
                dst.partial_trace(phi(p), i, j),
                {"i": i, "j": j},
            )
    r = report.laws.setdefault("m.unit0", LawReport("m.unit0"))
    r.trials += 1
    if not dst.eq(phi(src.unit0()), dst.unit0()):
        r.failures.append({"lhs": repr(phi(src.unit0()))})
    return report
