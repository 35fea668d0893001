"""Coefficient automata (DFAO) from the section-operator state space.

States are coefficient vectors of P over the lattice basis of C', found by
breadth-first closure from the representation of f under all p^n digit
tuples.  Input is read least-significant digit first.

Over F_q with q = p^e > p every section step takes a p-th root of the
coefficients, so the output of the final state is raised back by
Frobenius^(number of digit tuples read).  On prime fields this is the
identity and the automaton is an ordinary DFAO.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .cartier import SectionWalker, base_p_digits, lattice_basis
from .errors import MalformedInput, StateBudgetExceeded
from .ff import Field, FieldElem
from .series import Branch, digit_tuples


@dataclass(frozen=True)
class Dfao:
    field: Field
    n: int
    basis: tuple[tuple[int, ...], ...]
    states: tuple[tuple[int, ...], ...]
    initial: int
    transition: dict  # (state, digit tuple) -> state
    output: tuple[int, ...]  # field codes

    @property
    def p(self) -> int:
        return self.field.p

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dfao):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
            and self.states == other.states
            and self.initial == other.initial
            and self.transition == other.transition
            and self.output == other.output
        )

    __hash__ = None


def build_dfao(b: Branch, max_states: int = 100_000) -> Dfao:
    F = b.field
    walker = SectionWalker(b)
    basis = lattice_basis(b.E)
    digits = digit_tuples(F.p, b.n)
    y0 = b.y0.value
    Ey0 = walker._kernel.Ey.eval_at_origin(y0)

    start = walker.start.P
    ids = {start: 0}
    polys = [start]
    transition = {}
    queue = deque([start])
    while queue:
        P = queue.popleft()
        sid = ids[P]
        for r in digits:
            Q = walker.step(P, r)
            tid = ids.get(Q)
            if tid is None:
                if len(polys) >= max_states:
                    raise StateBudgetExceeded(
                        f"closure exceeded {max_states} states",
                        partial=[basis.vector(x) for x in polys],
                    )
                tid = ids[Q] = len(polys)
                polys.append(Q)
                queue.append(Q)
            transition[(sid, r)] = tid
    output = tuple(F.div(P.eval_at_origin(y0), Ey0) for P in polys)
    return Dfao(
        field=F,
        n=b.n,
        basis=tuple(basis.points),
        states=tuple(basis.vector(P) for P in polys),
        initial=0,
        transition=transition,
        output=output,
    )


def dfao_run(M: Dfao, digits: Sequence[tuple[int, ...]]) -> int:
    s = M.initial
    for r in digits:
        s = M.transition[(s, tuple(r))]
    return s


def dfao_query(M: Dfao, index: Sequence[int], pad: int = 0) -> FieldElem:
    """a(index); ``pad`` extra all-zero digit tuples may be appended."""
    if len(index) != M.n:
        raise ValueError(f"index needs {M.n} coordinates")
    digits = base_p_digits(index, M.p) + [(0,) * M.n] * pad
    s = dfao_run(M, digits)
    return FieldElem(M.field, M.field.frob_power(M.output[s], len(digits)))


# -- serialisation --------------------------------------------------------------


def _elem_json(F: Field, code: int) -> list[int]:
    return F.digits(code)


def dfao_to_dict(M: Dfao) -> dict:
    from .io import field_to_dict

    digits = digit_tuples(M.p, M.n)
    return {
        "field": field_to_dict(M.field),
        "p": M.p,
        "n": M.n,
        "initial": M.initial,
        "basis": [list(pt) for pt in M.basis],
        "states": [
            {"vector": [_elem_json(M.field, c) for c in vec], "output": _elem_json(M.field, out)}
            for vec, out in zip(M.states, M.output)
        ],
        "transitions": [
            [s, list(r), M.transition[(s, r)]] for s in range(len(M.states)) for r in digits
        ],
    }


def dfao_from_dict(doc: dict) -> Dfao:
    from .io import check_keys, field_from_dict

    check_keys(doc, {"field", "p", "n", "initial", "basis", "states", "transitions"}, "automaton")
    F = field_from_dict(doc["field"])
    if doc["p"] != F.p:
        raise MalformedInput("automaton p disagrees with its field")
    n = int(doc["n"])
    states, output = [], []
    for k, st in enumerate(doc["states"]):
        check_keys(st, {"vector", "output"}, f"states[{k}]")
        states.append(tuple(F.encode(c) for c in st["vector"]))
        output.append(F.encode(st["output"]))
    transition = {}
    for entry in doc["transitions"]:
        s, r, t = entry
        transition[(int(s), tuple(int(x) for x in r))] = int(t)
    M = Dfao(
        field=F,
        n=n,
        basis=tuple(tuple(pt) for pt in doc["basis"]),
        states=tuple(states),
        initial=int(doc["initial"]),
        transition=transition,
        output=tuple(output),
    )
    _validate(M)
    return M


def _validate(M: Dfao) -> None:
    nstates = len(M.states)
    if not 0 <= M.initial < nstates:
        raise MalformedInput("initial state out of range")
    for s in range(nstates):
        for r in digit_tuples(M.p, M.n):
            t = M.transition.get((s, r))
            if t is None or not 0 <= t < nstates:
                raise MalformedInput(f"transition from {s} on {list(r)} missing or out of range")
    if len(set(M.states)) != nstates:
        raise MalformedInput("duplicate state vectors")


def export_dfao(M: Dfao, format: str = "json") -> str:
    """Deterministic JSON or DOT text."""
    if format == "json":
        return json.dumps(dfao_to_dict(M), sort_keys=True, separators=(",", ":")) + "\n"
    if format != "dot":
        raise ValueError(f"unknown format {format!r}")
    lines = ["digraph dfao {", "  rankdir=LR;", '  start [shape=point];']
    for s, out in enumerate(M.output):
        label = repr(FieldElem(M.field, out))
        lines.append(f'  s{s} [shape=circle, label="{label}"];')
    lines.append(f"  start -> s{M.initial};")
    for s in range(len(M.states)):
        for r in digit_tuples(M.p, M.n):
            lab = ",".join(map(str, r))
            lines.append(f'  s{s} -> s{M.transition[(s, r)]} [label="({lab})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dfao(text: str) -> Dfao:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"automaton JSON: {exc}") from exc
    return dfao_from_dict(doc)
