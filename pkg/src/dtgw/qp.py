"""Binary quadratic program for the exact distance, as plain text.

Model text format (one item per line, ``#`` starts a comment)::

    VARIABLES binary
    m_1_1
    ...
    OBJECTIVE minimize
    <coef> w_s_t m_i_j          # one bilinear term per line
    CONSTRAINTS
    <name>: <coef> <var> + <coef> <var> ... (=|<=|>=) <rhs>
    END

``m_i_j`` (``i`` in ``1..|V|+1``, ``j`` in ``1..|W|+1``) is 1 iff vertex ``i``
of the first graph is mapped to vertex ``j`` of the second; index ``|V|+1`` /
``|W|+1`` is the artificial deletion vertex. ``w_s_t`` is 1 iff layer ``s`` is
warped to layer ``t``. Constraint families are named ``a_i`` (each first-graph
vertex mapped once), ``b_j`` (each second-graph vertex mapped once), ``c``
(path starts at ``(1, 1)``), ``d_s_t``, ``e_t`` and ``f_s`` (every chosen cell
has a successor). :func:`to_lp` rewrites a model in CPLEX LP syntax.

The model lets a real vertex pair both go to the deletion vertex; with
``signature-norm`` deletion costs that is never cheaper than mapping them to
each other, so the optimum coincides with the distance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distance import DtgwOptions, PairCosts, _costs


@dataclass
class Constraint:
    name: str
    terms: dict[str, float]
    sense: str
    rhs: float

    def satisfied(self, values: dict[str, int]) -> bool:
        lhs = sum(c * values[v] for v, c in self.terms.items())
        if self.sense == "=":
            return abs(lhs - self.rhs) < 1e-9
        if self.sense == "<=":
            return lhs <= self.rhs + 1e-9
        return lhs >= self.rhs - 1e-9


@dataclass
class QPModel:
    variables: list[str] = field(default_factory=list)
    objective: list[tuple[float, str, str]] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def family_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for con in self.constraints:
            fam = con.name.split("_", 1)[0]
            counts[fam] = counts.get(fam, 0) + 1
        return counts

    def evaluate(self, values: dict[str, int]) -> float:
        return float(sum(c * values[a] * values[b] for c, a, b in self.objective))

    def feasible(self, values: dict[str, int]) -> bool:
        return all(con.satisfied(values) for con in self.constraints)


def _fmt(x: float) -> str:
    return repr(float(x)) if x != int(x) else str(int(x))


def _linear(terms: dict[str, float]) -> str:
    parts = []
    for k, (var, coef) in enumerate(terms.items()):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{_fmt(mag)} {var}"
        parts.append((f"- {body}" if sign == "-" else body) if k == 0 else f"{sign} {body}")
    return " ".join(parts)


def build_qp(g, h, opts: DtgwOptions | None = None) -> QPModel:
    opts = opts or DtgwOptions()
    costs: PairCosts = _costs(g, h, opts)
    T, U, nV, nW = costs.T, costs.U, costs.n, costs.m
    model = QPModel()
    mvar = lambda i, j: f"m_{i}_{j}"  # noqa: E731
    wvar = lambda s, t: f"w_{s}_{t}"  # noqa: E731
    model.variables += [mvar(i, j) for i in range(1, nV + 2) for j in range(1, nW + 2)]
    model.variables += [wvar(s, t) for s in range(1, T + 1) for t in range(1, U + 1)]

    full = costs.full()
    for s in range(T):
        for t in range(U):
            for i in range(nV + 1):
                for j in range(nW + 1):
                    if i < nV and j < nW:
                        d = full[s, t, i, j]
                    elif i < nV:
                        d = costs.del_g[s, i]
                    elif j < nW:
                        d = costs.del_h[t, j]
                    else:
                        d = 0.0
                    if d != 0:
                        model.objective.append((float(d), wvar(s + 1, t + 1), mvar(i + 1, j + 1)))

    cons = model.constraints
    for i in range(1, nV + 1):
        cons.append(Constraint(f"a_{i}", {mvar(i, j): 1.0 for j in range(1, nW + 2)}, "=", 1))
    for j in range(1, nW + 1):
        cons.append(Constraint(f"b_{j}", {mvar(i, j): 1.0 for i in range(1, nV + 2)}, "=", 1))
    cons.append(Constraint("c", {wvar(1, 1): 1.0}, "=", 1))
    for s in range(1, T):
        for t in range(1, U):
            terms = {wvar(s, t): 1.0, wvar(s + 1, t + 1): -1.0, wvar(s, t + 1): -1.0, wvar(s + 1, t): -1.0}
            cons.append(Constraint(f"d_{s}_{t}", terms, "<=", 0))
    for t in range(1, U):
        cons.append(Constraint(f"e_{t}", {wvar(T, t): 1.0, wvar(T, t + 1): -1.0}, "<=", 0))
    for s in range(1, T):
        cons.append(Constraint(f"f_{s}", {wvar(s, U): 1.0, wvar(s + 1, U): -1.0}, "<=", 0))
    return model


def format_qp(model: QPModel) -> str:
    lines = ["# dtgw binary quadratic model", "VARIABLES binary"]
    lines += model.variables
    lines.append("OBJECTIVE minimize")
    lines += [f"{_fmt(c)} {a} {b}" for c, a, b in model.objective]
    lines.append("CONSTRAINTS")
    for con in model.constraints:
        lines.append(f"{con.name}: {_linear(con.terms)} {con.sense} {_fmt(con.rhs)}")
    lines.append("END")
    return "\n".join(lines) + "\n"


def export_qp(g, h, opts: DtgwOptions | None = None, sink=None) -> str:
    """Model text for the pair; also written to ``sink`` (path or file) if given."""
    text = format_qp(build_qp(g, h, opts))
    if sink is not None:
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            Path(sink).write_text(text)
    return text


_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_]\w*)")


def _parse_linear(expr: str) -> dict[str, float]:
    terms: dict[str, float] = {}
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        match = _TERM.match(expr, pos)
        if not match:
            raise ValueError(f"cannot parse linear expression {expr!r}")
        sign, coef, var = match.groups()
        value = float(coef) if coef else 1.0
        terms[var] = terms.get(var, 0.0) + (-value if sign == "-" else value)
        pos = match.end()
        while pos < len(expr) and expr[pos] == " ":
            pos += 1
    return terms


def parse_qp(text: str) -> QPModel:
    model = QPModel()
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0].upper()
        if head in ("VARIABLES", "OBJECTIVE", "CONSTRAINTS", "END"):
            section = head
            continue
        try:
            if section == "VARIABLES":
                model.variables.append(line)
            elif section == "OBJECTIVE":
                coef, a, b = line.split()
                model.objective.append((float(coef), a, b))
            elif section == "CONSTRAINTS":
                name, body = line.split(":", 1)
                match = re.match(r"(.*?)\s*(<=|>=|=)\s*(\S+)$", body.strip())
                lhs, sense, rhs = match.groups()
                model.constraints.append(Constraint(name.strip(), _parse_linear(lhs), sense, float(rhs)))
            else:
                raise ValueError("content outside a section")
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"line {lineno}: malformed model line {raw!r}") from exc
    return model


def to_lp(model: QPModel) -> str:
    """CPLEX LP rendering (quadratic objective in the ``[ ... ] / 2`` form)."""
    quad = " + ".join(f"{_fmt(2 * c)} {a} * {b}" for c, a, b in model.objective) or "0 "
    lines = ["Minimize", f" obj: [ {quad} ] / 2", "Subject To"]
    for con in model.constraints:
        sense = {"=": "=", "<=": "<=", ">=": ">="}[con.sense]
        lines.append(f" {con.name}: {_linear(con.terms)} {sense} {_fmt(con.rhs)}")
    lines.append("Binary")
    lines += [f" {v}" for v in model.variables]
    lines.append("End")
    return "\n".join(lines) + "\n"


def solve_qp_exhaustive(model: QPModel, max_block: int = 24, max_configs: int = 5_000_000):
    """Minimize a binary model by enumerating every 0/1 assignment.

    Variables are grouped into blocks linked by constraints; each block's
    feasible assignments are enumerated separately and the objective is
    minimized over their Cartesian product. Returns ``(value, assignment)``.
    """
    index = {v: k for k, v in enumerate(model.variables)}
    parent = list(range(len(index)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for con in model.constraints:
        ids = [index[v] for v in con.terms]
        for a in ids[1:]:
            parent[find(a)] = find(ids[0])
    blocks: dict[int, list[int]] = {}
    for k in range(len(index)):
        blocks.setdefault(find(k), []).append(k)

    by_block: dict[int, list[Constraint]] = {}
    for con in model.constraints:
        by_block.setdefault(find(index[next(iter(con.terms))]), []).append(con)

    configs = np.zeros((1, len(index)), dtype=np.int8)
    for root, members in blocks.items():
        k = len(members)
        if k > max_block:
            raise ValueError(f"constraint block of {k} variables is too large to enumerate")
        bits = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int8)
        ok = np.ones(len(bits), dtype=bool)
        pos = {var: p for p, var in enumerate(members)}
        for con in by_block.get(root, []):
            coeffs = np.zeros(k)
            for v, c in con.terms.items():
                coeffs[pos[index[v]]] = c
            lhs = bits @ coeffs
            if con.sense == "=":
                ok &= np.abs(lhs - con.rhs) < 1e-9
            elif con.sense == "<=":
                ok &= lhs <= con.rhs + 1e-9
            else:
                ok &= lhs >= con.rhs - 1e-9
        feas = bits[ok]
        if len(feas) == 0:
            raise ValueError("model is infeasible")
        if len(configs) * len(feas) > max_configs:
            raise ValueError("too many feasible configurations to enumerate")
        rep = np.repeat(configs, len(feas), axis=0)
        rep[:, members] = np.tile(feas, (len(configs), 1))
        configs = rep

    Q = np.zeros((len(index), len(index)))
    for c, a, b in model.objective:
        Q[index[a], index[b]] += c
    X = configs.astype(float)
    values = np.einsum("ij,jk,ik->i", X, Q, X)
    best = int(np.argmin(values))
    assignment = {v: int(configs[best, k]) for v, k in index.items()}
    return float(values[best]), assignment
