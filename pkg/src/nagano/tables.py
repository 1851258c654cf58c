"""Static table of irreducible Nagano pairs (g, alpha) with structural queries.

Numeric columns that depend on the parameters n, p, q are stored as small
expression trees so that rows stay symbolic until ``instantiate`` binds them.
"""

from dataclasses import dataclass
import json

from .errors import BindingOutOfRange, UnknownPair


@dataclass(frozen=True)
class Expr:
    """Expression over the parameters: const, var, add, sub, min, floordiv."""

    op: str
    args: tuple

    def evaluate(self, bindings):
        if self.op == "const":
            return self.args[0]
        if self.op == "var":
            name = self.args[0]
            if name not in bindings:
                raise BindingOutOfRange(f"missing binding for {name}", parameter=name)
            return int(bindings[name])
        vals = [a.evaluate(bindings) for a in self.args]
        if self.op == "add":
            return vals[0] + vals[1]
        if self.op == "sub":
            return vals[0] - vals[1]
        if self.op == "min":
            return min(vals)
        if self.op == "floordiv":
            return vals[0] // vals[1]
        raise ValueError(f"unknown op {self.op}")

    def variables(self):
        if self.op == "var":
            return {self.args[0]}
        if self.op == "const":
            return set()
        return set().union(*(a.variables() for a in self.args))

    def __str__(self):
        if self.op in ("const", "var"):
            return str(self.args[0])
        a = [str(x) for x in self.args]
        if self.op == "add":
            return f"{a[0]}+{a[1]}"
        if self.op == "sub":
            return f"{a[0]}-{a[1]}"
        if self.op == "min":
            return f"min({a[0]},{a[1]})"
        return f"floor({a[0]}/{a[1]})"

    def to_json(self):
        if self.op in ("const", "var"):
            return [self.op, self.args[0]]
        return [self.op] + [a.to_json() for a in self.args]

    @classmethod
    def from_json(cls, data):
        op = data[0]
        if op in ("const", "var"):
            return cls(op, (data[1],))
        return cls(op, tuple(cls.from_json(d) for d in data[1:]))


def const(v):
    return Expr("const", (v,))


def var(name):
    return Expr("var", (name,))


N, P, Q = var("n"), var("p"), var("q")


@dataclass(frozen=True)
class NaganoPairRow:
    id: str
    algebra: str
    root: str
    space: str
    dim_g_alpha: Expr
    compact_isometry: str
    noncompact_dual: str
    rank: Expr
    parameters: tuple  # ((name, minimum), ...)
    real_type: bool

    def to_json(self):
        return {
            "id": self.id,
            "algebra": self.algebra,
            "root": self.root,
            "space": self.space,
            "dim_g_alpha": self.dim_g_alpha.to_json(),
            "compact_isometry": self.compact_isometry,
            "noncompact_dual": self.noncompact_dual,
            "rank": self.rank.to_json(),
            "parameters": [{"name": n, "min": m} for n, m in self.parameters],
            "real_type": self.real_type,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            id=data["id"],
            algebra=data["algebra"],
            root=data["root"],
            space=data["space"],
            dim_g_alpha=Expr.from_json(data["dim_g_alpha"]),
            compact_isometry=data["compact_isometry"],
            noncompact_dual=data["noncompact_dual"],
            rank=Expr.from_json(data["rank"]),
            parameters=tuple((d["name"], d["min"]) for d in data["parameters"]),
            real_type=data["real_type"],
        )

    def summary(self):
        return {
            "id": self.id,
            "algebra": self.algebra,
            "space": self.space,
            "dim_g_alpha": str(self.dim_g_alpha),
            "rank": str(self.rank),
            "real_type": self.real_type,
        }


def _row(id, algebra, root, space, dim, compact, dual, rank, params=(), real=False):
    dim = dim if isinstance(dim, Expr) else const(dim)
    rank = rank if isinstance(rank, Expr) else const(rank)
    return NaganoPairRow(id, algebra, root, space, dim, compact, dual, rank, tuple(params), real)


# Lower bounds on parameters keep each row irreducible and keep real-type
# rows out of rank one except the projective spaces in row iv.
ROWS = (
    _row("i", "so(n,n)", "alpha_i, i in {n-1,n}", "SO(n)", 1, "SO(n)xSO(n)", "SO(n,C)",
         Expr("floordiv", (N, const(2))), [("n", 4)], True),
    _row("ii", "sp(n,n)", "alpha_n = eps_n", "Sp(n)", 3, "Sp(n)xSp(n)", "Sp(2n,C)", N, [("n", 1)]),
    _row("iii", "su(n,n)", "alpha_n = 2 eps_n", "U(n)", 1, "S(U(n)xU(n))", "SL(n,C)xR", N, [("n", 2)], True),
    _row("iv", "sl(p+q,R)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(R^{p+q})", 1, "SO(p+q)", "SO(p,q)",
         Expr("min", (P, Q)), [("p", 1), ("q", 1)], True),
    _row("v", "sl(p+q,C)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(C^{p+q})", 2, "SU(p+q)", "SU(p,q)",
         Expr("min", (P, Q)), [("p", 1), ("q", 1)]),
    _row("vi", "sl(p+q,H)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(H^{p+q})", 4, "Sp(p+q)", "Sp(p,q)",
         Expr("min", (P, Q)), [("p", 1), ("q", 1)]),
    _row("vii", "e6(6)", "alpha_i, i in {1,5}", "Sp(4)/(Sp(2)xSp(2))", 1, "Sp(4)", "Sp(2,2)", 2, (), True),
    _row("viii", "so(p+1,q+1)", "alpha_1 = eps_1 - eps_2", "S^p x S^q", 1, "SO(p+1)xSO(q+1)",
         "SO(p,1)xSO(1,q)", 2, [("p", 1), ("q", 1)], True),
    _row("ix", "so(n,1)", "alpha_1 = eps_1 - eps_2", "S^{n-1}", Expr("sub", (N, const(1))), "SO(n+1)",
         "SO(n-1,1)", 1, [("n", 3)]),
    _row("x", "so*(4n)", "alpha_n = 2 eps_n", "(SU(2n)/Sp(n))xS^1", 1, "U(2n)", "SL(n,H)xR", N, [("n", 2)], True),
    _row("xi", "sp(2n,R)", "alpha_n = 2 eps_n", "(SU(n)/SO(n))xS^1", 1, "U(n)", "SL(n,R)xR", N, [("n", 2)], True),
    _row("xii", "e7(-25)", "alpha_3", "(E7/F4)xS^1", 1, "E6xS^1", "E6(-26)xR", 3, (), True),
    _row("xiii", "so(n+2,C)", "alpha_1 = eps_1 - eps_2", "SO(n+2)/S(O(2)xO(n))", 2, "SO(n+2)", "SO(n,2)",
         Expr("min", (N, const(2))), [("n", 1)]),
    _row("xiv", "so(2n,C)", "alpha_i, i in {n-1,n}", "SO(2n)/U(n)", 2, "SO(2n)", "SO*(2n)",
         Expr("floordiv", (N, const(2))), [("n", 2)]),
    _row("xv", "sp(2n,C)", "alpha_n = 2 eps_n", "Sp(n)/U(n)", 2, "Sp(n)", "Sp(2n,R)", N, [("n", 1)]),
    _row("xvi", "e6,C", "alpha_i, i in {1,5}", "E6/(SO(2)xSO(10))", 2, "E6", "E6(-14)", 2),
    _row("xvii", "e7,C", "alpha_7", "E7/(SO(2)xE6)", 2, "E7", "E7(-25)", 3),
    _row("xviii", "e6(-26)", "alpha_i, i in {1,2}", "F4/B4", 8, "F4", "F4(-20)", 1),
    _row("xix", "e7(7)", "alpha_7", "SU(8)/Sp(4)", 1, "SU(8)", "SL(4,H)", 3, (), True),
)

_BY_ID = {row.id: row for row in ROWS}


def all_rows():
    return list(ROWS)


def lookup(key):
    """Row by id ("iv") or by algebra / space name (case-insensitive)."""
    if isinstance(key, str):
        k = key.strip()
        if k.lower() in _BY_ID:
            return _BY_ID[k.lower()]
        for row in ROWS:
            if k.lower() in (row.algebra.lower(), row.space.lower()):
                return row
    raise UnknownPair(f"unknown Nagano pair {key!r}", key=str(key))


def real_type_rows():
    return [row for row in ROWS if row.real_type]


def instantiate(key, bindings=None, **kwargs):
    """Bind the parameters of a row and evaluate its numeric columns."""
    bindings = {**(bindings or {}), **kwargs}
    row = lookup(key)
    names = {name for name, _ in row.parameters}
    extra = set(bindings) - names
    if extra:
        raise BindingOutOfRange("row has no such parameter", row=row.id, parameters=sorted(extra))
    values = {}
    for name, minimum in row.parameters:
        if name not in bindings:
            raise BindingOutOfRange(f"missing binding for {name}", row=row.id, parameter=name)
        value = bindings[name]
        if isinstance(value, bool) or int(value) != value or value < minimum:
            raise BindingOutOfRange(f"{name} must be an integer >= {minimum}", row=row.id, parameter=name, value=value)
        values[name] = int(value)
    rank = row.rank.evaluate(values)
    dim = row.dim_g_alpha.evaluate(values)
    space = row.space
    if row.id == "iv":
        p, q = values["p"], values["q"]
        space = f"P(R^{p + q})" if min(p, q) == 1 else f"Gr_{p}(R^{p + q})"
    return {
        "id": row.id,
        "algebra": row.algebra,
        "space": space,
        "bindings": values,
        "dim_g_alpha": dim,
        "rank": rank,
        "real_type": dim == 1,
        "higher_rank": rank >= 2,
    }


def rows_to_json(rows=None):
    return json.dumps([r.to_json() for r in (rows if rows is not None else ROWS)], sort_keys=True)


def format_table(rows=None):
    """Plain-text table of the summary columns."""
    rows = rows if rows is not None else ROWS
    header = ("id", "algebra", "space", "dim g_alpha", "rank", "real type")
    body = [(r.id, r.algebra, r.space, str(r.dim_g_alpha), str(r.rank), "yes" if r.real_type else "no") for r in rows]
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines)
