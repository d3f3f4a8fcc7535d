"""Finite groups, conjugacy data, and the class algebra of a group.

Groups are multiplication tables validated at load time.  The class
algebra carries the centralizer-weighted pairing; its surface amplitudes
are cross-checked by ``omega_brute``, a raw tuple count of solutions of
the product-of-commutators equation, which shares no machinery with the
algebraic formula it checks.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Sequence, Union

from .exact import BudgetError, Rational
from .frobenius import FrobeniusAlgebra

DEFAULT_BUDGET = 10 ** 8


class GroupAxiomError(ValueError):
    """A multiplication table fails a group axiom.

    ``axiom`` is one of "closure", "identity", "inverses",
    "associativity"; ``witness`` holds offending element indices.
    """

    def __init__(self, axiom: str, witness=None):
        self.axiom = axiom
        self.witness = witness
        msg = f"not a group: {axiom} fails"
        if witness is not None:
            msg += f" at {witness}"
        super().__init__(msg)


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j.
    Element 0 is the identity; ``names`` are display names with the
    identity always named "1".
    """

    def __init__(self, table: Sequence[Sequence[int]],
                 names: Sequence[str] | None = None,
                 description: str = "table"):
        n = len(table)
        self.order = n
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.description = description
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise GroupAxiomError("closure", (i,))
            for j, x in enumerate(row):
                if not 0 <= x < n:
                    raise GroupAxiomError("closure", (i, j))
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise GroupAxiomError("identity", (i,))
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == 0 and self.table[j][i] == 0:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise GroupAxiomError("inverses", (i,))
        self.inverse = tuple(inv)
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise GroupAxiomError("associativity", (a, b, c))
        if names is None:
            names = ["1"] + [f"g{i}" for i in range(1, n)]
        if len(names) != n:
            raise ValueError("name count does not match order")
        self.names = tuple(str(x) for x in names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, a: int, g: int) -> int:
        """g a g^-1."""
        return self.table[self.table[g][a]][self.inverse[g]]

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, {self.description})"

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}


class ConjugacyData:
    def __init__(self, group: FiniteGroup):
        self.group = group
        n = group.order
        seen = [False] * n
        classes = []
        for a in range(n):
            if seen[a]:
                continue
            cl = sorted({group.conj(a, g) for g in range(n)})
            for x in cl:
                seen[x] = True
            classes.append(tuple(cl))
        classes.sort(key=lambda cl: cl[0])
        self.classes = tuple(classes)
        self.num_classes = len(classes)
        class_of = [None] * n
        for ci, cl in enumerate(classes):
            for x in cl:
                class_of[x] = ci
        self.class_of = tuple(class_of)
        cents = []
        for cl in classes:
            r = cl[0]
            c = sum(1 for g in range(n)
                    if group.table[g][r] == group.table[r][g])
            if c * len(cl) != n:
                raise AssertionError(
                    "centralizer-order times class size must equal the order")
            cents.append(c)
        self.centralizer_orders = tuple(cents)
        self.inverse_class = tuple(
            self.class_of[group.inverse[cl[0]]] for cl in classes
        )
        for ci, cj in enumerate(self.inverse_class):
            if self.inverse_class[cj] != ci:
                raise AssertionError("class inversion must be an involution")
        self.class_names = tuple(
            f"[{group.names[cl[0]]}]" for cl in classes
        )

    def class_index(self, name: str) -> int:
        name = name.strip()
        if name in self.class_names:
            return self.class_names.index(name)
        stripped = name.strip("[]")
        for i, cn in enumerate(self.class_names):
            if cn.strip("[]") == stripped:
                return i
        raise KeyError(
            f"unknown class {name!r}; classes are {list(self.class_names)}")


# -- builtin groups -----------------------------------------------------------


def _cyclic(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    names = ["1"] + [f"g{i}" for i in range(1, n)]
    return FiniteGroup(table, names, description=f"Z{n}")


def _klein() -> FiniteGroup:
    # elements 1, a, b, ab with XOR composition on the index bits
    table = [[i ^ j for j in range(4)] for i in range(4)]
    return FiniteGroup(table, ["1", "a", "b", "ab"], description="Z2xZ2")


def _perm_mul(p, q):
    """Composition acting left-to-right: (p*q)(x) = q(p(x))."""
    return tuple(q[p[x]] for x in range(len(p)))


def _cycle_notation(p) -> str:
    m = len(p)
    seen = [False] * m
    parts = []
    for s in range(m):
        if seen[s] or p[s] == s:
            seen[s] = True
            continue
        cyc = [s]
        seen[s] = True
        x = p[s]
        while x != s:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        parts.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    return "".join(parts) if parts else "1"


def parse_cycles(line: str, degree: int | None = None):
    """Parse disjoint-cycle notation like "(1 2 3)(4 5)" into a permutation
    tuple on 0-based points.  Points in the input are 1-based."""
    line = line.strip()
    pts = []
    cycles = []
    i = 0
    while i < len(line):
        if line[i] != "(":
            raise ValueError(f"bad cycle notation near {line[i:]!r}")
        j = line.index(")", i)
        body = line[i + 1:j].replace(",", " ").split()
        cyc = [int(x) - 1 for x in body]
        if any(x < 0 for x in cyc):
            raise ValueError("points must be positive")
        cycles.append(cyc)
        pts.extend(cyc)
        i = j + 1
    m = degree if degree is not None else (max(pts) + 1 if pts else 1)
    p = list(range(m))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            p[x] = cyc[(k + 1) % len(cyc)]
    return tuple(p)


def group_from_permutations(lines: Sequence[str],
                            description: str = "permutations") -> FiniteGroup:
    gens = []
    degree = 0
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        p = parse_cycles(line)
        degree = max(degree, len(p))
        gens.append(p)
    if not gens:
        raise ValueError("no generators given")
    gens = [p + tuple(range(len(p), degree)) for p in gens]
    identity = tuple(range(degree))
    elems = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = _perm_mul(e, g)
                if h not in index:
                    index[h] = len(elems)
                    elems.append(h)
                    nxt.append(h)
        frontier = nxt
    n = len(elems)
    table = [[index[_perm_mul(elems[i], elems[j])] for j in range(n)]
             for i in range(n)]
    names = [_cycle_notation(p) for p in elems]
    return FiniteGroup(table, names, description=description)


def _s3() -> FiniteGroup:
    return group_from_permutations(["(1 2)", "(1 2 3)"], description="S3")


def _q8() -> FiniteGroup:
    # elements 1, -1, i, -i, j, -j, k, -k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # encode as (axis, sign): axis 0 = scalar, 1 = i, 2 = j, 3 = k
    def enc(idx):
        return idx // 2, 1 if idx % 2 == 0 else -1

    def dec(axis, sign):
        return axis * 2 + (0 if sign == 1 else 1)

    # quaternion axis products: ax1*ax2 -> (axis, sign)
    qmul = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    table = []
    for a in range(8):
        row = []
        ax1, s1 = enc(a)
        for b in range(8):
            ax2, s2 = enc(b)
            ax, s = qmul[(ax1, ax2)]
            row.append(dec(ax, s * s1 * s2))
        table.append(row)
    return FiniteGroup(table, names, description="Q8")


BUILTIN_GROUPS = {
    "trivial": lambda: FiniteGroup([[0]], ["1"], description="trivial"),
    "Z2": lambda: _cyclic(2),
    "Z3": lambda: _cyclic(3),
    "Z4": lambda: _cyclic(4),
    "Z2xZ2": _klein,
    "S3": _s3,
    "Q8": _q8,
}


def load_group(source: Union[str, Mapping, Sequence[str]]) -> FiniteGroup:
    """Load a group from a builtin name ("Z2" or "builtin:Z2"), a Cayley
    table mapping {"order": N, "table": [[...]]}, or permutation generator
    lines in disjoint-cycle notation."""
    if isinstance(source, Mapping):
        table = source["table"]
        if "order" in source and int(source["order"]) != len(table):
            raise ValueError("declared order does not match table size")
        return FiniteGroup(table, description="table")
    if isinstance(source, str):
        name = source.strip()
        if name.startswith("builtin:"):
            name = name[len("builtin:"):]
        if name in BUILTIN_GROUPS:
            return BUILTIN_GROUPS[name]()
        if "(" in name:
            return group_from_permutations(name.splitlines())
        raise ValueError(
            f"unknown group source {source!r}; builtins: "
            f"{sorted(BUILTIN_GROUPS)}")
    return group_from_permutations(list(source))


def conjugacy(G: FiniteGroup) -> ConjugacyData:
    return ConjugacyData(G)


def orbifold_frobenius(G: FiniteGroup,
                       cd: ConjugacyData | None = None) -> FrobeniusAlgebra:
    """The class algebra of G with the centralizer-weighted pairing.

    Basis is indexed by conjugacy classes; the pairing couples a class to
    its inverse class with weight 1/|centralizer|, and the product sums
    |C(product)| / |G| over ordered pairs of class representatives."""
    if cd is None:
        cd = conjugacy(G)
    h = cd.num_classes
    N = G.order
    pairing = [
        [
            Fraction(1, cd.centralizer_orders[i])
            if cd.inverse_class[i] == j else Fraction(0)
            for j in range(h)
        ]
        for i in range(h)
    ]
    prod = [[[Fraction(0)] * h for _ in range(h)] for _ in range(h)]
    for i in range(h):
        for j in range(h):
            for a in cd.classes[i]:
                for b in cd.classes[j]:
                    k = cd.class_of[G.table[a][b]]
                    prod[i][j][k] += Fraction(cd.centralizer_orders[k], N)
    return FrobeniusAlgebra(h, cd.class_names, prod, pairing)


def omega_brute(G: FiniteGroup, g: int, class_indices: Sequence[int],
                budget: int = DEFAULT_BUDGET,
                cd: ConjugacyData | None = None) -> Rational:
    """Count tuples (a_1, b_1, .., a_g, b_g, s_1, .., s_n) with the product
    of commutators of the (a, b) pairs equal to the product of the s_j,
    each s_j running over the j-th requested conjugacy class; divide by
    the group order.  Pure table-lookup counting."""
    n = len(class_indices)
    if n < 1:
        raise ValueError("need at least one class index")
    N = G.order
    if N ** (2 * g + n) > budget:
        raise BudgetError(
            f"{N}^{2 * g + n} tuples exceed budget {budget}; "
            "reduce g, n, or the group order")
    if cd is None:
        cd = conjugacy(G)
    mul = G.table
    inv = G.inverse
    # distribution of a single commutator
    comm = [0] * N
    for a in range(N):
        for b in range(N):
            x = mul[mul[mul[a][b]][inv[a]]][inv[b]]
            comm[x] += 1
    # g-fold product distribution
    dist = [0] * N
    dist[0] = 1
    for _ in range(g):
        nxt = [0] * N
        for x in range(N):
            if dist[x] == 0:
                continue
            for y in range(N):
                if comm[y]:
                    nxt[mul[x][y]] += dist[x] * comm[y]
        dist = nxt
    count = 0
    for sigmas in iproduct(*(cd.classes[ci] for ci in class_indices)):
        p = 0
        for s in sigmas:
            p = mul[p][s]
        count += dist[p]
    return Fraction(count, N)
