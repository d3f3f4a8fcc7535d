"""Commutative Frobenius algebras and their surface amplitudes.

An algebra is built from exact structure tensors (product, pairing) and all
axioms are verified eagerly at construction.  Derived data: the inverse
pairing, the unit, the counit, the three-point tensor, the coproduct tensor
and the Euler element.  Amplitudes Omega_{g,n}(v_1..v_n) = counit(v_1 ...
v_n e^g) where e is the Euler element; the kernel (coproduct-side) and
cokernel (product-side) contraction operators act on multilinear
functionals stored densely on basis tuples.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product as iproduct
from typing import Callable, Mapping, Sequence, Union

import sympy as sp

from .exact import MultiRatFun, Rational, rat_from_str, rat_to_str

Value = Union[Rational, MultiRatFun]


class AxiomError(ValueError):
    """A structure tensor violates a Frobenius-algebra axiom.

    ``axiom`` names the violated law; ``witness`` holds the offending
    basis indices (or None when the failure is global, e.g. a singular
    pairing).
    """

    def __init__(self, axiom: str, witness=None, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        msg = f"axiom violated: {axiom}"
        if witness is not None:
            msg += f" at {witness}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return rat_from_str(x)
    return Fraction(x)


class FrobeniusAlgebra:
    """Finite-dimensional commutative Frobenius algebra over the rationals."""

    def __init__(
        self,
        dim: int,
        labels: Sequence[str],
        product_tensor: Sequence,
        pairing: Sequence,
        check: bool = True,
    ):
        if dim < 1:
            raise ValueError("dim must be positive")
        if len(labels) != dim:
            raise ValueError("label count does not match dim")
        self.dim = dim
        self.labels = tuple(str(l) for l in labels)
        self.product_tensor = tuple(
            tuple(tuple(_frac(product_tensor[i][j][k]) for k in range(dim))
                  for j in range(dim))
            for i in range(dim)
        )
        self.pairing = tuple(
            tuple(_frac(pairing[i][j]) for j in range(dim)) for i in range(dim)
        )
        self._derive(check)
        if check:
            self._verify()

    # -- construction ------------------------------------------------------

    def _derive(self, check: bool) -> None:
        s = self.dim
        c = self.product_tensor
        eta = sp.Matrix(s, s, lambda i, j: sp.Rational(
            self.pairing[i][j].numerator, self.pairing[i][j].denominator))
        if check and not eta.is_symmetric():
            raise AxiomError("symmetric pairing")
        if eta.det() == 0:
            raise AxiomError("degenerate pairing")
        inv = eta.inv()
        self.pairing_inverse = tuple(
            tuple(Fraction(int(sp.Rational(inv[i, j]).p),
                           int(sp.Rational(inv[i, j]).q)) for j in range(s))
            for i in range(s)
        )
        # unit: solve sum_i u_i c[i][j][k] = delta_{jk}
        rows = []
        rhs = []
        for j in range(s):
            for k in range(s):
                rows.append([sp.Rational(c[i][j][k].numerator,
                                         c[i][j][k].denominator)
                             for i in range(s)])
                rhs.append(sp.Integer(1 if j == k else 0))
        M = sp.Matrix(rows)
        b = sp.Matrix(rhs)
        try:
            u = M.solve_least_squares(b)
        except Exception:
            raise AxiomError("unit existence")
        if M * u != b:
            raise AxiomError("unit existence")
        self.unit = tuple(
            Fraction(int(sp.Rational(u[i]).p), int(sp.Rational(u[i]).q))
            for i in range(s)
        )
        self.counit = tuple(
            sum((self.unit[a] * self.pairing[a][i] for a in range(s)),
                Fraction(0))
            for i in range(s)
        )
        self.three_point = tuple(
            tuple(
                tuple(
                    sum((c[i][j][l] * self.pairing[l][k] for l in range(s)),
                        Fraction(0))
                    for k in range(s)
                )
                for j in range(s)
            )
            for i in range(s)
        )
        inv_f = self.pairing_inverse
        self.coproduct_tensor = tuple(
            tuple(
                tuple(
                    sum(
                        (self.three_point[i][k][l] * inv_f[k][a] * inv_f[l][b]
                         for k in range(s) for l in range(s)),
                        Fraction(0),
                    )
                    for b in range(s)
                )
                for a in range(s)
            )
            for i in range(s)
        )
        # Euler element: multiply the two coproduct legs of the unit
        e = [Fraction(0)] * s
        for i in range(s):
            if self.unit[i] == 0:
                continue
            for a in range(s):
                for b in range(s):
                    w = self.unit[i] * self.coproduct_tensor[i][a][b]
                    if w == 0:
                        continue
                    for k in range(s):
                        e[k] += w * c[a][b][k]
        self.euler = tuple(e)

    def _verify(self) -> None:
        s = self.dim
        c = self.product_tensor
        for i in range(s):
            for j in range(i + 1, s):
                if c[i][j] != c[j][i]:
                    raise AxiomError("commutativity", (i, j))
        for i in range(s):
            for j in range(s):
                for l in range(s):
                    for m in range(s):
                        lhs = sum((c[i][j][k] * c[k][l][m] for k in range(s)),
                                  Fraction(0))
                        rhs = sum((c[j][l][k] * c[i][k][m] for k in range(s)),
                                  Fraction(0))
                        if lhs != rhs:
                            raise AxiomError("associativity", (i, j, l))
        phi = self.three_point
        for i in range(s):
            for j in range(s):
                for k in range(s):
                    right = sum((c[j][k][l] * self.pairing[i][l]
                                 for l in range(s)), Fraction(0))
                    if phi[i][j][k] != right:
                        raise AxiomError("Frobenius compatibility", (i, j, k))
        # counit law: (counit x id) after coproduct is the identity
        for i in range(s):
            for b in range(s):
                val = sum(
                    (self.coproduct_tensor[i][a][b] * self.counit[a]
                     for a in range(s)),
                    Fraction(0),
                )
                if val != (1 if i == b else 0):
                    raise AxiomError("counit law", (i, b))
        # coproduct of a product factors through either side
        D = self.coproduct_tensor
        for i in range(s):
            for j in range(s):
                for a in range(s):
                    for b in range(s):
                        lhs = sum((c[i][j][k] * D[k][a][b] for k in range(s)),
                                  Fraction(0))
                        rhs = sum((D[i][a][x] * c[x][j][b] for x in range(s)),
                                  Fraction(0))
                        if lhs != rhs:
                            raise AxiomError("Frobenius relation", (i, j, a, b))
        # product recovered from coproduct and pairing
        for i in range(s):
            for j in range(s):
                for a in range(s):
                    rhs = sum((D[i][a][b] * self.pairing[b][j]
                               for b in range(s)), Fraction(0))
                    if c[i][j][a] != rhs:
                        raise AxiomError(
                            "product from coproduct and pairing", (i, j, a))

    # -- elements -----------------------------------------------------------

    def element(self, coeffs: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def basis(self, i: int) -> "AlgebraElement":
        co = [Fraction(0)] * self.dim
        co[i] = Fraction(1)
        return AlgebraElement(self, co)

    def unit_element(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def euler_element(self) -> "AlgebraElement":
        return AlgebraElement(self, self.euler)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}; have {self.labels}")

    def __eq__(self, other):
        return (
            isinstance(other, FrobeniusAlgebra)
            and self.dim == other.dim
            and self.product_tensor == other.product_tensor
            and self.pairing == other.pairing
        )

    def __hash__(self):
        return hash((self.dim, self.product_tensor, self.pairing))

    def __repr__(self):
        return f"FrobeniusAlgebra(dim={self.dim}, labels={self.labels})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "product": [
                [[rat_to_str(x) for x in row] for row in plane]
                for plane in self.product_tensor
            ],
            "pairing": [[rat_to_str(x) for x in row] for row in self.pairing],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FrobeniusAlgebra":
        return cls(
            int(data["dim"]),
            data["labels"],
            data["product"],
            data["pairing"],
        )


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: FrobeniusAlgebra, coeffs: Sequence):
        if len(coeffs) != algebra.dim:
            raise ValueError("coefficient vector length does not match dim")
        self.algebra = algebra
        self.coeffs = tuple(_frac(x) for x in coeffs)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same_algebra(self, other)
        return AlgebraElement(
            self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def scale(self, r) -> "AlgebraElement":
        r = _frac(r)
        return AlgebraElement(self.algebra, [r * a for a in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.algebra), self.coeffs))

    def __repr__(self):
        terms = [
            f"{rat_to_str(c)}*{l}"
            for c, l in zip(self.coeffs, self.algebra.labels)
            if c != 0
        ]
        return " + ".join(terms) if terms else "0"


def _same_algebra(*elems) -> FrobeniusAlgebra:
    A = elems[0].algebra
    for e in elems[1:]:
        if e.algebra is not A and e.algebra != A:
            raise ValueError("algebra mismatch")
    return A


def product(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    A = _same_algebra(u, v)
    s = A.dim
    out = [Fraction(0)] * s
    for i in range(s):
        if u.coeffs[i] == 0:
            continue
        for j in range(s):
            w = u.coeffs[i] * v.coeffs[j]
            if w == 0:
                continue
            for k in range(s):
                out[k] += w * A.product_tensor[i][j][k]
    return AlgebraElement(A, out)


def pairing(u: AlgebraElement, v: AlgebraElement) -> Rational:
    A = _same_algebra(u, v)
    return sum(
        (u.coeffs[i] * v.coeffs[j] * A.pairing[i][j]
         for i in range(A.dim) for j in range(A.dim)),
        Fraction(0),
    )


def counit(v: AlgebraElement) -> Rational:
    A = v.algebra
    return sum((v.coeffs[i] * A.counit[i] for i in range(A.dim)), Fraction(0))


def three_point(u: AlgebraElement, v: AlgebraElement, w: AlgebraElement) -> Rational:
    A = _same_algebra(u, v, w)
    s = A.dim
    return sum(
        (u.coeffs[i] * v.coeffs[j] * w.coeffs[k] * A.three_point[i][j][k]
         for i in range(s) for j in range(s) for k in range(s)),
        Fraction(0),
    )


def coproduct(v: AlgebraElement):
    """Coefficient matrix of the coproduct of v on e_a (x) e_b."""
    A = v.algebra
    s = A.dim
    return [
        [
            sum((v.coeffs[i] * A.coproduct_tensor[i][a][b] for i in range(s)),
                Fraction(0))
            for b in range(s)
        ]
        for a in range(s)
    ]


def handle(v: AlgebraElement) -> AlgebraElement:
    """Multiply the two legs of the coproduct back together."""
    A = v.algebra
    mat = coproduct(v)
    s = A.dim
    out = [Fraction(0)] * s
    for a in range(s):
        for b in range(s):
            if mat[a][b] == 0:
                continue
            for k in range(s):
                out[k] += mat[a][b] * A.product_tensor[a][b][k]
    return AlgebraElement(A, out)


def euler_power(A: FrobeniusAlgebra, g: int) -> AlgebraElement:
    if g < 0:
        raise ValueError("g must be non-negative")
    acc = A.unit_element()
    e = A.euler_element()
    for _ in range(g):
        acc = product(acc, e)
    return acc


def omega_tqft(A: FrobeniusAlgebra, g: int, n: int, vs: Sequence[AlgebraElement]) -> Rational:
    """Amplitude of a genus-g surface with n inputs."""
    if n < 1 or len(vs) != n:
        raise ValueError("need n >= 1 inputs")
    acc = euler_power(A, g)
    for v in vs:
        acc = product(acc, v)
    return counit(acc)


class TwistedFunctional:
    """A multilinear map from n algebra slots, stored densely on basis tuples.

    Values are Rational or MultiRatFun; multilinear extension to general
    elements is by expansion in the basis.
    """

    __slots__ = ("algebra", "arity", "values")

    def __init__(self, algebra: FrobeniusAlgebra, arity: int, values: Mapping):
        self.algebra = algebra
        self.arity = arity
        full = {}
        for key in iproduct(range(algebra.dim), repeat=arity):
            if key not in values:
                raise ValueError(f"missing value for basis tuple {key}")
            full[key] = values[key]
        self.values = full

    @classmethod
    def from_function(
        cls, algebra: FrobeniusAlgebra, arity: int, fn: Callable
    ) -> "TwistedFunctional":
        vals = {
            key: fn(*key)
            for key in iproduct(range(algebra.dim), repeat=arity)
        }
        return cls(algebra, arity, vals)

    def __call__(self, *vs: AlgebraElement):
        if len(vs) != self.arity:
            raise ValueError("arity mismatch")
        for v in vs:
            if v.algebra is not self.algebra and v.algebra != self.algebra:
                raise ValueError("algebra mismatch")
        acc = None
        for key, val in self.values.items():
            w = Fraction(1)
            for slot, i in enumerate(key):
                w *= vs[slot].coeffs[i]
                if w == 0:
                    break
            if w == 0:
                continue
            term = w * val if not isinstance(val, MultiRatFun) else val * w
            acc = term if acc is None else acc + term
        if acc is None:
            first = next(iter(self.values.values()))
            acc = first * 0 if isinstance(first, MultiRatFun) else Fraction(0)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, TwistedFunctional)
            and self.arity == other.arity
            and self.algebra == other.algebra
            and self.values == other.values
        )

    def is_symmetric(self) -> bool:
        for key, val in self.values.items():
            for perm in permutations(key):
                if self.values[perm] != val:
                    return False
        return True


def omega_functional(A: FrobeniusAlgebra, g: int, n: int) -> TwistedFunctional:
    """Omega_{g,n} packaged on all basis tuples; for (0,1) the counit and
    for (0,2) the pairing, matching how the contraction identities fold the
    unstable cases in."""
    if (g, n) == (0, 1):
        return TwistedFunctional.from_function(A, 1, lambda i: A.counit[i])
    if (g, n) == (0, 2):
        return TwistedFunctional.from_function(
            A, 2, lambda i, j: A.pairing[i][j])
    return TwistedFunctional.from_function(
        A, n, lambda *key: omega_tqft(A, g, n, [A.basis(i) for i in key])
    )


def _mul_value(w: Fraction, val: Value) -> Value:
    if isinstance(val, MultiRatFun):
        return val * w
    return w * val


def delta_star_contract(F: TwistedFunctional) -> TwistedFunctional:
    """Kernel operator, connected form: fuse the first two slots of F into
    one slot via the coproduct of the new first argument."""
    if F.arity < 2:
        raise ValueError("need at least two slots to contract")
    A = F.algebra
    s = A.dim
    D = A.coproduct_tensor

    def val(*key):
        i1, rest = key[0], key[1:]
        acc = None
        for a in range(s):
            for b in range(s):
                w = D[i1][a][b]
                if w == 0:
                    continue
                term = _mul_value(w, F.values[(a, b) + rest])
                acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    return TwistedFunctional.from_function(A, F.arity - 1, val)


def delta_star_split(
    F1: TwistedFunctional, F2: TwistedFunctional
) -> TwistedFunctional:
    """Kernel operator, split form: distribute the coproduct legs of the
    first argument over the first slots of F1 and F2."""
    if F1.algebra != F2.algebra:
        raise ValueError("algebra mismatch")
    A = F1.algebra
    s = A.dim
    D = A.coproduct_tensor
    n1 = F1.arity - 1
    n2 = F2.arity - 1

    def val(*key):
        i1 = key[0]
        r1 = key[1:1 + n1]
        r2 = key[1 + n1:]
        acc = None
        for a in range(s):
            for b in range(s):
                w = D[i1][a][b]
                if w == 0:
                    continue
                v1 = F1.values[(a,) + r1]
                v2 = F2.values[(b,) + r2]
                term = _mul_value(w, v1 * v2)
                acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    return TwistedFunctional.from_function(A, 1 + n1 + n2, val)


def m_star_contract(F: TwistedFunctional, j: int) -> TwistedFunctional:
    """Cokernel operator: insert a new slot j whose input is multiplied
    into slot 1 before evaluating F.  Slots are 1-based; 2 <= j <= n."""
    n = F.arity + 1
    if not 2 <= j <= n:
        raise ValueError(f"slot {j} out of range 2..{n}")
    A = F.algebra
    s = A.dim
    c = A.product_tensor

    def val(*key):
        i1 = key[0]
        ij = key[j - 1]
        rest = tuple(key[k] for k in range(1, n) if k != j - 1)
        acc = None
        for k in range(s):
            w = c[i1][ij][k]
            if w == 0:
                continue
            term = _mul_value(w, F.values[(k,) + rest])
            acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    return TwistedFunctional.from_function(A, n, val)


def trivial_algebra() -> FrobeniusAlgebra:
    return FrobeniusAlgebra(1, ["1"], [[[1]]], [[1]])
