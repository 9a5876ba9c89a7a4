"""Concrete group families with canonical-form elements.

Every family stores elements as plain integers or nested tuples of
integers in a unique normal form, so equality and hashing are structural.
Implemented families:

* ``cyclic(n)``                 -- Z_n, elements are residues
* ``fin_abelian(m1,...,mr)``    -- direct sum of cyclic groups
* ``abelian(l,d)``              -- Z^l (+) Z_d, elements ``(v, t)``
* ``sd4(l,d)`` / ``sd4(n)``     -- Z_4 acting by sign on Z^l (+) Z_d;
                                   the one-argument form means Z_4 |x Z_{2^(n-1)}
* ``sd2(l,d)`` / ``sd2(n)``     -- same with Z_2 acting by sign
* ``quaternion(n)``             -- generalized quaternion group of order 2^n
* ``dihedral(n)``               -- D_{2n} of order 2n, elements ``r^j s^e``
* ``limitQ(l,k)``               -- Z_4 |x (Z^l (+) Z_{2^k}) modulo the central
                                   pair {(0,0), (2, 2^(k-1))}, the limit family
                                   of the quaternion groups
* ``limitD(l,k)``               -- Z_2 |x (Z^l (+) Z_k), the limit family of
                                   the dihedral groups
* central quotients of any implemented group by a finite central subgroup

The semidirect-product convention is
``(x1, a1) (x2, a2) = (x1 + x2, (-1)^{x2} a1 + a2)``; it reproduces the
standard quaternion presentation relations, which the test suite checks.
"""

from __future__ import annotations

import math
import re
from itertools import product as _iproduct
from typing import Iterable, Iterator, Optional, Sequence

INFINITE = math.inf


class InfiniteGroupError(ValueError):
    """Raised when a finite enumeration is requested from an infinite family."""


def format_element(g) -> str:
    """Canonical compact text form of an element (deterministic)."""
    if isinstance(g, tuple):
        return "(" + ",".join(format_element(x) for x in g) + ")"
    return str(g)


class Group:
    """Base class: immutable descriptor, canonical elements, pure operations.

    ``_mul``/``_inv`` are the fast unchecked operations used by enumeration
    loops; ``mul``/``inv`` validate their operands first.
    """

    is_finite = False

    def __init__(self, descriptor: str):
        self._descriptor = descriptor
        self.generators: dict[str, object] = {}

    @property
    def descriptor(self) -> str:
        return self._descriptor

    def __repr__(self) -> str:
        return self._descriptor

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self._descriptor == other._descriptor

    def __hash__(self) -> int:
        return hash(self._descriptor)

    # -- core operations -------------------------------------------------
    identity = None

    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def check_element(self, g) -> None:
        raise NotImplementedError

    def mul(self, a, b):
        self.check_element(a)
        self.check_element(b)
        return self._mul(a, b)

    def inv(self, a):
        self.check_element(a)
        return self._inv(a)

    def eq(self, a, b) -> bool:
        self.check_element(a)
        self.check_element(b)
        return a == b

    def power(self, g, n: int):
        """g**n by repeated squaring."""
        self.check_element(g)
        if n < 0:
            g, n = self._inv(g), -n
        out = self.identity
        while n:
            if n & 1:
                out = self._mul(out, g)
            g = self._mul(g, g)
            n >>= 1
        return out

    # -- census operations ------------------------------------------------
    def size(self):
        raise NotImplementedError

    def elements(self) -> list:
        raise InfiniteGroupError(f"{self._descriptor} is infinite; cannot enumerate")

    def order_of(self, g):
        """Least n >= 1 with g^n = identity, or math.inf."""
        self.check_element(g)
        return self._order_by_iteration(g)

    def _order_by_iteration(self, g, cap: Optional[int] = None):
        ident = self.identity
        if g == ident:
            return 1
        if cap is None:
            if not self.is_finite:
                raise InfiniteGroupError(
                    f"cannot iterate order in infinite {self._descriptor} without a cap"
                )
            cap = self.size()
        e = g
        for n in range(1, cap + 1):
            if e == ident:
                return n
            e = self._mul(e, g)
        raise RuntimeError(f"order iteration exceeded cap {cap} in {self._descriptor}")

    def involutions(self) -> list:
        """All g != 1 with g^2 = 1 (exhaustive for finite groups)."""
        if not self.is_finite:
            raise InfiniteGroupError(
                f"no closed-form involution solver for {self._descriptor}"
            )
        ident = self.identity
        return [g for g in self.elements() if g != ident and self._mul(g, g) == ident]

    def center(self) -> tuple:
        """All elements commuting with everything (brute force for finite groups)."""
        if not self.is_finite:
            raise InfiniteGroupError(f"no center formula for {self._descriptor}")
        elems = self.elements()
        out = [g for g in elems if all(self._mul(g, h) == self._mul(h, g) for h in elems)]
        return tuple(out)

    def standard_marking(self) -> tuple:
        seen = []
        for v in self.generators.values():
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def generator_names(self) -> tuple[str, ...]:
        return tuple(self.generators.keys())


# ---------------------------------------------------------------------------
# abelian families


class Cyclic(Group):
    is_finite = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclic order must be >= 1")
        super().__init__(f"cyclic({n})")
        self.n = n
        self.identity = 0
        self.generators = {"g": 1 % n}

    def _mul(self, a, b):
        return (a + b) % self.n

    def _inv(self, a):
        return (-a) % self.n

    def check_element(self, g):
        if not isinstance(g, int) or not 0 <= g < self.n:
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return self.n

    def elements(self):
        return list(range(self.n))

    def order_of(self, g):
        self.check_element(g)
        return self.n // math.gcd(g, self.n)

    def center(self):
        return tuple(self.elements())


class FinAbelian(Group):
    """Direct sum of cyclic groups; elements are residue tuples."""

    is_finite = True

    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive")
        super().__init__("fin_abelian(" + ",".join(map(str, moduli)) + ")")
        self.moduli = moduli
        self.identity = (0,) * len(moduli)
        self.generators = {
            f"e{i+1}": tuple(1 % m if j == i else 0 for j, m in enumerate(moduli))
            for i in range(len(moduli))
        }

    def _mul(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def _inv(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def check_element(self, g):
        if (
            not isinstance(g, tuple)
            or len(g) != len(self.moduli)
            or any(not isinstance(x, int) or not 0 <= x < m for x, m in zip(g, self.moduli))
        ):
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return math.prod(self.moduli)

    def elements(self):
        return [tuple(t) for t in _iproduct(*(range(m) for m in self.moduli))]

    def order_of(self, g):
        self.check_element(g)
        return math.lcm(*(m // math.gcd(x, m) for x, m in zip(g, self.moduli)))

    def center(self):
        return tuple(self.elements())


class FreeAbelianCyclic(Group):
    """Z^l (+) Z_d; elements are ``(v, t)`` with v an integer l-tuple."""

    def __init__(self, l: int, d: int):
        if l < 0 or d < 1:
            raise ValueError("need l >= 0 and d >= 1")
        super().__init__(f"abelian({l},{d})")
        self.l = l
        self.d = d
        self.is_finite = l == 0
        self.identity = ((0,) * l, 0)
        gens: dict[str, object] = {}
        for i in range(l):
            gens[f"a{i+1}"] = (tuple(1 if j == i else 0 for j in range(l)), 0)
        if l == 1:
            gens["a"] = gens["a1"]
        if d > 1:
            gens["t"] = ((0,) * l, 1)
        self.generators = gens

    def _mul(self, a, b):
        return (tuple(x + y for x, y in zip(a[0], b[0])), (a[1] + b[1]) % self.d)

    def _inv(self, a):
        return (tuple(-x for x in a[0]), (-a[1]) % self.d)

    def check_element(self, g):
        ok = (
            isinstance(g, tuple)
            and len(g) == 2
            and isinstance(g[0], tuple)
            and len(g[0]) == self.l
            and all(isinstance(x, int) for x in g[0])
            and isinstance(g[1], int)
            and 0 <= g[1] < self.d
        )
        if not ok:
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return self.d if self.l == 0 else INFINITE

    def elements(self):
        if not self.is_finite:
            raise InfiniteGroupError(f"{self.descriptor} is infinite; cannot enumerate")
        return [((), t) for t in range(self.d)]

    def order_of(self, g):
        self.check_element(g)
        if any(x != 0 for x in g[0]):
            return INFINITE
        return self.d // math.gcd(g[1], self.d)

    def center(self):
        if self.is_finite:
            return tuple(self.elements())
        raise InfiniteGroupError(f"{self.descriptor} is infinite abelian; center is everything")


# ---------------------------------------------------------------------------
# semidirect products with the sign action


class _SignSemidirect(Group):
    """Z_q |x (Z^l (+) Z_d) with the generator of Z_q acting by -1.

    Elements are ``(x, v, t)`` with ``x`` mod q, ``v`` an integer l-tuple
    and ``t`` mod d.
    """

    def __init__(self, q: int, l: int, d: int, descriptor: str):
        if l < 0 or d < 1:
            raise ValueError("need l >= 0 and d >= 1")
        super().__init__(descriptor)
        self.q = q
        self.l = l
        self.d = d
        self.is_finite = l == 0
        self.identity = (0, (0,) * l, 0)

    def _mul(self, a, b):
        x2 = b[0]
        if x2 & 1:
            return (
                (a[0] + x2) % self.q,
                tuple(y - x for x, y in zip(a[1], b[1])),
                (b[2] - a[2]) % self.d,
            )
        return (
            (a[0] + x2) % self.q,
            tuple(x + y for x, y in zip(a[1], b[1])),
            (a[2] + b[2]) % self.d,
        )

    def _inv(self, a):
        # (x, a)^-1 = (-x, -(-1)^x a)
        if a[0] & 1:
            return ((-a[0]) % self.q, a[1], a[2])
        return ((-a[0]) % self.q, tuple(-x for x in a[1]), (-a[2]) % self.d)

    def check_element(self, g):
        ok = (
            isinstance(g, tuple)
            and len(g) == 3
            and isinstance(g[0], int)
            and 0 <= g[0] < self.q
            and isinstance(g[1], tuple)
            and len(g[1]) == self.l
            and all(isinstance(x, int) for x in g[1])
            and isinstance(g[2], int)
            and 0 <= g[2] < self.d
        )
        if not ok:
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return self.q * self.d if self.l == 0 else INFINITE

    def elements(self):
        if not self.is_finite:
            raise InfiniteGroupError(f"{self.descriptor} is infinite; cannot enumerate")
        return [(x, (), t) for x in range(self.q) for t in range(self.d)]

    def order_of(self, g):
        self.check_element(g)
        if g[0] & 1:
            # odd part acts by -1, so the square kills the abelian coordinates
            return self._order_by_iteration(g, cap=2 * self.q)
        if any(x != 0 for x in g[1]):
            return INFINITE
        return self._order_by_iteration(g, cap=self.q * self.d)

    def box_elements(self, bound: int) -> Iterator[tuple]:
        """All elements with every free coordinate in [-bound, bound]."""
        for x in range(self.q):
            for v in _iproduct(*(range(-bound, bound + 1),) * self.l):
                for t in range(self.d):
                    yield (x, v, t)


class Sd4(_SignSemidirect):
    """Z_4 |x (Z^l (+) Z_d), the covering family of the quaternion groups."""

    def __init__(self, l: int, d: int):
        super().__init__(4, l, d, f"sd4({l},{d})")
        gens: dict[str, object] = {"y": (1, (0,) * l, 0)}
        for i in range(l):
            gens[f"a{i+1}"] = (0, tuple(1 if j == i else 0 for j in range(l)), 0)
        if l == 1:
            gens["a"] = gens["a1"]
        gens["x"] = (0, (0,) * l, 1 % d)
        self.generators = gens

    def standard_marking(self):
        if self.l == 0:
            return (self.generators["x"], self.generators["y"])
        return (self.generators["y"],) + tuple(
            self.generators[f"a{i+1}"] for i in range(self.l)
        ) + (self.generators["x"],)

    def center_formula(self) -> tuple:
        """The structural center: x even, free part zero, torsion in {0, d/2}."""
        torsion = [0] if self.d == 1 else ([0, self.d // 2] if self.d % 2 == 0 else [0])
        zeros = (0,) * self.l
        out = [(x, zeros, t) for x in (0, 2) for t in torsion]
        if self.l == 0 and self.d <= 2:
            # the action is trivial, the whole group is abelian
            return tuple(sorted(self.elements()))
        return tuple(sorted(out))

    def center(self):
        if self.is_finite:
            brute = super().center()
            if set(brute) != set(self.center_formula()):
                raise AssertionError(
                    f"center formula disagrees with exhaustion on {self.descriptor}"
                )
            return brute
        formula = self.center_formula()
        # bounded cross-check: nothing else in a small box commutes with all generators
        gens = list(self.generators.values())
        for g in self.box_elements(2):
            central = all(self._mul(g, h) == self._mul(h, g) for h in gens)
            if central != (g in formula):
                raise AssertionError(
                    f"center formula disagrees with the box census on {self.descriptor} at {g}"
                )
        return formula

    def involutions(self):
        zeros = (0,) * self.l
        out = [(2, zeros, 0)]
        if self.d % 2 == 0:
            out += [(0, zeros, self.d // 2), (2, zeros, self.d // 2)]
        out = [g for g in sorted(out) if g != self.identity]
        if self.is_finite:
            brute = super().involutions()
            if set(brute) != set(out):
                raise AssertionError(
                    f"involution formula disagrees with exhaustion on {self.descriptor}"
                )
            return brute
        return out


class Sd2(_SignSemidirect):
    """Z_2 |x (Z^l (+) Z_d); for l = 0 this is the dihedral group of order 2d."""

    def __init__(self, l: int, d: int, label: str = "sd2"):
        super().__init__(2, l, d, f"{label}({l},{d})")
        gens: dict[str, object] = {"s": (1, (0,) * l, 0)}
        for i in range(l):
            gens[f"a{i+1}"] = (0, tuple(1 if j == i else 0 for j in range(l)), 0)
        if l == 1:
            gens["a"] = gens["a1"]
        if d > 1:
            gens["t"] = (0, (0,) * l, 1)
            gens["r"] = gens["t"]
        self.generators = gens

    def standard_marking(self):
        if self.l == 0 and self.d > 1:
            return (self.generators["r"], self.generators["s"])
        out = [self.generators["s"]]
        out += [self.generators[f"a{i+1}"] for i in range(self.l)]
        if self.d > 1:
            out.append(self.generators["t"])
        return tuple(out)

    def involutions(self):
        if self.is_finite:
            return super().involutions()
        raise InfiniteGroupError(
            f"{self.descriptor} has infinitely many involutions (every reflection)"
        )

    def center(self):
        if self.is_finite:
            return super().center()
        zeros = (0,) * self.l
        torsion = [0] if self.d % 2 else [0, self.d // 2]
        formula = tuple(sorted((0, zeros, t) for t in torsion))
        formula = tuple(g for g in formula)
        gens = list(self.generators.values())
        for g in self.box_elements(2):
            central = all(self._mul(g, h) == self._mul(h, g) for h in gens)
            if central != (g in formula):
                raise AssertionError(
                    f"center formula disagrees with the box census on {self.descriptor} at {g}"
                )
        return formula


# ---------------------------------------------------------------------------
# quaternion and dihedral normal forms


class Quaternion(Group):
    """Generalized quaternion group of order 2^n.

    Realized as Z_4 |x Z_{2^(n-1)} modulo the central pair
    {(0,0), (2, 2^(n-2))}; the canonical coset representative has x in
    {0, 1}.  Named generators: ``x = (0,1)`` of order 2^(n-1) and
    ``y = (1,0)`` of order 4 with ``y x y^-1 = x^-1`` and
    ``x^(2^(n-2)) = y^2``.
    """

    is_finite = True

    def __init__(self, n: int):
        if n < 3:
            raise ValueError("quaternion(n) needs n >= 3")
        super().__init__(f"quaternion({n})")
        self.n = n
        self.d = 2 ** (n - 1)
        self.half = 2 ** (n - 2)
        self.identity = (0, 0)
        self.generators = {"x": (0, 1), "y": (1, 0)}

    def _mul(self, a, b):
        x = a[0] + b[0]
        t = (b[1] - a[1] if b[0] else a[1] + b[1]) % self.d
        if x >= 2:
            return (x - 2, (t + self.half) % self.d)
        return (x, t)

    def _inv(self, a):
        if a[0]:
            return (1, (a[1] + self.half) % self.d)
        return (0, (-a[1]) % self.d)

    def check_element(self, g):
        if (
            not isinstance(g, tuple)
            or len(g) != 2
            or g[0] not in (0, 1)
            or not isinstance(g[1], int)
            or not 0 <= g[1] < self.d
        ):
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return 2 * self.d

    def elements(self):
        return [(x, t) for x in (0, 1) for t in range(self.d)]


class Dihedral(Group):
    """D_{2n} of order 2n; elements ``(j, e)`` stand for ``r^j s^e``."""

    is_finite = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("dihedral(n) needs n >= 1")
        super().__init__(f"dihedral({n})")
        self.n = n
        self.identity = (0, 0)
        self.generators = {"r": (1 % n, 0), "s": (0, 1)}

    def _mul(self, a, b):
        j = (a[0] - b[0] if a[1] else a[0] + b[0]) % self.n
        return (j, (a[1] + b[1]) & 1)

    def _inv(self, a):
        if a[1]:
            return a
        return ((-a[0]) % self.n, 0)

    def check_element(self, g):
        if (
            not isinstance(g, tuple)
            or len(g) != 2
            or not isinstance(g[0], int)
            or not 0 <= g[0] < self.n
            or g[1] not in (0, 1)
        ):
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return 2 * self.n

    def elements(self):
        return [(j, e) for j in range(self.n) for e in (0, 1)]


class LimitQuaternion(Group):
    """The limit family: Z_4 |x (Z^l (+) Z_{2^k}) modulo {(0,0), (2, 2^(k-1))}.

    Canonical representatives have x in {0, 1}; folding x by 2 shifts the
    torsion coordinate by 2^(k-1).  Finite exactly when l = 0 (order
    2^(k+1), isomorphic to quaternion(k+1)).
    """

    def __init__(self, l: int, k: int):
        if l < 0 or k < 1:
            raise ValueError("limitQ(l,k) needs l >= 0 and k >= 1")
        super().__init__(f"limitQ({l},{k})")
        self.l = l
        self.k = k
        self.d = 2**k
        self.half = 2 ** (k - 1)
        self.is_finite = l == 0
        self.identity = (0, (0,) * l, 0)
        gens: dict[str, object] = {"y": (1, (0,) * l, 0)}
        for i in range(l):
            gens[f"a{i+1}"] = (0, tuple(1 if j == i else 0 for j in range(l)), 0)
        if l == 1:
            gens["a"] = gens["a1"]
        gens["t"] = (0, (0,) * l, 1 % self.d)
        self.generators = gens
        notes = []
        if l == 0:
            notes.append(f"finite of order {2 ** (k + 1)}")
        if k == 1:
            notes.append("k=1: torsion part Z_2, a degenerate edge of the family")
        if l == 0 and k == 1:
            notes.append("isomorphic to cyclic(4), hence abelian")
        self.degeneracies = tuple(notes)

    def _mul(self, a, b):
        x = a[0] + b[0]
        if b[0]:
            v = tuple(y - z for z, y in zip(a[1], b[1]))
            t = (b[2] - a[2]) % self.d
        else:
            v = tuple(z + y for z, y in zip(a[1], b[1]))
            t = (a[2] + b[2]) % self.d
        if x >= 2:
            return (x - 2, v, (t + self.half) % self.d)
        return (x, v, t)

    def _inv(self, a):
        if a[0]:
            return (1, a[1], (a[2] + self.half) % self.d)
        return (0, tuple(-x for x in a[1]), (-a[2]) % self.d)

    def check_element(self, g):
        ok = (
            isinstance(g, tuple)
            and len(g) == 3
            and g[0] in (0, 1)
            and isinstance(g[1], tuple)
            and len(g[1]) == self.l
            and all(isinstance(x, int) for x in g[1])
            and isinstance(g[2], int)
            and 0 <= g[2] < self.d
        )
        if not ok:
            raise ValueError(f"{g!r} is not an element of {self.descriptor}")

    def size(self):
        return 2 * self.d if self.l == 0 else INFINITE

    def elements(self):
        if not self.is_finite:
            raise InfiniteGroupError(f"{self.descriptor} is infinite; cannot enumerate")
        return [(x, (), t) for x in (0, 1) for t in range(self.d)]

    def order_of(self, g):
        self.check_element(g)
        if g[0]:
            # squaring an odd-x element lands on the torsion involution
            return self._order_by_iteration(g, cap=8)
        if any(x != 0 for x in g[1]):
            return INFINITE
        return self.d // math.gcd(g[2], self.d)

    def involutions(self):
        """Closed form: the image of (0, 0, 2^(k-1)) is the only involution."""
        sole = (0, (0,) * self.l, self.half % self.d)
        if sole == self.identity:  # k = 1 folds 2^(k-1) = 1, never to 0
            raise AssertionError("involution solver degenerated")
        return [sole]

    def center(self):
        if self.is_finite:
            return super().center()
        formula = (self.identity, (0, (0,) * self.l, self.half))
        gens = list(self.generators.values())
        for g in self.box_elements(2):
            central = all(self._mul(g, h) == self._mul(h, g) for h in gens)
            if central != (g in formula):
                raise AssertionError(
                    f"center formula disagrees with the box census on {self.descriptor} at {g}"
                )
        return formula

    def box_elements(self, bound: int) -> Iterator[tuple]:
        for x in (0, 1):
            for v in _iproduct(*(range(-bound, bound + 1),) * self.l):
                for t in range(self.d):
                    yield (x, v, t)


# ---------------------------------------------------------------------------
# central quotients


class CentralQuotient(Group):
    """Quotient of a group by a finite central subgroup.

    Elements are canonical coset representatives: the minimum of the coset
    under the lexicographic order on canonical forms.  Works for finite
    groups and for the sign-semidirect families (where centrality of the
    kernel is certified by the center formula).
    """

    def __init__(self, inner: Group, kernel: Iterable):
        kernel = tuple(sorted(set(kernel)))
        for k in kernel:
            inner.check_element(k)
        if inner.identity not in kernel:
            raise ValueError("kernel must contain the identity")
        kset = set(kernel)
        for a in kernel:
            if inner._inv(a) not in kset:
                raise ValueError(f"kernel is not inverse-closed at {a!r}")
            for b in kernel:
                if inner._mul(a, b) not in kset:
                    raise ValueError(f"kernel is not closed under products at {a!r}, {b!r}")
        if inner.is_finite:
            for k in kernel:
                for g in inner.elements():
                    if inner._mul(k, g) != inner._mul(g, k):
                        raise ValueError(f"kernel element {k!r} is not central")
        elif isinstance(inner, _SignSemidirect):
            if not kset <= set(inner.center()):
                raise ValueError("kernel is not inside the center of the cover")
        else:
            raise ValueError(
                f"cannot certify centrality of the kernel inside {inner.descriptor}"
            )
        super().__init__(
            "central_quotient("
            + inner.descriptor
            + ",{"
            + ",".join(format_element(k) for k in kernel)
            + "})"
        )
        self.inner = inner
        self.kernel = kernel
        self.is_finite = inner.is_finite
        self.identity = self._canon(inner.identity)
        self.generators = {name: self._canon(g) for name, g in inner.generators.items()}

    def _canon(self, g):
        mul = self.inner._mul
        return min(mul(g, k) for k in self.kernel)

    def _mul(self, a, b):
        return self._canon(self.inner._mul(a, b))

    def _inv(self, a):
        return self._canon(self.inner._inv(a))

    def check_element(self, g):
        self.inner.check_element(g)
        if self._canon(g) != g:
            raise ValueError(f"{g!r} is not a canonical coset representative")

    def size(self):
        n = self.inner.size()
        if n is INFINITE:
            return INFINITE
        if n % len(self.kernel):
            raise AssertionError("kernel size does not divide the group order")
        return n // len(self.kernel)

    def elements(self):
        if not self.is_finite:
            raise InfiniteGroupError(f"{self.descriptor} is infinite; cannot enumerate")
        return sorted({self._canon(g) for g in self.inner.elements()})

    def order_of(self, g):
        self.check_element(g)
        if self.is_finite:
            return self._order_by_iteration(g, cap=self.size())
        # infinite case: inner is a sign semidirect product
        if g[0] & 1:
            return self._order_by_iteration(g, cap=2 * self.inner.q)
        if any(x != 0 for x in g[1]):
            return INFINITE  # the kernel has trivial free part, powers keep growing
        return self._order_by_iteration(g, cap=self.inner.q * self.inner.d)

    def involution_census(self):
        """(count, sorted representatives); count may be math.inf.

        For an infinite sign-semidirect cover the census is exact: squaring
        doubles the free part, so an involution coset has a representative
        with free part zero unless the whole odd-x stratum consists of
        involutions (exactly when (2, 0, 0) lies in the kernel).
        """
        ident = self.identity
        if self.is_finite:
            out = [g for g in self.elements() if g != ident and self._mul(g, g) == ident]
            return (len(out), out)
        inner = self.inner
        kset = set(self.kernel)
        zeros = (0,) * inner.l
        found = set()
        for x in range(inner.q):
            for t in range(inner.d):
                g = (x, zeros, t)
                if inner._mul(g, g) in kset:
                    c = self._canon(g)
                    if c != ident:
                        found.add(c)
        odd_stratum_infinite = inner.l >= 1 and (2 % inner.q, zeros, 0) in kset
        count = INFINITE if odd_stratum_infinite else len(found)
        return (count, sorted(found))

    def involutions(self):
        count, reps = self.involution_census()
        if count is INFINITE:
            raise InfiniteGroupError(f"{self.descriptor} has infinitely many involutions")
        return reps

    def center(self):
        if self.is_finite:
            return super().center()
        raise InfiniteGroupError(f"no center formula for {self.descriptor}")


def central_quotient(group: Group, kernel: Iterable) -> CentralQuotient:
    """Quotient by a finite central subgroup, with canonical representatives."""
    return CentralQuotient(group, kernel)


# ---------------------------------------------------------------------------
# subgroup helpers


def generated_closure(group: Group, gens: Iterable, limit: Optional[int] = None) -> set:
    """Closure of a generating set under products and inverses (BFS)."""
    gens = list(gens)
    for g in gens:
        group.check_element(g)
    step = gens + [group._inv(g) for g in gens]
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for e in frontier:
            for s in step:
                t = group._mul(e, s)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
                    if limit is not None and len(seen) > limit:
                        raise RuntimeError(f"closure exceeded limit {limit}")
        frontier = nxt
    return seen


def is_subgroup_witness(group: Group, elems: Iterable) -> bool:
    """True when the finite element list is closed under product and inverse."""
    elems = set(elems)
    if group.identity not in elems:
        return False
    for a in elems:
        if group._inv(a) not in elems:
            return False
        for b in elems:
            if group._mul(a, b) not in elems:
                return False
    return True


def cyclic_subgroup(group: Group, g) -> tuple:
    """The cyclic subgroup generated by a torsion element, sorted."""
    n = group.order_of(g)
    if n is INFINITE:
        raise InfiniteGroupError("element has infinite order")
    out = {group.identity}
    e = g
    while e not in out:
        out.add(e)
        e = group._mul(e, g)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# isomorphism search


def _order_multiset(group: Group) -> dict:
    counts: dict = {}
    for g in group.elements():
        o = group.order_of(g)
        counts[o] = counts.get(o, 0) + 1
    return counts


def _extend_by_images(G: Group, H: Group, gens: Sequence, images: Sequence):
    """Extend generator images to a full map along the Cayley graph.

    Returns the element map when every edge is consistent, else None.
    """
    pairs = list(zip(gens, images))
    pairs += [(G._inv(g), H._inv(h)) for g, h in pairs]
    phi = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            hg = phi[g]
            for s, hs in pairs:
                g2 = G._mul(g, s)
                h2 = H._mul(hg, hs)
                known = phi.get(g2)
                if known is None:
                    phi[g2] = h2
                    nxt.append(g2)
                elif known != h2:
                    return None
        frontier = nxt
    return phi


def iso_search(G: Group, H: Group) -> Optional[dict]:
    """Search for an isomorphism between two finite groups.

    Returns a generator-image table ``{name: image}`` for the first
    isomorphism found in a fixed deterministic order, or None.  Candidate
    images are pruned by element order; a full candidate is accepted when
    the induced map covers the Cayley graph consistently and bijectively.
    """
    if not (G.is_finite and H.is_finite):
        raise InfiniteGroupError("isomorphism search needs finite groups")
    if G.size() != H.size():
        return None
    if _order_multiset(G) != _order_multiset(H):
        return None
    names: list[str] = []
    gens: list = []
    for name, g in G.generators.items():
        if g not in gens:
            names.append(name)
            gens.append(g)
    if len(generated_closure(G, gens)) != G.size():
        raise ValueError(f"named generators do not generate {G.descriptor}")
    h_elems = H.elements()
    by_order: dict = {}
    for h in h_elems:
        by_order.setdefault(H.order_of(h), []).append(h)
    candidate_pools = [by_order.get(G.order_of(g), []) for g in gens]
    size = G.size()
    for images in _iproduct(*candidate_pools):
        phi = _extend_by_images(G, H, gens, images)
        if phi is None or len(phi) != size:
            continue
        if len(set(phi.values())) == size:
            return dict(zip(names, images))
    return None


# ---------------------------------------------------------------------------
# spec-style operation aliases

def mul(group: Group, a, b):
    return group.mul(a, b)


def inv(group: Group, a):
    return group.inv(a)


def identity(group: Group):
    return group.identity


def eq(group: Group, a, b) -> bool:
    return group.eq(a, b)


def order(group: Group, g):
    return group.order_of(g)


def elements(group: Group) -> list:
    return group.elements()


def involutions(group: Group) -> list:
    return group.involutions()


def center(group: Group) -> tuple:
    return group.center()


# ---------------------------------------------------------------------------
# descriptor mini-language

_DESCRIPTOR = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(\s*([-0-9,\s]*)\s*\)\s*$")


def parse_group(text: str) -> Group:
    """Parse ``quaternion(3)``, ``sd4(4)``, ``limitQ(1,1)``, ... into a group."""
    mt = _DESCRIPTOR.match(text)
    if not mt:
        raise ValueError(f"cannot parse group descriptor {text!r}")
    name = mt.group(1)
    args = [int(a) for a in mt.group(2).split(",") if a.strip()] if mt.group(2).strip() else []

    def need(n):
        if len(args) != n:
            raise ValueError(f"{name} takes {n} argument(s), got {len(args)}")

    if name == "cyclic":
        need(1)
        return Cyclic(args[0])
    if name == "fin_abelian":
        if not args:
            raise ValueError("fin_abelian needs at least one modulus")
        return FinAbelian(args)
    if name == "abelian":
        need(2)
        return FreeAbelianCyclic(args[0], args[1])
    if name == "sd4":
        if len(args) == 1:
            n = args[0]
            if n < 2:
                raise ValueError("sd4(n) needs n >= 2")
            return Sd4(0, 2 ** (n - 1))
        need(2)
        return Sd4(args[0], args[1])
    if name == "sd2":
        if len(args) == 1:
            if args[0] < 1:
                raise ValueError("sd2(n) needs n >= 1")
            return Sd2(0, args[0])
        need(2)
        return Sd2(args[0], args[1])
    if name == "quaternion":
        need(1)
        return Quaternion(args[0])
    if name == "dihedral":
        need(1)
        return Dihedral(args[0])
    if name == "limitQ":
        need(2)
        return LimitQuaternion(args[0], args[1])
    if name == "limitD":
        need(2)
        return Sd2(args[0], args[1], label="limitD")
    raise ValueError(f"unknown group family {name!r}")
