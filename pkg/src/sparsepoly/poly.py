"""Multilinear polynomials over GF(2) and assignments to their variables.

A monomial is a set of variable indices (the empty set is the constant 1).
A polynomial is an XOR of distinct monomials; addition cancels duplicate
monomials eagerly, so the zero polynomial is the empty monomial set.
Arity is explicit everywhere and may be very large: assignments support a
sparse ones-set representation alongside the dense bit-vector one, so the
same API works at arity 12 and arity 10**10.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

# Largest arity for which we materialize dense bit vectors / truth tables.
DENSE_ARITY_LIMIT = 10**6
EXACT_ENUM_LIMIT = 20

Monomial = frozenset  # frozenset[int]; the empty frozenset is the constant 1


def monomial(indices: Iterable[int] = ()) -> Monomial:
    """Build a monomial from variable indices."""
    m = frozenset(indices)
    for j in m:
        if not isinstance(j, (int, np.integer)) or j < 0:
            raise ValueError(f"bad variable index {j!r}")
    return frozenset(int(j) for j in m)


def _mono_key(m: Monomial) -> tuple:
    return tuple(sorted(m))


class Assignment:
    """A point of {0,1}^n, stored densely (int bit vector) or sparsely
    (set of one-positions) depending on how it was built."""

    __slots__ = ("n", "_bits", "_ones")

    def __init__(self, n: int, *, bits: int | None = None,
                 ones: frozenset | None = None):
        if n < 0:
            raise ValueError("arity must be nonnegative")
        if (bits is None) == (ones is None):
            raise ValueError("exactly one of bits/ones required")
        self.n = int(n)
        if bits is not None:
            if bits < 0 or bits >> n:
                raise ValueError("bit vector out of range for arity")
            self._bits: int | None = int(bits)
            self._ones: frozenset | None = None
        else:
            ones = frozenset(int(j) for j in ones)
            if ones and (min(ones) < 0 or max(ones) >= n):
                raise ValueError("one-position out of range for arity")
            self._bits = None
            self._ones = ones

    @classmethod
    def zeros(cls, n: int) -> "Assignment":
        return cls(n, ones=frozenset())

    @classmethod
    def ones_at(cls, n: int, indices: Iterable[int]) -> "Assignment":
        return cls(n, ones=frozenset(indices))

    @classmethod
    def all_ones(cls, n: int) -> "Assignment":
        if n > DENSE_ARITY_LIMIT:
            raise ValueError("all-ones assignment too large to materialize")
        return cls(n, bits=(1 << n) - 1)

    @classmethod
    def from_bits(cls, values: Sequence[int]) -> "Assignment":
        bits = 0
        for j, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError("assignment entries must be 0 or 1")
            bits |= v << j
        return cls(len(values), bits=bits)

    @property
    def bits(self) -> int:
        """Dense bit vector; materialized on demand."""
        if self._bits is None:
            if self.n > DENSE_ARITY_LIMIT:
                raise ValueError("arity too large for dense bit vector")
            b = 0
            for j in self._ones:
                b |= 1 << j
            self._bits = b
        return self._bits

    @property
    def support(self) -> frozenset:
        """Set of positions holding a 1."""
        if self._ones is None:
            b = self._bits
            ones = set()
            while b:
                low = b & -b
                ones.add(low.bit_length() - 1)
                b ^= low
            self._ones = frozenset(ones)
        return self._ones

    def weight(self) -> int:
        if self._ones is not None:
            return len(self._ones)
        return self._bits.bit_count()

    def bit(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(j)
        if self._ones is not None:
            return 1 if j in self._ones else 0
        return (self._bits >> j) & 1

    def product(self, other: "Assignment") -> "Assignment":
        """Componentwise AND."""
        if self.n != other.n:
            raise ValueError("arity mismatch")
        if self._ones is not None or other._ones is not None:
            return Assignment(self.n, ones=self.support & other.support)
        return Assignment(self.n, bits=self._bits & other._bits)

    def with_bit(self, j: int, value: int) -> "Assignment":
        if value not in (0, 1):
            raise ValueError("bit value must be 0 or 1")
        if not 0 <= j < self.n:
            raise IndexError(j)
        if self._ones is not None:
            ones = set(self._ones)
            ones.discard(j)
            if value:
                ones.add(j)
            return Assignment(self.n, ones=frozenset(ones))
        bits = self._bits & ~(1 << j) | (value << j)
        return Assignment(self.n, bits=bits)

    def __mul__(self, other: "Assignment") -> "Assignment":
        return self.product(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        if self.n != other.n:
            return False
        if self._ones is not None and other._ones is not None:
            return self._ones == other._ones
        if self._bits is not None and other._bits is not None:
            return self._bits == other._bits
        return self.support == other.support

    def __hash__(self):
        return hash((self.n, self.support))

    def __repr__(self):
        if self.n <= 64:
            s = "".join(str(self.bit(j)) for j in range(self.n))
            return f"Assignment({s!r})"
        return f"Assignment(n={self.n}, weight={self.weight()})"


class SparsePoly:
    """Multilinear polynomial over GF(2): an XOR of distinct monomials."""

    __slots__ = ("n", "_monos", "_masks")

    def __init__(self, n: int, monomials: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("arity must be nonnegative")
        self.n = int(n)
        # duplicate monomials cancel in pairs
        acc: set = set()
        for raw in monomials:
            m = monomial(raw)
            if acc and m in acc:
                acc.discard(m)
            else:
                acc.add(m)
        for m in acc:
            if m and max(m) >= self.n:
                raise ValueError(f"monomial {sorted(m)} exceeds arity {self.n}")
        self._monos: frozenset = frozenset(acc)
        self._masks: list | None = None

    @classmethod
    def zero(cls, n: int) -> "SparsePoly":
        return cls(n, ())

    @classmethod
    def one(cls, n: int) -> "SparsePoly":
        return cls(n, (frozenset(),))

    @property
    def monomials(self) -> list:
        """Monomials in canonical (lexicographic) order, as sorted tuples."""
        return sorted((_mono_key(m) for m in self._monos))

    @property
    def monomial_sets(self) -> frozenset:
        return self._monos

    @property
    def sparsity(self) -> int:
        return len(self._monos)

    @property
    def degree(self) -> int:
        """Largest monomial size; 0 for the zero polynomial."""
        if not self._monos:
            return 0
        return max(len(m) for m in self._monos)

    def is_zero(self) -> bool:
        return not self._monos

    def relevant_variables(self) -> frozenset:
        vs: set = set()
        for m in self._monos:
            vs |= m
        return frozenset(vs)

    def _mask_list(self) -> list:
        if self._masks is None:
            if self.n > DENSE_ARITY_LIMIT:
                raise ValueError("arity too large for dense monomial masks")
            masks = []
            for m in self._monos:
                b = 0
                for j in m:
                    b |= 1 << j
                masks.append(b)
            self._masks = masks
        return self._masks

    def evaluate(self, a: "Assignment | int") -> int:
        if isinstance(a, Assignment):
            if a.n != self.n:
                raise ValueError("arity mismatch")
            if a._ones is not None:
                ones = a._ones
                acc = 0
                for m in self._monos:
                    if m <= ones:
                        acc ^= 1
                return acc
            x = a.bits
        else:
            x = int(a)
            if x < 0 or x >> self.n:
                raise ValueError("bit vector out of range for arity")
        acc = 0
        for mask in self._mask_list():
            if x & mask == mask:
                acc ^= 1
        return acc

    def __call__(self, a) -> int:
        return self.evaluate(a)

    def add(self, other: "SparsePoly") -> "SparsePoly":
        """GF(2) sum (symmetric difference of monomial sets)."""
        if self.n != other.n:
            raise ValueError("arity mismatch")
        out = SparsePoly(self.n)
        out._monos = self._monos ^ other._monos
        return out

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        return self.add(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.n == other.n and self._monos == other._monos

    def __hash__(self):
        return hash((self.n, self._monos))

    def restrict_and(self, a: "Assignment") -> "SparsePoly":
        """Substitute x -> a*x: monomials touching a zero of `a` vanish."""
        if a.n != self.n:
            raise ValueError("arity mismatch")
        kept = []
        if a._ones is not None:
            ones = a._ones
            for m in self._monos:
                if m <= ones:
                    kept.append(m)
        else:
            bits = a.bits
            for m in self._monos:
                ok = True
                for j in m:
                    if not (bits >> j) & 1:
                        ok = False
                        break
                if ok:
                    kept.append(m)
        return SparsePoly(self.n, kept)

    def substitute_vars(self, var_map: dict, n_out: int) -> "SparsePoly":
        """Rename variables via var_map (must cover every relevant variable).

        Distinct monomials may collide after renaming; collisions cancel."""
        monos = []
        for m in self._monos:
            monos.append(frozenset(var_map[j] for j in m))
        return SparsePoly(n_out, monos)

    def __repr__(self):
        if not self._monos:
            return f"SparsePoly(n={self.n}, 0)"
        terms = []
        for key in self.monomials[:8]:
            terms.append("1" if not key else "*".join(f"x{j}" for j in key))
        body = " + ".join(terms)
        if self.sparsity > 8:
            body += f" + ... ({self.sparsity} terms)"
        return f"SparsePoly(n={self.n}, {body})"


# ---------------------------------------------------------------------------
# Truth tables and exact probabilities


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr)


def truth_table(p: SparsePoly) -> np.ndarray:
    """Dense truth table over all 2^n points, index j = bit vector j."""
    n = p.n
    if n > EXACT_ENUM_LIMIT + 4:
        raise ValueError(f"arity {n} too large for a truth table")
    size = 1 << n
    idx = np.arange(size, dtype=np.uint64)
    out = np.zeros(size, dtype=np.uint8)
    for mask in p._mask_list():
        m = np.uint64(mask)
        out ^= (idx & m == m).astype(np.uint8)
    return out


def poly_from_table(table: np.ndarray, n: int) -> SparsePoly:
    """Exact polynomial for a truth table (Moebius transform over GF(2))."""
    if len(table) != 1 << n:
        raise ValueError("table length must be 2^n")
    coef = np.array(table, dtype=np.uint8).copy()
    for j in range(n):
        step = 1 << j
        idx = np.flatnonzero((np.arange(1 << n) & step) != 0)
        coef[idx] ^= coef[idx - step]
    monos = []
    for point in np.flatnonzero(coef):
        point = int(point)
        monos.append(frozenset(j for j in range(n) if (point >> j) & 1))
    return SparsePoly(n, monos)


def _satisfying_weight_counts(p: SparsePoly) -> np.ndarray:
    """counts[w] = number of satisfying assignments of Hamming weight w."""
    tab = truth_table(p)
    idx = np.arange(1 << p.n, dtype=np.uint64)
    weights = _popcount(idx).astype(np.int64)
    return np.bincount(weights[tab == 1], minlength=p.n + 1)


def prob_one_exact(p: SparsePoly, q, limit: int = EXACT_ENUM_LIMIT):
    """Exact Pr[p(x)=1] when each coordinate is independently 1 with
    probability q, by enumeration. Fraction in, Fraction out."""
    if p.n > limit:
        raise ValueError(f"arity {p.n} exceeds enumeration limit {limit}")
    counts = _satisfying_weight_counts(p)
    n = p.n
    if isinstance(q, Fraction):
        one = Fraction(1)
        total = Fraction(0)
        for w, c in enumerate(counts):
            if c:
                total += int(c) * q**w * (one - q) ** (n - w)
        return total
    q = float(q)
    total = 0.0
    for w, c in enumerate(counts):
        if c:
            total += int(c) * q**w * (1.0 - q) ** (n - w)
    return total


def _components(p: SparsePoly) -> list:
    """Partition monomials into groups with connected variable overlap."""
    monos = list(p._monos)
    parent = list(range(len(monos)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for i, m in enumerate(monos):
        for v in m:
            if v in owner:
                ri, rj = find(i), find(owner[v])
                if ri != rj:
                    parent[ri] = rj
            else:
                owner[v] = i
    groups: dict = {}
    for i in range(len(monos)):
        groups.setdefault(find(i), []).append(monos[i])
    return list(groups.values())


def prob_one_product(p: SparsePoly, q, component_limit: int = 24):
    """Exact Pr[p(x)=1] under the product distribution with bias q,
    valid at any arity whose monomial-overlap components stay small.

    Components of the variable-overlap graph are statistically independent,
    so Pr[XOR = 1] = (1 - prod_c (1 - 2 Pr_c)) / 2.
    """
    exact = isinstance(q, Fraction)
    constant_flip = False
    acc_factor = Fraction(1) if exact else 1.0
    two = Fraction(2) if exact else 2.0
    for group in _components(p):
        if len(group) == 1 and not group[0]:
            constant_flip = not constant_flip
            continue
        vs = sorted(set().union(*group))
        if len(vs) > component_limit:
            raise ValueError(
                f"component with {len(vs)} variables exceeds limit "
                f"{component_limit}")
        remap = {v: i for i, v in enumerate(vs)}
        local = SparsePoly(len(vs), [frozenset(remap[v] for v in m)
                                     for m in group])
        pr = prob_one_exact(local, q, limit=component_limit)
        acc_factor = acc_factor * (1 - two * pr)
    half = Fraction(1, 2) if exact else 0.5
    result = half * (1 - acc_factor)
    if constant_flip:
        result = 1 - result
    return result


def distance(p: SparsePoly, g: SparsePoly, component_limit: int = 24):
    """Exact Pr_uniform[p(x) != g(x)]."""
    return prob_one_product(p + g, 0.5, component_limit=component_limit)


# ---------------------------------------------------------------------------
# Witnesses and lemma-flavoured helpers


def witness_pair(p: SparsePoly, j: int) -> tuple:
    """For a variable j relevant in p, return assignments (a, b) equal except
    at j (a_j = 0, b_j = 1) with p(a) != p(b).

    Writing p = x_j * p1 + p0, any minimal monomial M of p1 gives a working
    a = indicator of M: every other monomial of p1 fails to be covered."""
    if j not in p.relevant_variables():
        raise ValueError(f"variable {j} is not relevant in p")
    p1_monos = [m - {j} for m in p._monos if j in m]
    minimal = min(p1_monos, key=lambda m: (len(m), sorted(m)))
    a = Assignment.ones_at(p.n, minimal)
    b = a.with_bit(j, 1)
    assert p.evaluate(a) != p.evaluate(b)
    return a, b


# ---------------------------------------------------------------------------
# Random generation


def _rand_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) with exact big-int arithmetic."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    k = bound.bit_length()
    nbytes = (k + 7) // 8
    mask = (1 << k) - 1
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if r < bound:
            return r


def random_sparse_poly(n: int, d: int, s: int,
                       rng: np.random.Generator) -> SparsePoly:
    """Uniform polynomial with exactly s distinct monomials of degree <= d."""
    if d > n:
        raise ValueError("degree bound exceeds arity")
    counts = [math.comb(n, i) for i in range(d + 1)]
    total = sum(counts)
    if s > total:
        raise ValueError(f"cannot pick {s} distinct monomials of degree "
                         f"<= {d} over {n} variables")
    chosen: set = set()
    while len(chosen) < s:
        r = _rand_below(rng, total)
        deg = 0
        while r >= counts[deg]:
            r -= counts[deg]
            deg += 1
        if deg == 0:
            m = frozenset()
        else:
            m = frozenset(int(v) for v in rng.choice(n, size=deg,
                                                     replace=False))
        chosen.add(m)
    return SparsePoly(n, chosen)


def random_nonzero_sparse_poly(n: int, d: int, s: int,
                               rng: np.random.Generator) -> SparsePoly:
    p = random_sparse_poly(n, d, s, rng)
    # exactly-s construction never cancels, so nonzero unless s == 0
    if p.is_zero():
        raise ValueError("requested the zero polynomial (s = 0)")
    return p


# ---------------------------------------------------------------------------
# JSON interchange


def poly_to_dict(p: SparsePoly) -> dict:
    return {"n": p.n, "monomials": [list(key) for key in p.monomials]}


def poly_from_dict(obj: dict) -> SparsePoly:
    if set(obj) - {"n", "monomials"}:
        raise ValueError(f"unexpected keys {sorted(set(obj) - {'n', 'monomials'})}")
    monos = [frozenset(m) for m in obj["monomials"]]
    if len(set(monos)) != len(monos):
        raise ValueError("duplicate monomials in serialized polynomial")
    return SparsePoly(int(obj["n"]), monos)


def poly_to_json(p: SparsePoly) -> str:
    return json.dumps(poly_to_dict(p), separators=(",", ":"))


def poly_from_json(text: str) -> SparsePoly:
    return poly_from_dict(json.loads(text))


def save_poly(p: SparsePoly, path) -> None:
    with open(path, "w") as fh:
        fh.write(poly_to_json(p))
        fh.write("\n")


def load_poly(path) -> SparsePoly:
    with open(path) as fh:
        return poly_from_json(fh.read())
