"""Membership-query oracles with exact query accounting.

Oracles are composable views over a root target (a polynomial, a truth
table, or an opaque callable). Every semantic query to any composed view
charges the root counter exactly once (an XOR of two oracles charges each
underlying root per evaluation). Scans over product distributions charge
exactly what a one-query-at-a-time loop would consume: the index of the
first witness plus one, or the full repetition budget when no witness
appears.

Two facts keep huge instances tractable without touching the accounting:

- Views track their influential coordinates ("active positions"), derived
  from the transform structure, and samples are drawn only over those
  columns. Off-active coordinates of witnesses and of sampled masks are
  materialized lazily from their exact conditional distribution.
- When a scanned view is provably identically zero on the masked domain
  (its exact symbolic mirror restricted to the mask is the zero
  polynomial, or exhaustive enumeration of a small masked cube says so),
  the scan charges the full repetition count in bulk. Verdict, charge,
  and budget refusal point all match the literal loop.

Setting `literal=True` on a root (implied by attaching a query trace)
disables both shortcuts and runs every scan as the plain loop, one full
assignment at a time; traces then log one line per query, `<hex> <bit>`.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from .poly import (Assignment, SparsePoly, DENSE_ARITY_LIMIT,
                   poly_from_table)

ZERO_CHECK_SYMBOLIC_CAP = 100_000   # max mirror sparsity for symbolic checks
ZERO_CHECK_CUBE_WIDTH = 13          # max masked width for exhaustive checks
MATERIALIZE_CAP = 10**6             # max lazily-materialized one-positions


class BudgetExceededError(RuntimeError):
    """A query was refused because it would exceed the oracle's budget."""

    def __init__(self, used: int, budget: int):
        super().__init__(f"query budget exhausted ({used} used, "
                         f"budget {budget})")
        self.used = used
        self.budget = budget


class QueryCounter:
    """Monotone query counter with an optional hard budget.

    Bulk charges consume whatever budget remains before refusing, exactly
    like a loop issuing single queries until the first refusal."""

    __slots__ = ("count", "budget")

    def __init__(self, budget: int | None = None):
        self.count = 0
        self.budget = budget

    def remaining(self) -> int | None:
        if self.budget is None:
            return None
        return self.budget - self.count

    def charge(self, k: int) -> None:
        if k < 0:
            raise ValueError("charge must be nonnegative")
        if self.budget is not None:
            take = min(k, self.budget - self.count)
            self.count += take
            if take < k:
                raise BudgetExceededError(self.count, self.budget)
        else:
            self.count += k


def _bits_at(a: Assignment, positions: np.ndarray) -> np.ndarray:
    """Assignment bits at the given positions, as a uint8 vector."""
    if len(positions) == 0:
        return np.zeros(0, dtype=np.uint8)
    if a._ones is not None:
        ones = np.fromiter(a._ones, dtype=np.int64, count=len(a._ones)) \
            if a._ones else np.zeros(0, dtype=np.int64)
        return np.isin(positions, ones).astype(np.uint8)
    return np.array([(a.bits >> int(j)) & 1 for j in positions],
                    dtype=np.uint8)


def _mono_cols(poly: SparsePoly, active: np.ndarray) -> np.ndarray:
    """Monomial supports as padded column indices into `active`.

    Pad column holds constant 1 so it never zeroes a monomial."""
    monos = poly.monomials
    width = max((len(m) for m in monos), default=0)
    pad = len(active)  # index of the virtual always-1 column
    cols = np.full((len(monos), max(width, 1)), pad, dtype=np.int64)
    for r, m in enumerate(monos):
        if m:
            idx = np.searchsorted(active, np.array(m, dtype=np.int64))
            if np.any(idx >= len(active)) or \
                    np.any(active[np.minimum(idx, len(active) - 1)] != m):
                raise AssertionError("mirror variable outside active set")
            cols[r, :len(m)] = idx
    return cols


class QueryOracle:
    """Base class for oracles and composed views."""

    n: int

    # -- structure ---------------------------------------------------------

    def _parents(self) -> list:
        raise NotImplementedError

    def _root_counters(self) -> dict:
        """Map id(counter) -> (counter, multiplicity per semantic query)."""
        cached = getattr(self, "_counters_cache", None)
        if cached is not None:
            return cached
        merged: dict = {}
        for par in self._parents():
            for key, (ctr, mult) in par._root_counters().items():
                if key in merged:
                    merged[key] = (ctr, merged[key][1] + mult)
                else:
                    merged[key] = (ctr, mult)
        self._counters_cache = merged
        return merged

    def _is_literal(self) -> bool:
        return any(par._is_literal() for par in self._parents())

    def _trace_sinks(self) -> list:
        sinks = []
        for par in self._parents():
            sinks.extend(par._trace_sinks())
        return sinks

    # -- evaluation --------------------------------------------------------

    def active(self) -> np.ndarray:
        """Sorted positions that can influence the response."""
        raise NotImplementedError

    def _push(self, bits: np.ndarray) -> np.ndarray:
        """Pure batched evaluation; rows are points over active columns."""
        raise NotImplementedError

    def _eval(self, a: Assignment) -> int:
        raise NotImplementedError

    @property
    def poly(self) -> SparsePoly | None:
        """Exact symbolic mirror of the view, when one is known."""
        return None

    # -- accounting --------------------------------------------------------

    def charge(self, k: int) -> None:
        for ctr, mult in self._root_counters().values():
            ctr.charge(k * mult)

    @property
    def queries_used(self) -> int:
        return sum(ctr.count for ctr, _ in self._root_counters().values())

    def remaining_budget(self) -> int | None:
        rems = []
        for ctr, mult in self._root_counters().values():
            r = ctr.remaining()
            if r is not None:
                rems.append(r // mult)
        return min(rems) if rems else None

    def set_budget(self, budget: int | None) -> None:
        """Budget each root from its current position (None lifts it)."""
        for ctr, _ in self._root_counters().values():
            ctr.budget = None if budget is None else ctr.count + budget

    # -- public query path --------------------------------------------------

    def query(self, a: "Assignment | int") -> int:
        if isinstance(a, (int, np.integer)):
            a = Assignment(self.n, bits=int(a))
        if a.n != self.n:
            raise ValueError("assignment arity mismatch")
        self.charge(1)
        v = self._eval(a)
        for sink in self._trace_sinks():
            sink(f"{a.bits:x} {v}\n")
        return v

    def __call__(self, a) -> int:
        return self.query(a)


# ---------------------------------------------------------------------------
# Roots


class _Root(QueryOracle):
    def __init__(self, n: int, counter: QueryCounter, literal: bool):
        self.n = n
        self._counter = counter
        self._literal = literal
        self._trace: Callable | None = None

    def _parents(self):
        return []

    def _root_counters(self):
        return {id(self._counter): (self._counter, 1)}

    def _is_literal(self):
        return self._literal or self._trace is not None

    def _trace_sinks(self):
        return [self._trace] if self._trace is not None else []


class _PolyRoot(_Root):
    def __init__(self, p: SparsePoly, budget=None, literal=False):
        super().__init__(p.n, QueryCounter(budget), literal)
        self._poly = p
        self._active = np.array(sorted(p.relevant_variables()),
                                dtype=np.int64)
        self._cols = _mono_cols(p, self._active)

    @property
    def poly(self):
        return self._poly

    def active(self):
        return self._active

    def _push(self, bits):
        k = bits.shape[0]
        ext = np.concatenate(
            [bits, np.ones((k, 1), dtype=np.uint8)], axis=1)
        if self._cols.shape[0] == 0:
            return np.zeros(k, dtype=np.uint8)
        terms = ext[:, self._cols].min(axis=2)
        return np.bitwise_xor.reduce(terms, axis=1)

    def _eval(self, a):
        return self._poly.evaluate(a)


class _TableRoot(_Root):
    def __init__(self, table, n: int, budget=None, literal=False):
        super().__init__(n, QueryCounter(budget), literal)
        table = np.asarray(table, dtype=np.uint8)
        if table.shape != (1 << n,):
            raise ValueError("table length must be 2^n")
        self._table = table
        self._active = np.arange(n, dtype=np.int64)
        self._powers = (np.uint64(1) << np.arange(n, dtype=np.uint64))
        self._mirror: SparsePoly | None = None

    @property
    def poly(self):
        if self._mirror is None:
            self._mirror = poly_from_table(self._table, self.n)
        return self._mirror

    def active(self):
        return self._active

    def _push(self, bits):
        idx = bits.astype(np.uint64) @ self._powers
        return self._table[idx]

    def _eval(self, a):
        return int(self._table[a.bits])


class _FuncRoot(_Root):
    def __init__(self, fn: Callable, n: int, budget=None, literal=False):
        if n > DENSE_ARITY_LIMIT:
            # no structure to exploit: an opaque target tracks every
            # coordinate, so huge arities need a polynomial or table root
            raise ValueError(f"function oracle arity {n} exceeds "
                             f"{DENSE_ARITY_LIMIT}")
        super().__init__(n, QueryCounter(budget), literal)
        self._fn = fn
        self._active = np.arange(n, dtype=np.int64)

    def active(self):
        return self._active

    def _push(self, bits):
        out = np.empty(bits.shape[0], dtype=np.uint8)
        for r in range(bits.shape[0]):
            x = 0
            for j in np.flatnonzero(bits[r]):
                x |= 1 << int(self._active[j])
            out[r] = self._fn(x) & 1
        return out

    def _eval(self, a):
        return self._fn(a.bits) & 1


def oracle_from_poly(p: SparsePoly, budget: int | None = None,
                     literal: bool = False) -> QueryOracle:
    return _PolyRoot(p, budget, literal)


def oracle_from_table(table, n: int, budget: int | None = None,
                      literal: bool = False) -> QueryOracle:
    return _TableRoot(table, n, budget, literal)


def oracle_from_function(fn: Callable, n: int, budget: int | None = None,
                         literal: bool = False) -> QueryOracle:
    return _FuncRoot(fn, n, budget, literal)


def attach_trace(oracle: QueryOracle, sink) -> None:
    """Log every semantic query through this oracle stack as one line
    `<point hex> <response>`.

    `sink` is a file-like object or a callable taking the line. Tracing
    forces literal one-query-at-a-time scans so the log is complete."""
    roots = [oracle]
    found = []
    while roots:
        o = roots.pop()
        if isinstance(o, _Root):
            found.append(o)
        else:
            roots.extend(o._parents())
    write = sink if callable(sink) else sink.write
    for root in found:
        root._trace = write


# ---------------------------------------------------------------------------
# Views


class _View(QueryOracle):
    def __init__(self, parents: list, n: int):
        self._par = parents
        self.n = n
        self._active_cache: np.ndarray | None = None
        self._poly_cache: SparsePoly | None = None
        self._poly_known = False

    def _parents(self):
        return self._par

    def active(self):
        if self._active_cache is None:
            self._active_cache = self._compute_active()
        return self._active_cache

    @property
    def poly(self):
        if not self._poly_known:
            self._poly_cache = self._compute_poly()
            self._poly_known = True
        return self._poly_cache

    def _compute_active(self) -> np.ndarray:
        raise NotImplementedError

    def _compute_poly(self) -> SparsePoly | None:
        raise NotImplementedError


class _AndView(_View):
    """f(a * x): coordinates where a is 0 are forced to 0."""

    def __init__(self, parent: QueryOracle, a: Assignment):
        if a.n != parent.n:
            raise ValueError("mask arity mismatch")
        super().__init__([parent], parent.n)
        self._mask = a
        pa = parent.active()
        keep = _bits_at(a, pa).astype(bool)
        self._sub = pa[keep]
        self._idx = np.flatnonzero(keep)

    def _compute_active(self):
        return self._sub

    def _compute_poly(self):
        pp = self._par[0].poly
        return None if pp is None else pp.restrict_and(self._mask)

    def _push(self, bits):
        parent = self._par[0]
        p = np.zeros((bits.shape[0], len(parent.active())), dtype=np.uint8)
        p[:, self._idx] = bits
        return parent._push(p)

    def _eval(self, a):
        return self._par[0]._eval(a.product(self._mask))


class _XorLocalView(_View):
    """f(x) + g(x) for a locally-held polynomial g (g costs nothing)."""

    def __init__(self, parent: QueryOracle, g: SparsePoly):
        if g.n != parent.n:
            raise ValueError("polynomial arity mismatch")
        super().__init__([parent], parent.n)
        self._g = g
        act = np.array(
            sorted(set(map(int, parent.active()))
                   | set(g.relevant_variables())), dtype=np.int64)
        self._act = act
        self._pidx = np.searchsorted(act, parent.active())
        self._gcols = _mono_cols(g, act)

    def _compute_active(self):
        return self._act

    def _compute_poly(self):
        pp = self._par[0].poly
        return None if pp is None else pp + self._g

    def _push(self, bits):
        res = self._par[0]._push(bits[:, self._pidx])
        if self._gcols.shape[0]:
            k = bits.shape[0]
            ext = np.concatenate(
                [bits, np.ones((k, 1), dtype=np.uint8)], axis=1)
            terms = ext[:, self._gcols].min(axis=2)
            res = res ^ np.bitwise_xor.reduce(terms, axis=1)
        return res

    def _eval(self, a):
        return self._par[0]._eval(a) ^ self._g.evaluate(a)


class _HashView(_View):
    """F(y) = f(y_phi(0), ..., y_phi(n-1)) over m merged variables."""

    def __init__(self, parent: QueryOracle, phi: np.ndarray, m: int):
        phi = np.asarray(phi, dtype=np.int64)
        if phi.shape != (parent.n,):
            raise ValueError("phi must assign a bucket to every variable")
        if len(phi) and (phi.min() < 0 or phi.max() >= m):
            raise ValueError("phi values out of range")
        super().__init__([parent], m)
        self._phi = phi
        pa = parent.active()
        self._act = np.unique(phi[pa])
        self._gather = np.searchsorted(self._act, phi[pa])

    def _compute_active(self):
        return self._act

    def _compute_poly(self):
        pp = self._par[0].poly
        if pp is None:
            return None
        var_map = {j: int(self._phi[j]) for j in pp.relevant_variables()}
        return pp.substitute_vars(var_map, self.n)

    def _push(self, bits):
        return self._par[0]._push(bits[:, self._gather])

    def _eval(self, a):
        parent = self._par[0]
        pa = parent.active()
        vals = _bits_at(a, self._phi[pa])
        ones = frozenset(int(j) for j in pa[vals.astype(bool)])
        return parent._eval(Assignment(parent.n, ones=ones))


class _PinView(_View):
    """g(x) = f(pi) with pi_j = x_j on bucket {j: phi(j)=i}, else a_phi(j)."""

    def __init__(self, parent: QueryOracle, phi: np.ndarray, i: int,
                 a: Assignment):
        phi = np.asarray(phi, dtype=np.int64)
        if phi.shape != (parent.n,):
            raise ValueError("phi must assign a bucket to every variable")
        super().__init__([parent], parent.n)
        self._phi = phi
        self._i = int(i)
        self._a = a
        pa = parent.active()
        in_bucket = phi[pa] == i
        self._bucket_act = pa[in_bucket]
        self._bidx = np.flatnonzero(in_bucket)
        fixed = np.zeros(len(pa), dtype=np.uint8)
        off = ~in_bucket
        fixed[off] = _bits_at(a, phi[pa[off]])
        self._fixed = fixed

    def _compute_active(self):
        return self._bucket_act

    def _compute_poly(self):
        pp = self._par[0].poly
        if pp is None:
            return None
        monos = []
        for m in pp.monomial_sets:
            reduced = set()
            dead = False
            for j in m:
                if self._phi[j] == self._i:
                    reduced.add(j)
                elif not self._a.bit(int(self._phi[j])):
                    dead = True
                    break
            if not dead:
                monos.append(frozenset(reduced))
        return SparsePoly(self.n, monos)

    def _push(self, bits):
        k = bits.shape[0]
        p = np.tile(self._fixed, (k, 1))
        p[:, self._bidx] = bits
        return self._par[0]._push(p)

    def _eval(self, a):
        parent = self._par[0]
        pa = parent.active()
        vals = self._fixed.copy()
        vals[self._bidx] = _bits_at(a, self._bucket_act)
        ones = frozenset(int(j) for j in pa[vals.astype(bool)])
        return parent._eval(Assignment(parent.n, ones=ones))


class _XorView(_View):
    """f(x) + g(x) for two true oracles; each query charges both roots."""

    def __init__(self, left: QueryOracle, right: QueryOracle):
        if left.n != right.n:
            raise ValueError("oracle arity mismatch")
        super().__init__([left, right], left.n)
        act = np.union1d(left.active(), right.active())
        self._act = act
        self._lidx = np.searchsorted(act, left.active())
        self._ridx = np.searchsorted(act, right.active())

    def _compute_active(self):
        return self._act

    def _compute_poly(self):
        lp, rp = self._par[0].poly, self._par[1].poly
        if lp is None or rp is None:
            return None
        return lp + rp

    def _push(self, bits):
        return (self._par[0]._push(bits[:, self._lidx])
                ^ self._par[1]._push(bits[:, self._ridx]))

    def _eval(self, a):
        return self._par[0]._eval(a) ^ self._par[1]._eval(a)


def and_restrict(oracle: QueryOracle, a: Assignment) -> QueryOracle:
    return _AndView(oracle, a)


def zero_project(oracle: QueryOracle, keep) -> QueryOracle:
    """Force every variable outside `keep` to 0."""
    if not isinstance(keep, Assignment):
        keep = Assignment.ones_at(oracle.n, keep)
    return _AndView(oracle, keep)


def xor_local(oracle: QueryOracle, g: SparsePoly) -> QueryOracle:
    return _XorLocalView(oracle, g)


def hash_project(oracle: QueryOracle, phi, m: int) -> QueryOracle:
    return _HashView(oracle, phi, m)


def pin_bucket(oracle: QueryOracle, phi, i: int, a: Assignment) -> QueryOracle:
    return _PinView(oracle, phi, i, a)


def xor_oracles(left: QueryOracle, right: QueryOracle) -> QueryOracle:
    return _XorView(left, right)


# ---------------------------------------------------------------------------
# Product sampling


def sample_product(n: int, p: float, rng: np.random.Generator) -> Assignment:
    """One draw where each coordinate is independently 1 with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("bias must lie in [0, 1]")
    if n > DENSE_ARITY_LIMIT:
        raise ValueError("arity too large for a dense product draw")
    bits = rng.random(n) < p
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    return Assignment(n, bits=int.from_bytes(packed.tobytes(), "little"))


class ProductSampler:
    """Reusable sampler for the biased product distribution on {0,1}^n."""

    def __init__(self, n: int, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError("bias must lie in [0, 1]")
        self.n = n
        self.p = p

    def draw(self, rng: np.random.Generator) -> Assignment:
        return sample_product(self.n, self.p, rng)


# ---------------------------------------------------------------------------
# Restriction masks and scans


class RestrictionMask:
    """A realized-or-lazy AND mask applied at scan time.

    `row` gives the mask on the view's active columns. Off-active
    coordinates are 1 at `off_positions`, and elsewhere i.i.d. 1 with
    probability `off_density` (their realization is deferred; nothing the
    scan observes depends on them)."""

    __slots__ = ("row", "off_positions", "off_density")

    def __init__(self, row: np.ndarray, off_positions: np.ndarray,
                 off_density: float):
        self.row = np.asarray(row, dtype=np.uint8)
        self.off_positions = np.asarray(off_positions, dtype=np.int64)
        self.off_density = float(off_density)

    @classmethod
    def unrestricted(cls, view: QueryOracle) -> "RestrictionMask":
        return cls(np.ones(len(view.active()), dtype=np.uint8),
                   np.zeros(0, dtype=np.int64), 1.0)

    def realize_dense(self, view: QueryOracle,
                      rng: np.random.Generator) -> Assignment:
        """Materialize the mask as a concrete assignment (small arity)."""
        n = view.n
        if n > DENSE_ARITY_LIMIT:
            raise ValueError("mask too large to realize densely")
        bits = np.zeros(n, dtype=np.uint8)
        rest = np.ones(n, dtype=bool)
        act = view.active()
        bits[act] = self.row
        rest[act] = False
        bits[self.off_positions] = 1
        rest[self.off_positions] = False
        if self.off_density > 0.0:
            idx = np.flatnonzero(rest)
            bits[idx] = rng.random(len(idx)) < self.off_density
        return Assignment.from_bits(bits.tolist())


def _provably_zero(view: QueryOracle, row: np.ndarray) -> bool:
    """True only if view(mask * x) = 0 for all x. False means unknown."""
    mirror = view.poly
    if mirror is not None and mirror.sparsity <= ZERO_CHECK_SYMBOLIC_CAP:
        if mirror.is_zero():
            return True
        cols = _zero_cols_cache(view, mirror)
        ext = np.concatenate([row, np.ones(1, dtype=np.uint8)])
        return bool(np.all(ext[cols].min(axis=1) == 0))
    width = int(row.sum())
    if width <= ZERO_CHECK_CUBE_WIDTH:
        live = np.flatnonzero(row)
        k = 1 << width
        grid = ((np.arange(k)[:, None] >> np.arange(width)[None, :]) & 1)
        bits = np.zeros((k, len(row)), dtype=np.uint8)
        bits[:, live] = grid.astype(np.uint8)
        return not np.any(view._push(bits))
    return False


def _zero_cols_cache(view: QueryOracle, mirror: SparsePoly) -> np.ndarray:
    cached = getattr(view, "_zero_cols", None)
    if cached is None:
        cached = _mono_cols(mirror, view.active())
        view._zero_cols = cached
    return cached


_CHUNKS = (32, 128, 512, 2048, 8192)


def scan_product(view: QueryOracle, p: float, max_draws: int,
                 rng: np.random.Generator,
                 mask: RestrictionMask | None = None):
    """Draw up to max_draws points x ~ product(p), querying view(mask * x),
    stopping at the first 1. Returns (draws_consumed, witness_row | None);
    the witness row is the masked point on the view's active columns.

    Charges draws_consumed queries; raises BudgetExceededError at the
    refusal point, exactly like the literal loop."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("bias must lie in [0, 1]")
    if max_draws < 0:
        raise ValueError("max_draws must be nonnegative")
    if max_draws == 0:
        return 0, None
    if view._is_literal():
        return _scan_literal(view, p, max_draws, rng, mask)
    active = view.active()
    row_mask = mask.row if mask is not None else None
    if row_mask is not None and len(row_mask) != len(active):
        raise ValueError("mask row width mismatch")
    done = 0
    ci = 0
    while done < max_draws:
        k = min(_CHUNKS[min(ci, len(_CHUNKS) - 1)], max_draws - done)
        ci += 1
        bits = (rng.random((k, len(active))) < p).astype(np.uint8)
        if row_mask is not None:
            bits &= row_mask
        res = view._push(bits)
        hits = np.flatnonzero(res)
        if len(hits):
            first = int(hits[0])
            view.charge(first + 1)
            return done + first + 1, bits[first]
        view.charge(k)
        done += k
        # an empty first chunk hints at a dead restriction; if the masked
        # view is identically zero, bulk-charge the rest in one step
        if ci == 1 and done < max_draws:
            zrow = row_mask if row_mask is not None \
                else np.ones(len(active), dtype=np.uint8)
            if _provably_zero(view, zrow):
                view.charge(max_draws - done)
                return max_draws, None
    return max_draws, None


def _scan_literal(view, p, max_draws, rng, mask):
    """Reference implementation: one full query per draw."""
    if view.n > DENSE_ARITY_LIMIT:
        raise ValueError("literal scans need materializable arity")
    realized = mask.realize_dense(view, rng) if mask is not None \
        else Assignment.all_ones(view.n)
    active = view.active()
    for t in range(max_draws):
        x = sample_product(view.n, p, rng)
        point = x.product(realized)
        if view.query(point):
            return t + 1, _bits_at(point, active)
    return max_draws, None


def materialize_point(view: QueryOracle, row: np.ndarray, p: float,
                      mask: RestrictionMask | None,
                      rng: np.random.Generator,
                      cap: int = MATERIALIZE_CAP) -> Assignment:
    """Lift a witness row (active columns) to a full assignment by drawing
    the unobserved off-active coordinates from their distribution: 1 with
    probability p where the mask is 1, 0 elsewhere."""
    active = view.active()
    n = view.n
    if mask is None:
        mask = RestrictionMask.unrestricted(view)
    ones = set(int(active[j]) for j in np.flatnonzero(row))
    if len(mask.off_positions):
        keep = rng.random(len(mask.off_positions)) < p
        ones.update(int(j) for j in mask.off_positions[keep])
    q = mask.off_density * p
    blocked = np.union1d(active, mask.off_positions)
    free = n - len(blocked)
    if q > 0.0 and free > 0:
        count = int(rng.binomial(free, q))
        if count > cap:
            raise ValueError("witness too dense to materialize")
        ones.update(_sample_outside(n, blocked, count, rng))
    return Assignment(n, ones=frozenset(ones))


def _sample_outside(n: int, excluded: np.ndarray, count: int,
                    rng: np.random.Generator) -> list:
    """`count` distinct uniform positions in [0, n) \\ excluded."""
    free = n - len(excluded)
    if count > free:
        raise ValueError("not enough free positions")
    ranks: set = set()
    # Floyd's algorithm over the free ranks
    for i in range(free - count, free):
        t = int(rng.integers(0, i + 1))
        if t in ranks:
            ranks.add(i)
        else:
            ranks.add(t)
    out = []
    for r in ranks:
        pos = r
        while True:
            shift = int(np.searchsorted(excluded, pos, side="right"))
            neu = r + shift
            if neu == pos:
                break
            pos = neu
        out.append(int(pos))
    return out


def uniform_compare(f: QueryOracle, g: SparsePoly, draws: int,
                    rng: np.random.Generator) -> int:
    """Number of disagreements between f and local g on `draws` uniform
    points; charges exactly `draws` queries."""
    view = xor_local(f, g)
    if view._is_literal():
        mism = 0
        for _ in range(draws):
            x = sample_product(view.n, 0.5, rng)
            mism += view.query(x)
        return mism
    active = view.active()
    done = 0
    mism = 0
    while done < draws:
        k = min(8192, draws - done)
        bits = (rng.random((k, len(active))) < 0.5).astype(np.uint8)
        view.charge(k)
        mism += int(view._push(bits).sum())
        done += k
    return mism
