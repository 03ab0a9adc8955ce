"""Finite topological dynamical systems ``(X, phi)``.

``X = {0, ..., n-1}`` carries the discrete topology, so ``C(X)`` is ``C^n``
and the endomorphism is ``alpha(f) = f o phi``. This module describes the
orbit structure of ``phi`` (preperiods, cycles, eventual image), the
invariant subsets that correspond to invariant ideals, and the two
constructions that turn a non-injective system into a surjective one: the
tail extension and the projective limit.

Examples
--------
>>> sys = FiniteSystem((1, 2, 3, 3))
>>> od = orbit_data(sys)
>>> od.cycles, od.preperiod
(((3,),), (3, 2, 1, 0))
>>> radical_support(sys).members()
(0, 1, 2)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, GuardError, NotPermutationError, SemicrossError

__all__ = [
    "FiniteSystem",
    "SubsetMask",
    "OrbitData",
    "TailSystem",
    "SUBSET_GUARD",
    "all_systems",
    "all_permutations",
    "orbit_data",
    "radical_support",
    "quotient_system",
    "direct_limit",
    "invariant_subsets",
    "is_minimal",
    "is_single_cycle",
    "is_bi_minimal",
    "is_topologically_free",
    "add_tail",
    "projective_limit",
    "phi_power",
    "systems_up_to",
]

SUBSET_GUARD = 20


@dataclass(frozen=True)
class FiniteSystem:
    """A self-map ``phi`` of ``{0, ..., n-1}``.

    Parameters
    ----------
    phi : sequence of int
        ``phi[x]`` is the image of ``x``.
    """

    phi: tuple[int, ...]

    def __post_init__(self):
        phi = tuple(int(p) for p in self.phi)
        object.__setattr__(self, "phi", phi)
        n = len(phi)
        if n == 0:
            raise SemicrossError("phi: a system needs at least one point")
        for x, p in enumerate(phi):
            if not 0 <= p < n:
                raise SemicrossError(f"phi: value {p} at index {x} is outside 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.phi)

    @property
    def size(self) -> int:
        return len(self.phi)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.phi)) == self.n

    @property
    def is_injective(self) -> bool:
        # a self-map of a finite set is injective exactly when surjective
        return len(set(self.phi)) == self.n

    @property
    def is_permutation(self) -> bool:
        return self.is_injective

    def __call__(self, x: int) -> int:
        return self.phi[x]

    def image(self) -> "SubsetMask":
        return SubsetMask.from_members(self.n, self.phi)

    def inverse(self) -> tuple[int, ...]:
        """Inverse map of a permutation."""
        if not self.is_permutation:
            raise NotPermutationError("phi: inverse requires a permutation")
        inv = [0] * self.n
        for x, p in enumerate(self.phi):
            inv[p] = x
        return tuple(inv)

    def to_literal(self) -> dict:
        return {"n": self.n, "phi": list(self.phi)}

    @classmethod
    def from_literal(cls, obj) -> "FiniteSystem":
        if not isinstance(obj, dict):
            raise SemicrossError("system: expected an object with fields 'n' and 'phi'")
        if "n" not in obj:
            raise SemicrossError("n: missing field")
        if "phi" not in obj:
            raise SemicrossError("phi: missing field")
        n, phi = obj["n"], obj["phi"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise SemicrossError("n: expected a positive integer")
        if not isinstance(phi, list) or not all(
                isinstance(p, int) and not isinstance(p, bool) for p in phi):
            raise SemicrossError("phi: expected a list of integers")
        if len(phi) != n:
            raise SemicrossError(f"phi: length {len(phi)} does not match n={n}")
        return cls(tuple(phi))


def phi_power(sys: FiniteSystem, m: int) -> np.ndarray:
    """Index array of ``phi^m`` for ``m >= 0``; negative ``m`` needs a permutation."""
    phi = np.asarray(sys.phi, dtype=np.intp)
    if m < 0:
        phi = np.asarray(sys.inverse(), dtype=np.intp)
        m = -m
    out = np.arange(sys.n, dtype=np.intp)
    base = phi
    while m:
        if m & 1:
            out = base[out]
        base = base[base]
        m >>= 1
    return out


@dataclass(frozen=True)
class SubsetMask:
    """Subset of ``{0, ..., size-1}`` stored as a bitmask."""

    size: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.size:
            raise SemicrossError("mask: bits exceed the declared width")

    @classmethod
    def from_members(cls, size: int, members: Iterable[int]) -> "SubsetMask":
        bits = 0
        for x in members:
            if not 0 <= x < size:
                raise SemicrossError(f"mask: point {x} outside 0..{size - 1}")
            bits |= 1 << int(x)
        return cls(size, bits)

    def members(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.size) if self.bits >> x & 1)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.size, ((1 << self.size) - 1) ^ self.bits)

    def indicator(self) -> np.ndarray:
        return np.array([self.bits >> x & 1 for x in range(self.size)], dtype=float)

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.size) - 1

    def __contains__(self, x) -> bool:
        return 0 <= x < self.size and bool(self.bits >> x & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self):
        return iter(self.members())

    def __repr__(self) -> str:
        return "SubsetMask({" + ", ".join(map(str, self.members())) + "})"


@dataclass(frozen=True)
class OrbitData:
    """Functional-graph decomposition of a system.

    ``preperiod[x]`` is the number of steps before ``x`` enters a cycle,
    ``cycle_id[x]`` names that cycle and ``cycle_pos[x]`` is the position in
    it of the first cycle point reached. Cycles start at their smallest
    point and follow ``phi``.
    """

    preperiod: tuple[int, ...]
    cycle_id: tuple[int, ...]
    cycle_pos: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    eventual_image: SubsetMask

    @property
    def max_preperiod(self) -> int:
        return max(self.preperiod)

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)


def orbit_data(sys: FiniteSystem) -> OrbitData:
    n, phi = sys.n, sys.phi
    # 0 unvisited, 1 on the current path, 2 resolved
    state = [0] * n
    on_cycle = [False] * n
    for start in range(n):
        if state[start]:
            continue
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = phi[x]
        if state[x] == 1:
            for y in path[path.index(x):]:
                on_cycle[y] = True
        for y in path:
            state[y] = 2

    cycles = []
    cid = [-1] * n
    cpos = [0] * n
    for x in range(n):
        if on_cycle[x] and cid[x] < 0:
            cyc = [x]
            y = phi[x]
            while y != x:
                cyc.append(y)
                y = phi[y]
            for k, y in enumerate(cyc):
                cid[y] = len(cycles)
                cpos[y] = k
            cycles.append(tuple(cyc))

    pre = [0] * n
    for x in range(n):
        if on_cycle[x]:
            continue
        steps, y = 0, x
        while not on_cycle[y]:
            y = phi[y]
            steps += 1
        pre[x] = steps
        cid[x] = cid[y]
        cpos[x] = cpos[y]

    ev = SubsetMask.from_members(n, (x for x in range(n) if on_cycle[x]))
    return OrbitData(tuple(pre), tuple(cid), tuple(cpos), tuple(cycles), ev)


def radical_support(sys: FiniteSystem) -> SubsetMask:
    """Complement of the eventual image.

    The radical of ``(C(X), alpha)`` is the ideal of functions vanishing on
    the eventual image; this mask is where such functions may be nonzero.
    """
    return orbit_data(sys).eventual_image.complement()


def direct_limit(sys: FiniteSystem) -> tuple[FiniteSystem, tuple[int, ...]]:
    """Finite realization ``(E, sigma)`` of the direct-limit system.

    Returns the permutation ``sigma = phi|_E`` on ``E`` re-indexed in
    increasing order, and the tuple of original points so that new index
    ``i`` stands for ``points[i]``. Under ``c -> c|_E`` the limit
    automorphism acts by ``g -> g o sigma``.
    """
    points = orbit_data(sys).eventual_image.members()
    rank = {x: i for i, x in enumerate(points)}
    sigma = tuple(rank[sys.phi[x]] for x in points)
    return FiniteSystem(sigma), points


def quotient_system(sys: FiniteSystem) -> FiniteSystem:
    """System induced on ``C(X)/R`` with ``R`` the radical, i.e. on ``E``."""
    return direct_limit(sys)[0]


def _image_masks(sys: FiniteSystem, masks: np.ndarray) -> np.ndarray:
    img = np.zeros_like(masks)
    for x, p in enumerate(sys.phi):
        img |= ((masks >> x) & 1) << p
    return img


def invariant_subsets(sys: FiniteSystem, mode: str = "forward",
                      include_trivial: bool = False) -> list[SubsetMask]:
    """Subsets ``S`` with ``phi(S) <= S`` (forward) or ``phi(S) = S`` (bi).

    The empty set and ``X`` always qualify; they are listed only when
    ``include_trivial`` is set.
    """
    if mode not in ("forward", "bi"):
        raise SemicrossError(f"mode: expected 'forward' or 'bi', got {mode!r}")
    n = sys.n
    if n > SUBSET_GUARD:
        raise GuardError(f"n: exhaustive subset enumeration limited to n <= {SUBSET_GUARD}")
    if mode == "bi" and not sys.is_permutation:
        raise NotPermutationError("phi: bi-invariance is defined for permutations only")
    masks = np.arange(1 << n, dtype=np.int64)
    img = _image_masks(sys, masks)
    if mode == "forward":
        ok = (img & ~masks) == 0
    else:
        ok = img == masks
    full = (1 << n) - 1
    out = []
    for m in np.flatnonzero(ok):
        m = int(m)
        if not include_trivial and m in (0, full):
            continue
        out.append(SubsetMask(n, m))
    return out


def is_single_cycle(sys: FiniteSystem) -> bool:
    od = orbit_data(sys)
    return len(od.cycles) == 1 and len(od.cycles[0]) == sys.n


def is_minimal(sys: FiniteSystem) -> bool:
    """No nonempty proper closed subset is mapped into itself.

    Computed by exhaustive enumeration and by the single-cycle criterion;
    the two must agree.
    """
    by_enum = not invariant_subsets(sys, "forward")
    by_cycle = is_single_cycle(sys)
    if by_enum != by_cycle:
        raise ConsistencyError(f"minimality routes disagree for phi={sys.phi}")
    return by_cycle


def is_bi_minimal(sys: FiniteSystem) -> bool:
    return not invariant_subsets(sys, "bi")


def is_topologically_free(sys: FiniteSystem) -> tuple[bool, tuple[int, int] | None]:
    """Whether every ``phi^k`` (``k >= 1``) has fixed-point set with empty interior.

    Points of a finite discrete space are open, so any periodic point is a
    witness against freeness. Returns ``(False, (x, period))`` with the first
    periodic point of least period found by scanning ``k = 1, 2, ...``.
    """
    n = sys.n
    bound = n * int(np.prod(np.arange(1, n + 1, dtype=float))) if n <= 10 else None
    k = 1
    power = np.asarray(sys.phi, dtype=np.intp)
    phi = power.copy()
    while bound is None or k <= bound:
        fixed = np.flatnonzero(power == np.arange(n))
        if fixed.size:
            return False, (int(fixed[0]), k)
        power = phi[power]
        k += 1
    return True, None


@dataclass(frozen=True)
class TailSystem:
    """Truncated tail extension of a system.

    Points ``0..n-1`` are the base points; the tail point ``(u, k)`` with
    ``u`` in ``U = X \\ phi(X)`` and ``-K <= k <= -1`` has index
    ``n + i*K + (-k - 1)`` where ``i`` is the rank of ``u`` in ``U``.
    """

    base: FiniteSystem
    depth: int
    system: FiniteSystem
    tail_roots: tuple[int, ...]
    labels: tuple[str, ...] = field(repr=False)

    @property
    def tail_points(self) -> tuple[int, ...]:
        return tuple(range(self.base.n, self.system.n))

    @property
    def is_trivial(self) -> bool:
        return not self.tail_roots

    def index(self, u: int, k: int) -> int:
        i = self.tail_roots.index(u)
        if not -self.depth <= k <= -1:
            raise SemicrossError(f"tail_depth: level {k} outside -{self.depth}..-1")
        return self.base.n + i * self.depth + (-k - 1)

    def extend(self, f: np.ndarray) -> np.ndarray:
        """Zero extension of a function on the base to the tail system."""
        out = np.zeros(self.system.n, dtype=complex)
        out[: self.base.n] = f
        return out

    def to_literal(self) -> dict:
        lit = self.system.to_literal()
        lit["tail_depth"] = self.depth
        lit["base_n"] = self.base.n
        lit["labels"] = list(self.labels)
        return lit

    @classmethod
    def from_literal(cls, obj) -> "TailSystem":
        sysobj = FiniteSystem.from_literal(obj)
        depth = obj.get("tail_depth")
        base_n = obj.get("base_n")
        if not isinstance(depth, int) or depth < 1:
            raise SemicrossError("tail_depth: expected a positive integer")
        if not isinstance(base_n, int) or not 1 <= base_n <= sysobj.n:
            raise SemicrossError("base_n: expected an integer between 1 and n")
        base = FiniteSystem(sysobj.phi[:base_n])
        tail = add_tail(base, depth)
        if tail.system != sysobj:
            raise SemicrossError("phi: inconsistent with the tail construction over the base")
        if "labels" in obj and list(obj["labels"]) != list(tail.labels):
            raise SemicrossError("labels: do not match the synthesized tail labels")
        return tail


def add_tail(sys: FiniteSystem, depth: int) -> TailSystem:
    if not isinstance(depth, (int, np.integer)) or depth < 1:
        raise SemicrossError("tail_depth: expected a positive integer")
    depth = int(depth)
    n = sys.n
    roots = tuple(x for x in range(n) if x not in set(sys.phi))
    phi = list(sys.phi)
    labels = [str(x) for x in range(n)]
    for u in roots:
        for j in range(depth):
            k = -(j + 1)
            # (u, -1) -> u and (u, k) -> (u, k + 1)
            phi.append(u if j == 0 else n + roots.index(u) * depth + (j - 1))
            labels.append(f"{u}:{k}")
    return TailSystem(sys, depth, FiniteSystem(tuple(phi)), roots, tuple(labels))


def projective_limit(sys: FiniteSystem) -> tuple[FiniteSystem, tuple[int, ...]]:
    """Inverse-limit system of a surjective map and its conjugacy to the input.

    Points of the limit are backward orbits ``(x_1, x_2, ...)`` with
    ``phi(x_{k+1}) = x_k``, truncated after ``n + 1`` terms, which determines
    them since each ``x_{k+1}`` is the unique preimage of ``x_k``. The limit
    map is ``(x_1, x_2, ...) -> (phi(x_1), x_1, x_2, ...)``. The returned
    conjugacy sends a sequence to ``x_1``; sequences are indexed so that it
    is the identity.
    """
    if not sys.is_surjective:
        raise SemicrossError("phi: projective limit requires a surjective map")
    n = sys.n
    pre: dict[int, list[int]] = {x: [] for x in range(n)}
    for x, p in enumerate(sys.phi):
        pre[p].append(x)
    seqs = []
    for x1 in range(n):
        partial = [(x1,)]
        for _ in range(n):
            partial = [s + (y,) for s in partial for y in pre[s[-1]]]
        seqs.extend(partial)
    seqs.sort()
    where = {s: i for i, s in enumerate(seqs)}
    tilde_phi = tuple(where[(sys.phi[s[0]],) + s[:-1]] for s in seqs)
    conj = tuple(s[0] for s in seqs)
    return FiniteSystem(tilde_phi), conj


def all_systems(n: int) -> Iterable[FiniteSystem]:
    """All ``n**n`` self-maps of an ``n``-point set."""
    for phi in itertools.product(range(n), repeat=n):
        yield FiniteSystem(phi)


def all_permutations(n: int) -> Iterable[FiniteSystem]:
    for phi in itertools.permutations(range(n)):
        yield FiniteSystem(phi)


def systems_up_to(n_max: int, permutations_only: bool = False) -> Sequence[FiniteSystem]:
    gen = all_permutations if permutations_only else all_systems
    return [s for n in range(1, n_max + 1) for s in gen(n)]

