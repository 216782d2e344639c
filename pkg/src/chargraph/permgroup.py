"""Finite permutation groups by explicit element enumeration.

Groups are given by generator permutations and materialized as a full
element list (breadth-first closure, capped at `DEFAULT_ORDER_CAP`).
Everything downstream works on element indices into that list, which keeps
conjugacy classes, subgroup searches and quotients exact and deterministic.

Normal subgroups are found as unions of conjugacy classes closed under
class multiplication; Sylow subgroups by greedy extension of p-element
closures; Frobenius structure by an exhaustive complement search.  All of
this is desk-scale by design: no stabilizer chains, no BSGS.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import (
    ClosureExceedsCap,
    InputFormatError,
    MalformedPermutation,
    NotNormal,
    PrimeDoesNotDivideOrder,
    TooManyClasses,
)

DEFAULT_ORDER_CAP = 10_000

#: conjugacy-class count above which the class-union normal subgroup search
#: refuses to run (the join lattice is built from per-class atoms).
CLASS_SEARCH_CAP = 24


class Permutation:
    """Permutation of {0, ..., degree-1} stored as an image tuple.

    Composition is right-to-left: ``(p * q)(x) == p(q(x))``.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise MalformedPermutation(f"not a bijection: {images}")
        self.images = images

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise MalformedPermutation("degree mismatch in composition")
        o = other.images
        s = self.images
        p = Permutation.__new__(Permutation)
        p.images = tuple(s[o[x]] for x in range(len(s)))
        return p

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        p = Permutation.__new__(Permutation)
        p.images = tuple(inv)
        return p

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(i == x for x, i in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its minimum, sorted."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)

    @staticmethod
    def identity(degree: int) -> "Permutation":
        p = Permutation.__new__(Permutation)
        p.images = tuple(range(degree))
        return p

    @staticmethod
    def from_cycles(cycles, degree: int) -> "Permutation":
        """Build from 0-based cycles; points outside all cycles are fixed."""
        images = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise MalformedPermutation(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if images[a] != a:
                    raise MalformedPermutation(f"point {a + 1} appears in two cycles")
                images[a] = b
        return Permutation(images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation_text(text: str, degree: int | None = None) -> Permutation:
    """Parse one permutation in 1-based cycle notation, e.g. ``(1 2)(3 4)``."""
    text = text.strip()
    if text in ("", "()"):
        return Permutation.identity(degree or 1)
    if not re.fullmatch(r"(\s*\([\d\s,]*\)\s*)+", text):
        raise InputFormatError(f"bad cycle notation: {text!r}")
    cycles = []
    maxpt = 0
    for body in _CYCLE_RE.findall(text):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if not pts:
            continue
        if min(pts) < 1:
            raise InputFormatError("cycle points are 1-based and positive")
        maxpt = max(maxpt, max(pts))
        cycles.append([p - 1 for p in pts])
    deg = degree if degree is not None else maxpt
    if deg < maxpt:
        raise InputFormatError(f"point {maxpt} exceeds declared degree {degree}")
    return Permutation.from_cycles(cycles, max(deg, 1))


def parse_generators_text(text: str) -> list[Permutation]:
    """Parse comma-separated generators in cycle notation (shared degree)."""
    # split on commas that are not inside parentheses
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    parts = [p for p in (s.strip() for s in parts) if p]
    if not parts:
        return []
    degree = 0
    for p in parts:
        for body in _CYCLE_RE.findall(p):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if pts:
                degree = max(degree, max(pts))
    degree = max(degree, 1)
    return [parse_permutation_text(p, degree) for p in parts]


def parse_generators_json(obj) -> list[Permutation]:
    """Parse ``{"degree": n, "generators": [[cycle, ...], ...]}`` (1-based cycles)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        degree = int(obj["degree"])
        raw_gens = obj["generators"]
    except (KeyError, TypeError) as exc:
        raise InputFormatError(f"bad group JSON: {exc}") from exc
    gens = []
    for cycles in raw_gens:
        zero_based = [[int(p) - 1 for p in cyc] for cyc in cycles]
        for cyc in zero_based:
            if any(p < 0 or p >= degree for p in cyc):
                raise InputFormatError("cycle point out of declared degree")
        gens.append(Permutation.from_cycles(zero_based, degree))
    return gens


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    size: int
    member_index: tuple[int, ...]


@dataclass(frozen=True)
class SubgroupHandle:
    """A subgroup of a materialized group, as sorted indices into its parent."""

    parent: "PermGroup" = field(repr=False, compare=False)
    element_index: tuple[int, ...]
    order: int
    is_normal: bool

    @property
    def element_set(self) -> frozenset:
        return frozenset(self.element_index)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        G = self.parent
        for i, j in combinations(self.element_index, 2):
            if G.mult(i, j) != G.mult(j, i):
                return False
        return True

    def generator_index(self) -> tuple[int, ...]:
        return self.parent.small_generating_set(self.element_index)

    def as_group(self, cap: int = DEFAULT_ORDER_CAP) -> "PermGroup":
        """This subgroup as a standalone group (same acting degree)."""
        G = self.parent
        elems = [G.elements[i] for i in self.element_index]
        gens = [G.elements[i] for i in self.generator_index()]
        if not gens:
            gens = []
        return PermGroup._from_elements(G.degree, gens, elems)


class PermGroup:
    """A finite permutation group materialized as its full element list.

    ``elements[0]`` is the identity; the element order is the breadth-first
    closure order from the generators, so identical input always produces
    identical indexing.
    """

    def __init__(self, degree, generators, elements):
        self.degree = degree
        self.generators = list(generators)
        self.elements = list(elements)
        self.order = len(elements)
        self._index = {p.images: i for i, p in enumerate(elements)}
        self._inv = None
        self.exponent = 1
        for p in self.elements:
            self.exponent = math.lcm(self.exponent, p.order())
        self._classes = None
        self._class_of = None
        self._class_products = None
        self._normals = None

    # -- construction ------------------------------------------------------

    @staticmethod
    def _from_elements(degree, generators, elements) -> "PermGroup":
        elems = list(elements)
        ident = Permutation.identity(degree)
        if ident in elems:
            elems.remove(ident)
        elems = [ident] + elems
        return PermGroup(degree, generators, elems)

    # -- element arithmetic --------------------------------------------------

    def index_of(self, p: Permutation) -> int:
        return self._index[p.images]

    def mult(self, i: int, j: int) -> int:
        """Index of ``elements[i] * elements[j]`` (j applied first)."""
        return self._index[(self.elements[i] * self.elements[j]).images]

    def inv(self, i: int) -> int:
        if self._inv is None:
            self._inv = [self._index[p.inverse().images] for p in self.elements]
        return self._inv[i]

    def conj(self, x: int, g: int) -> int:
        """Index of g x g^-1."""
        return self.mult(self.mult(g, x), self.inv(g))

    def element_order(self, i: int) -> int:
        return self.elements[i].order()

    def commutator(self, a: int, b: int) -> int:
        """Index of a^-1 b^-1 a b."""
        return self.mult(self.mult(self.inv(a), self.inv(b)), self.mult(a, b))

    def primes(self) -> list[int]:
        """Sorted primes dividing the group order."""
        n, out, p = self.order, [], 2
        while p * p <= n:
            if n % p == 0:
                out.append(p)
                while n % p == 0:
                    n //= p
            p += 1
        if n > 1:
            out.append(n)
        return out

    # -- subgroup machinery (index sets) ------------------------------------

    def closure_indices(self, seed, cap: int | None = None) -> tuple[int, ...] | None:
        """Subgroup generated by the seed indices; None if it exceeds ``cap``."""
        have = {0}
        queue = [0]
        gens = sorted(set(seed) - {0})
        if not gens:
            return (0,)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for g in gens:
                n = self.mult(e, g)
                if n not in have:
                    have.add(n)
                    if cap is not None and len(have) > cap:
                        return None
                    queue.append(n)
        return tuple(sorted(have))

    def small_generating_set(self, indices) -> tuple[int, ...]:
        """Greedy generating subset of an element-index subgroup (canonical)."""
        target = set(indices)
        gens: list[int] = []
        cur = {0}
        for i in sorted(target):
            if i not in cur:
                gens.append(i)
                cur = set(self.closure_indices(gens))
                if len(cur) == len(target):
                    break
        return tuple(gens)

    def normal_closure_indices(self, seed, ambient_gens) -> tuple[int, ...]:
        """Closure of seed under products and conjugation by ``ambient_gens``."""
        have = {0} | set(seed)
        changed = True
        while changed:
            changed = False
            for x in list(have):
                for g in ambient_gens:
                    c = self.conj(x, g)
                    if c not in have:
                        have.add(c)
                        changed = True
            closed = set(self.closure_indices(have))
            if closed != have:
                have = closed
                changed = True
        return tuple(sorted(have))

    def subgroup(self, indices) -> SubgroupHandle:
        idx = tuple(sorted(indices))
        gen_idx = [self.index_of(g) for g in self.generators]
        iset = set(idx)
        normal = all(self.conj(x, g) in iset for x in idx for g in gen_idx)
        return SubgroupHandle(self, idx, len(idx), normal)

    def whole_handle(self) -> SubgroupHandle:
        return SubgroupHandle(self, tuple(range(self.order)), self.order, True)

    def trivial_handle(self) -> SubgroupHandle:
        return SubgroupHandle(self, (0,), 1, True)

    # -- conjugacy classes ---------------------------------------------------

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        if self._classes is not None:
            return self._classes
        gen_idx = [self.index_of(g) for g in self.generators]
        assigned = [False] * self.order
        raw = []
        for start in range(self.order):
            if assigned[start]:
                continue
            orbit = {start}
            queue = [start]
            assigned[start] = True
            while queue:
                x = queue.pop()
                for g in gen_idx:
                    c = self.conj(x, g)
                    if not assigned[c]:
                        assigned[c] = True
                        orbit.add(c)
                        queue.append(c)
            raw.append(tuple(sorted(orbit)))
        raw.sort(key=lambda m: (len(m), m[0]))
        self._classes = [
            ConjugacyClass(self.elements[m[0]], len(m), m) for m in raw
        ]
        self._class_of = [0] * self.order
        for ci, cls in enumerate(self._classes):
            for i in cls.member_index:
                self._class_of[i] = ci
        return self._classes

    def class_of(self, i: int) -> int:
        self.conjugacy_classes()
        return self._class_of[i]

    def class_products(self) -> list[list[int]]:
        """``products[i][j]`` = bitmask of classes meeting the set C_i * C_j."""
        if self._class_products is not None:
            return self._class_products
        classes = self.conjugacy_classes()
        r = len(classes)
        products = [[0] * r for _ in range(r)]
        for i, ci in enumerate(classes):
            rep = ci.member_index[0]
            for j, cj in enumerate(classes):
                mask = 0
                for y in cj.member_index:
                    mask |= 1 << self.class_of(self.mult(rep, y))
                products[i][j] = mask
        self._class_products = products
        return products

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"


def group_from_generators(gens, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Breadth-first closure of the generators into a full element list."""
    gens = list(gens)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not gens:
        return PermGroup(1, [], [Permutation.identity(1)])
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise MalformedPermutation("generators act on different degrees")
    ident = Permutation.identity(degree)
    have = {ident.images: 0}
    elements = [ident]
    queue = [ident]
    while queue:
        e = queue.pop(0)
        for g in gens:
            n = e * g
            if n.images not in have:
                if len(elements) >= cap:
                    raise ClosureExceedsCap(
                        f"group order exceeds cap {cap} (degree {degree})"
                    )
                have[n.images] = len(elements)
                elements.append(n)
                queue.append(n)
    return PermGroup(degree, gens, elements)


def group_from_text(text: str, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    return group_from_generators(parse_generators_text(text), cap)


def group_from_json(obj, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    return group_from_generators(parse_generators_json(obj), cap)


def conjugacy_classes(G: PermGroup) -> list[ConjugacyClass]:
    return G.conjugacy_classes()


def direct_product(G: PermGroup, H: PermGroup, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """G x H acting on the disjoint union of the two point sets."""
    d = G.degree + H.degree
    gens = []
    for g in G.generators:
        gens.append(Permutation(list(g.images) + [G.degree + i for i in range(H.degree)]))
    for h in H.generators:
        gens.append(Permutation(list(range(G.degree)) + [G.degree + h.images[i] for i in range(H.degree)]))
    if not gens:
        return PermGroup(max(d, 1), [], [Permutation.identity(max(d, 1))])
    return group_from_generators(gens, cap)


# -- derived / central series ------------------------------------------------


def _commutator_generators(G: PermGroup, gens_a, gens_b) -> set[int]:
    return {G.commutator(a, b) for a in gens_a for b in gens_b}


def derived_series(G: PermGroup) -> list[SubgroupHandle]:
    """G >= G' >= G'' >= ... until it stabilizes."""
    series = [G.whole_handle()]
    cur_gens = [G.index_of(g) for g in G.generators]
    cur = series[0].element_index
    while True:
        comms = _commutator_generators(G, cur_gens, cur_gens)
        nxt = G.normal_closure_indices(comms, cur_gens)
        if nxt == cur:
            break
        series.append(G.subgroup(nxt))
        cur = nxt
        cur_gens = G.small_generating_set(nxt)
        if len(nxt) == 1:
            break
    return series


def is_solvable(G: PermGroup) -> bool:
    return derived_series(G)[-1].order == 1


def is_nilpotent(H) -> bool:
    """Lower central series test; accepts a group or a subgroup handle."""
    if isinstance(H, PermGroup):
        H = H.whole_handle()
    G = H.parent
    h_gens = list(H.generator_index())
    cur_gens = h_gens
    cur = H.element_index
    while True:
        comms = _commutator_generators(G, cur_gens, h_gens)
        nxt = G.normal_closure_indices(comms, h_gens)
        if len(nxt) == 1:
            return True
        if nxt == cur:
            return False
        cur = nxt
        cur_gens = list(G.small_generating_set(nxt))


def center(G: PermGroup) -> SubgroupHandle:
    gen_idx = [G.index_of(g) for g in G.generators]
    members = [
        i for i in range(G.order)
        if all(G.mult(i, g) == G.mult(g, i) for g in gen_idx)
    ]
    return G.subgroup(members)


# -- normal subgroup lattice ---------------------------------------------------


def _class_union_closure(G: PermGroup, class_mask: int) -> int:
    products = G.class_products()
    r = len(products)
    mask = class_mask | 1  # identity class is index 0
    while True:
        new = mask
        live = [i for i in range(r) if (mask >> i) & 1]
        for i in live:
            row = products[i]
            for j in live:
                new |= row[j]
        if new == mask:
            return mask
        mask = new


def _mask_to_indices(G: PermGroup, mask: int) -> tuple[int, ...]:
    classes = G.conjugacy_classes()
    out = []
    for i, cls in enumerate(classes):
        if (mask >> i) & 1:
            out.extend(cls.member_index)
    return tuple(sorted(out))


def normal_subgroups(G: PermGroup) -> list[SubgroupHandle]:
    """All normal subgroups, via joins of per-class closures, sorted by order."""
    if G._normals is not None:
        return G._normals
    classes = G.conjugacy_classes()
    r = len(classes)
    if r > CLASS_SEARCH_CAP:
        raise TooManyClasses(
            f"{r} conjugacy classes exceeds the search cap {CLASS_SEARCH_CAP}"
        )
    atoms = sorted({_class_union_closure(G, 1 << c) for c in range(1, r)})
    found = {1}  # trivial subgroup: identity class only
    queue = [1]
    while queue:
        s = queue.pop()
        for a in atoms:
            j = s | a
            if j != s:
                j = _class_union_closure(G, j)
            if j not in found:
                found.add(j)
                queue.append(j)
    handles = []
    for mask in found:
        idx = _mask_to_indices(G, mask)
        handles.append(SubgroupHandle(G, idx, len(idx), True))
    handles.sort(key=lambda h: (h.order, h.element_index))
    G._normals = handles
    return handles


def fitting_subgroup(G: PermGroup) -> SubgroupHandle:
    """Largest nilpotent normal subgroup."""
    best = G.trivial_handle()
    for h in normal_subgroups(G):
        if h.order > best.order and is_nilpotent(h):
            best = h
    return best


# -- Sylow structure -----------------------------------------------------------


class _InternalInvariantError(AssertionError):
    """Invariant breach inside the group engine (never expected on valid input)."""


def sylow_subgroup(G: PermGroup, p: int) -> SubgroupHandle:
    """One Sylow p-subgroup, grown greedily from p-element closures."""
    if G.order % p != 0:
        raise PrimeDoesNotDivideOrder(f"{p} does not divide |G| = {G.order}")
    pa = 1
    while G.order % (pa * p) == 0:
        pa *= p
    cur = (0,)
    p_elements = [
        i for i in range(1, G.order)
        if _is_prime_power(G.element_order(i), p)
    ]
    while len(cur) < pa:
        cur_set = set(cur)
        for x in p_elements:
            if x in cur_set:
                continue
            t = G.closure_indices(cur_set | {x}, cap=pa)
            if t is not None and _is_prime_power_or_one(len(t), p):
                cur = t
                break
        else:
            raise _InternalInvariantError("Sylow extension stalled")
    return G.subgroup(cur)


def _is_prime_power(n: int, p: int) -> bool:
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def _is_prime_power_or_one(n: int, p: int) -> bool:
    return n == 1 or _is_prime_power(n, p)


def normal_p_complement(G: PermGroup, p: int) -> SubgroupHandle | None:
    """Normal subgroup of order |G| / p^a if one exists."""
    if G.order % p != 0:
        raise PrimeDoesNotDivideOrder(f"{p} does not divide |G| = {G.order}")
    m = G.order
    while m % p == 0:
        m //= p
    for h in normal_subgroups(G):
        if h.order == m:
            return h
    return None


# -- quotients -----------------------------------------------------------------


def quotient_group(G: PermGroup, N: SubgroupHandle, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """G/N as a permutation group on the cosets of N."""
    if not N.is_normal:
        raise NotNormal("quotient requires a normal subgroup")
    coset_of = [-1] * G.order
    reps = []
    for i in range(G.order):
        if coset_of[i] != -1:
            continue
        c = len(reps)
        reps.append(i)
        for x in N.element_index:
            coset_of[G.mult(i, x)] = c
    q = len(reps)
    gen_perms = []
    for g in G.generators:
        gi = G.index_of(g)
        gen_perms.append(Permutation([coset_of[G.mult(gi, r)] for r in reps]))
    quotient = group_from_generators(gen_perms, cap) if gen_perms else PermGroup(
        1, [], [Permutation.identity(1)]
    )
    if quotient.order * N.order != G.order:
        raise _InternalInvariantError("coset action order mismatch")
    return quotient


# -- Frobenius structure ---------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusStructure:
    kernel: SubgroupHandle
    complement: SubgroupHandle
    kernel_elementary_abelian: bool
    kernel_prime: int | None


def _find_subgroup_of_order(G: PermGroup, h: int, forbidden: frozenset) -> tuple[int, ...] | None:
    """Subgroup of order h meeting ``forbidden`` only at the identity.

    Enumerates subgroups by canonical generating chains: extend S by x only
    when x is the least element of close(S + x) outside S, so every subgroup
    is visited exactly once.
    """
    candidates = [
        i for i in range(1, G.order)
        if i not in forbidden and h % G.element_order(i) == 0
    ]

    def extend(S: tuple[int, ...], last: int):
        s_set = set(S)
        for x in candidates:
            if x <= last or x in s_set:
                continue
            t = G.closure_indices(s_set | {x}, cap=h)
            if t is None or h % len(t) != 0:
                continue
            if min(i for i in t if i not in s_set) != x:
                continue
            if any(i in forbidden for i in t if i != 0):
                continue
            if len(t) == h:
                return t
            got = extend(t, x)
            if got is not None:
                return got
        return None

    if h == 1:
        return (0,)
    return extend((0,), 0)


def is_frobenius(G: PermGroup) -> FrobeniusStructure | None:
    """Frobenius kernel/complement pair, or None.

    Searches proper nontrivial normal subgroups F (ascending order) for a
    complement H with F * H = G, F meet H = 1, and H meet H^g = 1 for every
    g outside H.
    """
    if G.order == 1:
        return None
    for F in normal_subgroups(G):
        if F.is_trivial or F.order == G.order:
            continue
        h = G.order // F.order
        comp = _find_subgroup_of_order(G, h, F.element_set)
        if comp is None:
            continue
        comp_set = frozenset(comp)
        ok = True
        for g in range(G.order):
            if g in comp_set:
                continue
            conj = {G.conj(x, g) for x in comp}
            if (conj & comp_set) != {0}:
                ok = False
                break
        if not ok:
            continue
        elem_ab, prime = _elementary_abelian_data(G, F)
        return FrobeniusStructure(F, G.subgroup(comp), elem_ab, prime)
    return None


def _elementary_abelian_data(G: PermGroup, H: SubgroupHandle) -> tuple[bool, int | None]:
    if H.is_trivial:
        return True, None
    orders = {G.element_order(i) for i in H.element_index if i != 0}
    if len(orders) != 1:
        return False, None
    p = orders.pop()
    if not _is_prime(p):
        return False, None
    return H.is_abelian(), p


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True
